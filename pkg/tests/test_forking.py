import pytest
from hypothesis import given, settings, strategies as st

from conftest import W, words
from forkcalc import catalog
from forkcalc.forking import (
    acl_cyclic,
    independent_over_free_factor,
    independent_over_jsj,
    is_free_factor,
)
from forkcalc.graphofgroups import MarkedGraphOfGroups, MarkingError
from forkcalc.whitehead import PreconditionError, verify_split_witness


def T(texts, rank):
    return [W(t, rank) for t in texts]


def test_free_factor_route_examples():
    v = independent_over_free_factor([], T(["a"], 2), T(["b"], 2), 6, 2)
    assert v.verdict == "independent" and v.route == "free_factor"
    assert independent_over_free_factor([], T(["a"], 2), T(["a"], 2), 6, 2).verdict == "forks"
    assert independent_over_free_factor(T(["a"], 3), T(["b"], 3), T(["ba"], 3), 6, 3).verdict == "forks"


def test_free_factor_route_precondition():
    with pytest.raises(PreconditionError):
        independent_over_free_factor(T(["abAB"], 2), T(["a"], 2), T(["b"], 2), 6, 2)


def test_is_free_factor():
    assert is_free_factor([], 2)
    assert is_free_factor(T(["ab"], 2), 2)
    assert not is_free_factor(T(["abAB"], 2), 2)


GAMMAS = ["a", "b", "ab", "ba", "abb"]


@pytest.mark.parametrize("b", GAMMAS)
@pytest.mark.parametrize("c", GAMMAS)
def test_f2_commutator_always_forks(b, c):
    v = independent_over_jsj(catalog.f2_commutator(), T(["abAB"], 2), T([b], 2), T([c], 2))
    assert v.verdict == "forks" and v.route == "jsj"


@pytest.mark.parametrize("b", ["a", "ab", "abb"])
@pytest.mark.parametrize("c", ["c", "cd", "cdd"])
def test_f4_two_tori_independent(b, c):
    v = independent_over_jsj(catalog.f4_two_tori(), T(["abAB", "cdCD"], 4), T([b], 4), T([c], 4))
    assert v.verdict == "independent"


def test_parameters_are_independent_of_themselves():
    A = T(["abAB", "cdCD"], 4)
    v = independent_over_jsj(catalog.f4_two_tori(), A, A[:1], A[1:])
    assert v.verdict == "independent"
    (comp,) = v.evidence["intersection_components"]
    assert comp["vertices"] == ["p"]


def test_same_side_forks():
    A = T(["abAB", "cdCD"], 4)
    v = independent_over_jsj(catalog.f4_two_tori(), A, T(["a"], 4), T(["abb"], 4))
    assert v.verdict == "forks"
    assert any(c["surface_vertices"] == ["s1"] for c in v.evidence["intersection_components"])


def test_evidence_records_decomposition_and_assumptions():
    g = catalog.f4_two_tori()
    v = independent_over_jsj(g, T(["abAB", "cdCD"], 4), T(["a"], 4), T(["c"], 4))
    data = v.to_json()
    assert data["evidence"]["decomposition_sha256"] == g.digest()
    assert any("user-asserted" in a for a in data["assumptions"])


def test_jsj_route_preconditions():
    g = catalog.f4_two_tori()
    with pytest.raises(PreconditionError):  # not in the basepoint group
        independent_over_jsj(g, T(["a"], 4), T(["b"], 4), T(["c"], 4))
    with pytest.raises(PreconditionError):  # lies in the free factor <a, b>
        independent_over_jsj(g, T(["abAB"], 4), T(["b"], 4), T(["c"], 4))
    chain = catalog.f4_chain().to_json()
    chain["basepoint"] = "v1"
    with pytest.raises(MarkingError):
        independent_over_jsj(MarkedGraphOfGroups.from_json(chain), T(["a"], 4), T(["b"], 4), T(["c"], 4))


nontrivial4 = words(4, 8).filter(lambda w: not w.is_identity())


@settings(max_examples=40, deadline=None)
@given(nontrivial4, nontrivial4)
def test_jsj_route_symmetry(b, c):
    g, A = catalog.f4_two_tori(), T(["abAB", "cdCD"], 4)
    assert independent_over_jsj(g, A, [b], [c]).verdict == independent_over_jsj(g, A, [c], [b]).verdict


@settings(max_examples=40, deadline=None)
@given(nontrivial4, nontrivial4, nontrivial4)
def test_jsj_route_monotone(b, extra, c):
    g, A = catalog.f4_two_tori(), T(["abAB", "cdCD"], 4)
    if independent_over_jsj(g, A, [b, extra], [c]).verdict == "independent":
        assert independent_over_jsj(g, A, [b], [c]).verdict == "independent"


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_free_factor_witnesses_verify(seed):
    phi = catalog.random_automorphism(3, catalog.rng_from(seed), 3)
    A, b, c = [phi(W("a", 3))], [phi(W("ab", 3))], [phi(W("cac", 3))]
    v = independent_over_free_factor(A, b, c, 6, 3)
    assert v.verdict == "independent"
    from forkcalc.whitehead import SplitDecision
    d = SplitDecision.from_json(v.evidence["split"], 3)
    assert verify_split_witness(d, A, b, c, 3)


@pytest.mark.parametrize("A,root", [(["aa"], "a"), (["abAB"], "abAB"), (["abab", "ababab"], "ab")])
def test_acl_cyclic(A, root):
    assert acl_cyclic(T(A, 2)) == W(root)


@given(words(2, 8).filter(lambda w: not w.is_identity()), st.integers(1, 3))
def test_acl_cyclic_idempotent(w, k):
    r = acl_cyclic([w ** k])
    assert acl_cyclic([r]) == r
    assert r.max_root()[1] == 1


def test_acl_rejects_noncyclic():
    with pytest.raises(ValueError):
        acl_cyclic(T(["a", "b"], 2))
