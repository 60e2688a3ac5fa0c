import pytest
from hypothesis import given, settings, strategies as st

from conftest import W
from forkcalc import catalog, checks
from forkcalc.elementary import (
    commute_witness,
    compose,
    cylinder_relation_check,
    dehn_twist,
    from_json,
    inner,
    normal_form,
    twist_toward,
    vertex_aut,
)
from forkcalc.graphofgroups import tree_of_cylinders
from forkcalc.whitehead import FnAutomorphism

seeds = st.integers(0, 10**6)


def imgs(aut):
    return [str(w) for w in aut.realization.images]


def test_twist_on_chain():
    g = catalog.f4_chain()
    assert imgs(dehn_twist(g, "e1", W("b", 4))) == ["a", "b", "bcB", "bdB"]
    assert imgs(dehn_twist(g, "e1", W("b", 4), fixed="to")) == ["baB", "b", "c", "d"]


def test_twister_must_commute_with_edge_group():
    with pytest.raises(ValueError):
        dehn_twist(catalog.f4_chain(), "e1", W("a", 4))


def test_twist_about_stable_letter():
    g = catalog.hnn_f2()
    assert imgs(dehn_twist(g, "e1", W("baB"))) == ["a", "ba"]


def test_twist_toward_ends():
    g = catalog.f4_chain()
    to_v1 = twist_toward(g, "e1", "from", W("b", 4))
    to_v2 = twist_toward(g, "e1", "to", W("b", 4))
    assert imgs(to_v1) == ["baB", "b", "c", "d"]
    assert imgs(to_v2) == ["a", "b", "bcB", "bdB"]


def test_cylinder_relation_examples():
    t = tree_of_cylinders(catalog.f4_chain())
    assert cylinder_relation_check(t, "z1", W("b", 4))
    assert cylinder_relation_check(t, "z1", W("bb", 4))
    end = t.incident("z1")[0]
    assert not cylinder_relation_check(t, "z1", W("b", 4), {end: W("bb", 4)})


def test_vertex_aut_on_surface():
    g = catalog.f2_commutator()
    v = vertex_aut(g, "surface", [W("a"), W("ba")])
    assert v(W("abAB")) == W("abAB")
    assert v.data["conjugators"] == {("e2", "to"): W("1")}


def test_vertex_aut_rejects_non_automorphism():
    g = catalog.f2_commutator()
    with pytest.raises(ValueError):
        vertex_aut(g, "surface", [W("aa"), W("b")])
    with pytest.raises(ValueError):
        vertex_aut(g, "surface", [W("b"), W("a")])  # inverts the boundary class


def test_compose_order():
    g = catalog.f4_chain()
    t1, t2 = dehn_twist(g, "e1", W("b", 4)), dehn_twist(g, "e2", W("c", 4))
    assert compose([t1, t2]) == t1.realization.compose(t2.realization)
    assert compose([t1, t2])(W("d", 4)) == t1(t2(W("d", 4)))


def test_commute_witness_example():
    g = catalog.f4_chain()
    t1, t2 = dehn_twist(g, "e1", W("b", 4)), dehn_twist(g, "e2", W("c", 4))
    w = commute_witness(t2, t1)
    lhs = t2.realization.compose(t1.realization)
    assert lhs == FnAutomorphism.inner(w).compose(t1.realization).compose(t2.realization)
    with pytest.raises(ValueError):
        commute_witness(t1, dehn_twist(g, "e1", W("bb", 4)))


def test_normal_form_reorders_and_merges():
    g = catalog.f4_chain()
    t1, t2 = dehn_twist(g, "e1", W("b", 4)), dehn_twist(g, "e2", W("c", 4))
    z, factors = normal_form([t2, t1])
    assert [f.support for f in factors] == [("edge", "e1"), ("edge", "e2")]
    z, factors = normal_form([t1, t1])
    assert len(factors) == 1 and factors[0].data["twister"] == W("bb", 4)


def test_normal_form_absorbs_inner_products():
    g = catalog.f4_chain()
    t = dehn_twist(g, "e1", W("b", 4))
    back = dehn_twist(g, "e1", W("B", 4))
    z, factors = normal_form([t, inner(g, W("a", 4)), back])
    assert factors == []
    assert FnAutomorphism.inner(z) == compose([t, inner(g, W("a", 4)), back])


def test_json_roundtrip(data_dir):
    g = catalog.f4_chain()
    for a in (dehn_twist(g, "e1", W("b", 4), "to"), twist_toward(g, "e2", "to", W("C", 4)),
              vertex_aut(g, "v1", [W("ab", 4), W("b", 4)]), inner(g, W("d", 4))):
        again = from_json(g, a.to_json())
        assert again.realization == a.realization
        assert again.to_json() == a.to_json()


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_cylinder_relation_random(seed):
    assert checks.check_cylinder_relation(catalog.rng_from(seed))[0]


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_commutation_random(seed):
    assert checks.check_commutation(catalog.rng_from(seed))[0]


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_normal_form_random(seed):
    assert checks.check_normal_form(catalog.rng_from(seed))[0]
