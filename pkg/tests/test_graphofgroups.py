import json

import pytest
from hypothesis import given, settings, strategies as st

from conftest import W, words
from forkcalc import catalog
from forkcalc.graphofgroups import (
    Edge,
    MarkedGraphOfGroups,
    MarkingError,
    SchemaError,
    Vertex,
    collapse,
    components,
    cyclic_root,
    express,
    intersect_subgraphs,
    minimal_subgraph,
    pointed_jsj,
    require_valid,
    tree_of_cylinders,
    validate,
)
from forkcalc.stallings import subgroup

seeds = st.integers(0, 10**6)


def failed(report):
    return sorted(c.name for c in report.failures())


@pytest.mark.parametrize("name", sorted(catalog.NAMED))
def test_catalog_fixtures_validate(name):
    assert validate(catalog.NAMED[name]()).ok


@pytest.mark.parametrize("name", ["f2_commutator", "f2_cylinders", "f4_two_tori"])
def test_jsj_fixtures_pass_all_checks(name):
    assert validate(catalog.NAMED[name]()).jsj_ok


def test_chain_is_not_bipartite():
    assert failed(validate(catalog.f4_chain())) == ["bipartite Z / non-Z"]


def test_edge_image_outside_vertex_group_is_reported():
    g = catalog.f3_amalgam().to_json()
    g["edges"][0]["image_from"] = g["edges"][0]["edge_generator"] = "c"
    g["edges"][0]["image_to"] = "c"
    assert "edge images in vertex groups" in failed(validate(MarkedGraphOfGroups.from_json(g)))


def test_missing_generator_is_reported():
    n = 3
    g = MarkedGraphOfGroups(n, [Vertex("v", "rigid", (W("a", n), W("b", n)))], [])
    names = failed(validate(g))
    assert "generation of F_n" in names and "euler characteristic" in names
    with pytest.raises(MarkingError):
        require_valid(g)


def test_wrong_stable_letter_relation_is_reported():
    n = 2
    a, b = W("a", n), W("b", n)
    bad = Edge("e", "v", "v", a, a, a, False, b)  # b a b^-1 != a
    g = MarkedGraphOfGroups(n, [Vertex("v", "rigid", (a,))], [bad])
    assert "marking relations" in failed(validate(g))


def test_schema_errors(tmp_path):
    with pytest.raises(SchemaError):
        MarkedGraphOfGroups.from_json({"rank": 2, "vertices": []})
    data = catalog.f2_commutator().to_json()
    data["vertices"][0]["kind"] = "hyperbolic"
    with pytest.raises(SchemaError):
        MarkedGraphOfGroups.from_json(data)
    broken = tmp_path / "broken.json"
    broken.write_text('{\n  "rank": 2,\n  "vertices": [\n}\n')
    with pytest.raises(SchemaError, match=r"broken\.json:4"):
        MarkedGraphOfGroups.load(broken)


@pytest.mark.parametrize("name", sorted(catalog.NAMED))
def test_json_roundtrip(name):
    g = catalog.NAMED[name]()
    again = MarkedGraphOfGroups.from_json(json.loads(g.dumps()))
    assert again.to_json() == g.to_json()
    assert again.digest() == g.digest()


@pytest.mark.parametrize("fname,name", [("f2.json", "f2_commutator"), ("f4.json", "f4_two_tori"),
                                        ("chain.json", "f4_chain")])
def test_data_files_match_catalog(data_dir, fname, name):
    assert MarkedGraphOfGroups.load(data_dir / fname) == catalog.NAMED[name]()


def test_express_example():
    g = catalog.f3_amalgam()
    nf = express(g, W("ac", 3))
    assert nf.crossings() == {"e1": 2}
    assert nf.evaluate(g) == W("ac", 3)


@given(words(3))
def test_express_detects_vertex_membership(w):
    # Britton: a word lies in G_v1 exactly when its reduced path has no edges
    g = catalog.f3_amalgam()
    nf = express(g, w, "v1")
    assert nf.evaluate(g) == w
    assert (not nf.edges) == g.vertex_subgroup("v1").contains(w)


@settings(max_examples=40, deadline=None)
@given(seeds, words(4, 10))
def test_express_on_random_decompositions(seed, w):
    _, g = catalog.random_decomposition(catalog.rng_from(seed), ranks=(4,))
    assert express(g, w).evaluate(g) == w


def test_minimal_subgraph_examples():
    f2 = catalog.f2_commutator()
    whole = minimal_subgraph(f2, [W("abAB"), W("a")])
    assert whole.vertices == frozenset(f2.vertices)
    f4 = catalog.f4_two_tori()
    sub = minimal_subgraph(f4, [W(w, 4) for w in ("abAB", "cdCD", "abb")])
    assert sub.vertices == {"p", "z1", "s1"}
    params = minimal_subgraph(f4, [W("abAB", 4), W("cdCD", 4)])
    assert params.vertices == {"p"} and not params.edges


def test_minimal_subgraph_search_without_basepoint():
    g = catalog.f4_chain()
    sub = minimal_subgraph(g, [W("cd", 4).conjugate_by(W("ab", 4))], anchor="search")
    assert sub.vertices == {"v3"}


def test_components_of_intersection():
    f4 = catalog.f4_two_tori()
    left = minimal_subgraph(f4, [W("abAB", 4), W("a", 4)])
    right = minimal_subgraph(f4, [W("abAB", 4), W("c", 4)])
    meet = intersect_subgraphs(left, right)
    comps = components(f4, meet)
    assert [c.vertices for c in comps] == [frozenset({"p"})]


def test_tree_of_cylinders_chain():
    t = tree_of_cylinders(catalog.f4_chain())
    kinds = {v.id: (v.kind, tuple(map(str, v.generators))) for v in t.vertices.values()}
    assert kinds == {
        "v1": ("rigid", ("a", "b")),
        "v2": ("rigid", ("b", "c")),
        "v3": ("rigid", ("c", "d")),
        "z1": ("ztype", ("b",)),
        "z2": ("ztype", ("c",)),
    }
    assert len(t.edges) == 4
    assert validate(t).jsj_ok


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_tree_of_cylinders_random(seed):
    _, g = catalog.random_decomposition(catalog.rng_from(seed))
    t = tree_of_cylinders(g)
    report = validate(t)
    assert report.ok
    assert "bipartite Z / non-Z" not in failed(report)
    for v in t.vertices.values():
        if v.kind == "ztype":
            assert v.generators[0].max_root()[1] == 1


def test_collapse_chain():
    g = catalog.f4_chain()
    new, cmap = collapse(g, ["e2"])
    assert validate(new).ok
    assert len(new.vertices) == 2 and len(new.edges) == 1
    merged = cmap.vertex_map["v2"]
    assert cmap.vertex_map["v3"] == merged
    assert new.vertex_subgroup(merged) == subgroup([W(x, 4) for x in "bcd"], 4)


def test_collapse_everything_gives_one_vertex():
    g = catalog.f4_chain()
    new, _ = collapse(g, list(g.edges))
    (v,) = new.vertices.values()
    assert new.vertex_subgroup(v.id).is_whole_group()


def test_pointed_jsj_cyclic_parameters():
    g, bp = pointed_jsj(catalog.f2_cylinders(), [W("abAB")])
    assert g.basepoint == bp and g.vertices[bp].kind == "basepoint"
    assert validate(g).jsj_ok
    ref = catalog.f2_commutator()
    assert sorted(v.kind for v in g.vertices.values()) == sorted(v.kind for v in ref.vertices.values())


def test_pointed_jsj_noncyclic_parameters():
    g, bp = pointed_jsj(catalog.f4_two_tori(), [W("abAB", 4), W("cdCD", 4)])
    assert bp == "p"


def test_cyclic_root():
    assert cyclic_root([W("abab"), W("ababab")], 2) == W("ab")
    with pytest.raises(ValueError):
        cyclic_root([W("a"), W("b")], 2)
