"""The two independence oracles and the cyclic algebraic closure."""

from dataclasses import dataclass, field

from .graphofgroups import (
    anchored_hull,
    components,
    cyclic_root,
    id_key,
    intersect_subgraphs,
    require_valid,
)
from .stallings import CoreGraph
from .whitehead import PreconditionError, independent_split_search, is_in_proper_free_factor

VERDICTS = ("independent", "forks", "unknown")


@dataclass
class IndependenceVerdict:
    verdict: str
    route: str  # "free_factor" | "jsj"
    assumptions: list = field(default_factory=list)
    evidence: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "verdict": self.verdict,
            "route": self.route,
            "assumptions": list(self.assumptions),
            "evidence": self.evidence,
        }


def _rank_of(*tuples):
    for t in tuples:
        for w in t:
            return w.rank
    raise ValueError("cannot infer the rank from empty tuples")


def is_free_factor(A, rank):
    """Whether ``<A>`` is a free factor of ``F_rank`` (the trivial group is one)."""
    from .whitehead import is_part_of_basis

    basis = CoreGraph.from_generators(tuple(A), rank).free_basis()
    return is_part_of_basis(basis, rank)[0]


def independent_over_free_factor(A, b, c, depth=6, rank=None):
    A, b, c = tuple(A), tuple(b), tuple(c)
    rank = rank or _rank_of(A, b, c)
    decision = independent_split_search(A, b, c, depth, rank)
    return IndependenceVerdict(
        decision.verdict,
        "free_factor",
        ["<A> is a free factor (machine-checked)"],
        {"split": decision.to_json()},
    )


def acl_cyclic(A, rank=None):
    """Generator of the maximal cyclic subgroup containing ``<A>``."""
    A = tuple(A)
    rank = rank or _rank_of(A)
    return cyclic_root(A, rank)


def independent_over_jsj(g, A, b, c):
    """Decide independence from minimal subgraphs of a pointed cyclic JSJ."""
    A, b, c = tuple(A), tuple(b), tuple(c)
    require_valid(g, jsj=True)
    if g.basepoint is None:
        raise PreconditionError("decomposition has no basepoint")
    if not any(not a.is_identity() for a in A):
        raise PreconditionError("the JSJ route needs a nontrivial parameter set")
    bp = g.basepoint
    sub = g.vertex_subgroup(bp)
    if not all(sub.contains(a) for a in A):
        raise PreconditionError("<A> is not contained in the basepoint group")
    if is_in_proper_free_factor(A, g.rank):
        raise PreconditionError("<A> lies in a proper free factor; use the free factor route")
    assumptions = [
        "F_n is freely indecomposable relative to A (machine-checked)",
        "no extended hyperbolic floor (user-asserted)",
        "the decomposition is the pointed cyclic JSJ relative to A (user-asserted)",
    ]
    lam_b = anchored_hull(g, A + b, bp)
    lam_c = anchored_hull(g, A + c, bp)
    meet = intersect_subgraphs(lam_b, lam_c)
    analysis = []
    independent = True
    for comp in components(g, meet):
        non_z = sorted((v for v in comp.vertices
                        if g.vertices[v].kind != "ztype" or v == bp), key=id_key)
        surfaces = [v for v in non_z if g.vertices[v].kind == "surface"]
        ok = len(non_z) <= 1 and not surfaces
        independent &= ok
        analysis.append({
            "vertices": sorted(comp.vertices, key=id_key),
            "edges": sorted(comp.edges, key=id_key),
            "non_z_vertices": non_z,
            "surface_vertices": surfaces,
            "ok": ok,
        })
    return IndependenceVerdict(
        "independent" if independent else "forks",
        "jsj",
        assumptions,
        {
            "decomposition_sha256": g.digest(),
            "basepoint": bp,
            "subgraph_Ab": lam_b.to_json(),
            "subgraph_Ac": lam_c.to_json(),
            "intersection_components": analysis,
        },
    )
