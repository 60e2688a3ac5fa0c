"""Marked graphs of groups with cyclic edge groups, splitting ``F_n``.

A decomposition lists vertex groups as subgroups of ``F_n`` (by
generators), edges with a cyclic edge group and its images in the two
endpoint groups, a spanning tree, and a stable letter for every edge off
the tree.  The conventions are

* a tree edge has ``image_from == image_to == edge_generator``;
* an edge off the tree with stable letter ``t`` satisfies
  ``t * image_to * t^-1 == image_from == edge_generator``.

Elements of ``F_n`` are written as paths in the fundamental groupoid:
alternating vertex-group elements and oriented edges.  Britton reduction
of such a path yields the geodesic in the Bass-Serre tree, from which
minimal subgraphs are read off.
"""

import hashlib
import json
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property

from .stallings import CoreGraph, Expresser, NotInSubgroup
from .words import Word, ball, conjugator, power_exponent, shortlex_key

KINDS = ("rigid", "surface", "ztype", "basepoint")
_KIND_ALIASES = {
    "rigid": "rigid",
    "surface": "surface",
    "ztype": "ztype",
    "z": "ztype",
    "z-type": "ztype",
    "basepoint": "basepoint",
}


class MarkingError(ValueError):
    """The marking is inconsistent: reduction met a non-member."""


class SchemaError(ValueError):
    """Input JSON does not follow the decomposition schema."""


def id_key(x):
    s = str(x)
    if s.lstrip("-").isdigit():
        return (0, int(s), s)
    return (1, 0, s)


@dataclass(frozen=True)
class Surface:
    genus: int
    orientable: bool
    boundary: int

    def euler(self):
        if self.orientable:
            return 2 - 2 * self.genus - self.boundary
        return 2 - self.genus - self.boundary

    def expected_rank(self):
        return 1 - self.euler()

    def is_sporadic(self):
        if self.orientable:
            return (self.genus, self.boundary) == (0, 3)
        return (self.genus, self.boundary) in ((2, 1), (1, 2))

    def to_json(self):
        return {"genus": self.genus, "orientable": self.orientable, "boundary": self.boundary}


@dataclass(frozen=True)
class Vertex:
    id: object
    kind: str
    generators: tuple
    surface: Surface = None

    def to_json(self):
        out = {"id": self.id, "kind": self.kind}
        if self.surface is not None:
            out["surface"] = self.surface.to_json()
        out["generators"] = [str(w) for w in self.generators]
        return out


@dataclass(frozen=True)
class Edge:
    id: object
    source: object
    target: object
    generator: Word
    image_from: Word
    image_to: Word
    tree: bool
    stable_letter: Word = None

    def stable(self):
        return self.stable_letter if not self.tree else Word((), self.generator.rank)

    def to_json(self):
        out = {
            "id": self.id,
            "from": self.source,
            "to": self.target,
            "edge_generator": str(self.generator),
            "image_from": str(self.image_from),
            "image_to": str(self.image_to),
            "tree": self.tree,
        }
        if not self.tree:
            out["stable_letter"] = str(self.stable_letter)
        return out


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    group: str = "structure"


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)

    def add(self, name, passed, detail="", group="structure"):
        self.checks.append(Check(name, bool(passed), detail, group))

    @property
    def ok(self):
        return all(c.passed for c in self.checks if c.group == "structure")

    @property
    def jsj_ok(self):
        return self.ok and all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_json(self):
        return {
            "ok": self.ok,
            "jsj_ok": self.jsj_ok,
            "checks": [
                {"name": c.name, "group": c.group, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
            "assumptions": list(self.assumptions),
        }


@dataclass
class GoGNormalForm:
    """Britton-reduced path ``s_0 e_1 s_1 ... e_k s_k`` starting at ``base``."""

    base: object
    syllables: list  # [(vertex id, Word)]
    edges: list  # [(edge id, +1 | -1)]

    def evaluate(self, g):
        out = Word((), g.rank)
        for i, (_, s) in enumerate(self.syllables):
            out = out * s
            if i < len(self.edges):
                eid, d = self.edges[i]
                t = g.edges[eid].stable()
                out = out * (t if d > 0 else t.inverse())
        return out

    def crossings(self):
        return Counter(eid for eid, _ in self.edges)

    def vertices(self):
        return [v for v, _ in self.syllables]

    def stable_letters_used(self, g):
        return [(eid, d) for eid, d in self.edges if not g.edges[eid].tree]

    def to_json(self):
        return {
            "base": self.base,
            "syllables": [[v, str(s)] for v, s in self.syllables],
            "edges": [[e, d] for e, d in self.edges],
            "crossings": dict(sorted(self.crossings().items(), key=lambda kv: id_key(kv[0]))),
        }


@dataclass(frozen=True)
class Subgraph:
    vertices: frozenset
    edges: frozenset
    anchor: object = None
    conjugator: Word = None
    bound: int = None

    def __le__(self, other):
        return self.vertices <= other.vertices and self.edges <= other.edges

    def size(self):
        return (len(self.edges), len(self.vertices))

    def to_json(self):
        out = {
            "vertices": sorted(self.vertices, key=id_key),
            "edges": sorted(self.edges, key=id_key),
            "anchor": self.anchor,
        }
        if self.conjugator is not None:
            out["conjugator"] = str(self.conjugator)
        if self.bound is not None:
            out["conjugator_bound"] = self.bound
        return out


class MarkedGraphOfGroups:
    """A marked cyclic splitting of ``F_rank``."""

    def __init__(self, rank, vertices, edges, basepoint=None):
        self.rank = rank
        self.vertices = {v.id: v for v in sorted(vertices, key=lambda v: id_key(v.id))}
        self.edges = {e.id: e for e in sorted(edges, key=lambda e: id_key(e.id))}
        if len(self.vertices) != len(vertices) or len(self.edges) != len(edges):
            raise SchemaError("duplicate vertex or edge id")
        self.basepoint = basepoint

    # -- serialisation ---------------------------------------------------
    @classmethod
    def from_json(cls, data):
        try:
            rank = int(data["rank"])
            vertices = []
            for v in data["vertices"]:
                kind = _KIND_ALIASES.get(str(v["kind"]).lower())
                if kind is None:
                    raise SchemaError(f"vertex {v['id']}: unknown kind {v['kind']!r}")
                surf = v.get("surface")
                if surf is not None:
                    surf = Surface(int(surf["genus"]), bool(surf["orientable"]), int(surf["boundary"]))
                gens = tuple(Word.parse(w, rank) for w in v["generators"])
                vertices.append(Vertex(v["id"], kind, gens, surf))
            edges = []
            for e in data["edges"]:
                img_from = Word.parse(e["image_from"], rank)
                gen = Word.parse(e.get("edge_generator", str(img_from)), rank)
                tree = bool(e.get("tree", True))
                t = e.get("stable_letter")
                t = Word.parse(t, rank) if t is not None else None
                if not tree and t is None:
                    raise SchemaError(f"edge {e['id']}: non-tree edge needs a stable_letter")
                edges.append(Edge(e["id"], e["from"], e["to"], gen, img_from,
                                  Word.parse(e["image_to"], rank), tree, t))
        except KeyError as exc:
            raise SchemaError(f"missing field {exc}") from exc
        except ValueError as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(str(exc)) from exc
        return cls(rank, vertices, edges, data.get("basepoint"))

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{exc.lineno}: {exc.msg}") from exc
        return cls.from_json(data)

    def to_json(self):
        out = {
            "rank": self.rank,
            "vertices": [v.to_json() for v in self.vertices.values()],
            "edges": [e.to_json() for e in self.edges.values()],
        }
        if self.basepoint is not None:
            out["basepoint"] = self.basepoint
        return out

    def dumps(self):
        return json.dumps(self.to_json(), indent=2)

    def digest(self):
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    # -- structure -------------------------------------------------------
    def vertex_ids(self):
        return list(self.vertices)

    def edge_ids(self):
        return list(self.edges)

    def incident(self, v):
        """Edge ends at ``v`` as ``(edge id, 'from' | 'to')``."""
        out = []
        for e in self.edges.values():
            if e.source == v:
                out.append((e.id, "from"))
            if e.target == v:
                out.append((e.id, "to"))
        return out

    def image_at(self, eid, end):
        e = self.edges[eid]
        return e.image_from if end == "from" else e.image_to

    @property
    def root(self):
        if self.basepoint is not None and self.basepoint in self.vertices:
            return self.basepoint
        return next(iter(self.vertices))

    @cached_property
    def _tree(self):
        """Parent pointers of the spanning tree rooted at ``root``."""
        parent = {self.root: None}
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for e in self.edges.values():
                if not e.tree:
                    continue
                for a, b, d in ((e.source, e.target, 1), (e.target, e.source, -1)):
                    if a == v and b not in parent:
                        parent[b] = (e.id, d, v)
                        queue.append(b)
        return parent

    def tree_path(self, v):
        """Steps ``(edge id, direction)`` from the root to ``v`` along the tree."""
        steps = []
        while self._tree[v] is not None:
            eid, d, u = self._tree[v]
            steps.append((eid, d))
            v = u
        return steps[::-1]

    def tree_sides(self, eid):
        """Vertices on the source side of the tree after deleting tree edge ``eid``."""
        e = self.edges[eid]
        side = {e.source}
        stack = [e.source]
        while stack:
            v = stack.pop()
            for f in self.edges.values():
                if not f.tree or f.id == eid:
                    continue
                for a, b in ((f.source, f.target), (f.target, f.source)):
                    if a == v and b not in side:
                        side.add(b)
                        stack.append(b)
        return side

    def vertex_subgroup(self, v):
        return self._subgroups[v]

    @cached_property
    def _subgroups(self):
        return {v.id: CoreGraph.from_generators(v.generators, self.rank) for v in self.vertices.values()}

    @cached_property
    def symbols(self):
        """Generating symbols: vertex generators, then stable letters."""
        out = []
        for v in self.vertices.values():
            for j, w in enumerate(v.generators):
                out.append((("vertex", v.id, j), w))
        for e in self.edges.values():
            if not e.tree:
                out.append((("stable", e.id), e.stable_letter))
        return out

    @cached_property
    def _expresser(self):
        return Expresser([w for _, w in self.symbols], self.rank)

    def map_words(self, f):
        """Apply an automorphism ``f`` of ``F_n`` to every word of the marking."""
        verts = [Vertex(v.id, v.kind, tuple(f(w) for w in v.generators), v.surface)
                 for v in self.vertices.values()]
        edges = [Edge(e.id, e.source, e.target, f(e.generator), f(e.image_from),
                      f(e.image_to), e.tree, None if e.tree else f(e.stable_letter))
                 for e in self.edges.values()]
        return MarkedGraphOfGroups(self.rank, verts, edges, self.basepoint)

    def __eq__(self, other):
        return isinstance(other, MarkedGraphOfGroups) and self.to_json() == other.to_json()

    def __repr__(self):
        return (f"MarkedGraphOfGroups(rank={self.rank}, vertices={list(self.vertices)}, "
                f"edges={list(self.edges)}, basepoint={self.basepoint!r})")


# ---------------------------------------------------------------------------
# validation


def _side(v):
    if v.kind == "ztype":
        return "Z"
    if v.kind == "basepoint" and len(v.generators) == 1:
        return "Z"
    return "N"


def validate(g):
    r = ValidationReport()
    n = g.rank
    bad = [e.id for e in g.edges.values() if e.source not in g.vertices or e.target not in g.vertices]
    r.add("edge endpoints exist", not bad, f"dangling edges {bad}" if bad else "")
    if bad:
        return r

    tree = [e for e in g.edges.values() if e.tree]
    reach = set(g._tree)
    spanning = len(tree) == len(g.vertices) - 1 and reach == set(g.vertices)
    r.add("spanning tree", spanning,
          "" if spanning else f"{len(tree)} tree edges reach {len(reach)} of {len(g.vertices)} vertices")

    empty = [v.id for v in g.vertices.values() if not v.generators or any(w.is_identity() for w in v.generators)]
    r.add("vertex groups nontrivial", not empty, f"vertices {empty}" if empty else "")

    trivial = [e.id for e in g.edges.values() if e.generator.is_identity()]
    r.add("cyclic edge groups", not trivial, f"trivial edge groups on {trivial}" if trivial else "")

    problems = []
    for e in g.edges.values():
        if e.generator != e.image_from:
            problems.append(f"{e.id}: edge_generator differs from image_from")
        if not g.vertex_subgroup(e.source).contains(e.image_from):
            problems.append(f"{e.id}: image_from not in vertex {e.source}")
        if not g.vertex_subgroup(e.target).contains(e.image_to):
            problems.append(f"{e.id}: image_to not in vertex {e.target}")
    r.add("edge images in vertex groups", not problems, "; ".join(problems))

    problems = []
    for e in g.edges.values():
        if e.tree:
            if e.stable_letter is not None and not e.stable_letter.is_identity():
                problems.append(f"{e.id}: tree edge carries a stable letter")
            if e.image_from != e.image_to:
                problems.append(f"{e.id}: amalgamation identity fails")
        else:
            if e.image_to.conjugate_by(e.stable_letter) != e.image_from:
                problems.append(f"{e.id}: t * image_to * t^-1 != image_from")
    r.add("marking relations", not problems, "; ".join(problems))

    gens = [w for _, w in g.symbols]
    whole = CoreGraph.from_generators(gens, n).is_whole_group()
    r.add("generation of F_n", whole, "" if whole else "vertex groups and stable letters generate a proper subgroup")

    chi = sum(1 - g.vertex_subgroup(v).rank_of_subgroup() for v in g.vertices)
    r.add("euler characteristic", chi == 1 - n, f"sum of vertex characteristics {chi}, expected {1 - n}")

    # structure specific to pointed cyclic JSJ decompositions
    bad = []
    for e in g.edges.values():
        u, v = g.vertices[e.source], g.vertices[e.target]
        if "basepoint" in (u.kind, v.kind):
            continue
        if _side(u) == _side(v):
            bad.append(e.id)
    r.add("bipartite Z / non-Z", not bad, f"edges {bad} join same-type vertices" if bad else "", "jsj")

    bad = []
    for v in g.vertices.values():
        if v.kind != "ztype":
            continue
        sub = g.vertex_subgroup(v.id)
        if sub.rank_of_subgroup() != 1:
            bad.append(f"{v.id}: not cyclic")
        elif sub.free_basis()[0].max_root()[1] != 1:
            bad.append(f"{v.id}: generated by a proper power")
    r.add("Z-type groups maximal cyclic", not bad, "; ".join(bad), "jsj")

    bad = []
    for v in g.vertices.values():
        if v.kind != "surface":
            continue
        s = v.surface
        if s is None:
            bad.append(f"{v.id}: missing surface data")
            continue
        if s.boundary < 1 or s.euler() >= 0:
            bad.append(f"{v.id}: surface must have boundary and negative Euler characteristic")
        if s.is_sporadic():
            bad.append(f"{v.id}: sporadic surface (g={s.genus}, b={s.boundary}, orientable={s.orientable})")
        rk = g.vertex_subgroup(v.id).rank_of_subgroup()
        if rk != s.expected_rank():
            bad.append(f"{v.id}: group rank {rk} but surface needs {s.expected_rank()}")
    r.add("surface vertices", not bad, "; ".join(bad), "jsj")

    bad = []
    marked = [v.id for v in g.vertices.values() if v.kind == "basepoint"]
    if len(marked) > 1:
        bad.append(f"several basepoint vertices {marked}")
    if g.basepoint is not None and g.basepoint not in g.vertices:
        bad.append(f"basepoint {g.basepoint} is not a vertex")
    if marked and g.basepoint is not None and marked[0] != g.basepoint:
        bad.append("basepoint field disagrees with the basepoint vertex")
    for vid in marked:
        ends = g.incident(vid)
        if len(ends) > 1:
            bad.append(f"basepoint vertex {vid} has degree {len(ends)}")
        for eid, end in ends:
            img = g.image_at(eid, end)
            if CoreGraph.from_generators([img], n) != g.vertex_subgroup(vid):
                bad.append(f"edge {eid} does not carry the whole basepoint group")
    r.add("basepoint", not bad, "; ".join(bad), "jsj")
    r.assumptions.append("strong 2-acylindricity is user-asserted, not verified")
    r.assumptions.append("surface edge groups are user-asserted boundary-parallel")
    return r


def require_valid(g, jsj=False):
    rep = validate(g)
    if not (rep.jsj_ok if jsj else rep.ok):
        msgs = "; ".join(f"{c.name}: {c.detail}" for c in rep.failures())
        raise MarkingError(f"decomposition fails validation ({msgs})")
    return rep


# ---------------------------------------------------------------------------
# Britton reduction


def _symbol_path(g, symbol, sign):
    """Groupoid path (from the root back to the root) for one symbol."""
    def back(steps):
        return [("edge", eid, -d) for eid, d in reversed(steps)]

    def fwd(steps):
        return [("edge", eid, d) for eid, d in steps]

    if symbol[0] == "vertex":
        _, vid, j = symbol
        w = g.vertices[vid].generators[j]
        p = g.tree_path(vid)
        return fwd(p) + [("elem", vid, w if sign > 0 else w.inverse())] + back(p)
    e = g.edges[symbol[1]]
    if sign > 0:
        return fwd(g.tree_path(e.source)) + [("edge", e.id, 1)] + back(g.tree_path(e.target))
    return fwd(g.tree_path(e.target)) + [("edge", e.id, -1)] + back(g.tree_path(e.source))


def reduce_path(g, base, steps):
    """Britton-reduce a groupoid path starting at ``base``."""
    one = Word((), g.rank)
    stack = [(base, one)]
    for step in steps:
        if step[0] == "elem":
            _, vid, w = step
            cur, h = stack[-1]
            if cur != vid:
                raise MarkingError(f"path broken at vertex {vid}")
            stack[-1] = (cur, h * w)
            continue
        _, eid, d = step
        e = g.edges[eid]
        start, end = (e.source, e.target) if d > 0 else (e.target, e.source)
        cur, h = stack[-1]
        if cur != start:
            raise MarkingError(f"path broken at edge {eid}")
        if len(stack) >= 3 and stack[-2] == (eid, -d):
            # pattern  x -e-> y (elem h) y -e-> x : pinch if h in the edge group
            back_dir = -d
            img_here = e.image_to if back_dir > 0 else e.image_from
            img_there = e.image_from if back_dir > 0 else e.image_to
            k = power_exponent(h, img_here)
            if k is not None:
                stack.pop()
                stack.pop()
                x, hx = stack[-1]
                stack[-1] = (x, hx * img_there ** k)
                continue
        stack.append((eid, d))
        stack.append((end, one))
    syllables = stack[0::2]
    edges = stack[1::2]
    return GoGNormalForm(base, list(syllables), list(edges))


def express(g, w, base=None):
    """Britton normal form of ``w`` as a loop at ``base`` (default: the root)."""
    if base is None:
        base = g.root
    try:
        coords = g._expresser.express(w)
    except NotInSubgroup as exc:
        raise MarkingError(f"{w} not generated by the marking") from exc
    steps = []
    pre = g.tree_path(base)
    steps += [("edge", eid, -d) for eid, d in reversed(pre)]
    for x in coords.letters:
        symbol = g.symbols[abs(x) - 1][0]
        steps += _symbol_path(g, symbol, 1 if x > 0 else -1)
    steps += [("edge", eid, d) for eid, d in pre]
    nf = reduce_path(g, base, steps)
    if nf.evaluate(g) != w:
        raise MarkingError(f"normal form of {w} evaluates to {nf.evaluate(g)}")
    return nf


# ---------------------------------------------------------------------------
# minimal subgraphs


def anchored_hull(g, H, anchor):
    """Projection of the hull of ``<H> . anchor`` in the Bass-Serre tree."""
    verts = {anchor}
    edges = set()
    for h in H:
        nf = express(g, h, base=anchor)
        verts.update(nf.vertices())
        for eid, _ in nf.edges:
            edges.add(eid)
            verts.update((g.edges[eid].source, g.edges[eid].target))
    return Subgraph(frozenset(verts), frozenset(edges), anchor)


def minimal_subgraph(g, H, anchor=None, bound=2):
    """Smallest subgraph whose fundamental group carries ``<H>``.

    With a basepoint (and ``anchor`` left as None) the hull is anchored at
    the basepoint, which lies in every minimal subtree considered by the
    independence criterion.  Otherwise ``anchor="search"`` (the default
    without basepoint) searches over anchor vertices and conjugators of
    length at most ``bound`` for the smallest hull.
    """
    H = tuple(H)
    if not H:
        raise ValueError("H must be nonempty")
    if anchor is None:
        anchor = g.basepoint if g.basepoint is not None else "search"
    if anchor != "search":
        return anchored_hull(g, H, anchor)
    best = None
    for c in ball(g.rank, bound):
        conj = tuple(h.conjugate_by(c) for h in H)
        for v in g.vertices:
            hull = anchored_hull(g, conj, v)
            key = (hull.size(), shortlex_key(c), id_key(v))
            if best is None or key < best[0]:
                best = (key, Subgraph(hull.vertices, hull.edges, v, c, bound))
        if best[1].size() == (0, 1):
            break
    return best[1]


def components(g, sub):
    """Connected components of a subgraph as a list of Subgraphs."""
    left = set(sub.vertices)
    out = []
    while left:
        v0 = min(left, key=id_key)
        comp = {v0}
        stack = [v0]
        es = set()
        while stack:
            v = stack.pop()
            for eid in sub.edges:
                e = g.edges[eid]
                if v in (e.source, e.target):
                    es.add(eid)
                    for u in (e.source, e.target):
                        if u in left and u not in comp:
                            comp.add(u)
                            stack.append(u)
        left -= comp
        out.append(Subgraph(frozenset(comp), frozenset(es)))
    return out


def intersect_subgraphs(a, b):
    verts = a.vertices & b.vertices
    edges = frozenset(e for e in a.edges & b.edges)
    return Subgraph(verts, edges)


# ---------------------------------------------------------------------------
# re-marking


def _remark(rank, vertices, edges, root, basepoint=None, prefer=()):
    """Build a decomposition from edges carrying arbitrary connecting words.

    ``edges`` holds ``(id, source, target, image_from, image_to, t)`` with
    ``t * image_to * t^-1 == image_from``.  A BFS spanning tree is chosen
    (edges in ``prefer`` first) and vertex frames are conjugated so every
    tree edge gets a trivial stable letter.  Returns ``(graph, frames)``.
    """
    one = Word((), rank)
    by_id = {e[0]: e for e in edges}
    order = sorted(by_id, key=lambda i: (i not in prefer, id_key(i)))
    delta = {root: one}
    tree = set()
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for eid in order:
            _, s, t_, _, _, w = by_id[eid]
            if s == v and t_ not in delta:
                delta[t_] = delta[v] * w
                tree.add(eid)
                queue.append(t_)
            elif t_ == v and s not in delta:
                delta[s] = delta[v] * w.inverse()
                tree.add(eid)
                queue.append(s)
    if set(delta) != {v.id for v in vertices}:
        raise MarkingError("graph of groups is disconnected")
    new_vertices = [
        Vertex(v.id, v.kind, tuple(w.conjugate_by(delta[v.id]) for w in v.generators), v.surface)
        for v in vertices
    ]
    new_edges = []
    for eid, s, t_, a, b, w in edges:
        a2 = a.conjugate_by(delta[s])
        b2 = b.conjugate_by(delta[t_])
        t2 = delta[s] * w * delta[t_].inverse()
        if eid in tree:
            assert t2.is_identity() and a2 == b2
            new_edges.append(Edge(eid, s, t_, a2, a2, b2, True, None))
        else:
            new_edges.append(Edge(eid, s, t_, a2, a2, b2, False, t2))
    return MarkedGraphOfGroups(rank, new_vertices, new_edges, basepoint), delta


def _edge_data(g):
    return [(e.id, e.source, e.target, e.image_from, e.image_to, e.stable()) for e in g.edges.values()]


# ---------------------------------------------------------------------------
# collapse


@dataclass
class CollapseMap:
    vertex_map: dict
    edge_map: dict
    frames: dict  # old vertex -> word c with c G_v c^-1 <= new vertex group

    def to_json(self):
        return {
            "vertex_map": {str(k): v for k, v in self.vertex_map.items()},
            "edge_map": {str(k): v for k, v in self.edge_map.items()},
            "frames": {str(k): str(v) for k, v in self.frames.items()},
        }


def _merge_generators(words, rank):
    out = []
    for w in words:
        if w not in out and not w.is_identity():
            out.append(w)
    sub = CoreGraph.from_generators(out, rank)
    if len(out) != sub.rank_of_subgroup():
        out = list(sub.free_basis())
    return tuple(out)


def collapse(g, edge_ids):
    edge_ids = set(edge_ids.edges if isinstance(edge_ids, Subgraph) else edge_ids)
    unknown = edge_ids - set(g.edges)
    if unknown:
        raise ValueError(f"unknown edges {sorted(unknown, key=id_key)}")
    one = Word((), g.rank)
    comp_of = {}
    gamma = {}
    extra = {}
    for v in g.vertices:
        if v in comp_of:
            continue
        comp_of[v] = v
        gamma[v] = one
        extra[v] = []
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for eid in sorted(edge_ids, key=id_key):
                e = g.edges[eid]
                for a, b, w in ((e.source, e.target, e.stable()), (e.target, e.source, e.stable().inverse())):
                    if a == x and b not in comp_of:
                        comp_of[b] = v
                        gamma[b] = gamma[x] * w
                        queue.append(b)
    for eid in edge_ids:
        e = g.edges[eid]
        rep = comp_of[e.source]
        loop = gamma[e.source] * e.stable() * gamma[e.target].inverse()
        if not loop.is_identity():
            extra[rep].append(loop)
    reps = sorted(set(comp_of.values()), key=id_key)
    verts = []
    for r in reps:
        members = [v for v in g.vertices if comp_of[v] == r]
        if len(members) == 1 and not extra[r]:
            verts.append(g.vertices[r])
            continue
        words = [w.conjugate_by(gamma[v]) for v in members for w in g.vertices[v].generators]
        verts.append(Vertex(r, "rigid", _merge_generators(words + extra[r], g.rank)))
    edges = []
    for e in g.edges.values():
        if e.id in edge_ids:
            continue
        s, t_ = comp_of[e.source], comp_of[e.target]
        edges.append((e.id, s, t_, e.image_from.conjugate_by(gamma[e.source]),
                      e.image_to.conjugate_by(gamma[e.target]),
                      gamma[e.source] * e.stable() * gamma[e.target].inverse()))
    bp = comp_of[g.basepoint] if g.basepoint is not None else None
    root = comp_of[g.root]
    prefer = {e.id for e in g.edges.values() if e.tree}
    new, delta = _remark(g.rank, verts, edges, root, bp, prefer)
    frames = {v: delta[comp_of[v]] * gamma[v] for v in g.vertices}
    cmap = CollapseMap(
        {v: comp_of[v] for v in g.vertices},
        {e: (None if e in edge_ids else e) for e in g.edges},
        frames,
    )
    return new, cmap


# ---------------------------------------------------------------------------
# tree of cylinders


def _root_class(w):
    r, _ = w.max_root()
    a, b = r.canonical_conjugate(), r.inverse().canonical_conjugate()
    return min(a, b, key=shortlex_key)


def _conjugate_in(sub, u, v):
    """Are ``u`` and ``v^{+-1}`` conjugate inside the subgroup ``sub``?"""
    cu = sub.coordinates(u)
    cv = sub.coordinates(v)
    return cu.is_conjugate(cv) or cu.is_conjugate(cv.inverse())


def tree_of_cylinders(g):
    require_valid(g)
    n = g.rank
    classes = {}
    for e in g.edges.values():
        classes.setdefault(_root_class(e.image_from), []).append(e.id)
    ordered = sorted(classes.items(), key=lambda kv: id_key(kv[1][0]))
    cyl_of = {}
    cyl_root = {}
    cyl_id = {}
    taken = set(map(str, g.vertices))
    for k, (key, eids) in enumerate(ordered, start=1):
        name = f"z{k}"
        while name in taken:
            name = "_" + name
        taken.add(name)
        cyl_id[key] = name
        cyl_root[key] = g.edges[eids[0]].image_from.max_root()[0]
        for eid in eids:
            cyl_of[eid] = key

    v0 = []
    for v in g.vertices.values():
        sub = g.vertex_subgroup(v.id)
        for eid, end in g.incident(v.id):
            rho = g.image_at(eid, end).max_root()[0]
            if not CoreGraph.from_generators([rho], n).contains_subgroup(sub):
                v0.append(v.id)
                break

    vertices = [g.vertices[v] for v in v0]
    for key, name in cyl_id.items():
        vertices.append(Vertex(name, "ztype", (cyl_root[key],)))
    edges = []
    for x in v0:
        sub = g.vertex_subgroup(x)
        groups = []  # (class key, d, representative rho)
        for eid, end in g.incident(x):
            key = cyl_of[eid]
            rho = g.image_at(eid, end).max_root()[0]
            d = sub.intersect(CoreGraph.from_generators([rho], n)).free_basis()[0]
            if any(k2 == key and _conjugate_in(sub, d, d2) for k2, d2, _ in groups):
                continue
            groups.append((key, d, rho))
        for i, (key, d, rho) in enumerate(groups):
            r = cyl_root[key]
            h = conjugator(r, rho)
            if h is None:
                h = conjugator(r, rho.inverse())
            eid = f"{x}~{cyl_id[key]}"
            if any(e[0] == eid for e in edges):
                eid = f"{eid}#{i}"
            edges.append((eid, x, cyl_id[key], d, d.conjugate_by(h.inverse()), h))
    if not v0:
        return g
    bp = g.basepoint if g.basepoint in v0 else None
    root = bp if bp is not None else v0[0]
    new, _ = _remark(n, vertices, edges, root, bp)
    return new


# ---------------------------------------------------------------------------
# pointed JSJ


def cyclic_root(A, rank):
    """Generator of the maximal cyclic subgroup containing ``<A>``."""
    A = tuple(A)
    sub = CoreGraph.from_generators(A, rank)
    if sub.rank_of_subgroup() != 1:
        raise ValueError("<A> is not a nontrivial cyclic group")
    r, _ = sub.free_basis()[0].max_root()
    first = next(a for a in A if not a.is_identity())
    if power_exponent(first, r) < 0:
        r = r.inverse()
    return r


def _elliptic_position(g, H, bound):
    """Find ``(vertex, c)`` with ``c <H> c^-1`` inside that vertex group."""
    for c in ball(g.rank, bound):
        conj = tuple(h.conjugate_by(c) for h in H)
        for v in g.vertices:
            sub = g.vertex_subgroup(v)
            if all(sub.contains(h) for h in conj):
                return v, c
    return None


def pointed_jsj(g, A, bound=3):
    """Mark the basepoint of a cyclic JSJ decomposition relative to ``A``.

    Returns ``(graph, basepoint id)``.  When ``<A>`` is cyclic a new
    basepoint vertex carrying the maximal cyclic subgroup containing it is
    attached to the vertex of the tree fixed by that subgroup.
    """
    require_valid(g)
    A = tuple(a for a in A if not a.is_identity())
    if not A:
        raise ValueError("A must be nontrivial")
    n = g.rank
    from .whitehead import FnAutomorphism

    cyclic = CoreGraph.from_generators(A, n).rank_of_subgroup() == 1
    if not cyclic:
        pos = _elliptic_position(g, A, bound)
        if pos is None:
            raise ValueError("A is not elliptic in the decomposition")
        v, c = pos
        if not c.is_identity():
            g = g.map_words(FnAutomorphism.inner(c.inverse()))
        return MarkedGraphOfGroups(n, list(g.vertices.values()), list(g.edges.values()), v), v

    r = cyclic_root(A, n)
    pos = None
    for v in g.vertices.values():
        if len(v.generators) == 1 and g.vertex_subgroup(v.id).rank_of_subgroup() == 1:
            s = g.vertex_subgroup(v.id).free_basis()[0]
            c = conjugator(r, s) or conjugator(r, s.inverse())
            if c is not None:
                pos = (v.id, c)
                break
    if pos is None:
        pos = _elliptic_position(g, (r,), bound)
    if pos is None:
        raise ValueError("A is not elliptic in the decomposition")
    u, c = pos
    if not c.is_identity():
        g = g.map_words(FnAutomorphism.inner(c.inverse()))
    name = "basepoint"
    while name in g.vertices or name in g.edges:
        name = "_" + name
    ename = name + "_edge"
    verts = list(g.vertices.values()) + [Vertex(name, "basepoint", (r,))]
    edges = list(g.edges.values()) + [Edge(ename, name, u, r, r, r, True, None)]
    return MarkedGraphOfGroups(n, verts, edges, name), name
