"""Dehn twists, vertex automorphisms and inner automorphisms of ``F_n``.

Each elementary automorphism is stored in the shape ``Conj(c) o rho``
where ``rho`` is *canonical*:

* a canonical Dehn twist about an edge ``e`` (source ``x``, target ``y``)
  by a twister ``z`` commuting with ``image_from`` is the identity on the
  vertex groups on the source side of ``e``, conjugation by ``z`` on the
  other side, and sends the stable letter of ``e`` (if ``e`` is off the
  tree) to ``z t``;
* a canonical vertex automorphism at ``v`` applies ``sigma0`` to ``G_v``
  and conjugates everything reached through the edge end ``R`` at ``v`` by
  the declared ``g_R``.

Twists fixing the other side, or about translated lifts, differ from a
canonical one by an inner automorphism, which is kept in ``outer``.
"""

from dataclasses import dataclass, field

from .graphofgroups import id_key
from .stallings import CoreGraph, Expresser
from .whitehead import FnAutomorphism, solve_inner
from .words import Word, conjugator


def _realize(g, symbol_images):
    """Automorphism of ``F_n`` with prescribed images of the marking symbols."""
    n = g.rank
    imgs = [w for w in symbol_images]
    out = []
    for i in range(1, n + 1):
        coords = g._expresser.express(Word.generator(i, n))
        w = Word((), n)
        for x in coords.letters:
            im = imgs[abs(x) - 1]
            w = w * (im if x > 0 else im.inverse())
        out.append(w)
    return FnAutomorphism(out, n)


@dataclass(eq=False)
class ElementaryAut:
    kind: str  # "dehn_twist" | "vertex_aut" | "inner"
    graph: object
    realization: FnAutomorphism
    support: tuple = None  # ("edge", id) | ("vertex", id) | None
    outer: Word = None  # realization == Conj(outer) o canonical
    canonical: "ElementaryAut" = None
    data: dict = field(default_factory=dict)
    vertex_conj: dict = field(default_factory=dict)
    edge_conj: dict = field(default_factory=dict)

    def decompose(self):
        """Return ``(c, rho)`` with ``self == Conj(c) o rho``, rho canonical or None."""
        if self.kind == "inner":
            return self.data["conjugator"], None
        if self.canonical is None:
            return Word((), self.graph.rank), self
        return self.outer, self.canonical

    def support_key(self):
        kind, ident = self.support
        return (0 if kind == "edge" else 1, id_key(ident))

    def conj_on(self, support):
        """Conjugator by which this canonical automorphism acts on another support."""
        kind, ident = support
        if kind == "vertex":
            return self.vertex_conj[ident]
        return self.edge_conj[ident]

    def __call__(self, w):
        return self.realization(w)

    def to_json(self):
        out = {"kind": self.kind}
        if self.kind == "dehn_twist":
            out.update(edge=self.data["edge"], twister=str(self.data["twister"]),
                       fixed=self.data.get("fixed", "from"))
            if self.data.get("toward") is not None:
                out["toward"] = self.data["toward"]
        elif self.kind == "vertex_aut":
            out.update(vertex=self.data["vertex"],
                       images=[str(w) for w in self.data["images"]],
                       conjugators={f"{e}:{end}": str(w)
                                    for (e, end), w in sorted(self.data["conjugators"].items(),
                                                              key=lambda kv: (id_key(kv[0][0]), kv[0][1]))})
        else:
            out["conjugator"] = str(self.data["conjugator"])
        return out

    def __repr__(self):
        return f"ElementaryAut({self.to_json()})"


# ---------------------------------------------------------------------------
# constructors


def inner(g, c):
    return ElementaryAut("inner", g, FnAutomorphism.inner(c), None, data={"conjugator": c})


def _canonical_twist(g, edge, z):
    e = g.edges[edge]
    if z * e.image_from != e.image_from * z:
        raise ValueError(f"twister {z} does not commute with the edge group of {edge}")
    one = Word((), g.rank)
    side = g.tree_sides(edge) if e.tree else set(g.vertices)
    gx = {v: (one if v in side else z) for v in g.vertices}
    images = []
    for sym, w in g.symbols:
        if sym[0] == "vertex":
            images.append(w.conjugate_by(gx[sym[1]]))
        else:
            f = g.edges[sym[1]]
            if f.id == edge:
                images.append(z * w)
            else:
                images.append(gx[f.source] * w * gx[f.target].inverse())
    real = _realize(g, images)
    edge_conj = {f: gx[g.edges[f].source] for f in g.edges if f != edge}
    return ElementaryAut("dehn_twist", g, real, ("edge", edge),
                         data={"edge": edge, "twister": z, "fixed": "from"},
                         vertex_conj=gx, edge_conj=edge_conj)


def dehn_twist(g, edge, z, fixed="from"):
    """Dehn twist about ``edge`` by ``z``, the identity on the ``fixed`` side."""
    if fixed == "from":
        return _canonical_twist(g, edge, z)
    if fixed != "to":
        raise ValueError("fixed must be 'from' or 'to'")
    can = _canonical_twist(g, edge, z.inverse())
    real = FnAutomorphism.inner(z).compose(can.realization)
    return ElementaryAut("dehn_twist", g, real, ("edge", edge), outer=z, canonical=can,
                         data={"edge": edge, "twister": z, "fixed": "to"})


def twist_toward(g, edge, end, z):
    """Twist about the lift of ``edge`` at the given end of a vertex ``v``.

    ``z`` lies in the stabiliser frame of ``v``; the automorphism conjugates
    by ``z`` on the side containing ``v`` and is the identity beyond the edge.
    """
    e = g.edges[edge]
    if end == "from":
        aut = dehn_twist(g, edge, z, fixed="to")
    elif e.tree:
        aut = dehn_twist(g, edge, z, fixed="from")
    else:
        t = e.stable_letter
        can = _canonical_twist(g, edge, z.conjugate_by(t))
        real = FnAutomorphism.inner(z).compose(can.realization)
        aut = ElementaryAut("dehn_twist", g, real, ("edge", edge), outer=z, canonical=can,
                            data={"edge": edge, "twister": z, "fixed": "from"})
    aut.data["toward"] = e.source if end == "from" else e.target
    return aut


def _solve_edge_conjugator(sub, img, target, limit=8):
    g0 = conjugator(img, target)
    if g0 is None:
        return None
    r, _ = img.max_root()
    for k in sorted(range(-limit, limit + 1), key=abs):
        cand = g0 * r ** k
        if sub.contains(cand):
            return cand
    return None


def vertex_aut(g, vertex, images, conjugators=None):
    """Extend an automorphism ``sigma0`` of ``G_vertex`` to ``F_n``.

    ``images`` are the images of the vertex generators (which must form a
    free basis of the vertex group).  ``conjugators`` maps edge ends
    ``(edge id, 'from'|'to')`` at the vertex to ``g_R`` in ``G_vertex`` with
    ``sigma0(image) == g_R image g_R^-1``; missing ones are solved for.
    """
    v = g.vertices[vertex]
    images = tuple(images)
    n = g.rank
    sub = g.vertex_subgroup(vertex)
    if len(images) != len(v.generators):
        raise ValueError("one image per vertex generator required")
    if len(v.generators) != sub.rank_of_subgroup():
        raise ValueError("vertex generators must form a free basis of the vertex group")
    if CoreGraph.from_generators(images, n) != sub:
        raise ValueError("images do not generate the vertex group: sigma0 is not an automorphism")
    ex = Expresser(v.generators, n)

    def sigma0(w):
        return ex.evaluate_with(ex.express(w), images)

    conj = {}
    given = dict(conjugators or {})
    for eid, end in g.incident(vertex):
        img = g.image_at(eid, end)
        target = sigma0(img)
        if (eid, end) in given:
            c = given[(eid, end)]
            if not sub.contains(c) or img.conjugate_by(c) != target:
                raise ValueError(f"conjugator for {eid}:{end} is not compatible with sigma0")
        else:
            c = _solve_edge_conjugator(sub, img, target)
            if c is None:
                raise ValueError(f"sigma0 does not conjugate the edge group of {eid}:{end}")
        conj[(eid, end)] = c

    one = Word((), n)
    cx = {vertex: one}
    for eid, end in g.incident(vertex):
        e = g.edges[eid]
        if not e.tree:
            continue
        side = g.tree_sides(eid)
        far = side if end == "to" else set(g.vertices) - side
        for x in far:
            cx[x] = conj[(eid, end)]

    def g_end(f, end):
        x = f.source if end == "from" else f.target
        return conj[(f.id, end)] if x == vertex else cx[x]

    out = []
    for sym, w in g.symbols:
        if sym[0] == "vertex":
            if sym[1] == vertex:
                out.append(images[sym[2]])
            else:
                out.append(w.conjugate_by(cx[sym[1]]))
        else:
            f = g.edges[sym[1]]
            out.append(g_end(f, "from") * w * g_end(f, "to").inverse())
    real = _realize(g, out)
    vconj = {x: c for x, c in cx.items() if x != vertex}
    econj = {}
    for f in g.edges.values():
        if f.source == vertex:
            econj[f.id] = conj[(f.id, "from")]
        elif f.target == vertex and f.tree:
            econj[f.id] = conj[(f.id, "to")]
        else:
            econj[f.id] = cx[f.source]
    return ElementaryAut("vertex_aut", g, real, ("vertex", vertex),
                         data={"vertex": vertex, "images": images, "conjugators": conj},
                         vertex_conj=vconj, edge_conj=econj)


def from_json(g, data):
    kind = data["kind"]
    n = g.rank
    if kind == "dehn_twist":
        z = Word.parse(data["twister"], n)
        if "toward" in data:
            e = g.edges[data["edge"]]
            end = "to" if data["toward"] == e.target else "from"
            return twist_toward(g, data["edge"], end, z)
        return dehn_twist(g, data["edge"], z, data.get("fixed", "from"))
    if kind == "vertex_aut":
        conj = {}
        for key, w in (data.get("conjugators") or {}).items():
            eid, end = key.rsplit(":", 1)
            match = [e for e in g.edges if str(e) == eid]
            conj[(match[0] if match else eid, end)] = Word.parse(w, n)
        return vertex_aut(g, data["vertex"], [Word.parse(w, n) for w in data["images"]], conj)
    if kind == "inner":
        return inner(g, Word.parse(data["conjugator"], n))
    raise ValueError(f"unknown elementary automorphism kind {kind!r}")


# ---------------------------------------------------------------------------
# laws


def compose(auts, rank=None):
    """Composite ``f_1 o f_2 o ... o f_k`` of realizations."""
    auts = list(auts)
    if not auts:
        return FnAutomorphism.identity(rank)
    out = auts[0].realization if isinstance(auts[0], ElementaryAut) else auts[0]
    for a in auts[1:]:
        out = out.compose(a.realization if isinstance(a, ElementaryAut) else a)
    return out


def cylinder_relation_check(g, zvertex, z, twisters=None):
    """Compose the twists toward ``zvertex`` over all its edge ends and
    compare with ``Conj(z^(r-1))``.  ``twisters`` may override the twister
    per edge end (used to exercise broken configurations)."""
    ends = g.incident(zvertex)
    twisters = twisters or {}
    auts = [twist_toward(g, eid, end, twisters.get((eid, end), z)) for eid, end in ends]
    lhs = compose(auts, g.rank)
    rhs = FnAutomorphism.inner(z ** (len(ends) - 1))
    return lhs == rhs


def commute_witness(rho, sigma):
    """Return ``g`` with ``rho o sigma == Conj(g) o sigma o rho``."""
    if rho.support is None or sigma.support is None:
        raise ValueError("inner automorphisms have no support")
    if rho.support == sigma.support:
        raise ValueError("supports coincide")
    c1, r = rho.decompose()
    c2, s = sigma.decompose()
    g0 = r.conj_on(s.support)
    h0 = s.conj_on(r.support)
    core = g0 * h0 * g0.inverse() * h0.inverse()
    g = c1 * r(c2) * core * (c2 * s(c1)).inverse()
    lhs = rho.realization.compose(sigma.realization)
    rhs = FnAutomorphism.inner(g).compose(sigma.realization).compose(rho.realization)
    if lhs != rhs:
        raise AssertionError("commutation witness failed to verify")
    return g


def _merge(a, b):
    g = a.graph
    if a.kind == "dehn_twist":
        return _canonical_twist(g, a.data["edge"], a.data["twister"] * b.data["twister"])
    v = a.data["vertex"]
    images = tuple(a.realization(w) for w in b.data["images"])
    conj = {R: a.realization(b.data["conjugators"][R]) * a.data["conjugators"][R]
            for R in a.data["conjugators"]}
    return vertex_aut(g, v, images, conj)


def normal_form(auts):
    """Rewrite a product of elementary automorphisms as ``Conj(z) o rho_1 o ... o rho_r``.

    The ``rho_i`` have pairwise distinct supports, sorted edges first then
    vertices, each by id.
    """
    auts = list(auts)
    if not auts:
        raise ValueError("empty product")
    g = auts[0].graph
    n = g.rank
    z = Word((), n)
    factors = []
    prefix = FnAutomorphism.identity(n)
    for a in auts:
        c, r = a.decompose()
        z = z * prefix(c)
        if r is not None:
            factors.append(r)
            prefix = prefix.compose(r.realization)

    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(factors) - 1:
            a, b = factors[i], factors[i + 1]
            if a.support == b.support:
                factors[i : i + 2] = [_merge(a, b)]
                changed = True
                continue
            if a.support_key() > b.support_key():
                w = commute_witness(a, b)
                z = z * compose(factors[:i], n)(w)
                factors[i], factors[i + 1] = b, a
                changed = True
            i += 1
        kept = [f for f in factors if not f.realization.is_identity()]
        if len(kept) != len(factors):
            factors = kept
            changed = True

    if factors:
        w = solve_inner(compose(factors, n))
        if w is not None:
            z = z * w
            factors = []
    total = FnAutomorphism.inner(z).compose(compose(factors, n))
    if total != compose(auts, n):
        raise AssertionError("normal form does not preserve the realization")
    return z, factors


def common_conjugator(pairs, limit=None):
    """Find ``c`` with ``c h c^-1 == k`` for every ``(h, k)``, or None."""
    pairs = [(h, k) for h, k in pairs if not h.is_identity() or not k.is_identity()]
    if not pairs:
        return None
    h1, k1 = pairs[0]
    c0 = conjugator(h1, k1)
    if c0 is None:
        return None
    r, _ = h1.max_root()
    bound = limit or (sum(len(h) + len(k) for h, k in pairs) + 2)
    for j in sorted(range(-bound, bound + 1), key=abs):
        c = c0 * r ** j
        if all(h.conjugate_by(c) == k for h, k in pairs):
            return c
    return None
