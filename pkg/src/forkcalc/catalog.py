"""Ready-made decompositions used by tests, scripts and the CLI.

``random_decomposition`` draws from four families of cyclic splittings of
``F_n`` (chains, stars, a single HNN loop, a chain ending in a loop) and
then moves the marking by a random automorphism, so that words in the
marking are not just generators.
"""

import random

from .graphofgroups import Edge, MarkedGraphOfGroups, Surface, Vertex
from .whitehead import FnAutomorphism, cut_moves
from .words import Word


def _w(s, n):
    return Word.parse(s, n)


def _gen(i, n):
    return Word.generator(i, n)


def tree_edge(eid, s, t, word):
    return Edge(eid, s, t, word, word, word, True, None)


def f2_commutator():
    """Pointed decomposition of F_2 relative to the commutator [a, b]."""
    n = 2
    c = _w("abAB", n)
    return MarkedGraphOfGroups(
        n,
        [
            Vertex("basepoint", "basepoint", (c,)),
            Vertex("z", "ztype", (c,)),
            Vertex("surface", "surface", (_w("a", n), _w("b", n)), Surface(1, True, 1)),
        ],
        [tree_edge("e1", "basepoint", "z", c), tree_edge("e2", "z", "surface", c)],
        basepoint="basepoint",
    )


def f2_cylinders():
    """Tree of cylinders of F_2 relative to [a, b], before pointing."""
    n = 2
    c = _w("abAB", n)
    return MarkedGraphOfGroups(
        n,
        [
            Vertex("z", "ztype", (c,)),
            Vertex("surface", "surface", (_w("a", n), _w("b", n)), Surface(1, True, 1)),
        ],
        [tree_edge("e1", "z", "surface", c)],
    )


def f4_two_tori():
    """Pointed decomposition of F_4 relative to <[a,b], [c,d]>."""
    n = 4
    ab, cd = _w("abAB", n), _w("cdCD", n)
    return MarkedGraphOfGroups(
        n,
        [
            Vertex("p", "rigid", (ab, cd)),
            Vertex("z1", "ztype", (ab,)),
            Vertex("s1", "surface", (_w("a", n), _w("b", n)), Surface(1, True, 1)),
            Vertex("z2", "ztype", (cd,)),
            Vertex("s2", "surface", (_w("c", n), _w("d", n)), Surface(1, True, 1)),
        ],
        [
            tree_edge("e1", "p", "z1", ab),
            tree_edge("e2", "z1", "s1", ab),
            tree_edge("e3", "p", "z2", cd),
            tree_edge("e4", "z2", "s2", cd),
        ],
        basepoint="p",
    )


def chain(n):
    """<e1,e2> *_{e2} <e2,e3> *_{e3} ... *_{e_{n-1}} <e_{n-1},e_n>."""
    verts = [Vertex(f"v{i}", "rigid", (_gen(i, n), _gen(i + 1, n))) for i in range(1, n)]
    edges = [tree_edge(f"e{i}", f"v{i}", f"v{i + 1}", _gen(i + 1, n)) for i in range(1, n - 1)]
    return MarkedGraphOfGroups(n, verts, edges)


def f4_chain():
    return chain(4)


def f3_amalgam():
    return chain(3)


def star(n):
    """Vertices <e1, e_i> for i = 2..n, all amalgamated over <e1>."""
    verts = [Vertex(f"v{i}", "rigid", (_gen(1, n), _gen(i, n))) for i in range(2, n + 1)]
    edges = [tree_edge(f"e{i}", "v2", f"v{i}", _gen(1, n)) for i in range(3, n + 1)]
    return MarkedGraphOfGroups(n, verts, edges)


def loop(n):
    """HNN extension of <e1, ..., e_{n-1}, e_n e1 e_n^-1> with stable letter e_n."""
    t = _gen(n, n)
    x = _gen(1, n).conjugate_by(t)
    gens = tuple(_gen(i, n) for i in range(1, n)) + (x,)
    v = Vertex("v1", "rigid", gens)
    e = Edge("e1", "v1", "v1", x, x, _gen(1, n), False, t)
    return MarkedGraphOfGroups(n, [v], [e])


def chain_with_loop(n):
    """A chain over e2..e_{n-2} whose last vertex carries an HNN loop."""
    if n < 4:
        return loop(n)
    t = _gen(n, n)
    last = n - 1
    x = _gen(last, n).conjugate_by(t)
    verts = [Vertex(f"v{i}", "rigid", (_gen(i, n), _gen(i + 1, n))) for i in range(1, last - 1)]
    verts.append(Vertex(f"v{last - 1}", "rigid", (_gen(last - 1, n), _gen(last, n), x)))
    edges = [tree_edge(f"e{i}", f"v{i}", f"v{i + 1}", _gen(i + 1, n)) for i in range(1, last - 1)]
    edges.append(Edge("h", f"v{last - 1}", f"v{last - 1}", x, x, _gen(last, n), False, t))
    return MarkedGraphOfGroups(n, verts, edges)


def hnn_f2():
    """F_2 as an HNN extension of <a, bab^-1> with stable letter b."""
    return loop(2)


FAMILIES = {"chain": chain, "star": star, "loop": loop, "chain_with_loop": chain_with_loop}

NAMED = {
    "f2_commutator": f2_commutator,
    "f2_cylinders": f2_cylinders,
    "f4_two_tori": f4_two_tori,
    "f4_chain": f4_chain,
    "f3_amalgam": f3_amalgam,
    "hnn_f2": hnn_f2,
}


def random_automorphism(rank, rng, moves=3):
    phi = FnAutomorphism.identity(rank)
    table = cut_moves(rank)
    for _ in range(moves):
        wa, _ = rng.choice(table)
        phi = wa.automorphism().compose(phi)
    return phi


def random_decomposition(rng, ranks=(3, 4, 5), scramble=2, families=None):
    n = rng.choice(ranks)
    family = rng.choice(sorted(families or FAMILIES))
    g = FAMILIES[family](n)
    if scramble:
        g = g.map_words(random_automorphism(n, rng, scramble))
    return family, g


def rng_from(seed):
    return random.Random(seed)
