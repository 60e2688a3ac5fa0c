"""The Farey graph as the curve complex of the once-punctured torus.

Slopes ``p/q`` are vertices; two slopes are adjacent when
``|p q' - q p'| = 1``.  Integer matrices of determinant ``+-1`` act
projectively.  Distances are exact: after moving the source to ``1/0``
every geodesic to the target stays inside the ladder of Farey triangles
crossed by the hyperbolic geodesic, whose vertices are the Stern-Brocot
ancestors of the target.
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .words import Word


@dataclass(frozen=True, order=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if (p, q) == (0, 0):
            raise ValueError("0/0 is not a slope")
        d = gcd(p, q)
        p, q = p // d, q // d
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def parse(cls, text):
        s = str(text).strip()
        if s in ("inf", "oo", "infinity"):
            return cls(1, 0)
        if "/" in s:
            p, q = s.split("/")
            return cls(int(p), int(q))
        return cls(int(s), 1)

    def __str__(self):
        return f"{self.p}/{self.q}"

    def is_infinity(self):
        return self.q == 0


@dataclass(frozen=True)
class MappingClass:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if abs(self.det()) != 1:
            raise ValueError("mapping classes need determinant +-1")

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other):
        return MappingClass(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        k = self.det()
        return MappingClass(self.d * k, -self.b * k, -self.c * k, self.a * k)

    def power(self, k):
        base = self if k >= 0 else self.inverse()
        out = MappingClass.identity()
        for _ in range(abs(k)):
            out = out @ base
        return out

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]


HYPERBOLIC = MappingClass(2, 1, 1, 1)


def adjacent(s, t):
    return abs(s.p * t.q - s.q * t.p) == 1


def act(m, s):
    return Slope(m.a * s.p + m.b * s.q, m.c * s.p + m.d * s.q)


def _to_infinity(s):
    """A matrix sending ``s`` to ``1/0``."""
    p, q = s.p, s.q
    # find x, y with p*y - q*x = 1
    x, y = _bezout(p, q)
    return MappingClass(p, x, q, y).inverse()


def _bezout(p, q):
    """Return (x, y) with p*y - q*x == 1."""
    old_r, r = p, q
    old_s, s_ = 1, 0
    old_t, t = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s_ = s_, old_s - k * s_
        old_t, t = t, old_t - k * t
    # old_s * p + old_t * q == old_r == +-1
    y, x = old_s * old_r, -old_t * old_r
    assert p * y - q * x == 1
    return x, y


def ladder(t):
    """Vertices of the Farey ladder from ``1/0`` to ``t``."""
    inf = Slope(1, 0)
    if t.is_infinity():
        return [inf]
    x = Fraction(t.p, t.q)
    n = x.numerator // x.denominator
    left, right = (n, 1), (n + 1, 1)
    verts = {inf, Slope(*left), Slope(*right)}
    while True:
        mp, mq = left[0] + right[0], left[1] + right[1]
        if Fraction(left[0], left[1]) == x or Fraction(right[0], right[1]) == x:
            break
        m = Fraction(mp, mq)
        verts.add(Slope(mp, mq))
        if m == x:
            break
        if x < m:
            right = (mp, mq)
        else:
            left = (mp, mq)
    return sorted(verts)


def _bfs(vertices, source, target):
    verts = list(vertices)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        if v == target:
            return dist[v]
        for w in verts:
            if w not in dist and adjacent(v, w):
                dist[w] = dist[v] + 1
                queue.append(w)
    raise AssertionError("ladder is disconnected")


def distance(s, t):
    if s == t:
        return 0
    if adjacent(s, t):
        return 1
    m = _to_infinity(s)
    tt = act(m, t)
    return _bfs(ladder(tt), Slope(1, 0), tt)


def box(bound):
    """All slopes with ``|p|, |q| <= bound``."""
    return sorted({Slope(p, q) for p in range(-bound, bound + 1) for q in range(0, bound + 1)
                   if (p, q) != (0, 0) and gcd(p, q) == 1})


@lru_cache(maxsize=8)
def _box_graph(bound):
    verts = box(bound)
    return {v: [w for w in verts if adjacent(v, w)] for v in verts}


def naive_distances(source, bound):
    """BFS distances from ``source`` inside ``box(bound)``.

    Restricting the vertex set can only lengthen paths, so these are upper
    bounds that become exact once the box contains a geodesic.
    """
    nbrs = _box_graph(bound)
    if source not in nbrs:
        nbrs = dict(nbrs)
        nbrs[source] = [w for w in nbrs if adjacent(source, w)]
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in nbrs[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def naive_distance(s, t, bound):
    return naive_distances(s, max(bound, abs(t.p), t.q))[t]


def disjoint_ball_witnesses(x, R, n, matrix=HYPERBOLIC):
    """Powers ``h^(k*step)`` whose translates of ``B_R(x)`` are pairwise disjoint.

    The step doubles until every pair of image points is more than ``2R``
    apart, which certifies disjointness of the balls.
    """
    if R < 0 or n < 1:
        raise ValueError("need R >= 0 and n >= 1")
    step = 1
    while True:
        maps = [matrix.power(k * step) for k in range(n)]
        images = [act(m, x) for m in maps]
        if all(distance(images[i], images[j]) > 2 * R
               for i in range(n) for j in range(i + 1, n)):
            return maps
        step *= 2


def certify_witnesses(x, R, maps):
    images = [act(m, x) for m in maps]
    return all(distance(images[i], images[j]) > 2 * R
               for i in range(len(maps)) for j in range(i + 1, len(maps)))


def slope_to_word(s):
    """Christoffel word in ``F_2`` for a slope: ``0/1 -> a``, ``1/0 -> b``."""
    if s.is_infinity():
        return Word((2,), 2)
    p, q = abs(s.p), s.q
    target = Fraction(p, q)
    left, wl = (0, 1), (1,)
    right, wr = (1, 0), (2,)
    if p == 0:
        word = wl
    else:
        while True:
            mp, mq = left[0] + right[0], left[1] + right[1]
            wm = wl + wr
            m = Fraction(mp, mq)
            if m == target:
                word = wm
                break
            if target < m:
                right, wr = (mp, mq), wm
            else:
                left, wl = (mp, mq), wm
    if s.p < 0:
        word = tuple(-x if abs(x) == 2 else x for x in word)
    return Word(word, 2)
