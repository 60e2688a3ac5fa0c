"""Stallings core graphs of finitely generated subgroups of a free group.

A graph is stored as an adjacency map ``out[v][x] = w`` meaning an edge
labelled by the signed letter ``x`` from ``v`` to ``w``; the reverse edge
``out[w][-x] = v`` is always present.  Vertex 0 is the basepoint.

Folding uses union-find with a worklist.  When ``track=True`` every edge
additionally carries a label in the abstract free group on the input
generators, so that reading a word through the folded graph expresses it
as a product of those generators.
"""

from collections import deque

from .words import Word, inv_letters, mul_letters


class NotInSubgroup(ValueError):
    """Raised when a word is expressed in generators of a subgroup missing it."""


def _fold(n_vertices, edges, track):
    """Fold a labelled graph.

    ``edges`` is a list of ``(u, x, v, label)`` with ``label`` a letter tuple
    (or None when untracked).  Returns ``(out, labels)`` indexed by the
    surviving representative vertices.
    """
    parent = list(range(n_vertices))
    # value at v ~ value at parent[v] right-multiplied by delta[v]
    delta = [()] * n_vertices
    out = [dict() for _ in range(n_vertices)]
    merges = deque()

    def find(v):
        path = []
        while parent[v] != v:
            path.append(v)
            v = parent[v]
        root = v
        if track:
            acc = ()
            for u in reversed(path):
                acc = mul_letters(delta[u], acc)
                delta[u] = acc
                parent[u] = root
        else:
            for u in path:
                parent[u] = root
        return root

    def offset(v):
        find(v)
        return delta[v] if parent[v] != v else ()

    def attach(r, x, v, lab):
        # edge r -x-> v with label relative to (r, v); r is a root
        rv = find(v)
        if track:
            lab = mul_letters(lab, offset(v))
        slot = out[r].get(x)
        if slot is None:
            out[r][x] = (rv, lab)
            return
        w, lab2 = slot
        rw = find(w)
        if track:
            lab2 = mul_letters(lab2, offset(w))
        if rw != rv:
            # at rv value Z  ~  at rw value Z * lab^-1 * lab2
            d = mul_letters(inv_letters(lab), lab2) if track else None
            merges.append((rv, rw, d))
        out[r][x] = (rw, lab2)

    for u, x, v, lab in edges:
        attach(find(u), x, v, lab)
        attach(find(v), -x, u, inv_letters(lab) if track else None)

    while merges:
        a, b, d = merges.popleft()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if track:
            d = mul_letters(mul_letters(inv_letters(offset(a)), d), offset(b))
        if ra < rb:
            keep, drop = ra, rb
            d = inv_letters(d) if track else None
        else:
            keep, drop = rb, ra
        # value at drop Z ~ value at keep Z * d
        parent[drop] = keep
        if track:
            delta[drop] = d
        moved = out[drop]
        out[drop] = {}
        for x, (w, lab) in moved.items():
            if track:
                lab = mul_letters(inv_letters(d), lab)
            attach(keep, x, w, lab)

    roots = [v for v in range(n_vertices) if find(v) == v]
    final = {}
    for r in roots:
        final[r] = {}
        for x, (w, lab) in out[r].items():
            rw = find(w)
            if track:
                lab = mul_letters(lab, offset(w))
            final[r][x] = (rw, lab)
    return final


def _canonical(out, base):
    """Renumber vertices by BFS from ``base`` in letter order."""
    order = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for x in sorted(out[v], key=lambda y: (abs(y), -y)):
            w = out[v][x]
            if w not in order:
                order[w] = len(order)
                queue.append(w)
    return {order[v]: {x: order[w] for x, w in out[v].items()} for v in order}


def _prune(out, base):
    """Iteratively delete degree-one vertices other than the basepoint."""
    out = {v: dict(e) for v, e in out.items()}
    stack = [v for v in out if v != base and len(out[v]) <= 1]
    while stack:
        v = stack.pop()
        if v not in out or v == base or len(out[v]) > 1:
            continue
        for x, w in out[v].items():
            if w in out and w != v:
                del out[w][-x]
                if w != base and len(out[w]) <= 1:
                    stack.append(w)
        del out[v]
    return out


def _generator_edges(gens, start):
    """Edge list for a bouquet of subdivided loops spelling the generators."""
    edges = []
    nxt = start
    for i, g in enumerate(gens):
        letters = g.letters
        if not letters:
            continue
        prev = 0
        for j, x in enumerate(letters):
            last = j == len(letters) - 1
            target = 0 if last else nxt
            if not last:
                nxt += 1
            lab = (i + 1,) if last else ()
            edges.append((prev, x, target, lab))
            prev = target
    return edges, nxt


class CoreGraph:
    """Folded core graph of a based subgroup of ``F_rank``."""

    def __init__(self, out, rank):
        self.out = out
        self.rank = rank
        self.basepoint = 0

    @classmethod
    def from_generators(cls, gens, rank=None):
        gens = tuple(gens)
        if rank is None:
            if not gens:
                raise ValueError("rank required for an empty generating tuple")
            rank = gens[0].rank
        for g in gens:
            if g.rank != rank:
                raise ValueError("generators of mixed rank")
        edges, n = _generator_edges(gens, 1)
        folded = _fold(max(n, 1), edges, track=False)
        plain = {v: {x: w for x, (w, _) in e.items()} for v, e in folded.items()}
        return cls(_canonical(_prune(plain, 0), 0), rank)

    # queries ------------------------------------------------------------
    @property
    def vertices(self):
        return sorted(self.out)

    def edges(self):
        """Positive edges as ``(source, target, letter)``."""
        return sorted(
            (v, w, x) for v, e in self.out.items() for x, w in e.items() if x > 0
        )

    def num_edges(self):
        return sum(len(e) for e in self.out.values()) // 2

    def rank_of_subgroup(self):
        return self.num_edges() - len(self.out) + 1

    def read(self, word, start=0):
        """Follow ``word`` from ``start``; return the end vertex or None."""
        v = start
        for x in word.letters:
            v = self.out[v].get(x)
            if v is None:
                return None
        return v

    def contains(self, word):
        if word.rank != self.rank:
            raise ValueError("rank mismatch")
        return self.read(word) == self.basepoint

    def is_whole_group(self):
        return len(self.out) == 1 and len(self.out[0]) == 2 * self.rank

    def is_trivial(self):
        return self.num_edges() == 0

    def _tree(self):
        """BFS spanning tree: returns (path words to each vertex, tree edge set)."""
        paths = {0: ()}
        tree = set()
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for x in sorted(self.out[v], key=lambda y: (abs(y), -y)):
                w = self.out[v][x]
                if w not in paths:
                    paths[w] = paths[v] + (x,)
                    tree.add((v, x))
                    tree.add((w, -x))
                    queue.append(w)
        return paths, tree

    def free_basis(self):
        paths, tree = self._tree()
        basis = []
        for v, w, x in self.edges():
            if (v, x) in tree:
                continue
            letters = mul_letters(mul_letters(paths[v], (x,)), inv_letters(paths[w]))
            basis.append(Word(letters, self.rank, reduce=False))
        return tuple(basis)

    def coordinates(self, word):
        """Express a member ``word`` in the basis returned by ``free_basis``."""
        paths, tree = self._tree()
        index = {}
        for v, w, x in self.edges():
            if (v, x) not in tree:
                index[(v, x)] = len(index) + 1
        v = 0
        out = []
        for x in word.letters:
            w = self.out[v].get(x)
            if w is None:
                raise NotInSubgroup(f"{word} is not in the subgroup")
            if (v, x) in index:
                out.append(index[(v, x)])
            elif (w, -x) in index:
                out.append(-index[(w, -x)])
            v = w
        if v != 0:
            raise NotInSubgroup(f"{word} is not in the subgroup")
        return Word(out, max(len(index), 1))

    def intersect(self, other):
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        start = (0, 0)
        ids = {start: 0}
        out = {0: {}}
        queue = deque([start])
        while queue:
            p = queue.popleft()
            v1, v2 = p
            for x, w1 in self.out[v1].items():
                w2 = other.out[v2].get(x)
                if w2 is None:
                    continue
                q = (w1, w2)
                if q not in ids:
                    ids[q] = len(ids)
                    out[ids[q]] = {}
                    queue.append(q)
                out[ids[p]][x] = ids[q]
        return CoreGraph(_canonical(_prune(out, 0), 0), self.rank)

    def cyclic_core(self):
        """Return ``(core_out, vertex, path)``: the core with hair removed.

        ``path`` is the reduced word from the basepoint to ``vertex``, a
        vertex of the cyclic core.  The subgroup equals
        ``path * pi_1(core, vertex) * path^-1``.
        """
        out = {v: dict(e) for v, e in self.out.items()}
        v = 0
        path = ()
        while len(out[v]) == 1 and len(out) > 1:
            (x, w), = out[v].items()
            del out[w][-x]
            del out[v]
            path += (x,)
            v = w
        return out, v, Word(path, self.rank, reduce=False)

    # comparison ---------------------------------------------------------
    def key(self):
        return (self.rank, tuple(sorted((v, tuple(sorted(e.items()))) for v, e in self.out.items())))

    def __eq__(self, other):
        return isinstance(other, CoreGraph) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def contains_subgroup(self, other):
        return self.intersect(other) == other

    def to_dot(self, name="core"):
        lines = [f"digraph {name} {{", "  0 [shape=doublecircle];"]
        for v, w, x in self.edges():
            label = str(Word((x,), self.rank))
            lines.append(f'  {v} -> {w} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines)

    def __repr__(self):
        return f"CoreGraph(rank={self.rank}, vertices={len(self.out)}, edges={self.num_edges()})"


def subgroup(gens, rank=None):
    return CoreGraph.from_generators(gens, rank)


class Expresser:
    """Express members of ``<gens>`` as words in the generators themselves.

    The returned words live in the abstract free group of rank ``len(gens)``,
    letter ``+i`` standing for ``gens[i-1]``.
    """

    def __init__(self, gens, rank=None):
        self.gens = tuple(gens)
        if rank is None:
            rank = self.gens[0].rank
        self.rank = rank
        edges, n = _generator_edges(self.gens, 1)
        self.out = _fold(max(n, 1), edges, track=True)
        self.base = 0

    def express(self, word):
        v = self.base
        acc = ()
        for x in word.letters:
            slot = self.out[v].get(x)
            if slot is None:
                raise NotInSubgroup(f"{word} is not in the subgroup")
            v, lab = slot
            acc = mul_letters(acc, lab)
        if v != self.base:
            raise NotInSubgroup(f"{word} is not in the subgroup")
        return Word(acc, max(len(self.gens), 1), reduce=False)

    def evaluate(self, coords):
        out = Word((), self.rank)
        for x in coords.letters:
            g = self.gens[abs(x) - 1]
            out = out * (g if x > 0 else g.inverse())
        return out

    def evaluate_with(self, coords, images):
        """Substitute ``images[i-1]`` for abstract letter ``i`` of ``coords``."""
        out = Word((), images[0].rank if images else self.rank)
        for x in coords.letters:
            w = images[abs(x) - 1]
            out = out * (w if x > 0 else w.inverse())
        return out
