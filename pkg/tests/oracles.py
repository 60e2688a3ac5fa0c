"""Brute-force reference implementations, written without the library.

``primitive_tuples(rank, bound)`` enumerates every tuple of reduced words of
total length at most ``bound`` that extends to a free basis, by closing the
sub-bases ``(e_i, ...)`` under Whitehead automorphisms while never leaving
the length bound.  Peak reduction guarantees that every such tuple is
reached through tuples no longer than itself.
"""

from itertools import combinations, permutations, product


def reduce_word(xs):
    out = []
    for x in xs:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def whitehead_images(rank):
    letters = [s * i for i in range(1, rank + 1) for s in (1, -1)]
    images = []
    # permutations with sign changes
    for perm in permutations(range(1, rank + 1)):
        for signs in product((1, -1), repeat=rank):
            images.append(tuple((signs[i] * perm[i],) for i in range(rank)))
    # x -> a^(-[x^-1 in Z]) x a^([x in Z]) for a multiplier a and a set Z
    for a in letters:
        others = [x for x in letters if abs(x) != abs(a)]
        for k in range(1, len(others) + 1):
            for Z in combinations(others, k):
                img = []
                for i in range(1, rank + 1):
                    if i == abs(a):
                        img.append((i,))
                        continue
                    w = ()
                    if -i in Z:
                        w += (-a,)
                    w += (i,)
                    if i in Z:
                        w += (a,)
                    img.append(w)
                images.append(tuple(img))
    return images


def apply(images, word):
    out = []
    for x in word:
        img = images[abs(x) - 1]
        if x < 0:
            img = tuple(-y for y in reversed(img))
        out.extend(img)
    return reduce_word(out)


def primitive_tuples(rank, bound):
    moves = whitehead_images(rank)
    starts = set()
    for k in range(1, rank + 1):
        for perm in permutations(range(1, rank + 1), k):
            for signs in product((1, -1), repeat=k):
                starts.add(tuple((s * p,) for s, p in zip(signs, perm)))
    seen = {t for t in starts if sum(map(len, t)) <= bound}
    stack = list(seen)
    while stack:
        t = stack.pop()
        for m in moves:
            u = tuple(apply(m, w) for w in t)
            if sum(map(len, u)) <= bound and u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


def reduced_words(rank, length):
    letters = [s * i for i in range(1, rank + 1) for s in (1, -1)]
    words = [()]
    for _ in range(length):
        words = [w + (x,) for w in words for x in letters if not w or w[-1] != -x]
    return words


def tuples_up_to(rank, bound, max_size=3):
    by_len = {k: reduced_words(rank, k) for k in range(1, bound + 1)}
    for size in range(1, max_size + 1):
        for lens in product(range(1, bound + 1), repeat=size):
            if sum(lens) <= bound:
                yield from product(*(by_len[k] for k in lens))
