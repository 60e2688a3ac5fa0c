"""Reduced words in a free group of finite rank.

Letters are nonzero signed integers: ``+i`` stands for the generator
``e_i`` and ``-i`` for its inverse.  For ranks up to 26 words print with
lowercase letters for generators and uppercase letters for inverses
(``a = +1``, ``A = -1``); larger ranks print as a bracketed integer list.
The identity prints as ``"1"``.
"""

import json
import re
import string

_LOWER = string.ascii_lowercase
_UPPER = string.ascii_uppercase


class RankError(ValueError):
    """Raised when words from free groups of different ranks are mixed."""


# ---------------------------------------------------------------------------
# letter-level helpers (plain tuples of ints; used in hot loops)


def reduce_letters(letters):
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def mul_letters(u, v):
    """Concatenate two reduced letter tuples, cancelling at the junction."""
    i = 0
    m = min(len(u), len(v))
    while i < m and u[len(u) - 1 - i] == -v[i]:
        i += 1
    return u[: len(u) - i] + v[i:]


def inv_letters(u):
    return tuple(-x for x in reversed(u))


def cyclic_core_letters(u):
    """Return (core, k) where the first and last k letters were peeled."""
    i, j = 0, len(u) - 1
    while i < j and u[i] == -u[j]:
        i += 1
        j -= 1
    return u[i : j + 1], i


def least_rotation(u):
    """Lexicographically least rotation of a tuple (Booth's algorithm)."""
    n = len(u)
    if n == 0:
        return u
    s = u + u
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        i = f[j - k - 1]
        while i != -1 and s[j] != s[k + i + 1]:
            if s[j] < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if i == -1 and s[j] != s[k + i + 1]:
            if s[j] < s[k + i + 1]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return s[k : k + n]


def apply_images(letters, images):
    """Substitute ``images[i-1]`` for each letter ``+i`` and reduce."""
    out = []
    for x in letters:
        img = images[x - 1] if x > 0 else inv_letters(images[-x - 1])
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


# ---------------------------------------------------------------------------


class Word:
    """An immutable reduced word in the free group of the given rank."""

    __slots__ = ("letters", "rank", "_hash")

    def __init__(self, letters=(), rank=2, reduce=True):
        letters = tuple(int(x) for x in letters)
        if rank < 1:
            raise ValueError("rank must be positive")
        for x in letters:
            if x == 0 or abs(x) > rank:
                raise ValueError(f"letter {x} outside rank {rank}")
        if reduce:
            letters = reduce_letters(letters)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "_hash", hash((letters, rank)))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    # construction -----------------------------------------------------
    @classmethod
    def identity(cls, rank):
        return cls((), rank)

    @classmethod
    def generator(cls, i, rank):
        return cls((i,), rank)

    @classmethod
    def parse(cls, text, rank):
        """Parse compact letters, ``"1"``, a JSON int array or ``"1 -2 3"``."""
        if isinstance(text, Word):
            if text.rank != rank:
                raise RankError(f"word of rank {text.rank} used in rank {rank}")
            return text
        if isinstance(text, (list, tuple)):
            return cls(text, rank)
        s = str(text).strip()
        if s in ("", "1"):
            return cls((), rank)
        if s.startswith("["):
            try:
                data = json.loads(s)
            except json.JSONDecodeError as exc:
                raise ValueError(f"malformed word {text!r}") from exc
            return cls(data, rank)
        if re.fullmatch(r"-?\d+(\s+-?\d+)*", s):
            return cls([int(t) for t in s.split()], rank)
        if not re.fullmatch(r"[A-Za-z]+", s):
            raise ValueError(f"malformed word {text!r}")
        letters = []
        for ch in s:
            if ch in _LOWER:
                letters.append(_LOWER.index(ch) + 1)
            else:
                letters.append(-(_UPPER.index(ch) + 1))
        return cls(letters, rank)

    # algebra ----------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Word):
            raise TypeError(f"expected Word, got {type(other).__name__}")
        if other.rank != self.rank:
            raise RankError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __mul__(self, other):
        self._check(other)
        return Word(mul_letters(self.letters, other.letters), self.rank, reduce=False)

    def inverse(self):
        return Word(inv_letters(self.letters), self.rank, reduce=False)

    def __pow__(self, k):
        base = self if k >= 0 else self.inverse()
        out = Word((), self.rank)
        for _ in range(abs(k)):
            out = out * base
        return out

    def conjugate_by(self, g):
        """Return ``g * self * g^-1``."""
        return g * self * g.inverse()

    def cyclic_reduce(self):
        """Return ``(core, conjugator)`` with ``self = conj * core * conj^-1``."""
        core, k = cyclic_core_letters(self.letters)
        return (
            Word(core, self.rank, reduce=False),
            Word(self.letters[:k], self.rank, reduce=False),
        )

    def canonical_conjugate(self):
        """Least rotation of the cyclic core: a conjugacy class invariant."""
        core, _ = cyclic_core_letters(self.letters)
        return Word(least_rotation(core), self.rank, reduce=False)

    def is_conjugate(self, other):
        self._check(other)
        return self.canonical_conjugate() == other.canonical_conjugate()

    def max_root(self):
        """Return ``(root, k)`` with ``self == root**k`` and k maximal."""
        if not self.letters:
            raise ValueError("the identity has no root")
        core, conj = self.cyclic_reduce()
        c = core.letters
        n = len(c)
        for d in range(1, n + 1):
            if n % d == 0 and c[:d] * (n // d) == c:
                root = conj * Word(c[:d], self.rank, reduce=False) * conj.inverse()
                return root, n // d
        raise AssertionError("unreachable")

    def cyclic_length(self):
        return len(cyclic_core_letters(self.letters)[0])

    def is_identity(self):
        return not self.letters

    # protocol ---------------------------------------------------------
    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __eq__(self, other):
        return (
            isinstance(other, Word)
            and self.letters == other.letters
            and self.rank == other.rank
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return shortlex_key(self) < shortlex_key(other)

    def __str__(self):
        if not self.letters:
            return "1"
        if self.rank <= 26:
            return "".join(
                _LOWER[x - 1] if x > 0 else _UPPER[-x - 1] for x in self.letters
            )
        return "[" + ",".join(str(x) for x in self.letters) + "]"

    def __repr__(self):
        return f"Word({str(self)!r}, rank={self.rank})"


def shortlex_key(w):
    """Order words by length, then letters in the order a, A, b, B, ..."""
    return (len(w.letters), tuple(2 * abs(x) - (x > 0) for x in w.letters))


def parse_tuple(text, rank):
    """Parse a comma separated list of words; the empty string is ``()``."""
    if isinstance(text, (list, tuple)):
        return tuple(Word.parse(t, rank) for t in text)
    s = str(text).strip()
    if not s:
        return ()
    if s.startswith("[") and s.endswith("]") and s[1:2] in ('"', "["):
        return tuple(Word.parse(t, rank) for t in json.loads(s))
    return tuple(Word.parse(t, rank) for t in re.split(r",(?![^\[]*\])", s))


def conjugator(u, v):
    """Return some ``g`` with ``g u g^-1 == v``, or None if not conjugate."""
    u._check(v)
    cu, pu = u.cyclic_reduce()
    cv, pv = v.cyclic_reduce()
    a, b = cu.letters, cv.letters
    if len(a) != len(b):
        return None
    n = len(a)
    if n == 0:
        return Word((), u.rank)
    for k in range(n):
        if a[k:] + a[:k] == b:
            # b = a[:k]^-1 a a[:k]
            x = Word(a[:k], u.rank, reduce=False)
            return pv * x.inverse() * pu.inverse()
    return None


def ball(rank, radius):
    """All reduced words of length at most ``radius`` in shortlex order."""
    letters = []
    for i in range(1, rank + 1):
        letters += [i, -i]
    layer = [()]
    out = [()]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        out += nxt
        layer = nxt
    words = [Word(w, rank, reduce=False) for w in out]
    words.sort(key=shortlex_key)
    return words


def power_exponent(g, c):
    """Return ``k`` with ``g == c**k`` (c nontrivial), else None."""
    if g.is_identity():
        return 0
    rg, kg = g.max_root()
    rc, kc = c.max_root()
    if rg == rc:
        sign = 1
    elif rg == rc.inverse():
        sign = -1
    else:
        return None
    if kg % kc:
        return None
    return sign * kg // kc
