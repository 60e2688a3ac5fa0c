"""Print the independence verdicts for the two worked free-group examples.

* F_2 relative to the commutator [a, b]: any two tuples outside <[a, b]> fork.
* F_4 relative to <[a, b], [c, d]>: tuples in <a, b> and in <c, d> are independent.
"""

from itertools import product

from forkcalc import catalog
from forkcalc.forking import independent_over_jsj
from forkcalc.words import Word


def run(g, A, left, right):
    n = g.rank
    A = [Word.parse(a, n) for a in A]
    for b, c in product(left, right):
        v = independent_over_jsj(g, A, [Word.parse(b, n)], [Word.parse(c, n)])
        comps = [c_["non_z_vertices"] for c_ in v.evidence["intersection_components"]]
        print(f"  b={b:<4} c={c:<4} -> {v.verdict:<11} non-Z vertices per component {comps}")


def main():
    print("F_2 over [a,b]:")
    gammas = ["a", "b", "ab", "ba", "abb"]
    run(catalog.f2_commutator(), ["abAB"], gammas, gammas)
    print("F_4 over <[a,b], [c,d]>:")
    run(catalog.f4_two_tori(), ["abAB", "cdCD"], ["a", "ab", "abb"], ["c", "cd", "cdd"])


if __name__ == "__main__":
    main()
