"""Tabulate certified disjoint-ball witnesses around 0/1 in the Farey graph."""

from forkcalc.farey import Slope, act, disjoint_ball_witnesses, distance


def main(max_radius=3, max_count=5):
    x = Slope(0, 1)
    for R in range(max_radius + 1):
        for n in range(2, max_count + 1):
            maps = disjoint_ball_witnesses(x, R, n)
            imgs = [act(m, x) for m in maps]
            gap = min(distance(imgs[i], imgs[j]) for i in range(n) for j in range(i + 1, n))
            print(f"R={R} n={n}: min pairwise distance {gap} > {2 * R}; "
                  f"first nontrivial matrix {maps[1].rows()}")


if __name__ == "__main__":
    main()
