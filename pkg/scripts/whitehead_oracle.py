"""Compare is_part_of_basis with a brute-force Whitehead orbit in rank 2.

Usage: python scripts/whitehead_oracle.py [max_total_length]
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from oracles import primitive_tuples, tuples_up_to  # noqa: E402
from forkcalc.whitehead import is_part_of_basis  # noqa: E402
from forkcalc.words import Word  # noqa: E402


def main(bound=6):
    t0 = time.perf_counter()
    truth = primitive_tuples(2, bound)
    total, bad = 0, []
    for t in tuples_up_to(2, bound):
        total += 1
        if is_part_of_basis([Word(w, 2) for w in t], 2)[0] != (t in truth):
            bad.append(t)
    print(f"{total} tuples, {len(truth)} primitive, {len(bad)} disagreements, "
          f"{time.perf_counter() - t0:.1f}s")
    for t in bad[:10]:
        print("  disagreement:", [str(Word(w, 2)) for w in t])
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 6))
