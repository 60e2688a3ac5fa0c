"""Regenerate the JSON fixtures in data/ from the built-in catalog."""

import json
from pathlib import Path

from forkcalc import catalog

DATA = Path(__file__).resolve().parent.parent / "data"

FIXTURES = {
    "f2.json": catalog.f2_commutator,
    "f2_cylinders.json": catalog.f2_cylinders,
    "f4.json": catalog.f4_two_tori,
    "chain.json": catalog.f4_chain,
    "amalgam_f3.json": catalog.f3_amalgam,
    "hnn_f2.json": catalog.hnn_f2,
}

# elementary automorphisms of chain.json, applied left to right as f1 o f2 o ...
TWISTS = [
    {"kind": "dehn_twist", "edge": "e2", "twister": "c"},
    {"kind": "dehn_twist", "edge": "e1", "twister": "b"},
    {"kind": "vertex_aut", "vertex": "v1", "images": ["ab", "b"]},
    {"kind": "dehn_twist", "edge": "e1", "twister": "B", "fixed": "to"},
    {"kind": "inner", "conjugator": "a"},
]


def main():
    DATA.mkdir(exist_ok=True)
    for name, make in FIXTURES.items():
        (DATA / name).write_text(make().dumps() + "\n")
    (DATA / "twists.json").write_text(json.dumps({"automorphisms": TWISTS}, indent=2) + "\n")
    print("wrote", ", ".join(sorted(FIXTURES) + ["twists.json"]))


if __name__ == "__main__":
    main()
