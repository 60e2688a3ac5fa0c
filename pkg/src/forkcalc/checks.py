"""Randomized law checks for elementary automorphisms.

Each check draws a configuration from ``catalog.random_decomposition``,
runs the library routine and verifies its claim with an independent
recomputation of the realizations on the generators of ``F_n``.
"""

from .catalog import random_decomposition, rng_from
from .elementary import (
    commute_witness,
    compose,
    cylinder_relation_check,
    dehn_twist,
    inner,
    normal_form,
    twist_toward,
    vertex_aut,
)
from .graphofgroups import tree_of_cylinders
from .whitehead import FnAutomorphism
from .words import Word


def _random_power(root, rng, top=3):
    k = rng.choice([k for k in range(-top, top + 1) if k])
    return root ** k


def random_twist(g, rng):
    eid = rng.choice(sorted(g.edges))
    root, _ = g.edges[eid].image_from.max_root()
    z = _random_power(root, rng)
    if rng.random() < 0.5:
        return dehn_twist(g, eid, z, rng.choice(["from", "to"]))
    end = rng.choice(["from", "to"])
    if end == "to":
        z = _random_power(g.edges[eid].image_to.max_root()[0], rng)
    return twist_toward(g, eid, end, z)


def random_vertex_aut(g, rng, tries=6):
    vid = rng.choice(sorted(g.vertices))
    gens = g.vertices[vid].generators
    for _ in range(tries):
        images = list(gens)
        if len(gens) > 1 and rng.random() < 0.7:
            i, j = rng.sample(range(len(gens)), 2)
            images[i] = gens[i] * gens[j] ** rng.choice([1, -1])
        else:
            h = rng.choice(gens) ** rng.choice([1, -1])
            images = [w.conjugate_by(h) for w in gens]
        try:
            return vertex_aut(g, vid, images)
        except ValueError:
            continue
    h = gens[0]
    return vertex_aut(g, vid, [w.conjugate_by(h) for w in gens])


def random_elementary(g, rng, allow_inner=False):
    r = rng.random()
    if allow_inner and r < 0.15:
        return inner(g, Word.generator(rng.randint(1, g.rank), g.rank) ** rng.choice([1, -1]))
    if r < 0.55:
        return random_twist(g, rng)
    return random_vertex_aut(g, rng)


def _cylinders_with_z(rng, families=None):
    while True:
        _, g = random_decomposition(rng, families=families)
        t = tree_of_cylinders(g)
        zs = sorted(v for v, d in t.vertices.items() if d.kind == "ztype")
        if zs:
            return t, zs


def check_cylinder_relation(rng, families=None):
    """Twists toward a Z-vertex over all its ends compose to Conj(z^(r-1))."""
    t, zs = _cylinders_with_z(rng, families)
    zv = rng.choice(zs)
    root, _ = t.vertices[zv].generators[0].max_root()
    z = _random_power(root, rng)
    return cylinder_relation_check(t, zv, z), {"vertex": zv, "z": str(z), "rank": t.rank}


def check_commutation(rng):
    _, g = random_decomposition(rng)
    while True:
        a, b = random_elementary(g, rng), random_elementary(g, rng)
        if a.support != b.support:
            break
    w = commute_witness(a, b)
    lhs = FnAutomorphism([a.realization(x) for x in b.realization.images], g.rank)
    rhs = FnAutomorphism.inner(w).compose(b.realization).compose(a.realization)
    return lhs == rhs, {"rho": a.to_json(), "sigma": b.to_json(), "g": str(w)}


def check_normal_form(rng, max_len=6):
    _, g = random_decomposition(rng)
    auts = [random_elementary(g, rng, allow_inner=True) for _ in range(rng.randint(1, max_len))]
    z, factors = normal_form(auts)
    keys = [f.support_key() for f in factors]
    ordered = all(keys[i] < keys[i + 1] for i in range(len(keys) - 1))
    total = FnAutomorphism.inner(z).compose(compose(factors, g.rank))
    same = total == compose(auts, g.rank)
    return ordered and same, {"length": len(auts), "factors": len(factors)}


CHECKS = {
    "cylinder_relation": check_cylinder_relation,
    "commutation": check_commutation,
    "normal_form": check_normal_form,
}


def run_selfcheck(seed=0, trials=50, names=None):
    """Run every check ``trials`` times; returns ``{name: (passed, failures)}``."""
    rng = rng_from(seed)
    report = {}
    for name in names or CHECKS:
        fails = []
        for k in range(trials):
            ok, info = CHECKS[name](rng)
            if not ok:
                fails.append(info)
        report[name] = (trials - len(fails), fails)
    return report
