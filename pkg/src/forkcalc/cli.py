"""``forkcalc`` command line interface.

Exit codes for ``independent``: 0 independent, 1 forks, 2 unknown, 3 error.
Other commands exit 0 on success and 3 on error.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import elementary, farey, forking
from .graphofgroups import (
    MarkedGraphOfGroups,
    MarkingError,
    SchemaError,
    collapse,
    express,
    minimal_subgraph,
    pointed_jsj,
    tree_of_cylinders,
    validate,
)
from .stallings import CoreGraph
from .whitehead import PreconditionError, SearchBudgetExceeded, is_part_of_basis, minimize
from .words import Word, parse_tuple

EXIT = {"independent": 0, "forks": 1, "unknown": 2}
ERROR = 3
DEFAULT_DEPTH = 6


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    rank: int = None
    jsj: str = None
    depth: int = DEFAULT_DEPTH
    format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.depth < 1:
            raise UsageError("depth must be at least 1")
        if self.format not in ("json", "text"):
            raise UsageError("format must be json or text")


def resolve_depth(flag, environ=None):
    """Depth precedence: explicit flag, then FORKCALC_DEPTH, then the default."""
    if flag is not None:
        return flag
    env = (environ if environ is not None else os.environ).get("FORKCALC_DEPTH")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"FORKCALC_DEPTH must be an integer, got {env!r}") from exc
    return DEFAULT_DEPTH


def _emit(obj, fmt="json"):
    if fmt == "json":
        print(json.dumps(obj, indent=2))
    else:
        for k, v in obj.items():
            print(f"{k}: {v if not isinstance(v, (dict, list)) else json.dumps(v)}")


def _load(args):
    path = getattr(args, "file", None) or getattr(args, "jsj", None)
    if not path:
        raise UsageError("a decomposition file is required (positional or --jsj)")
    return MarkedGraphOfGroups.load(path)


# ---------------------------------------------------------------------------


def cmd_independent(args):
    cfg = RunConfig(rank=args.rank, jsj=args.jsj, depth=resolve_depth(args.depth),
                    format=args.format)
    if cfg.jsj:
        g = MarkedGraphOfGroups.load(cfg.jsj)
        if cfg.rank is not None and cfg.rank != g.rank:
            raise UsageError(f"--rank {cfg.rank} disagrees with the decomposition rank {g.rank}")
        n = g.rank
    else:
        if cfg.rank is None:
            raise UsageError("--rank is required without --jsj")
        n = cfg.rank
    if n < 2:
        raise UsageError("rank must be at least 2")
    A, b, c = (parse_tuple(x, n) for x in (args.A, args.b, args.c))
    if cfg.jsj:
        verdict = forking.independent_over_jsj(g, A, b, c)
    elif forking.is_free_factor(A, n):
        verdict = forking.independent_over_free_factor(A, b, c, cfg.depth, n)
    else:
        raise PreconditionError("<A> is not a free factor; supply a pointed JSJ with --jsj")
    _emit(verdict.to_json(), cfg.format)
    return EXIT[verdict.verdict]


def cmd_whitehead(args):
    words = parse_tuple(args.tuple, args.rank)
    if not words:
        raise UsageError("--tuple must be nonempty")
    reduced, phi = minimize(words)
    flag, witness = is_part_of_basis(words, args.rank)
    _emit({
        "minimized": [str(w) for w in reduced],
        "min_length": sum(len(w) for w in reduced),
        "minimizer": phi.to_json(),
        "part_of_basis": flag,
        "witness": witness.to_json() if witness is not None else None,
    }, args.format)
    return 0


def cmd_core(args):
    gens = parse_tuple(args.gens, args.rank)
    core = CoreGraph.from_generators(gens, args.rank)
    if args.emit_dot:
        print(core.to_dot())
        return 0
    _emit({
        "vertices": len(core.vertices),
        "edges": [[v, w, str(Word((x,), args.rank))] for v, w, x in core.edges()],
        "rank": core.rank_of_subgroup(),
        "basis": [str(w) for w in core.free_basis()],
    }, args.format)
    return 0


def cmd_gog(args):
    g = _load(args)
    n = g.rank
    action = args.action
    if action == "validate":
        report = validate(g)
        _emit(report.to_json())
        ok = report.jsj_ok if args.strict else report.ok
        return 0 if ok else 1
    if action == "express":
        nf = express(g, Word.parse(args.word, n), args.base)
        _emit(nf.to_json())
        return 0
    if action == "minimal-subgraph":
        anchor = args.anchor
        sub = minimal_subgraph(g, parse_tuple(args.H, n), anchor)
        _emit(sub.to_json())
        return 0
    if action == "cylinders":
        _emit(tree_of_cylinders(g).to_json())
        return 0
    if action == "pointed":
        new, bp = pointed_jsj(g, parse_tuple(args.A, n))
        _emit(new.to_json())
        return 0
    if action == "twist":
        z = Word.parse(args.z, n)
        if args.toward:
            e = g.edges[args.edge]
            end = "to" if args.toward == e.target else "from"
            aut = elementary.twist_toward(g, args.edge, end, z)
        else:
            aut = elementary.dehn_twist(g, args.edge, z, args.fixed)
        _emit({"automorphism": aut.to_json(), "realization": aut.realization.to_json()})
        return 0
    if action == "normal-form":
        if not args.aut:
            raise UsageError("normal-form needs --aut FILE")
        with open(args.aut) as fh:
            data = json.load(fh)
        items = data["automorphisms"] if isinstance(data, dict) else data
        auts = [elementary.from_json(g, d) for d in items]
        z, factors = elementary.normal_form(auts)
        names = [f"Conj({z})"] + [_factor_name(f) for f in factors]
        _emit({
            "conjugator": str(z),
            "factors": [f.to_json() for f in factors],
            "serialization": " o ".join(names),
            "realization": elementary.compose(auts, n).to_json(),
        })
        return 0
    if action == "collapse":
        edges = [e for e in args.edges.split(",") if e]
        new, cmap = collapse(g, edges)
        _emit({"graph": new.to_json(), "map": cmap.to_json()})
        return 0
    raise UsageError(f"unknown gog action {action}")


def _factor_name(f):
    kind, ident = f.support
    if f.kind == "dehn_twist":
        return f"twist[{ident}]({f.data['twister']})"
    return f"vertex[{ident}]({','.join(str(w) for w in f.data['images'])})"


def cmd_farey(args):
    if args.action == "dist":
        s, t = farey.Slope.parse(args.args[0]), farey.Slope.parse(args.args[1])
        _emit({"s": str(s), "t": str(t), "distance": farey.distance(s, t)}, args.format)
    elif args.action == "witnesses":
        x = farey.Slope.parse(args.args[0])
        R, k = int(args.args[1]), int(args.args[2])
        maps = farey.disjoint_ball_witnesses(x, R, k)
        images = [farey.act(m, x) for m in maps]
        _emit({
            "matrices": [m.rows() for m in maps],
            "images": [str(y) for y in images],
            "min_pairwise_distance": min(
                (farey.distance(images[i], images[j])
                 for i in range(k) for j in range(i + 1, k)), default=None),
            "certified": farey.certify_witnesses(x, R, maps),
        }, args.format)
    elif args.action == "word":
        s = farey.Slope.parse(args.args[0])
        w = farey.slope_to_word(s)
        _emit({"slope": str(s), "word": str(w), "primitive": is_part_of_basis((w,), 2)[0]},
              args.format)
    return 0


def cmd_selfcheck(args):
    from .checks import run_selfcheck

    report = run_selfcheck(args.seed, args.trials)
    out = {name: {"passed": p, "failures": fails} for name, (p, fails) in report.items()}
    _emit(out)
    return 0 if all(not fails for _, fails in report.values()) else 1


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="forkcalc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("independent", help="decide forking independence of b and c over A")
    q.add_argument("--rank", type=int)
    q.add_argument("--A", default="")
    q.add_argument("--b", required=True)
    q.add_argument("--c", required=True)
    q.add_argument("--jsj")
    q.add_argument("--depth", type=int)
    q.add_argument("--format", default="json", choices=["json", "text"])
    q.set_defaults(func=cmd_independent)

    q = sub.add_parser("whitehead", help="minimize a tuple and test whether it extends to a basis")
    q.add_argument("--rank", type=int, required=True)
    q.add_argument("--tuple", required=True)
    q.add_argument("--format", default="json", choices=["json", "text"])
    q.set_defaults(func=cmd_whitehead)

    q = sub.add_parser("core", help="Stallings core graph of a subgroup")
    q.add_argument("--rank", type=int, required=True)
    q.add_argument("--gens", required=True)
    q.add_argument("--emit-dot", action="store_true")
    q.add_argument("--format", default="json", choices=["json", "text"])
    q.set_defaults(func=cmd_core)

    q = sub.add_parser("gog", help="graph of groups tools")
    q.add_argument("action", choices=["validate", "express", "minimal-subgraph", "cylinders",
                                      "pointed", "twist", "normal-form", "collapse"])
    q.add_argument("file", nargs="?")
    q.add_argument("--jsj")
    q.add_argument("--strict", action="store_true", help="validate: require the JSJ checks too")
    q.add_argument("--word", default="1")
    q.add_argument("--base")
    q.add_argument("--H", default="")
    q.add_argument("--anchor")
    q.add_argument("--A", default="")
    q.add_argument("--edge")
    q.add_argument("--z", default="1")
    q.add_argument("--fixed", default="from", choices=["from", "to"])
    q.add_argument("--toward")
    q.add_argument("--aut")
    q.add_argument("--edges", default="")
    q.set_defaults(func=cmd_gog)

    q = sub.add_parser("farey", help="Farey graph of the once-punctured torus")
    q.add_argument("action", choices=["dist", "witnesses", "word"])
    q.add_argument("args", nargs="+")
    q.add_argument("--format", default="json", choices=["json", "text"])
    q.set_defaults(func=cmd_farey)

    q = sub.add_parser("selfcheck", help="randomized checks of the automorphism laws")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--trials", type=int, default=50)
    q.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, PreconditionError, SchemaError, MarkingError,
            SearchBudgetExceeded, ValueError, KeyError, OSError) as exc:
        print(f"forkcalc: error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
