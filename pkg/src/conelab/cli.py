"""``conelab`` command line: gen, apply, maximal, verify, sweep, report.

Exit status is 0 on success, 1 when inputs fail validation (including a
missing file or a failing invariant) and 2 on usage errors.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import io
from . import spectral_grid as grid
from .directions import (
    equispaced,
    lacunary_polygon,
    make_lacunary_order1,
    make_lacunary_orderK,
)
from .lab import (
    TrialConfig,
    invariant_suite,
    rademacher_check,
    rows_to_csv,
    sweep_directions,
)
from .maximal import (
    MaximalSpec,
    Stage,
    lemma1_spec,
    lemma2_spec,
    remark1_spec,
    run_spec,
    theorem2_spec,
)
from .multipliers import (
    ConeSymbol,
    HalfspaceSymbol,
    HilbertSymbol,
    LPSymbol,
    PolygonSymbol,
    SectorSymbol,
    build_phi,
)


class ValidationFailure(Exception):
    pass


def _lambda(text):
    try:
        lam = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"lambda must be a number in (0, 1), got {text!r}")
    if not 0.0 < lam < 1.0:
        raise argparse.ArgumentTypeError(f"lambda must lie in (0, 1), got {text}")
    return lam


def _power_of_two(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if n < 2 or n & (n - 1):
        raise argparse.ArgumentTypeError(f"grid size must be a power of two >= 2, got {n}")
    return n


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {v}")
    return v


def _sizes(text):
    try:
        out = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers, got {text!r}")
    if not out or any(s < 1 for s in out) or out != sorted(set(out)):
        raise argparse.ArgumentTypeError(f"sizes must be strictly ascending positive integers, got {text!r}")
    return out


def _exponent(text):
    p = float(text)
    if not 1.0 < p < math.inf:
        raise argparse.ArgumentTypeError(f"p must lie in (1, inf), got {text}")
    return p


def build_parser():
    parser = argparse.ArgumentParser(prog="conelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a direction set")
    g.add_argument("--family", choices=("lacunary", "polygon", "equispaced"), default="lacunary")
    g.add_argument("--order", type=_nonneg_int, default=1, help="lacunary order K")
    g.add_argument("--lambda", dest="lam", type=_lambda, default=0.5)
    g.add_argument("--branching", type=_positive_int, default=4, help="members per annulus level (or total count)")
    g.add_argument("--out", required=True)

    a = sub.add_parser("apply", help="apply a Fourier multiplier to a field file")
    a.add_argument("--field", required=True)
    a.add_argument(
        "--symbol",
        required=True,
        help="cone | polygon | sector:IDX | halfspace:X,Y[,Z] | hilbert:X,Y[,Z] | lp:I,J",
    )
    a.add_argument("--dirs")
    a.add_argument("--rho", type=float, help="polygon dilation (default n/4)")
    a.add_argument("--lambda", dest="lam", type=_lambda, default=0.5)
    a.add_argument("--out", required=True)

    m = sub.add_parser("maximal", help="apply a maximal-operator program to |field|")
    m.add_argument("--field", required=True)
    m.add_argument("--spec", required=True, help="lemma1 | lemma2 | theorem2 | remark1 | path to a stage-list JSON")
    m.add_argument("--dirs")
    m.add_argument("--K", type=_positive_int, default=1)
    m.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="run the invariant or Rademacher suite")
    v.add_argument("--suite", choices=("invariants", "rademacher"), required=True)
    v.add_argument("--grid", type=_power_of_two, default=16)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--fields", type=_positive_int, default=20, help="random fields per size (rademacher)")
    v.add_argument("--json", dest="json_out")

    s = sub.add_parser("sweep", help="norm lower bounds and weighted ratios across set sizes")
    s.add_argument("--kind", choices=("lacunary", "equispaced"), required=True)
    s.add_argument("--p", type=_exponent, default=4.0)
    s.add_argument("--sizes", type=_sizes, required=True)
    s.add_argument("--grid", type=_power_of_two, default=512)
    s.add_argument("--trials", type=_positive_int, default=300)
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--lambda", dest="lam", type=_lambda, default=0.5)
    s.add_argument("--ratio-grid", type=_power_of_two, default=64)
    s.add_argument("--ratio-trials", type=_positive_int, default=16)
    s.add_argument("--csv", dest="csv_out")

    r = sub.add_parser("report", help="render a JSON result as text")
    r.add_argument("--in", dest="src", required=True)
    r.add_argument("--format", choices=("md",), default="md")
    r.add_argument("--out")
    return parser


def _existing(path):
    p = Path(path)
    if not p.is_file():
        raise ValidationFailure(f"no such file: {path}")
    return p


def _load_dirs(path):
    if path is None:
        raise ValidationFailure("this command needs --dirs")
    try:
        return io.load_directions(_existing(path))
    except (ValueError, KeyError) as exc:
        raise ValidationFailure(f"{path}: {exc}")


def _load_field(path):
    try:
        return io.load_field(_existing(path))
    except (ValueError, KeyError) as exc:
        raise ValidationFailure(f"{path}: {exc}")


def _vector(text):
    try:
        v = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise ValidationFailure(f"bad direction {text!r}")
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValidationFailure("direction must be nonzero")
    return v / norm


def parse_symbol(selector, args, shape):
    kind, _, arg = selector.partition(":")
    if kind == "cone":
        return ConeSymbol(_load_dirs(args.dirs))
    if kind == "polygon":
        rho = shape[0] / 4 if args.rho is None else args.rho
        return PolygonSymbol(_load_dirs(args.dirs), rho)
    if kind == "sector":
        return SectorSymbol(_load_dirs(args.dirs), int(arg))
    if kind == "halfspace":
        return HalfspaceSymbol(_vector(arg))
    if kind == "hilbert":
        return HilbertSymbol(_vector(arg))
    if kind == "lp":
        i, j = (int(t) for t in arg.split(","))
        return LPSymbol(i, j, build_phi(args.lam))
    raise ValidationFailure(f"unknown symbol {selector!r}")


def _stage_from_doc(doc):
    kind = doc["kind"]
    power = int(doc.get("power", 1))
    if kind == "axis":
        param = int(doc["axis"])
    elif kind == "direction":
        param = np.array(doc["direction"], dtype=float)
    else:
        param = np.array(doc["members"], dtype=float)
    return Stage(kind, param, power, doc.get("label", ""))


def parse_spec(name, args):
    if name == "lemma1":
        return lemma1_spec(1)
    if name in ("lemma2", "theorem2", "remark1"):
        dirs = _load_dirs(args.dirs)
        if name == "lemma2":
            return lemma2_spec(dirs)
        return theorem2_spec(dirs, args.K) if name == "theorem2" else remark1_spec(dirs, args.K)
    path = _existing(name)
    try:
        doc = json.loads(path.read_text())
        stages = tuple(_stage_from_doc(s) for s in doc["stages"])
    except (ValueError, KeyError, TypeError) as exc:
        raise ValidationFailure(f"{name}: bad stage list ({exc})")
    radii = doc.get("radii")
    return MaximalSpec(stages, None if radii is None else tuple(radii), doc.get("name", path.stem))


def _dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_gen(args):
    if args.family == "polygon":
        dirs = lacunary_polygon(args.lam, args.branching)
    elif args.family == "equispaced":
        dirs = equispaced(args.branching)
    elif args.order == 1:
        dirs = make_lacunary_order1(args.lam, args.branching)
    else:
        dirs = make_lacunary_orderK(args.lam, args.branching, args.order)
    io.save_directions(dirs, args.out)
    return 0


def cmd_apply(args):
    f = _load_field(args.field)
    symbol = parse_symbol(args.symbol, args, f.shape)
    try:
        out = grid.apply_symbol(f, symbol)
    except ValueError as exc:
        raise ValidationFailure(str(exc))
    io.save_field(out, args.out)
    return 0


def cmd_maximal(args):
    f = _load_field(args.field)
    spec = parse_spec(args.spec, args)
    try:
        out = run_spec(np.abs(f), spec)
    except ValueError as exc:
        raise ValidationFailure(str(exc))
    io.save_field(out, args.out)
    return 0


def _rademacher_suite(n, seed, fields):
    entries = []
    for size in (2, 4, 8):
        dirs = make_lacunary_order1(0.5, size)
        for k in range(fields):
            rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(size, k)))
            f = rng.standard_normal((n,) * 3) + 1j * rng.standard_normal((n,) * 3)
            rep = rademacher_check(dirs, f)
            entry = {"id": f"lab.rademacher[size={size},field={k}]", "n": n, "seed": seed}
            entry.update(rep.to_dict())
            entries.append(entry)
    return {"passed": all(e["passed"] for e in entries), "entries": entries}


def cmd_verify(args):
    if args.suite == "invariants":
        doc = invariant_suite((args.grid,), (args.seed,)).to_dict()
    else:
        doc = _rademacher_suite(args.grid, args.seed, args.fields)
    doc = {"suite": args.suite, "grid": args.grid, "seed": args.seed, **doc}
    text = _dumps(doc)
    if args.json_out:
        io.atomic_write(args.json_out, text)
    else:
        sys.stdout.write(text)
    for e in doc["entries"]:
        if not e["passed"]:
            print(f"FAIL {e['id']} (n={e['n']}, seed={e['seed']})", file=sys.stderr)
    return 0 if doc["passed"] else 1


def cmd_sweep(args):
    config = TrialConfig(d=2, n=args.grid, seed=args.seed, trials=args.trials, lam=args.lam, K=1)
    rows = sweep_directions(
        args.kind,
        args.sizes,
        args.p,
        config,
        lam=args.lam,
        ratio_grid=args.ratio_grid,
        ratio_trials=args.ratio_trials,
    )
    text = rows_to_csv(rows)
    if args.csv_out:
        io.atomic_write(args.csv_out, text)
    else:
        sys.stdout.write(text)
    return 0


def render_markdown(doc):
    lines = []
    if "entries" in doc:
        status = "PASS" if doc.get("passed") else "FAIL"
        lines.append(f"# {doc.get('suite', 'verify')} suite: {status}")
        lines.append("")
        lines.append(f"grid {doc.get('grid')}, seed {doc.get('seed')}, {len(doc['entries'])} checks")
        lines.append("")
        lines.append("| id | result |")
        lines.append("|---|---|")
        for e in doc["entries"]:
            lines.append(f"| {e['id']} | {'pass' if e['passed'] else 'FAIL'} |")
    elif "trials" in doc:
        lines.append(f"# Ratio report: {doc['config'].get('inequality', '?')}")
        lines.append("")
        lines.append(f"- right-hand side: {doc['provenance']}")
        lines.append(f"- trials: {len(doc['trials'])}, discarded: {doc['discarded']}")
        lines.append(f"- max ratio: {doc['max_ratio']:.6g}")
        lines.append(f"- median ratio: {doc['median_ratio']:.6g}")
        lines.append("")
        lines.append("| trial | seed | lhs | rhs | ratio |")
        lines.append("|---|---|---|---|---|")
        for t in doc["trials"]:
            lines.append(f"| {t['trial']} | {t['seed']} | {t['lhs']:.6g} | {t['rhs']:.6g} | {t['ratio']:.6g} |")
    else:
        raise ValidationFailure("unrecognised report document")
    return "\n".join(lines) + "\n"


def cmd_report(args):
    path = _existing(args.src)
    try:
        doc = json.loads(path.read_text())
    except ValueError as exc:
        raise ValidationFailure(f"{args.src}: {exc}")
    text = render_markdown(doc)
    if args.out:
        io.atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "apply": cmd_apply,
    "maximal": cmd_maximal,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "report": cmd_report,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except ValidationFailure as exc:
        print(f"conelab {args.command}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"conelab {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
