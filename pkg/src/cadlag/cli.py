"""Command line entry point: ``cadlag <subcommand> ...``.

Exit status 0 on success, 1 when an ``--oracle`` cross-check disagrees,
2 on invalid input (bad flags, malformed path files, mismatched horizons).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import diagnostics, metrics, moduli, processes
from .estimators import METRICS, pairwise_distance
from .paths import SCHEMA_VERSION, CadlagPath, coordinates, load_path, restrict, save_path, stack_paths


class UsageError(Exception):
    pass


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def threads() -> int:
    """Worker cap from ``CADLAG_THREADS`` (default 1)."""
    raw = os.environ.get("CADLAG_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"CADLAG_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"CADLAG_THREADS must be a positive integer, got {raw!r}")
    return n


def _write_csv(rows, header, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        vals = [r[h] for h in header] if isinstance(r, dict) else r
        w.writerow([_fmt(x) for x in vals])
    _emit(buf.getvalue(), out)


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return x


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _load(path):
    try:
        return load_path(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed path file {path}: {exc}") from None


# --------------------------------------------------------------------------
# dist


def cmd_dist(args):
    f, g = _load(args.left), _load(args.right)
    if args.metric == "weakj1":
        f, g = coordinates(f), coordinates(g)
    report = pairwise_distance(f, g, args.metric, args.resolution)
    out = report.to_dict()
    status = 0
    if args.oracle:
        out["oracle"], status = _oracle_check(args, f, g, report)
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return status


def _oracle_check(args, f, g, report):
    if args.metric in ("j1", "j1log"):
        penalty = "absolute" if args.metric == "j1" else "log_slope"
        ref = metrics.j1_oracle(f, g, penalty)
        tol = args.tol
    elif args.metric == "m1":
        ref = metrics.m1_oracle(f, g)
        tol = report.error_bound + ref.error_bound + args.tol
    else:
        raise UsageError(f"no oracle for metric {args.metric!r}")
    gap = abs(ref.value - report.value)
    ok = gap <= tol
    if not ok:
        print(f"oracle disagreement: {report.value!r} vs {ref.value!r} (tolerance {tol:g})", file=sys.stderr)
    return {"value": ref.value, "agrees": ok, "gap": gap, "tolerance": tol}, 0 if ok else 1


# --------------------------------------------------------------------------
# modulus


def cmd_modulus(args):
    f = _load(args.path)
    curve = moduli.modulus_ladder(f, args.deltas, args.kind)
    _write_csv(curve.to_rows(), ["delta", curve.kind], args.out)
    return 0


# --------------------------------------------------------------------------
# diagnose


def cmd_diagnose(args):
    spec_kw = {"horizon": args.horizon, "seed": args.seed}
    seq = []
    for n in args.ns:
        # the index n is the walk length for donsker and the jump rate for poisson
        kw = dict(spec_kw, N=n) if args.process != "poisson" else dict(spec_kw, rate=float(n))
        spec = processes.ProcessSpec(args.process, **kw)
        seq.append(diagnostics.PathEnsemble(spec.sample(args.replicas), dict(spec.label(), n=n)))
    report = diagnostics.tightness_report(seq, args.deltas, args.eps, args.topology, workers=threads())
    rows = report.to_rows()
    _write_csv(rows, ["quantity", "n", "delta", "eps_or_C", "frequency", "se"], args.out)
    trend = ", ".join(f"eps={e:g}: {v}" for e, v in report.trend.items())
    print(f"# {report.verdict}: {trend}", file=sys.stderr)
    return 0


# --------------------------------------------------------------------------
# simulate and family


def cmd_simulate(args):
    spec = processes.ProcessSpec(args.process, N=args.N, rate=args.rate, horizon=args.horizon, seed=args.seed)
    path = spec.path(args.stream)
    _save(path, args.out)
    return 0


def _save(path, out):
    if out in (None, "-"):
        sys.stdout.write(path.to_json() + "\n")
    else:
        save_path(path, out)


def cmd_family(args):
    member = processes.example_family(args.name, args.n)
    if args.name == "incompleteness":
        f, lam = member
        _save(f, args.out)
        if args.time_change_out:
            with open(args.time_change_out, "w") as fh:
                json.dump(dict(lam.to_dict(), schema_version=SCHEMA_VERSION), fh, indent=2)
    else:
        _save(member, args.out)
    return 0


# --------------------------------------------------------------------------
# demos


@dataclass(frozen=True)
class DemoScenario:
    name: str
    expected: str
    columns: tuple
    run: Callable


def _demo_incompleteness(args):
    null = CadlagPath.constant(0.0, 1.0)
    rows = []
    for n in range(1, args.max_n + 1):
        f_n, _ = processes.example_family("incompleteness", n)
        f_next, _ = processes.example_family("incompleteness", n + 1)
        rows.append((n, metrics.j1_distance(f_next, f_n).value,
                     metrics.j1_distance(f_next, f_n, "log_slope").value, metrics.j1_distance(null, f_n).value))
    return rows


def _demo_shift(args):
    g = processes.family_limit("j1_shift")
    return [(n, metrics.j1_distance(processes.example_family("j1_shift", n), g).value, 1.0 / n) for n in args.ns]


def _demo_m1_vs_j1(args):
    g = processes.family_limit("m1_staircase")
    rows = []
    for n in args.ns:
        x = processes.example_family("m1_staircase", n)
        m1 = metrics.m1_distance(x, g, resolution=args.resolution)
        rows.append((n, metrics.j1_distance(x, g).value, m1.value, m1.error_bound))
    return rows


def _demo_donsker(args):
    spec = processes.ProcessSpec("donsker", N=args.N, seed=args.seed)
    ens = diagnostics.PathEnsemble(spec.sample(args.replicas), spec.label())
    y = ens.values_at(1.0)
    ks = diagnostics.fdd_compare(ens, "norm", [1.0])
    deltas = [0.2, 0.1, 0.05]
    tr = diagnostics.tightness_report([ens], deltas, [0.5], "j1", workers=threads())
    rows = [("ks_statistic", np.nan, ks.statistic[0, 0]), ("ks_pvalue", np.nan, ks.pvalue[0, 0]),
            ("variance", np.nan, float(np.var(y, ddof=1)))]
    rows += [("exceedance_eps_0.5", d, tr.freq[0, j, 0]) for j, d in enumerate(deltas)]
    return rows


def _demo_halfline(args):
    g = processes.family_limit("halfline_shift")
    rows = []
    for n in args.ns:
        f = processes.example_family("halfline_shift", n)
        at_one = metrics.j1_distance(restrict(f, 1.0), restrict(g, 1.0)).value
        rows.append((n, at_one, metrics.halfline_distance(f, g, n_grid=args.n_grid).value))
    return rows


def _demo_products(args):
    g = processes.family_limit("j1_shift")
    y = stack_paths([g, g])
    rows = []
    for n in args.ns:
        x = stack_paths([processes.example_family("j1_shift", n), g])
        rows.append((n, metrics.weak_product_j1(x, y).value, metrics.j1_distance(x, y, d_E="max").value))
    return rows


DEMOS = {
    d.name: d
    for d in (
        DemoScenario("incompleteness", "column d_j1_next halves with n (Cauchy), d_j1_null stays 1 (no limit), "
                     "d_j1log_next stays log 2", ("n", "d_j1_next", "d_j1log_next", "d_j1_null"), _demo_incompleteness),
        DemoScenario("j1_shift_convergence", "d_j1 equals 1/n", ("n", "d_j1", "one_over_n"), _demo_shift),
        DemoScenario("m1_vs_j1", "d_j1 stays 1/2 while d_m1 tends to 0", ("n", "d_j1", "d_m1", "m1_error_bound"),
                     _demo_m1_vs_j1),
        DemoScenario("donsker", "KS statistic small, variance near 1, exceedance shrinking with delta",
                     ("quantity", "delta", "value"), _demo_donsker),
        DemoScenario("halfline", "restriction to [0,1] stays at distance 1 while the half-line distance tends to 0",
                     ("n", "d_restricted_at_1", "d_halfline"), _demo_halfline),
        DemoScenario("weak_vs_strong_product", "weak distance 1/n, single time change stays far",
                     ("n", "d_weak", "d_strong"), _demo_products),
    )
}


def cmd_demo(args):
    scenario = DEMOS[args.name]
    start = time.perf_counter()
    rows = scenario.run(args)
    _write_csv(rows, list(scenario.columns), args.out)
    print(f"# {scenario.name}: expected {scenario.expected} ({time.perf_counter() - start:.2f}s)", file=sys.stderr)
    return 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cadlag", description="Skorokhod distances, moduli and tightness diagnostics.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dist", help="distance between two path files")
    d.add_argument("--metric", choices=METRICS, default="j1")
    d.add_argument("--left", required=True)
    d.add_argument("--right", required=True)
    d.add_argument("--resolution", type=int, default=None)
    d.add_argument("--oracle", action="store_true", help="cross-check against the brute-force oracle")
    d.add_argument("--tol", type=float, default=1e-9)
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_dist)

    m = sub.add_parser("modulus", help="modulus ladder of a path file as CSV")
    m.add_argument("--kind", choices=("omega", "omegaprime", "omegadoubleprime"), default="omega")
    m.add_argument("--path", required=True)
    m.add_argument("--deltas", type=_floats, default=[0.2, 0.1, 0.05])
    m.add_argument("--out", default=None)
    m.set_defaults(func=cmd_modulus)

    g = sub.add_parser("diagnose", help="ensemble diagnostics")
    gsub = g.add_subparsers(dest="report", required=True)
    t = gsub.add_parser("tightness", help="exceedance frequencies over (n, delta, eps)")
    t.add_argument("--process", choices=processes.PROCESSES, default="donsker")
    t.add_argument("--topology", choices=("j1", "m1"), default="j1")
    t.add_argument("--ns", type=_ints, default=[50, 100, 200], help="walk lengths (donsker) or rates (poisson)")
    t.add_argument("--replicas", type=int, default=500)
    t.add_argument("--deltas", type=_floats, default=[0.2, 0.1, 0.05])
    t.add_argument("--eps", type=_floats, default=[0.25, 0.5])
    t.add_argument("--horizon", type=float, default=1.0)
    t.add_argument("--seed", type=int, default=7)
    t.add_argument("--out", default=None)
    t.set_defaults(func=cmd_diagnose)

    s = sub.add_parser("simulate", help="one seeded sample path as JSON")
    s.add_argument("--process", choices=processes.PROCESSES, default="donsker")
    s.add_argument("--N", type=int, default=100)
    s.add_argument("--rate", type=float, default=1.0)
    s.add_argument("--horizon", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--stream", type=int, default=0)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_simulate)

    f = sub.add_parser("family", help="member of an example family as JSON")
    f.add_argument("--name", choices=processes.FAMILIES, required=True)
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--out", default=None)
    f.add_argument("--time-change-out", default=None, help="incompleteness only: also write lambda_n")
    f.set_defaults(func=cmd_family)

    e = sub.add_parser("demo", help="end-to-end example scenarios as CSV")
    e.add_argument("--name", choices=tuple(DEMOS), required=True)
    e.add_argument("--max-n", type=int, default=12)
    e.add_argument("--ns", type=_ints, default=[5, 10, 20, 40])
    e.add_argument("--N", type=int, default=400)
    e.add_argument("--replicas", type=int, default=2000)
    e.add_argument("--resolution", type=int, default=2000)
    e.add_argument("--n-grid", type=int, default=100)
    e.add_argument("--seed", type=int, default=7)
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, TypeError) as exc:
        print(f"cadlag: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
