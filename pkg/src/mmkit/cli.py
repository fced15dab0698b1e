"""Command-line front end: generate spaces, compute quantities, run suites.

Exit codes: 0 ok, 1 hard-assert failure in a verify suite, 2 I/O error,
3 usage error. Reports are byte-identical for identical (input, seed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import harness, isoperimetry, separation, spectral, transport
from .errors import InvalidArgumentError, MMKitError
from .space import MMSpace, gen_cycle, gen_dumbbell, gen_gauss_interval, load_space, save_space

EXIT_OK = 0
EXIT_HARD_FAIL = 1
EXIT_IO = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class UsageError(Exception):
    pass


def _parse_measure(spec: str, n: int) -> np.ndarray:
    """'uniform', 'delta:i', or a comma-separated probability vector."""
    if spec == "uniform":
        return np.full(n, 1.0 / n)
    if spec.startswith("delta:"):
        i = int(spec.split(":", 1)[1])
        if not 0 <= i < n:
            raise UsageError(f"delta point {i} out of range for n = {n}")
        v = np.zeros(n)
        v[i] = 1.0
        return v
    try:
        v = np.array([float(x) for x in spec.split(",")], dtype=float)
    except ValueError as exc:
        raise UsageError(f"cannot parse measure {spec!r}") from exc
    if v.size != n:
        raise UsageError(f"measure has {v.size} entries, space has {n} points")
    return v


def _parse_function(spec: str, space: MMSpace) -> np.ndarray:
    """'eigen:j', 'dist:i', or a comma-separated value vector."""
    if spec.startswith("eigen:"):
        j = int(spec.split(":", 1)[1])
        return spectral.eigenpairs(space, j).eigenfunctions[j]
    if spec.startswith("dist:"):
        i = int(spec.split(":", 1)[1])
        return np.asarray(space.dist[i], dtype=float)
    try:
        v = np.array([float(x) for x in spec.split(",")], dtype=float)
    except ValueError as exc:
        raise UsageError(f"cannot parse function {spec!r}") from exc
    if v.size != space.n:
        raise UsageError(f"function has {v.size} entries, space has {space.n} points")
    return v


def _build_parser() -> _Parser:
    p = _Parser(prog="mmkit", description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--caps", type=int, default=None, help="override enumeration caps")
    p.add_argument("--slack", type=float, default=None, help="override tolerance slack")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a model space file")
    gsub = g.add_subparsers(dest="generator", required=True)
    gc = gsub.add_parser("cycle")
    gc.add_argument("--n", type=int, required=True)
    gc.add_argument("--circumference", type=float, default=2.0 * math.pi)
    gc.add_argument("--out", required=True)
    gg = gsub.add_parser("gauss")
    gg.add_argument("--n", type=int, required=True)
    gg.add_argument("--sigma", type=float, default=1.0)
    gg.add_argument("--half-width", type=float, default=5.0)
    gg.add_argument("--out", required=True)
    gd = gsub.add_parser("dumbbell")
    gd.add_argument("--clique", type=int, required=True)
    gd.add_argument("--bridge-len", type=int, default=1)
    gd.add_argument("--bridge-weight", type=float, default=1e-4)
    gd.add_argument("--out", required=True)

    c = sub.add_parser("compute", help="compute a quantity on a space")
    csub = c.add_subparsers(dest="quantity", required=True)

    cs = csub.add_parser("spectrum")
    cs.add_argument("space")
    cs.add_argument("-k", "--k", type=int, default=4)

    ch = csub.add_parser("hk")
    ch.add_argument("space")
    ch.add_argument("--k", type=int, default=1)
    ch.add_argument("--method", choices=["exact", "sweep", "auto"], default="auto")
    ch.add_argument("--trials", type=int, default=64)

    cp = csub.add_parser("sep")
    cp.add_argument("space")
    cp.add_argument("--kappas", required=True, help="comma-separated mass thresholds")

    cc = csub.add_parser("conc")
    cc.add_argument("space")
    cc.add_argument("--r", type=float, required=True)

    co = csub.add_parser("obsdiam")
    co.add_argument("space")
    co.add_argument("--kappa", type=float, required=True)

    cw = csub.add_parser("w2")
    cw.add_argument("space")
    cw.add_argument("--mu", default="uniform")
    cw.add_argument("--nu", default="uniform")

    ct = csub.add_parser("tra")
    ct.add_argument("space")
    ct.add_argument("--mu", default="uniform")
    ct.add_argument("--nu", default="uniform")
    ct.add_argument("--lam", type=float, default=1.0)

    cd = csub.add_parser("prohorov")
    cd.add_argument("space")
    cd.add_argument("--mu", default="uniform")
    cd.add_argument("--nu", default="uniform")
    cd.add_argument("--lam", type=float, default=1.0)

    ce = csub.add_parser("entropy")
    ce.add_argument("space")
    ce.add_argument("--reference", default="uniform")
    ce.add_argument("--nu", default="uniform")

    cv = csub.add_parser("sweepcut")
    cv.add_argument("space")
    cv.add_argument("--f", required=True)

    cheat = csub.add_parser("heat")
    cheat.add_argument("space")
    cheat.add_argument("--f", required=True)
    cheat.add_argument("--t", type=float, required=True)

    v = sub.add_parser("verify", help="run the inequality suite")
    v.add_argument("space")
    v.add_argument("--suite", default="all")
    v.add_argument("--report", default=None, help="write the report file here")
    v.add_argument("--plot-data", default=None, help="write (k, ratio) CSV series here")
    v.add_argument("--k-max", type=int, default=2)
    return p


def _emit(payload, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2, default=_jsonable) + "\n"
    buf = io.StringIO()
    rows = payload if isinstance(payload, list) else [payload]
    rows = [r.to_dict() if hasattr(r, "to_dict") else r for r in rows]
    if not rows:
        return ""
    flat = [{k: json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v for k, v in r.items()} for r in rows]
    writer = csv.DictWriter(buf, fieldnames=sorted(flat[0].keys()))
    writer.writeheader()
    writer.writerows(flat)
    return buf.getvalue()


def _jsonable(obj):
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if obj is math.inf:
        return "inf"
    raise TypeError(f"not serializable: {type(obj)}")


def _cmd_gen(args) -> int:
    if args.generator == "cycle":
        space = gen_cycle(args.n, args.circumference)
    elif args.generator == "gauss":
        space = gen_gauss_interval(args.n, args.sigma, args.half_width)
    else:
        space = gen_dumbbell(args.clique, args.bridge_len, args.bridge_weight)
    save_space(space, args.out)
    return EXIT_OK


def _cmd_compute(args) -> int:
    space = load_space(args.space)
    q = args.quantity
    if q == "spectrum":
        spec = spectral.eigenpairs(space, args.k)
        out = {"eigenvalues": spec.eigenvalues.tolist(), "provenance": "exact"}
    elif q == "hk":
        if args.method == "exact" or (args.method == "auto" and space.n <= isoperimetry.HK_EXACT_CAP):
            res = isoperimetry.hk_exact(space, args.k)
        else:
            res = isoperimetry.hk_sweep(space, args.k, trials=args.trials, seed=args.seed)
        out = {
            "h_k": res.value,
            "k": args.k,
            "provenance": res.method,
            "witness": [list(p.indices) for p in res.witness],
        }
    elif q == "sep":
        kappas = [float(x) for x in args.kappas.split(",")]
        res = separation.sep_exact(space, kappas)
        out = {
            "sep": res.value,
            "kappas": kappas,
            "provenance": "exact" if res.exact else "heuristic",
            "feasible": res.feasible,
            "witness": None if res.witness is None else [list(p.indices) for p in res.witness],
        }
    elif q == "conc":
        res = separation.concentration_function(space, args.r)
        out = {"alpha": res.value, "r": args.r, "provenance": "exact" if res.exact else "heuristic"}
    elif q == "obsdiam":
        out = {
            "obs_diameter_lower": separation.obs_diameter_lower(space, args.kappa),
            "kappa": args.kappa,
            "provenance": "lower-bound-family",
        }
    elif q == "w2":
        value, _coupling = transport.wasserstein2(
            space, _parse_measure(args.mu, space.n), _parse_measure(args.nu, space.n)
        )
        out = {"wasserstein2": value, "provenance": "exact-lp"}
    elif q == "tra":
        out = {
            "tra": transport.transportation_distance(
                space, _parse_measure(args.mu, space.n), _parse_measure(args.nu, space.n), args.lam
            ),
            "lambda": args.lam,
            "provenance": "exact-lp",
        }
    elif q == "prohorov":
        out = {
            "prohorov": transport.prohorov_distance(
                space, _parse_measure(args.mu, space.n), _parse_measure(args.nu, space.n), args.lam
            ),
            "lambda": args.lam,
            "provenance": "exact-enumeration",
        }
    elif q == "entropy":
        out = {
            "relative_entropy": transport.relative_entropy(
                _parse_measure(args.reference, space.n), _parse_measure(args.nu, space.n)
            ),
            "provenance": "exact",
        }
    elif q == "sweepcut":
        res = isoperimetry.sweep_cut(space, _parse_function(args.f, space))
        out = {
            "ratio": res.value,
            "witness": list(res.witness.parts[0].indices),
            "provenance": res.method,
        }
    elif q == "heat":
        state = spectral.heat_apply(space, _parse_function(args.f, space), args.t)
        out = {"values": state.values.tolist(), "t": state.t, "provenance": "eigenbasis"}
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown quantity {q}")
    sys.stdout.write(_emit(out, args.format))
    return EXIT_OK


def _cmd_verify(args) -> int:
    space = load_space(args.space)
    config = harness.SuiteConfig(seed=args.seed, k_max=args.k_max)
    reports = harness.verify_suite(space, config)
    payload = [r.to_dict() for r in reports]
    text = _emit(payload, args.format)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.plot_data:
        rows = harness.ratio_table(space, max(args.k_max, 1), seed=args.seed)
        with open(args.plot_data, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=sorted(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
    return EXIT_HARD_FAIL if harness.suite_failed(reports) else EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage-error: {exc}\n")
        return EXIT_USAGE
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "compute":
            return _cmd_compute(args)
        return _cmd_verify(args)
    except UsageError as exc:
        sys.stderr.write(f"usage-error: {exc}\n")
        return EXIT_USAGE
    except InvalidArgumentError as exc:
        sys.stderr.write(f"usage-error: {exc}\n")
        return EXIT_USAGE
    except FileNotFoundError as exc:
        sys.stderr.write(f"io-error: {exc}\n")
        return EXIT_IO
    except OSError as exc:
        sys.stderr.write(f"io-error: {exc}\n")
        return EXIT_IO
    except MMKitError as exc:
        sys.stderr.write(f"input-error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
