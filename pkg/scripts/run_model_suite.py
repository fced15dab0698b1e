#!/usr/bin/env python3
"""Run the full inequality suite on the three reference spaces and print a
summary table plus any non-passing rows.

Usage:
    python scripts/run_model_suite.py [--seed 0] [--k-max 2] [--out-dir reports/]
"""

import argparse
import json
import math
import pathlib
import sys
import time

from mmkit import harness
from mmkit.space import gen_cycle, gen_dumbbell, gen_gauss_interval


def build_spaces():
    return {
        "cycle-256": gen_cycle(256, 2 * math.pi),
        "gauss-400": gen_gauss_interval(400, 1.0, 5.0),
        "dumbbell-5": gen_dumbbell(5, 1, 1e-4),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--k-max", type=int, default=2)
    ap.add_argument("--out-dir", type=pathlib.Path, default=None,
                    help="write one JSON report per space")
    args = ap.parse_args(argv)

    any_hard_fail = False
    for name, space in build_spaces().items():
        cfg = harness.SuiteConfig(seed=args.seed, k_max=args.k_max)
        t0 = time.time()
        reports = harness.verify_suite(space, cfg)
        elapsed = time.time() - t0
        n_pass = sum(r.verdict == "pass" for r in reports)
        n_fail = sum(r.verdict == "fail" for r in reports)
        n_report = sum(r.klass == "report-only" for r in reports)
        failed = harness.suite_failed(reports)
        any_hard_fail |= failed
        print(f"{name:12s}  {len(reports):3d} checks  "
              f"{n_pass:3d} pass  {n_fail:3d} fail  {n_report:3d} report-only  "
              f"[{'FAIL' if failed else 'ok'}]  ({elapsed:.1f}s)")
        for r in reports:
            if r.verdict != "pass" and r.klass != "report-only":
                print(f"    ! {r.id} {r.params}: lhs={r.lhs:.6g} rhs={r.rhs:.6g}")
        if args.out_dir is not None:
            args.out_dir.mkdir(parents=True, exist_ok=True)
            payload = [r.to_dict() for r in reports]
            (args.out_dir / f"{name}.json").write_text(
                json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return 1 if any_hard_fail else 0


if __name__ == "__main__":
    sys.exit(main())
