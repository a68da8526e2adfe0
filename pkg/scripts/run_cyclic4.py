#!/usr/bin/env python3
"""Cascade the cyclic 4-roots system and cross-check across seeds.

The solution set is the union of two quadric curves; every run should
report top dimension 1 with four witness points (the slice hyperplane meets
each degree-2 curve twice) and no isolated solutions.
"""

import argparse
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from polycascade import CascadeConfig, load_system, run_cascade
from polycascade.report import build_cascade_report, render_cascade_summary


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    root = pathlib.Path(__file__).resolve().parents[1]
    system = load_system(str(root / "systems" / "cyclic4.sys"))

    for seed in args.seeds:
        cfg = CascadeConfig(seed=seed, threads=args.threads)
        t0 = time.perf_counter()
        out = run_cascade(system, cfg)
        elapsed = time.perf_counter() - t0
        print(f"== seed {seed} ({elapsed:.1f}s) ==")
        print(render_cascade_summary(build_cascade_report(out, "", cfg)))
        print()


if __name__ == "__main__":
    main()
