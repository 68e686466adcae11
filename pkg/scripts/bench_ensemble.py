#!/usr/bin/env python3
"""Time the reference ensemble: 100 paths at N = 64, T = 1, dt = 1e-3.

Runs the same work as `kslab simulate --paths 100` at the default
configuration (including the one-off constants calibration) and prints a
breakdown, to keep the documented runtime budget honest.

Usage: python scripts/bench_ensemble.py [--paths 100] [--workers 1]
"""

import argparse
import shutil
import tempfile
import time
from pathlib import Path

from kslab.cli import cmd_simulate
from kslab.config import RunConfig


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--paths", type=int, default=100)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    out_dir = Path(tempfile.mkdtemp(prefix="kslab-bench-"))
    t0 = time.perf_counter()
    cmd_simulate(RunConfig(), args.seed, args.paths, out_dir, args.workers)
    elapsed = time.perf_counter() - t0
    print(f"{args.paths} paths, {args.workers} worker(s): {elapsed:.1f}s total "
          f"({elapsed / args.paths:.3f}s per path, calibration included)")
    shutil.rmtree(out_dir)


if __name__ == "__main__":
    main()
