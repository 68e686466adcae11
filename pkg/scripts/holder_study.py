#!/usr/bin/env python3
"""Monte-Carlo study of the temporal roughness of the stochastic convolution.

Estimates the L^4-valued Holder exponent of t -> w_A(t) over an ensemble
of paths at the default noise spectrum and prints quartiles.  The theory
gives only an exponent bound, so this records the observed value; with
the default spectrum the per-mode transitions dominate and the estimate
sits a little below 1/2.

Usage: python scripts/holder_study.py [--paths 100] [--seed 0]
"""

import argparse

import numpy as np

from kslab.noise import NoiseSpec, holder_exponent_estimate, make_stream, sample_wa_path
from kslab.spectral import DomainSpec


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--paths", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--horizon", type=float, default=0.5)
    parser.add_argument("--steps", type=int, default=128)
    args = parser.parse_args()

    dom = DomainSpec(half_length=16.0, shift=0.5, modes=64)
    noise = NoiseSpec(sigma=0.1, decay_rate=4.0)
    h = args.horizon / args.steps
    estimates = []
    for i in range(args.paths):
        states = sample_wa_path(args.horizon, h, dom, noise, make_stream(args.seed, i))
        estimates.append(holder_exponent_estimate(states, dom))
    q25, median, q75 = np.percentile(estimates, [25, 50, 75])
    print(f"paths: {args.paths}, grid: {args.steps} steps over [0, {args.horizon}]")
    print(f"Holder exponent estimate: median {median:.4f} (IQR {q25:.4f}..{q75:.4f})")


if __name__ == "__main__":
    main()
