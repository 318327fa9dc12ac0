#!/usr/bin/env python3
"""First-stage convergence-rate check for the difference-body path.

For the square at k in {32, 64, 128}, verifies the finite-k bound
delta(DK0, Q_k) <= sqrt(2) * (2/b)^(1/2) * delta_k^(1/2) with b = 0.9,
noiseless and at sigma = 0.005.

Usage: python3 scripts/rate_check.py
"""

import sys

import numpy as np

from covrecon.bodies import square
from covrecon.estimators import KernelSpec, diff_schedule, threshold_difference_hull
from covrecon.geometry import difference_body, hausdorff_distance
from covrecon.measurement import gen_cov_grid
from covrecon.randstream import NoiseModel


def main() -> int:
    truth = square()
    dk = difference_body(truth)
    c = np.sqrt(2.0) * np.sqrt(2.0 / 0.9)
    ok = True
    for noise in (NoiseModel.none(), NoiseModel.gaussian(0.005)):
        for k in (32, 64, 128):
            eps, delta = diff_schedule(k, alpha=0.06, bernstein=True)
            ms = gen_cov_grid(truth, k, noise, seed=1)
            qk = threshold_difference_hull(ms, KernelSpec("uniform_box", eps, delta))
            d = hausdorff_distance(dk, qk)
            bound = c * np.sqrt(delta)
            ok &= d <= bound
            print(f"{noise.kind:<9s} k={k:<4d} delta_k={delta:.4f} "
                  f"dist={d:.4f} bound={bound:.4f} {'ok' if d <= bound else 'VIOLATED'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
