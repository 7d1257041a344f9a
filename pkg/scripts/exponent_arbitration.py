"""Closed form against the oracle with both candidate |alpha_x| exponents in J'.

Prints the maximum relative error over seeded random points for the
|alpha_x|^4 prefactor (implemented) and the |alpha_x|^2 variant.
"""

import argparse
import math

import numpy as np

from polwigner.oracle import DEFAULT_SEED, compare_closed_form, random_points
from polwigner.wigner import WignerParams, w2_closed


def squared_exponent(pt, p):
    return w2_closed(pt, p) * math.exp(-2 * (1 + p.p2_mod ** 2) * (pt.alpha_mod ** 2 - pt.alpha_mod ** 4))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=100)
    ap.add_argument("--dim", type=int, default=32)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    params = WignerParams(0.7, *rng.uniform(0, 2 * math.pi, size=1), 1.0, 1.0, *rng.uniform(0, 2 * math.pi, size=1))
    pts = random_points(args.points, seed=args.seed + 1)
    for label, fn in (("|alpha_x|^4", w2_closed), ("|alpha_x|^2", squared_exponent)):
        rep = compare_closed_form(params, pts, args.dim, closed=fn, seed=args.seed)
        print(f"{label}: max rel error {rep.max_rel_error:.3e} at alpha_mod={rep.argmax.alpha_mod:.3f}")


if __name__ == "__main__":
    main()
