"""Truncation convergence of the second-order oracle versus |alpha_x| and |p2|."""

import argparse

import numpy as np

from polwigner.kernel import PolarizationIndex
from polwigner.oracle import convergence_scan, ecs_setup
from polwigner.states import ModePair


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", default="16,24,32,40")
    args = ap.parse_args()
    dims = [int(d) for d in args.dims.split(",")]

    modes = ModePair(0.7, 0.7 * np.exp(1.1j))
    print("alpha_mod  |p2|   last rel gap   converged")
    for a in (0.4, 0.8, 1.2):
        for q in (0.5, 1.0, 1.3):
            rep = convergence_scan(ecs_setup(modes, 2, a * np.exp(0.3j), PolarizationIndex(2, q)), dims)
            print(f"{a:9.2f}  {q:4.1f}   {rep.max_rel_error:12.3e}   {rep.converged}")


if __name__ == "__main__":
    main()
