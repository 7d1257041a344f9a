"""Third-order oracle values over phi_x for a range of index phases.

For each phase of p3 (modulus fixed to |p_HS| of the state) the script prints
the relative spread of Tr[rho T3] over phi_x. The spread vanishes only where
p3 * conj(p_HS) = -1.
"""

import argparse
import math

import numpy as np

from polwigner.kernel import PolarizationIndex
from polwigner.oracle import w_bruteforce
from polwigner.states import ModePair, even_ecs, polarization_index


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--beta", type=float, default=0.7)
    ap.add_argument("--gamma", type=float, default=0.7)
    ap.add_argument("--alpha", type=float, default=0.8)
    ap.add_argument("--dim", type=int, default=32)
    ap.add_argument("--phases", type=int, default=12)
    args = ap.parse_args()

    modes = ModePair(args.beta, args.gamma)
    phs = polarization_index(modes, 3)
    psi = even_ecs(modes, args.dim)
    phis = np.linspace(0, 2 * math.pi, 16, endpoint=False)
    print(f"p_HS = {phs.value:.4g}")
    print("arg(p3)/pi   spread over phi_x   mean")
    for th in np.linspace(0, 2 * math.pi, args.phases, endpoint=False):
        p = PolarizationIndex(3, abs(phs.value) * np.exp(1j * th))
        v = np.array([w_bruteforce(psi, 3, args.alpha * np.exp(1j * f), p, 0, args.dim) for f in phis])
        print(f"{th / math.pi:10.4f}   {(v.max() - v.min()) / v.max():17.3e}   {v.mean():.6g}")


if __name__ == "__main__":
    main()
