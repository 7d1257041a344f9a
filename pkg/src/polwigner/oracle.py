"""Brute-force Tr[rho T] in the truncated two-mode Fock space.

The oracle never uses a closed form: it builds the generalized kernel as a
dense (dim**2 x dim**2) matrix and contracts it with the state vector. It
is the reference against which the closed-form evaluators in
``polwigner.wigner`` are checked.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .config import TOL, TruncationError
from .kernel import PolarizationIndex, kernel_higher
from .states import even_ecs
from .wigner import PhaseSpacePoint, w2_closed

__all__ = [
    "HermiticityError", "ComparisonReport", "w_bruteforce", "ecs_setup",
    "convergence_scan", "compare_closed_form", "random_points", "relative_error",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 20120721


class HermiticityError(ArithmeticError):
    """Tr[rho T] came out complex: the kernel is not hermitian."""


@dataclass
class ComparisonReport:
    points: int
    max_rel_error: float
    argmax: PhaseSpacePoint = None
    dims: list = field(default_factory=list)
    converged: bool = True
    values: list = field(default_factory=list)
    seed: int = None
    note: str = ""

    def to_dict(self):
        out = asdict(self)
        out["argmax"] = None if self.argmax is None else asdict(self.argmax)
        return out


def relative_error(a, b):
    denom = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / denom


def w_bruteforce(state, n, ax, p, s, dim):
    """<psi| T^(n)(ax, p, s) |psi> from the dense truncated kernel."""
    if not isinstance(p, PolarizationIndex):
        p = PolarizationIndex(n, p)
    elif p.order != n:
        raise ValueError(f"index order {p.order} != requested order {n}")
    state = np.asarray(state)
    if state.size != dim * dim:
        raise ValueError(f"state length {state.size} does not match dim**2 = {dim * dim}")
    t = kernel_higher(ax, p, s, dim)
    value = complex(np.vdot(state, t @ state))
    if abs(value.imag) >= TOL.imag * (1 + abs(value)):
        raise HermiticityError(f"Im Tr[rho T] = {value.imag:.3g} for Re = {value.real:.6g}")
    return value.real


def ecs_setup(modes, n, ax, p, s=0.0):
    """Callable dim -> oracle value on the even entangled coherent state."""
    def run(dim):
        return w_bruteforce(even_ecs(modes, dim), n, ax, p, s, dim)
    return run


def convergence_scan(setup, dims, bound=TOL.converge):
    """Evaluate ``setup(dim)`` for increasing dims and judge truncation convergence.

    The verdict is true iff successive gaps do not grow and the last relative
    gap is below ``bound``. A dim that is too small to build the state counts
    as non-convergence and is recorded in the note.
    """
    dims = [int(d) for d in dims]
    if len(dims) < 3 or any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError(f"dims must be strictly increasing with length >= 3, got {dims}")
    values, notes = [], []
    for d in dims:
        try:
            values.append(setup(d))
        except TruncationError as exc:
            values.append(float("nan"))
            notes.append(f"truncation at dim={d}: {exc}")
    if notes:
        return ComparisonReport(len(dims), float("nan"), dims=dims, converged=False,
                                values=values, note="; ".join(notes))
    gaps = [abs(b - a) for a, b in zip(values, values[1:])]
    rel_last = relative_error(values[-1], values[-2]) if gaps[-1] else 0.0
    shrinking = all(g2 <= g1 or g2 <= bound * abs(values[-1]) for g1, g2 in zip(gaps, gaps[1:]))
    ok = shrinking and rel_last < bound
    note = "" if ok else f"gaps={gaps}"
    return ComparisonReport(len(dims), rel_last, dims=dims, converged=ok, values=values, note=note)


def random_points(count, seed=DEFAULT_SEED, alpha_max=1.2):
    """Seeded phase-space points with every branch label drawn at random."""
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(count):
        a = rng.uniform(0, alpha_max)
        phi, d2 = rng.uniform(0, 2 * math.pi, size=2)
        m, l, k = (int(x) for x in rng.integers(0, 2, size=3))
        pts.append(PhaseSpacePoint.from_index(float(a), float(phi), float(d2), m, l, k))
    return pts


def compare_closed_form(params, points, dim, closed=w2_closed, check_dims=None, seed=None):
    """Closed form against the oracle at every point on the even entangled coherent state.

    The state is rebuilt from ``params`` on each point's branch l. When
    ``check_dims`` is given, truncation convergence is verified at the worst
    point over those dims.
    """
    points = list(points)
    if not points:
        raise ValueError("need at least one point")
    states = {}
    worst, worst_pt, values = -1.0, None, []
    for pt in points:
        if pt.l not in states:
            states[pt.l] = even_ecs(params.modes(pt.l), dim)
        p2 = PolarizationIndex(2, pt.p2(params))
        oracle = w_bruteforce(states[pt.l], 2, pt.alpha_x, p2, 0.0, dim)
        cf = closed(pt, params)
        err = relative_error(cf, oracle)
        values.append((cf, oracle))
        if err > worst:
            worst, worst_pt = err, pt
    report = ComparisonReport(len(points), worst, worst_pt, [dim], True, values, seed)
    if check_dims:
        scan = convergence_scan(
            ecs_setup(params.modes(worst_pt.l), 2, worst_pt.alpha_x,
                      PolarizationIndex(2, worst_pt.p2(params))), check_dims)
        report.dims = scan.dims
        report.converged = scan.converged
        report.note = scan.note
    return report
