"""Entangled coherent states, the order-n polarization criterion and Stokes parameters."""

import math
from dataclasses import dataclass

import numpy as np

from .fock import ComplexAmplitude, coherent, mode_ops, tensor
from .kernel import PolarizationIndex

__all__ = [
    "ModePair", "StokesVector", "IndeterminateCriterion", "even_ecs", "odd_ecs",
    "polarization_index", "criterion_residual", "stokes_closed", "stokes_oracle",
    "cat_factor", "fock_state",
]


class IndeterminateCriterion(ArithmeticError):
    """The state is (numerically) annihilated by a_x**n, so the residual has no scale."""


@dataclass(frozen=True)
class ModePair:
    """Coherent amplitudes of the x mode (beta) and y mode (gamma)."""

    beta: complex
    gamma: complex

    def __post_init__(self):
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "gamma", complex(self.gamma))

    @classmethod
    def polar(cls, beta_mod, beta_phase, gamma_mod, gamma_phase):
        return cls(complex(ComplexAmplitude.polar(beta_mod, beta_phase)),
                   complex(ComplexAmplitude.polar(gamma_mod, gamma_phase)))

    def j_sum(self):
        return 2 * (abs(self.beta) ** 2 + abs(self.gamma) ** 2)

    def j_diff(self):
        return 2 * (abs(self.beta) ** 2 - abs(self.gamma) ** 2)


@dataclass(frozen=True)
class StokesVector:
    s0: float
    s1: float
    s2: float
    s3: float

    def as_tuple(self):
        return (self.s0, self.s1, self.s2, self.s3)


def cat_factor(j_sum):
    """(1 - e^{-J}) / (1 + e^{-J}) = tanh(J/2), in [0, 1)."""
    return math.tanh(j_sum / 2)


def fock_state(nx, ny, dim):
    psi = np.zeros(dim * dim, dtype=complex)
    psi[nx * dim + ny] = 1.0
    return psi


def even_ecs(modes, dim):
    """N+ (|beta, gamma> + |-beta, -gamma>) with N+ = [2(1 + e^{-J_sum})]^{-1/2}."""
    b, g = modes.beta, modes.gamma
    branches = (tensor(coherent(b, dim), coherent(g, dim))
                + tensor(coherent(-b, dim), coherent(-g, dim)))
    return branches / math.sqrt(2 * (1 + math.exp(-modes.j_sum())))


def odd_ecs(modes, dim):
    """|beta, gamma> - |-beta, -gamma>, normalized on the truncated space.

    Normalizing numerically avoids the cancellation in the analytic
    [2(1 - e^{-J_sum})]^{-1/2} near the origin.
    """
    b, g = modes.beta, modes.gamma
    if b == 0 and g == 0:
        raise ValueError("the odd entangled coherent state is undefined at beta = gamma = 0")
    branches = (tensor(coherent(b, dim), coherent(g, dim))
                - tensor(coherent(-b, dim), coherent(-g, dim)))
    return branches / np.linalg.norm(branches)


def polarization_index(modes, order):
    """Index (gamma/beta)**n carried by an entangled coherent state."""
    if modes.beta == 0:
        raise ZeroDivisionError("polarization index undefined for beta = 0")
    return PolarizationIndex(order, (modes.gamma / modes.beta) ** order)


def criterion_residual(state, order, p, dim, eps=1e-14):
    """Scale-free residual of (a_y^n - p a_x^n) rho = 0 for rho = |psi><psi|.

    Returns ||(a_y^n - p a_x^n) rho||_F / ||a_x^n rho||_F. For a pure state
    ||A rho||_F = ||A psi|| ||psi||, so the common ||psi|| cancels and the ratio
    is evaluated on vectors.
    """
    if isinstance(p, PolarizationIndex):
        if p.order != order:
            raise ValueError(f"index order {p.order} != criterion order {order}")
        p = p.value
    ax, _, ay, _ = mode_ops(dim)
    ax_n = np.linalg.matrix_power(ax, order)
    ay_n = np.linalg.matrix_power(ay, order)
    state = np.asarray(state)
    x = ax_n @ state
    denom = np.linalg.norm(x)
    if denom < eps:
        raise IndeterminateCriterion(f"||a_x^{order} psi|| = {denom:.3g} below {eps:g}")
    return float(np.linalg.norm(ay_n @ state - p * x) / denom)


def stokes_closed(modes):
    """Stokes parameters of the even entangled coherent state in closed form."""
    lam = cat_factor(modes.j_sum())
    b, g = modes.beta, modes.gamma
    rb, rg = abs(b), abs(g)
    pb = ComplexAmplitude.of(b).phase
    pg = ComplexAmplitude.of(g).phase
    return StokesVector(
        s0=0.5 * modes.j_sum() * lam,
        s1=0.5 * modes.j_diff() * lam,
        s2=2 * lam * rb * rg * math.cos(pb - pg),
        s3=2 * lam * rb * rg * math.sin(pg - pb),
    )


def stokes_oracle(state, dim):
    """Stokes parameters as expectation values of the two-mode ladder operators.

    S0 = nx + ny, S1 = nx - ny, S2 = ax^+ ay + ay^+ ax, S3 = i(ay^+ ax - ax^+ ay).
    """
    ax, axd, ay, ayd = mode_ops(dim)
    nx, ny = axd @ ax, ayd @ ay
    ops = (nx + ny, nx - ny, axd @ ay + ayd @ ax, 1j * (ayd @ ax - axd @ ay))
    state = np.asarray(state)
    return StokesVector(*(float(np.vdot(state, op @ state).real) for op in ops))

