"""Dense linear algebra on a truncated Fock space.

States are complex numpy vectors over the basis |0>..|dim-1> (single mode)
or the row-major product basis |i, j> -> i*dim + j (two modes, x left).
Operators are square complex numpy arrays over the same bases.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import gammainc

from .config import TOL, TruncationError

__all__ = [
    "ComplexAmplitude", "check_dim", "tail_mass", "required_dim",
    "default_dim", "ladder", "number", "coherent", "displacement", "tensor",
    "trace", "expect", "mode_ops", "edge_band", "is_hermitian", "is_unitary",
]


@dataclass(frozen=True)
class ComplexAmplitude:
    """Complex amplitude with polar views.

    The phase is reported in [0, 2*pi) and is 0 for the zero amplitude.
    """

    re: float
    im: float = 0.0

    @classmethod
    def polar(cls, modulus, phase):
        z = modulus * np.exp(1j * phase)
        return cls(float(z.real), float(z.imag))

    @classmethod
    def of(cls, z):
        if isinstance(z, cls):
            return z
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def modulus(self):
        return math.hypot(self.re, self.im)

    @property
    def phase(self):
        if self.re == 0.0 and self.im == 0.0:
            return 0.0
        return math.atan2(self.im, self.re) % (2 * math.pi)

    def __complex__(self):
        return complex(self.re, self.im)


def check_dim(dim):
    if int(dim) != dim or dim < 2:
        raise ValueError(f"invalid Fock dimension {dim!r}; need an integer >= 2")
    return int(dim)


def tail_mass(alpha, dim):
    """Poisson weight of a coherent state above level dim-1."""
    mu = abs(complex(alpha)) ** 2
    if mu == 0.0:
        return 0.0
    return float(gammainc(dim, mu))


def required_dim(alpha, tol=TOL.tail):
    """Smallest dim whose coherent-state tail mass is below ``tol``."""
    dim = 2
    while tail_mass(alpha, dim) >= tol:
        dim += 1
    return dim


def default_dim(*amplitudes, tol=TOL.tail, minimum=TOL.min_dim):
    """Smallest even dim >= ``minimum`` that is adequate for every amplitude.

    Even dims keep the displaced-parity kernel balanced.
    """
    dim = max([minimum] + [required_dim(a, tol) for a in amplitudes])
    return dim + (dim % 2)


def _check_tail(alpha, dim, tol):
    if tail_mass(alpha, dim) >= tol:
        need = required_dim(alpha, tol)
        raise TruncationError(
            f"dim={dim} too small for |alpha|={abs(complex(alpha)):.4g}: "
            f"tail mass {tail_mass(alpha, dim):.3g} >= {tol:g}; need dim >= {need}",
            required_dim=need)


def ladder(dim):
    """Return (annihilator, creator) truncated to ``dim`` levels."""
    dim = check_dim(dim)
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)
    return a, a.conj().T.copy()


def number(dim):
    dim = check_dim(dim)
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def coherent(alpha, dim, tol=TOL.tail):
    """Normalized coherent state |alpha> with amplitudes e^{-|a|^2/2} a^n / sqrt(n!)."""
    dim = check_dim(dim)
    alpha = complex(alpha)
    _check_tail(alpha, dim, tol)
    c = np.empty(dim, dtype=complex)
    c[0] = np.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, dim):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    return c


def displacement(alpha, dim, tol=TOL.tail):
    """D(alpha) = exp(alpha a^+ - alpha^* a) as the exponential of the truncated generator.

    The truncated generator is anti-hermitian, so the result is unitary in the
    retained space, but it departs from the true D(alpha) near the top levels.
    """
    dim = check_dim(dim)
    alpha = complex(alpha)
    _check_tail(alpha, dim, tol)
    a, ad = ladder(dim)
    return scipy.linalg.expm(alpha * ad - alpha.conjugate() * a)


def tensor(a, b):
    """Kronecker product with ``a`` acting on the x (left) mode."""
    a, b = np.asarray(a), np.asarray(b)
    if a.ndim != b.ndim:
        raise ValueError(f"cannot tensor objects of rank {a.ndim} and {b.ndim}")
    return np.kron(a, b)


def trace(a):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"trace needs a square matrix, got shape {a.shape}")
    return complex(np.trace(a))


def expect(state, op):
    """<psi| op |psi>."""
    state, op = np.asarray(state), np.asarray(op)
    if op.shape != (state.size, state.size):
        raise ValueError(f"operator shape {op.shape} does not match state length {state.size}")
    return complex(np.vdot(state, op @ state))


def mode_ops(dim):
    """Two-mode ladder operators (ax, ax^+, ay, ay^+) on the dim**2 product space."""
    a, ad = ladder(dim)
    eye = np.eye(dim)
    return tensor(a, eye), tensor(ad, eye), tensor(eye, a), tensor(eye, ad)


def edge_band(alpha):
    """Number of top levels where truncated displacement is not trusted."""
    r = abs(complex(alpha))
    return math.ceil(r * r + 4 * r)


def is_hermitian(op, tol=TOL.herm):
    op = np.asarray(op)
    return bool(np.max(np.abs(op - op.conj().T), initial=0.0) < tol)


def is_unitary(op, keep=None, tol=TOL.unit):
    """Check U^+U = 1 on the leading ``keep`` levels (all levels by default)."""
    op = np.asarray(op)
    keep = op.shape[0] if keep is None else keep
    g = op.conj().T @ op
    return bool(np.max(np.abs(g[:keep, :keep] - np.eye(keep)), initial=0.0) < tol)
