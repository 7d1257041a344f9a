"""Transiting (kernel) operators of the s-parameterized correspondence rule.

Every kernel is returned as a dense matrix on the truncated space. For the
normal-ordered constructions (``kernel_higher``) the matrix is exactly the
compression P T P of the untruncated operator: creation-only factors are
lower triangular, annihilation-only factors upper triangular, and the
normal-ordered middle factor is diagonal, so no truncation error enters
the operator itself.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import TOL, TruncationError
from .fock import check_dim, displacement, required_dim, tail_mass, tensor

__all__ = [
    "PolarizationIndex", "check_s", "normal_ordered_exp", "nilpotent_exp",
    "kernel_single", "kernel_bimodal", "kernel_polarized", "kernel_higher",
    "kernel_higher_factors",
]


@dataclass(frozen=True)
class PolarizationIndex:
    """Order-n index of polarization p = (alpha_y / alpha_x)**n."""

    order: int
    value: complex

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise ValueError(f"polarization order must be a positive integer, got {self.order!r}")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "value", complex(self.value))

    @classmethod
    def from_ratio(cls, ratio, order):
        return cls(order, complex(ratio) ** order)

    @property
    def phase(self):
        """Delta in [0, 2*pi); 0 when the index vanishes."""
        if self.value == 0:
            return 0.0
        return math.atan2(self.value.imag, self.value.real) % (2 * math.pi)

    def amplitude_ratio(self):
        """Non-random ratio of real amplitudes |p|**(1/n)."""
        return abs(self.value) ** (1.0 / self.order)

    def phase_values(self):
        """The n equally spaced phase differences (Delta + 2 m pi)/n, m = 0..n-1."""
        n = self.order
        return [((self.phase + 2 * m * math.pi) / n) % (2 * math.pi) for m in range(n)]

    def characteristic_parameters(self):
        """(ratio, phase_1, ..., phase_n): the 1 + n non-random parameters."""
        return (self.amplitude_ratio(), *self.phase_values())


def check_s(s):
    s = float(s)
    if not -1.0 <= s <= 0.0:
        raise ValueError(f"s={s} outside the supported range [-1, 0]")
    return s


def _as_index(p, order=None):
    if isinstance(p, PolarizationIndex):
        if order is not None and p.order != order:
            raise ValueError(f"expected a polarization index of order {order}, got order {p.order}")
        return p
    return PolarizationIndex(1 if order is None else order, p)


def nilpotent_exp(m):
    """exp(m) for a strictly triangular matrix, summed until the powers vanish."""
    m = np.asarray(m)
    out = np.eye(m.shape[0], dtype=m.dtype)
    term = out
    for k in range(1, m.shape[0] + 1):
        term = term @ m / k
        if not term.any():
            break
        out = out + term
    return out


def _normal_ordered_diag(mu, n, dim):
    mu_q = Fraction(float(mu))
    diag = np.empty(dim, dtype=np.longdouble)
    for j in range(dim):
        total = Fraction(0)
        for k in range(j // n + 1):
            total += mu_q ** k / math.factorial(k) * (math.factorial(j) // math.factorial(j - n * k))
        diag[j] = np.longdouble(total.numerator) / np.longdouble(total.denominator)
    return diag


def normal_ordered_exp(mu, n, dim):
    """:exp(mu * nhat**n): as sum_k mu**k / k! (a^+)**(nk) a**(nk).

    The operator is diagonal with <j|..|j> = sum_k mu**k/k! * j!/(j-nk)!. The
    terms alternate in sign and cancel heavily at high j, so each diagonal
    entry is summed exactly in rationals and rounded once.
    """
    dim = check_dim(dim)
    if n < 1:
        raise ValueError(f"power n must be >= 1, got {n}")
    return np.diag(_normal_ordered_diag(mu, n, dim).astype(float)).astype(complex)


def _kernel_pad(alpha, dim):
    r = abs(complex(alpha))
    return math.ceil(r * r + 4 * r * math.sqrt(dim)) + 24


def kernel_single(alpha, s, dim, pad=None, tol=TOL.tail):
    """Single-mode kernel (2/(1-s)) D(a) ((s+1)/(s-1))**nhat D(a)^+.

    The product is formed in a padded space of ``dim + pad`` levels and cropped,
    so the result matches the compression of the exact operator to well below
    the kernel tolerances; the truncated-generator displacement alone is
    inaccurate in its top rows.
    """
    dim = check_dim(dim)
    s = check_s(s)
    alpha = complex(alpha)
    if tail_mass(alpha, dim) >= tol:
        need = required_dim(alpha, tol)
        raise TruncationError(f"dim={dim} too small for |alpha|={abs(alpha):.4g}; need dim >= {need}",
                              required_dim=need)
    work = dim + (_kernel_pad(alpha, dim) if pad is None else pad)
    d = displacement(alpha, work, tol=tol)
    ratio = (s + 1) / (s - 1)
    weights = np.power(ratio, np.arange(work, dtype=float))
    t = (2 / (1 - s)) * (d * weights) @ d.conj().T
    return t[:dim, :dim].copy()


def kernel_bimodal(ax, ay, s, dim):
    """Product kernel t(ax, s) (x) t(ay, s) for statistically independent modes."""
    return tensor(kernel_single(ax, s, dim), kernel_single(ay, s, dim))


def kernel_polarized(ax, p, s, dim):
    """Kernel for perfectly polarized light: the bimodal kernel with ay = p ax."""
    p = _as_index(p, order=1)
    ax = complex(ax)
    return kernel_bimodal(ax, p.value * ax, s, dim)


def kernel_higher_factors(ax, p, s, dim):
    """Per-mode factors of the order-n kernel.

    Returns ``(prefactor, tx, ty)`` with the kernel equal to
    ``prefactor * kron(tx, ty)``; each factor is
    exp(c a^+^n) :exp(-lam nhat^n): exp(c^* a^n) with lam = 2/(1-s),
    c = lam ax^n for x and lam ax^n p for y.
    """
    dim = check_dim(dim)
    s = check_s(s)
    p = _as_index(p)
    n = p.order
    ax = complex(ax)
    lam = 2 / (1 - s)
    prefactor = lam ** 2 * math.exp(-lam * (1 + abs(p.value) ** 2) * abs(ax) ** (2 * n))
    # extended precision: the product cancels strongly in the top rows
    ad = np.diag(np.sqrt(np.arange(1, dim, dtype=np.longdouble)), -1).astype(np.clongdouble)
    ad_n = np.linalg.matrix_power(ad, n)
    middle = _normal_ordered_diag(-lam, n, dim).astype(np.clongdouble)
    factors = []
    for c in (lam * ax ** n, lam * ax ** n * p.value):
        left = nilpotent_exp(np.clongdouble(c) * ad_n)
        factors.append(((left * middle) @ left.conj().T).astype(complex))
    if not all(np.isfinite(f).all() for f in factors):
        raise TruncationError(f"order-{n} kernel overflowed at dim={dim}")
    return prefactor, factors[0], factors[1]


def kernel_higher(ax, p, s, dim):
    """Generalized order-n kernel on the dim**2 two-mode space.

    ``J exp(lam ax^n (ax^+^n + p ay^+^n)) :exp(-lam (nx^n + ny^n)): exp(lam ax^*n (ax^n + p^* ay^n))``
    with lam = 2/(1-s) and J = lam**2 exp(-lam (1+|p|^2) |ax|^(2n)). The two
    modes' exponents commute, so the operator is built as a Kronecker product
    of single-mode factors.
    """
    prefactor, tx, ty = kernel_higher_factors(ax, p, s, dim)
    return prefactor * tensor(tx, ty)
