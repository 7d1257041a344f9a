"""Closed-form polarization-Wigner functions, grid sampling and peak detection.

Phase conventions: every stored phase lives in [0, 2*pi). The phase-space
index of order two is p2 = |p2| exp(i*Delta2) with Delta2 = 2*delta, so a
point's ``delta`` fixes Delta2; the branch label m only records which half
of [0, 2*pi) delta was taken from and leaves every value unchanged.
"""

import math
from collections import namedtuple
from dataclasses import asdict, dataclass, field

import numpy as np

from .kernel import PolarizationIndex
from .states import ModePair, cat_factor

__all__ = [
    "WignerParams", "PhaseSpacePoint", "AxisSpec", "WignerGrid", "Peak",
    "w2_closed", "w2_poincare", "w3_closed", "sample_grid", "find_peaks",
    "match_peaks", "count_in_domain", "ANGULAR_AXES",
]

TWO_PI = 2 * math.pi
ANGULAR_AXES = frozenset({"delta", "phi_x"})
_AXES = ("delta", "phi_x", "alpha_mod")


def _wrap(phase):
    return float(phase) % TWO_PI


@dataclass(frozen=True)
class WignerParams:
    """State-side parameters of the second-order polarization-Wigner function.

    ``pHS_mod`` and ``pHS_phase`` describe the state's index (gamma/beta)**2;
    ``p2_mod`` is the modulus of the phase-space index (its phase comes from
    the point's delta).
    """

    beta_mod: float
    beta_phase: float = 0.0
    p2_mod: float = 1.0
    pHS_mod: float = 1.0
    pHS_phase: float = 0.0

    def __post_init__(self):
        for name in ("beta_mod", "p2_mod", "pHS_mod"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        object.__setattr__(self, "beta_phase", _wrap(self.beta_phase))
        object.__setattr__(self, "pHS_phase", _wrap(self.pHS_phase))

    @classmethod
    def from_delta_hs(cls, beta_mod, beta_phase, delta_hs, l, p2_mod=1.0, pHS_mod=1.0):
        """Parameters whose branch-l phase difference phi_gamma - phi_beta is ``delta_hs``."""
        return cls(beta_mod, beta_phase, p2_mod, pHS_mod, 2 * delta_hs - 2 * l * math.pi)

    @classmethod
    def from_modes(cls, modes, p2_mod=1.0):
        b, g = modes.beta, modes.gamma
        if b == 0:
            raise ZeroDivisionError("beta = 0 leaves the state index undefined")
        phs = (g / b) ** 2
        return cls(abs(b), math.atan2(b.imag, b.real), p2_mod, abs(phs), math.atan2(phs.imag, phs.real))

    @property
    def gamma_mod(self):
        return self.beta_mod * math.sqrt(self.pHS_mod)

    def delta_hs(self, l):
        """phi_gamma - phi_beta on branch l: (2 l pi + Delta_HS) / 2."""
        return (2 * l * math.pi + self.pHS_phase) / 2

    def modes(self, l=0):
        """(beta, gamma) of the entangled coherent state on branch l."""
        beta = self.beta_mod * np.exp(1j * self.beta_phase)
        gamma = self.gamma_mod * np.exp(1j * (self.beta_phase + self.delta_hs(l)))
        return ModePair(beta, gamma)

    def log_jprime(self, alpha_mod):
        b4 = self.beta_mod ** 4
        return (math.log(4) - 2 * (1 + self.p2_mod ** 2) * np.asarray(alpha_mod) ** 4
                - 2 * (b4 + b4 * self.pHS_mod ** 2))

    def jprime(self, alpha_mod):
        """4 exp[-2(1+|p2|^2)|alpha_x|^4 - 2(|beta|^4 + |gamma|^4)], |gamma|^4 = |beta|^4 |pHS|^2."""
        return np.exp(self.log_jprime(alpha_mod))


@dataclass(frozen=True)
class PhaseSpacePoint:
    alpha_mod: float
    phi_x: float
    delta: float
    m: int = 0
    l: int = 0
    k: int = None

    def __post_init__(self):
        if self.alpha_mod < 0:
            raise ValueError("alpha_mod must be non-negative")
        for name in ("m", "l"):
            if getattr(self, name) not in (0, 1):
                raise ValueError(f"branch index {name} must be 0 or 1")
        if self.k is None:
            object.__setattr__(self, "k", self.m)
        elif self.k not in (0, 1):
            raise ValueError("branch index k must be 0 or 1")
        object.__setattr__(self, "phi_x", _wrap(self.phi_x))
        object.__setattr__(self, "delta", _wrap(self.delta))

    @classmethod
    def from_index(cls, alpha_mod, phi_x, p2_phase, m=0, l=0, k=None):
        """Point whose delta is (Delta2 + 2 m pi)/2."""
        return cls(alpha_mod, phi_x, (_wrap(p2_phase) + 2 * m * math.pi) / 2, m, l, k)

    @property
    def p2_phase(self):
        return (2 * self.delta) % TWO_PI

    @property
    def alpha_x(self):
        return self.alpha_mod * np.exp(1j * self.phi_x)

    def p2(self, params):
        return params.p2_mod * np.exp(1j * self.p2_phase)


def _w2(alpha_mod, phi_x, delta, params):
    big_phi = 2 * (phi_x - params.beta_phase)
    theta = 2 * delta - params.pHS_phase
    a2b2 = 4 * alpha_mod ** 2 * params.beta_mod ** 2
    expo = a2b2 * (np.cos(big_phi) + params.p2_mod * params.pHS_mod * np.cos(big_phi + theta))
    # one exponential: J' alone underflows where the angular factor overflows
    return np.exp(params.log_jprime(alpha_mod) + expo)


def w2_closed(point, params):
    """Second-order polarization-Wigner function of the even entangled coherent state.

    J' exp[4 |alpha_x|^2 |beta|^2 (cos Phi + |p2| |pHS| cos(Phi + Theta))] with
    Phi = 2(phi_x - phi_beta) and Theta = Delta2 - Delta_HS.
    """
    return float(_w2(point.alpha_mod, point.phi_x, point.delta, params))


def _check_unit(params):
    if not (math.isclose(params.p2_mod, 1.0, abs_tol=1e-12)
            and math.isclose(params.pHS_mod, 1.0, abs_tol=1e-12)):
        raise ValueError("the unit-sphere form needs p2_mod = pHS_mod = 1, "
                         f"got {params.p2_mod}, {params.pHS_mod}")


def _w2_unit(alpha_mod, phi_x, delta, params, l, k):
    shift = delta - params.delta_hs(l) - math.pi * k + math.pi * l
    expo = (8 * alpha_mod ** 2 * params.beta_mod ** 2 * np.cos(shift)
            * np.cos(2 * (phi_x - params.beta_phase) + shift))
    return np.exp(params.log_jprime(alpha_mod) + expo)


def w2_poincare(point, params):
    """Equal-intensity, unit-sphere form (|pHS| = |p2| = 1).

    J' exp[8 |alpha_x|^2 |beta|^2 cos(x) cos(2(phi_x - phi_beta) + x)] with
    x = delta - delta_HS - pi k + pi l. Flipping k or l moves both cosines by
    pi, so the value does not depend on either label.
    """
    _check_unit(params)
    return float(_w2_unit(point.alpha_mod, point.phi_x, point.delta, params, point.l, point.k))


def w3_closed(modes, p3):
    """Third-order value, up to an unspecified normalization.

    exp[-4 b^2 q^2 (1 + b^2 q^2 + b^4 q^4)] tanh(J_sum/2) with b = |beta| and
    q = |p3|. Independent of every phase-space angle.
    """
    if p3.order != 3:
        raise ValueError(f"expected an order-3 index, got order {p3.order}")
    if modes.beta == 0:
        raise ZeroDivisionError("third-order form undefined for beta = 0")
    x = abs(modes.beta) ** 2 * abs(p3.value) ** 2
    return math.exp(-4 * x * (1 + x + x * x)) * cat_factor(modes.j_sum())


@dataclass(frozen=True)
class AxisSpec:
    """Uniform half-open axis: start + (stop - start) * i / count, i < count."""

    name: str
    start: float = 0.0
    stop: float = TWO_PI
    count: int = 64

    def values(self):
        i = np.arange(self.count, dtype=float)
        return self.start + (self.stop - self.start) * i / self.count

    def position(self, index):
        return self.start + (self.stop - self.start) * index / self.count

    @property
    def step(self):
        return (self.stop - self.start) / self.count

    @property
    def periodic(self):
        return self.name in ANGULAR_AXES and math.isclose(self.stop - self.start, TWO_PI)


@dataclass(frozen=True)
class WignerGrid:
    axis1: AxisSpec
    axis2: AxisSpec
    fixed: dict
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.values.shape != (self.axis1.count, self.axis2.count):
            raise ValueError(f"values shape {self.values.shape} does not match axes")

    def metadata(self):
        meta = dict(self.fixed)
        for tag, ax in (("axis1", self.axis1), ("axis2", self.axis2)):
            for key, val in asdict(ax).items():
                meta[f"{tag}_{key}"] = val
        return meta

    def all_positive(self):
        return bool(np.all(self.values > 0))


def sample_grid(params, axes=("delta", "phi_x"), resolution=64, ranges=None, *,
                alpha_mod=0.8, phi_x=0.0, delta=0.0, m=0, l=0, k=None,
                evaluator="poincare", order=2, extra=None):
    """Evaluate the Wigner function on a dense two-axis grid.

    Axes are two distinct names from ``delta``, ``phi_x``, ``alpha_mod``; the
    remaining coordinate is held at its keyword value. Angular axes default
    to [0, 2*pi) and ``alpha_mod`` to [0, 1.2). ``evaluator`` is ``poincare``
    (unit-sphere form), ``closed`` (general form) or, with ``order=3``, the
    angle-free third-order form.
    """
    axes = tuple(axes)
    if len(axes) != 2 or axes[0] == axes[1] or not set(axes) <= set(_AXES):
        raise ValueError(f"invalid axis pair {axes!r}; choose two of {_AXES}")
    res = (resolution, resolution) if np.isscalar(resolution) else tuple(resolution)
    if min(res) < 8:
        raise ValueError(f"resolution must be >= 8 per axis, got {res}")
    ranges = dict(ranges or {})
    specs = []
    for name, count in zip(axes, res):
        lo, hi = ranges.get(name, (0.0, 1.2) if name == "alpha_mod" else (0.0, TWO_PI))
        specs.append(AxisSpec(name, float(lo), float(hi), int(count)))
    k = m if k is None else k

    coords = {"alpha_mod": alpha_mod, "phi_x": phi_x, "delta": delta}
    g1, g2 = np.meshgrid(specs[0].values(), specs[1].values(), indexing="ij")
    coords[axes[0]], coords[axes[1]] = g1, g2
    if order == 3:
        modes = params.modes(l)
        value = w3_closed(modes, PolarizationIndex(3, (modes.gamma / modes.beta) ** 3))
        values = np.full(g1.shape, value)
        evaluator = "w3_unnormalized"
    elif order != 2:
        raise ValueError(f"closed forms exist for order 2 and 3, not {order}")
    elif evaluator == "poincare":
        _check_unit(params)
        values = _w2_unit(coords["alpha_mod"], coords["phi_x"], coords["delta"], params, l, k)
    elif evaluator == "closed":
        values = _w2(coords["alpha_mod"], coords["phi_x"], coords["delta"], params)
    else:
        raise ValueError(f"unknown evaluator {evaluator!r}")
    values = np.broadcast_to(values, g1.shape).astype(float)

    fixed = {"order": order, "evaluator": evaluator, "m": m, "l": l, "k": k,
             "delta_HS": params.delta_hs(l)}
    fixed.update(asdict(params))
    fixed["gamma_mod"] = params.gamma_mod
    for name in _AXES:
        if name not in axes:
            fixed[name] = coords[name]
    if order == 3:
        fixed["normalization"] = "unnormalized"
    fixed.update(extra or {})
    return WignerGrid(specs[0], specs[1], fixed, values)


Peak = namedtuple("Peak", "axis1 axis2 height")


def _neighbours(i, j, shape, wrap):
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            a, b = i + di, j + dj
            if wrap[0]:
                a %= shape[0]
            if wrap[1]:
                b %= shape[1]
            if 0 <= a < shape[0] and 0 <= b < shape[1]:
                yield a, b


def _circular_centroid(indices, count, periodic):
    idx = np.asarray(indices, dtype=float)
    if not periodic:
        return float(idx.mean())
    ang = idx * TWO_PI / count
    c, s = np.cos(ang).mean(), np.sin(ang).mean()
    if math.hypot(c, s) < 1e-12:
        return float(idx.min())
    return (math.atan2(s, c) % TWO_PI) * count / TWO_PI


def _no_higher_neighbour(v, wrap):
    padded = np.pad(v, 1, mode="constant", constant_values=-np.inf)
    if wrap[0]:
        padded[0, 1:-1], padded[-1, 1:-1] = v[-1], v[0]
    if wrap[1]:
        padded[1:-1, 0], padded[1:-1, -1] = v[:, -1], v[:, 0]
    if wrap[0] and wrap[1]:
        padded[0, 0], padded[0, -1], padded[-1, 0], padded[-1, -1] = v[-1, -1], v[-1, 0], v[0, -1], v[0, 0]
    elif wrap[0]:
        padded[0, 0] = padded[0, -1] = padded[-1, 0] = padded[-1, -1] = -np.inf
    ok = np.ones(v.shape, dtype=bool)
    n1, n2 = v.shape
    for di in (0, 1, 2):
        for dj in (0, 1, 2):
            if di == 1 and dj == 1:
                continue
            ok &= padded[di:di + n1, dj:dj + n2] <= v
    return ok


def find_peaks(grid):
    """Strict local maxima under the 8-neighbourhood.

    Angular axes spanning a full period wrap around. Connected cells of equal
    height form one plateau, reported at its centroid; a plateau is a peak
    only if every cell bordering it is strictly lower (a constant grid has no
    peaks). Sorted by height, highest first.
    """
    v = np.asarray(grid.values)
    shape = v.shape
    wrap = (grid.axis1.periodic, grid.axis2.periodic)
    candidate = _no_higher_neighbour(v, wrap)
    seen = ~candidate
    peaks = []
    for i, j in zip(*np.nonzero(candidate)):
        if seen[i, j]:
            continue
        h = v[i, j]
        # flood the equal-height plateau containing (i, j)
        comp, stack, is_peak, bordered = [], [(i, j)], True, False
        seen[i, j] = True
        while stack:
            c = stack.pop()
            comp.append(c)
            for n in _neighbours(*c, shape, wrap):
                if v[n] == h:
                    if not candidate[n]:
                        is_peak = False
                    elif not seen[n]:
                        seen[n] = True
                        stack.append(n)
                else:
                    bordered = True
                    if v[n] > h:
                        is_peak = False
        if is_peak and bordered:
            ci = _circular_centroid([c[0] for c in comp], shape[0], wrap[0])
            cj = _circular_centroid([c[1] for c in comp], shape[1], wrap[1])
            peaks.append(Peak(grid.axis1.position(ci), grid.axis2.position(cj), float(h)))
    peaks.sort(key=lambda p: -p.height)
    return peaks


def _axis_distance(a, b, periodic, span):
    d = abs(a - b)
    return min(d, span - d) if periodic else d


def match_peaks(coarse, fine, grid):
    """True if the two peak lists pair up one-to-one within one coarse cell per axis."""
    if len(coarse) != len(fine):
        return False
    remaining = list(fine)
    for p in coarse:
        hit = None
        for q in remaining:
            d1 = _axis_distance(p.axis1, q.axis1, grid.axis1.periodic, grid.axis1.stop - grid.axis1.start)
            d2 = _axis_distance(p.axis2, q.axis2, grid.axis2.periodic, grid.axis2.stop - grid.axis2.start)
            if d1 <= grid.axis1.step * (1 + 1e-9) and d2 <= grid.axis2.step * (1 + 1e-9):
                hit = q
                break
        if hit is None:
            return False
        remaining.remove(hit)
    return True


def count_in_domain(peaks, axis1=(0.0, TWO_PI), axis2=(0.0, math.pi)):
    """Number of peaks inside the half-open box axis1 x axis2."""
    return sum(1 for p in peaks if axis1[0] <= p.axis1 < axis1[1] and axis2[0] <= p.axis2 < axis2[1])
