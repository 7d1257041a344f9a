"""Numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    tail: float = 1e-12      # Poisson mass allowed beyond the top Fock level
    norm: float = 1e-10
    herm: float = 1e-10
    unit: float = 1e-8
    disp: float = 1e-8
    imag: float = 1e-9       # relative bound on Im Tr[rho T]
    converge: float = 1e-8   # relative Cauchy bound for truncation scans
    min_dim: int = 16


TOL = Tolerances()


class TruncationError(ValueError):
    """The retained Fock space is too small for the requested amplitude."""

    def __init__(self, message, required_dim=None):
        super().__init__(message)
        self.required_dim = required_dim
