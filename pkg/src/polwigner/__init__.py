"""Higher-order polarization-Wigner functions on truncated Fock spaces.

Modules: ``fock`` (truncated single-mode algebra), ``kernel`` (s-parameterized
transiting operators), ``states`` (entangled coherent states, Stokes
parameters), ``wigner`` (closed forms, grids, peaks), ``oracle`` (brute-force
traces) and ``cli``.
"""

from .config import TOL, Tolerances, TruncationError
from .fock import ComplexAmplitude, coherent, default_dim, displacement, ladder
from .kernel import (PolarizationIndex, kernel_bimodal, kernel_higher, kernel_polarized,
                     kernel_single)
from .oracle import ComparisonReport, compare_closed_form, convergence_scan, w_bruteforce
from .states import ModePair, StokesVector, even_ecs, odd_ecs, stokes_closed, stokes_oracle
from .wigner import (PhaseSpacePoint, WignerGrid, WignerParams, find_peaks, sample_grid,
                     w2_closed, w2_poincare, w3_closed)

__all__ = [
    "TOL", "Tolerances", "TruncationError", "ComplexAmplitude", "coherent", "default_dim",
    "displacement", "ladder", "PolarizationIndex", "kernel_bimodal", "kernel_higher",
    "kernel_polarized", "kernel_single", "ComparisonReport", "compare_closed_form",
    "convergence_scan", "w_bruteforce", "ModePair", "StokesVector", "even_ecs", "odd_ecs",
    "stokes_closed", "stokes_oracle", "PhaseSpacePoint", "WignerGrid", "WignerParams",
    "find_peaks", "sample_grid", "w2_closed", "w2_poincare", "w3_closed",
]
__version__ = "0.1.0"
