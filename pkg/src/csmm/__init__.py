"""Exact and numeric tools for Gaussian Hermitian matrix integrals and 3-manifold invariants.

Submodules: :mod:`corealg` (exact N-polynomials and hbar series),
:mod:`symfun` (power sums and Schur functions), :mod:`diagrams` (Jacobi
diagrams, marked surfaces, weight systems), :mod:`gaussmm` (Gaussian matrix
integrals), :mod:`arithgeo` (Dedekind sums, Seifert data), :mod:`seifert`
(Seifert-sphere invariants, quadrature, Monte Carlo), :mod:`wrt2` (SU(2)
lens-space invariants) and :mod:`cli`.
"""

from .arithgeo import SL2Z, SeifertData, dedekind_sum, rademacher_phi, seifert_data
from .corealg import HSeries, NPoly
from .diagrams import JacobiDiagram, MarkedSurface, lmo_pair, phi, psi, theta, wheel
from .gaussmm import gauss_integrate, gauss_moment, schur_expectation
from .seifert import lmo_seifert_partition, seifert_integral_numeric
from .symfun import Partition, SymFunc
from .wrt2 import wrt_lens_su2

__version__ = "0.1.0"

__all__ = [
    "SL2Z", "SeifertData", "dedekind_sum", "rademacher_phi", "seifert_data",
    "HSeries", "NPoly",
    "JacobiDiagram", "MarkedSurface", "lmo_pair", "phi", "psi", "theta", "wheel",
    "gauss_integrate", "gauss_moment", "schur_expectation",
    "lmo_seifert_partition", "seifert_integral_numeric",
    "Partition", "SymFunc",
    "wrt_lens_su2",
]
