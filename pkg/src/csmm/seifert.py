"""U(N) LMO invariant of Seifert spheres as a Gaussian matrix integral.

The exact side builds the potential from the Omega element (wheels weighted
by the coefficients of ``1/2 log(sinh(x/2)/(x/2))``), integrates it with
:func:`csmm.gaussmm.gauss_integrate`, and multiplies by the theta
prefactor.  The numeric side integrates the eigenvalue form of the same
integral by tensor Gauss-Hermite quadrature, and a GUE sampler checks the
Gaussian moments by Monte Carlo.

Conventions: the potential carries ``hbar^deg1`` from ``phi`` and the
Gaussian integral passes ``hbar`` through (``convention="linear"``), so the
matrix-integral ratio is an even series in ``hbar``.  Its eigenvalue form is
``E[ K(hbar x / sqrt(e)) ]`` over GUE eigenvalues ``x`` with

    K(y) = prod_{i<j} sinhc(y_ij/2)^(2-n) prod_l sinhc(y_ij/(2 p_l)),

``sinhc(z) = sinh(z)/z``.  Numerics run at real ``hbar`` and need ``e > 0``.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .arithgeo import SeifertData
from .corealg import HSeries, series_exp
from .diagrams import phi, psi, wheel
from .gaussmm import free_energy, gauss_integrate
from .symfun import (
    Partition,
    SymFunc,
    symfunc_exp,
    symfunc_scale,
    symfunc_substitute_scale,
)

__all__ = [
    "OmegaSeries",
    "SeifertPotential",
    "ThetaPrefactor",
    "NumericResult",
    "QuadratureError",
    "omega_coeffs",
    "wheel_image",
    "seifert_potential",
    "stringp_violations",
    "theta_prefactor",
    "lmo_seifert_ratio",
    "lmo_seifert_partition",
    "lmo_seifert_free_energy",
    "seifert_kernel",
    "seifert_integral_numeric",
    "gue_sample_moments",
    "gue_sample_many",
]


class QuadratureError(RuntimeError):
    """Quadrature did not reach the requested tolerance within its node budget."""


# ---------------------------------------------------------------------------
# Omega element


def _series_log1p(a: List[Fraction]) -> List[Fraction]:
    # a[0] == 1; returns log(a) to the same length
    n = len(a)
    x = [Fraction(0)] + a[1:]
    out = [Fraction(0)] * n
    power = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for k in range(1, n):
        power = [sum(power[i] * x[j - i] for i in range(j + 1)) for j in range(n)]
        if not any(power):
            break
        sign = 1 if k % 2 else -1
        out = [o + sign * c / k for o, c in zip(out, power)]
    return out


@dataclass(frozen=True)
class OmegaSeries:
    """Coefficients ``b_2m`` of ``1/2 log(sinh(x/2)/(x/2)) = sum b_2m x^2m``."""

    coefficients: Tuple[Fraction, ...]

    @property
    def max_m(self) -> int:
        return len(self.coefficients)

    def b(self, m: int) -> Fraction:
        if m == 0:
            return Fraction(0)
        return self.coefficients[m - 1]


def omega_coeffs(max_m: int) -> OmegaSeries:
    """``b_2, ..., b_{2 max_m}`` by composing the series of sinh with log.

    >>> omega_coeffs(2).coefficients
    (Fraction(1, 48), Fraction(-1, 5760))
    """
    if max_m < 1:
        raise ValueError("max_m must be at least 1")
    length = 2 * max_m + 1
    # sinh(x/2)/(x/2) = sum_k (x/2)^{2k} / (2k+1)!
    sinh_ratio = [Fraction(0)] * length
    for k in range(max_m + 1):
        sinh_ratio[2 * k] = Fraction(1, 4**k * math.factorial(2 * k + 1))
    logs = _series_log1p(sinh_ratio)
    return OmegaSeries(tuple(logs[2 * m] / 2 for m in range(1, max_m + 1)))


@lru_cache(maxsize=None)
def wheel_image(n: int, order: int) -> SymFunc:
    """``phi(psi(w_n))`` with truncation ``order``."""
    return phi(psi(wheel(n)), ("x",), order=order)


# ---------------------------------------------------------------------------
# potential


def stringp_violations(f: SymFunc) -> List[str]:
    """Monomials of ``f`` outside the connected string space.

    A monomial ``p_lambda`` (``lambda`` nonempty) may only carry powers
    ``hbar^k`` with ``k >= |lambda| - 2``; a constant term is not allowed.
    """
    bad = []
    for key, coeff in f:
        weight = sum(p.weight for p in key)
        if weight == 0:
            bad.append("constant term present")
            continue
        low = coeff.valuation
        if low < weight - 2:
            bad.append(f"monomial {[list(p) for p in key]} has hbar^{low} < hbar^{weight - 2}")
    return bad


@dataclass(frozen=True)
class SeifertPotential:
    """The exponentiated matrix-model potential of a Seifert sphere."""

    base: SeifertData
    order: int
    log_symfunc: SymFunc
    symfunc: SymFunc

    def grading_violations(self) -> List[str]:
        return stringp_violations(self.log_symfunc)


def _log_omega(scale_sq: Fraction, order: int, omega: OmegaSeries) -> SymFunc:
    out = SymFunc.zero(1, order)
    for m in range(1, order // 2 + 1):
        image = symfunc_substitute_scale(wheel_image(2 * m, order), 0, scale_sq, squared=True)
        out = out + symfunc_scale(image, omega.b(m))
    return out


def seifert_potential(d: SeifertData, order: int) -> SeifertPotential:
    """Image of ``Omega_{x/sqrt e}^(2-n) prod_l Omega_{x/(sqrt e p_l)}``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    if d.e == 0:
        raise ValueError("e = 0")
    omega = omega_coeffs(max(1, order // 2))
    log_f = symfunc_scale(_log_omega(1 / d.e, order, omega), 2 - d.n)
    for p in d.ps:
        log_f = log_f + _log_omega(1 / (d.e * p * p), order, omega)
    pot = symfunc_exp(log_f) if not log_f.is_zero() else SymFunc.one(1, order)
    return SeifertPotential(d, order, log_f, pot)


@dataclass(frozen=True)
class ThetaPrefactor:
    """``exp(theta/48 * phi)`` with ``theta`` the closed-``w_2`` value."""

    theta: HSeries
    phi: Fraction

    def series(self) -> HSeries:
        exponent = self.theta * (self.phi / 48)
        if exponent.is_zero():
            return HSeries.constant(1, self.theta.order)
        return series_exp(exponent)


def theta_prefactor(d: SeifertData, order: int) -> ThetaPrefactor:
    # theta: the w_2 image integrated in the pipeline's own convention
    theta = gauss_integrate(wheel_image(2, order)) if order >= 2 else HSeries.zero(order)
    return ThetaPrefactor(theta, d.phi)


def lmo_seifert_ratio(d: SeifertData, order: int) -> HSeries:
    """Matrix-integral part ``Z / prefactor``; starts with 1."""
    return gauss_integrate(seifert_potential(d, order).symfunc)


def lmo_seifert_partition(d: SeifertData, order: int) -> HSeries:
    """``Z^U`` of the Seifert sphere to ``hbar^order``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    return theta_prefactor(d, order).series() * lmo_seifert_ratio(d, order)


def lmo_seifert_free_energy(d: SeifertData, order: int) -> HSeries:
    return free_energy(lmo_seifert_partition(d, order))


# ---------------------------------------------------------------------------
# eigenvalue quadrature


def _sinhc(z):
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-3
    zz = z * z
    safe = np.where(small, 1.0, z)
    return np.where(small, 1 + zz / 6 + zz * zz / 120, np.sinh(safe) / safe)


def seifert_kernel(d: SeifertData) -> Callable[[np.ndarray], np.ndarray]:
    """``K(y)`` for points ``y`` of shape ``(..., N)``; the Vandermonde is cancelled."""
    n = d.n
    ps = d.ps

    def kernel(y):
        y = np.asarray(y, dtype=float)
        N = y.shape[-1]
        out = np.ones(y.shape[:-1])
        for i, j in itertools.combinations(range(N), 2):
            u = y[..., i] - y[..., j]
            term = _sinhc(u / 2) ** (2 - n)
            for p in ps:
                term = term * _sinhc(u / (2 * p))
            out = out * term
        return out

    return kernel


@dataclass(frozen=True)
class NumericResult:
    value: float
    error_estimate: float
    nodes: int

    def to_json(self) -> dict:
        return {"value": self.value, "error_estimate": self.error_estimate, "nodes": self.nodes}


def _vandermonde_sq(x):
    N = x.shape[-1]
    out = np.ones(x.shape[:-1])
    for i, j in itertools.combinations(range(N), 2):
        out = out * (x[..., i] - x[..., j]) ** 2
    return out


def _gh_ratio(N, k, scale, kernel, shift):
    t, w = np.polynomial.hermite.hermgauss(k)
    x1 = math.sqrt(2.0) * t  # nodes for weight exp(-x^2/2)
    num = 0.0
    den = 0.0
    # chunk over the first coordinate
    rest = np.array(list(itertools.product(range(k), repeat=N - 1)), dtype=int).reshape(-1, N - 1)
    rest_x = x1[rest]
    rest_w = np.prod(w[rest], axis=1) if N > 1 else np.ones(1)
    for i0 in range(k):
        x = np.concatenate([np.full((len(rest_x), 1), x1[i0]), rest_x], axis=1)
        weight = w[i0] * rest_w
        v2 = _vandermonde_sq(x) * weight
        y = scale * x
        integrand = kernel(y)
        if shift is not None:
            integrand = integrand * np.exp(-(y @ shift))
        num += float(np.sum(v2 * integrand))
        den += float(np.sum(v2))
    return num / den


def seifert_integral_numeric(
    d: SeifertData,
    N: int,
    hbar: float,
    t_shift: Optional[Sequence[float]] = None,
    rtol: float = 1e-10,
    start_nodes: int = 8,
    max_points: int = 20_000_000,
    kernel: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> NumericResult:
    """Normalized eigenvalue integral matching :func:`lmo_seifert_ratio`.

    Computes ``E[K(hbar x / sqrt(e)) exp(-t.y)]`` over GUE eigenvalues ``x``
    (weight ``Delta(x)^2 exp(-x^2/2)``) by tensor Gauss-Hermite quadrature,
    doubling the node count until two successive values agree to ``rtol``.
    ``kernel`` replaces ``K``; ``t_shift`` is an opaque linear shift.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if N == 1 and kernel is None and t_shift is None:
        return NumericResult(1.0, 0.0, 1)
    if d.e <= 0:
        raise ValueError("real-coupling quadrature needs e > 0")
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    scale = hbar / math.sqrt(d.e)
    if d.n < 2 and scale**2 > 10:
        raise ValueError("n < 2 with large coupling: the kernel grows too fast to integrate reliably")
    kern = kernel or seifert_kernel(d)
    shift = None if t_shift is None else np.asarray(t_shift, dtype=float)
    if shift is not None and shift.shape != (N,):
        raise ValueError("t_shift must have one entry per eigenvalue")
    k = start_nodes
    prev = _gh_ratio(N, k, scale, kern, shift)
    while True:
        k *= 2
        if k**N > max_points:
            raise QuadratureError(
                f"no convergence to rtol={rtol} within {max_points} points (last k={k // 2})"
            )
        cur = _gh_ratio(N, k, scale, kern, shift)
        err = abs(cur - prev)
        if err <= rtol * abs(cur):
            return NumericResult(cur, err, k)
        prev = cur


# ---------------------------------------------------------------------------
# GUE Monte Carlo


def _default_threads(threads: Optional[int]) -> int:
    if threads:
        return max(1, int(threads))
    env = os.environ.get("CSMM_THREADS")
    return max(1, int(env)) if env else 1


def _gue_batch(N: int, size: int, seed_seq: np.random.SeedSequence, lams):
    rng = np.random.default_rng(seed_seq)
    g = rng.standard_normal((size, N, N)) + 1j * rng.standard_normal((size, N, N))
    # diagonal ~ N(0,1), off-diagonal Re/Im ~ N(0,1/2): density exp(-tr M^2/2)
    m = (g + np.conj(np.swapaxes(g, 1, 2))) / 2
    top = max((max(lam) for lam in lams if lam), default=0)
    traces = {}
    power = None
    for j in range(1, top + 1):
        power = m if power is None else power @ m
        traces[j] = np.real(np.trace(power, axis1=1, axis2=2))
    out = []
    for lam in lams:
        vals = np.ones(size)
        for part in lam:
            vals = vals * traces[part]
        out.append((float(vals.sum()), float((vals * vals).sum())))
    return out


def gue_sample_many(N: int, lams: Sequence[Sequence[int]], samples: int, seed: int = 0,
                    batch: int = 100_000, threads: Optional[int] = None) -> List[Tuple[float, float]]:
    """``(estimate, stderr)`` of ``<p_lambda>`` for several ``lambda`` on shared samples."""
    if samples < 1000:
        raise ValueError("at least 10^3 samples are required")
    lams = [tuple(Partition(lam)) for lam in lams]
    sizes = [batch] * (samples // batch) + ([samples % batch] if samples % batch else [])
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, seqs))
    workers = _default_threads(threads)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda job: _gue_batch(N, job[0], job[1], lams), jobs))
    else:
        results = [_gue_batch(N, size, seq, lams) for size, seq in jobs]
    out = []
    for idx in range(len(lams)):
        s = sum(r[idx][0] for r in results)
        s2 = sum(r[idx][1] for r in results)
        mean = s / samples
        var = max(s2 / samples - mean * mean, 0.0) * samples / (samples - 1)
        out.append((mean, math.sqrt(var / samples)))
    return out


def gue_sample_moments(N: int, lam: Sequence[int], samples: int, seed: int = 0,
                       batch: int = 100_000, threads: Optional[int] = None) -> Tuple[float, float]:
    """Monte Carlo ``<p_lambda>`` under ``exp(-tr M^2/2) dM``; reproducible per seed."""
    return gue_sample_many(N, [lam], samples, seed, batch, threads)[0]
