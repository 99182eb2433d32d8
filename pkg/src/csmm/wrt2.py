"""SU(2) Witten-Reshetikhin-Turaev invariant of lens spaces by surgery.

Weights are integers ``a`` in the fundamental chamber ``1..l-1`` (``rho = 1``)
with the simple root of length squared 2, so a weight ``a`` has square
``a^2/2``.  Arithmetic is done in mpmath at a configurable binary precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional

import mpmath

from .arithgeo import SL2Z, linking_signature, rademacher_phi

__all__ = [
    "GroupDataSU2",
    "LensSurgery",
    "complete_sl2z",
    "u_matrix_element_su2",
    "u_matrix_su2",
    "s_matrix_su2",
    "wrt_lens_su2",
    "WRTResult",
    "DEFAULT_PRECISION",
]

DEFAULT_PRECISION = 96


@dataclass(frozen=True)
class GroupDataSU2:
    k: int
    rank: int = 1
    dim: int = 3
    dual_coxeter: int = 2
    positive_roots: int = 1
    weyl_order: int = 2
    lattice_volume_ratio: float = 0.5

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("level must be at least 1")

    @property
    def l(self) -> int:
        return self.k + self.dual_coxeter

    @property
    def chamber(self) -> range:
        return range(1, self.l)


def complete_sl2z(p: int, q: int) -> SL2Z:
    """``[[p, r], [q, s]]`` with ``ps - qr = 1`` and ``|r|`` minimal (ties to r > 0)."""
    if q == 0:
        raise ValueError("q must be nonzero")
    g, x, y = _egcd(p, q)
    if abs(g) != 1:
        raise ValueError(f"gcd({p}, {q}) != 1")
    # p*x + q*y = g  ->  s = x*g, r = -y*g
    s, r = x * g, -y * g
    if p != 0:
        t = _nearest(-r, p)
        candidates = [(r + u * p, s + u * q) for u in (t - 1, t, t + 1)]
        r, s = min(candidates, key=lambda rs: (abs(rs[0]), -rs[0]))
    return SL2Z(p, r, q, s)


def _nearest(num: int, den: int) -> int:
    return round(num / den)


def _egcd(a: int, b: int):
    if b == 0:
        return (a, 1, 0)
    g, x, y = _egcd(b, a % b)
    return (g, y, x - (a // b) * y)


@dataclass(frozen=True)
class LensSurgery:
    p: int
    q: int

    def __post_init__(self):
        if math.gcd(self.p, self.q) != 1:
            raise ValueError("p and q must be coprime")

    @property
    def matrix(self) -> SL2Z:
        return complete_sl2z(self.p, self.q)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def u_matrix_element_su2(U: SL2Z, alpha: int, beta: int, l: int,
                         precision: int = DEFAULT_PRECISION) -> mpmath.mpc:
    """Element ``U_{alpha beta}`` of the SL(2,Z) action on level ``l - 2`` weights."""
    if not isinstance(U, SL2Z):
        U = SL2Z.from_rows(U)
    if U.q == 0:
        raise ValueError("matrix elements are given here only for q != 0")
    if l < 3:
        raise ValueError("l = k + 2 must be at least 3")
    if not (1 <= alpha < l and 1 <= beta < l):
        raise ValueError("weights must lie in the chamber 1..l-1")
    p, q, s = U.p, U.q, U.s
    with mpmath.workprec(precision):
        pi = mpmath.pi
        total = mpmath.mpc(0)
        for n in range(abs(q)):
            for w in (1, -1):
                v = 2 * l * n + w * beta  # l*n + w(beta) in units of the fundamental weight
                phase = p * alpha * alpha - 2 * alpha * v + s * v * v
                total += w * mpmath.expj(pi * phase / (2 * l * q))
        pre = (1j * _sign(q)) / mpmath.sqrt(2 * l * abs(q))
        pre *= mpmath.expj(-pi * 3 * rademacher_phi(U) / 12)
        return +(pre * total)


def u_matrix_su2(U: SL2Z, l: int, precision: int = DEFAULT_PRECISION) -> mpmath.matrix:
    m = mpmath.matrix(l - 1, l - 1)
    for a in range(1, l):
        for b in range(1, l):
            m[a - 1, b - 1] = u_matrix_element_su2(U, a, b, l, precision)
    return m


def s_matrix_su2(a: int, b: int, l: int, precision: int = DEFAULT_PRECISION):
    with mpmath.workprec(precision):
        return mpmath.sqrt(mpmath.mpf(2) / l) * mpmath.sin(mpmath.pi * a * b / l)


@dataclass(frozen=True)
class WRTResult:
    value: mpmath.mpc
    framing_phase: float

    @property
    def re(self) -> float:
        return float(self.value.real)

    @property
    def im(self) -> float:
        return float(self.value.imag)

    @property
    def abs(self) -> float:
        return float(abs(self.value))

    def to_json(self) -> Dict[str, float]:
        return {"re": self.re, "im": self.im, "abs": self.abs, "framing_phase": self.framing_phase}


def wrt_lens_su2(p: int, q: int, k: int, precision: int = DEFAULT_PRECISION,
                 completion: Optional[SL2Z] = None) -> WRTResult:
    """SU(2) invariant of the ``p/q`` surgery on the unknot.

    The unknot colored by ``alpha`` is normalized as ``S_{rho alpha}``, i.e.
    ``S_{rho alpha}/S_{rho rho}`` times ``Z(S^3) = S_{rho rho}``.
    """
    if p < 1 or k < 1:
        raise ValueError("need p >= 1 and k >= 1")
    group = GroupDataSU2(k)
    l = group.l
    U = completion if completion is not None else complete_sl2z(p, q)
    if (U.p, U.q) != (p, q):
        raise ValueError("completion does not have first column (p, q)")
    sigma = linking_signature([[_sign(p * q)]])
    with mpmath.workprec(precision):
        total = mpmath.mpc(0)
        for a in group.chamber:
            total += s_matrix_su2(1, a, l, precision) * u_matrix_element_su2(U, a, 1, l, precision)
        phase = mpmath.pi * k * group.dim / (12 * l) * (rademacher_phi(U) - 3 * sigma)
        value = mpmath.expj(phase) * total
    return WRTResult(value, float(phase))
