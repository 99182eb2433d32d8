"""Dedekind sums, the Rademacher function and Seifert surgery data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

__all__ = [
    "SL2Z",
    "SeifertData",
    "dedekind_sum",
    "dedekind_sum_cot",
    "rademacher_phi",
    "seifert_data",
    "linking_signature",
    "parse_pairs",
]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class SL2Z:
    """Integer matrix ``[[p, r], [q, s]]`` with ``ps - qr = 1``."""

    p: int
    r: int
    q: int
    s: int

    def __post_init__(self):
        if self.p * self.s - self.q * self.r != 1:
            raise ValueError(f"determinant of {self.rows} is not 1")

    @property
    def rows(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        return ((self.p, self.r), (self.q, self.s))

    @classmethod
    def from_rows(cls, rows) -> "SL2Z":
        (p, r), (q, s) = rows
        return cls(int(p), int(r), int(q), int(s))

    def __matmul__(self, other: "SL2Z") -> "SL2Z":
        return SL2Z(
            self.p * other.p + self.r * other.q,
            self.p * other.r + self.r * other.s,
            self.q * other.p + self.s * other.q,
            self.q * other.r + self.s * other.s,
        )

    def __neg__(self) -> "SL2Z":
        return SL2Z(-self.p, -self.r, -self.q, -self.s)


def _sawtooth(p: int, q: int) -> Fraction:
    # s(p,q) = 1/(4q^2) sum_{n=1}^{q-1} (2n - q)(2(np mod q) - q)
    if q == 1:
        return Fraction(0)
    total = 0
    chunk = 1 << 18
    for lo in range(1, q, chunk):
        n = np.arange(lo, min(q, lo + chunk), dtype=np.int64)
        r = (n * (p % q)) % q
        total += int(np.dot(2 * n - q, 2 * r - q))
    return Fraction(total, 4 * q * q)


def _reciprocity(p: int, q: int) -> Fraction:
    # Euclid-style descent on s(p,q) + s(q,p) = -1/4 + (p/q + q/p + 1/(pq))/12
    sign = 1
    total = Fraction(0)
    while True:
        p %= q
        if p == 0 or q == 1:
            return total
        if p == 1:
            return total + sign * Fraction((q - 1) * (q - 2), 12 * q)
        total += sign * (Fraction(-1, 4) + (Fraction(p, q) + Fraction(q, p) + Fraction(1, p * q)) / 12)
        sign = -sign
        p, q = q, p


def dedekind_sum(p: int, q: int, method: str = "reciprocity") -> Fraction:
    """Exact Dedekind sum ``s(p, q) = sum_{n=1}^{q-1} ((n/q)) ((np/q))``.

    ``method`` is ``"reciprocity"`` (Euclid descent, fast) or ``"sawtooth"``
    (the direct O(q) sum).  Negative ``p`` uses ``s(-p, q) = -s(p, q)``.

    >>> dedekind_sum(1, 3)
    Fraction(1, 18)
    """
    p, q = int(p), int(q)
    if q < 1:
        raise ValueError("Dedekind sum needs q >= 1")
    if math.gcd(p, q) != 1:
        raise ValueError(f"gcd({p}, {q}) != 1")
    if method == "sawtooth":
        return _sawtooth(p % q, q)
    if method == "reciprocity":
        return _reciprocity(p % q, q)
    raise ValueError(f"unknown method {method!r}")


def dedekind_sum_cot(p: int, q: int, dps: int = 40):
    """Cotangent form ``1/(4q) sum cot(pi n/q) cot(pi n p/q)`` in mpmath."""
    import mpmath

    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for n in range(1, q):
            total += mpmath.cot(mpmath.pi * n / q) * mpmath.cot(mpmath.pi * n * p / q)
        return total / (4 * q)


def rademacher_phi(U) -> Fraction:
    """``(p + s)/q - 12 sign(q) s(p, |q|)`` for ``U = [[p, r], [q, s]]``, ``q != 0``."""
    if not isinstance(U, SL2Z):
        U = SL2Z.from_rows(U)
    if U.q == 0:
        raise ValueError("the Rademacher function is only defined here for q != 0")
    return Fraction(U.p + U.s, U.q) - 12 * _sign(U.q) * dedekind_sum(U.p, abs(U.q))


@dataclass(frozen=True)
class SeifertData:
    """Surgery data ``p_j/q_j`` of a Seifert sphere and derived invariants."""

    pairs: Tuple[Tuple[int, int], ...]
    P: int = field(init=False)
    H: int = field(init=False)
    e: Fraction = field(init=False)
    phi: Fraction = field(init=False)

    def __post_init__(self):
        pairs = tuple((int(p), int(q)) for p, q in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise ValueError("at least one fiber is required")
        for p, q in pairs:
            if p < 1:
                raise ValueError(f"p_j must be positive, got {p}")
            if math.gcd(p, q) != 1:
                raise ValueError(f"p={p} and q={q} are not coprime")
        for (a, _), (b, _) in _pairs_of(pairs):
            if math.gcd(a, b) != 1:
                raise ValueError(f"p values {a} and {b} are not coprime")
        P = math.prod(p for p, _ in pairs)
        H = P * sum(Fraction(q, p) for p, q in pairs)
        if H == 0:
            raise ValueError("H = 0: not a rational homology sphere")
        e = H / P
        phi = e - 3 * _sign(e) - 12 * sum(dedekind_sum(q, p) for p, q in pairs)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "H", int(H))
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "phi", phi)

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def ps(self) -> List[int]:
        return [p for p, _ in self.pairs]

    def to_json(self) -> dict:
        from .corealg import scalar_to_str

        return {
            "pairs": [[p, q] for p, q in self.pairs],
            "P": self.P,
            "H": self.H,
            "e": scalar_to_str(self.e),
            "phi": scalar_to_str(self.phi),
        }


def _pairs_of(items):
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            yield items[i], items[j]


def seifert_data(pairs: Sequence[Tuple[int, int]]) -> SeifertData:
    return SeifertData(tuple(pairs))


def parse_pairs(text: str) -> List[Tuple[int, int]]:
    """Parse ``"2/1,3/1,5/-4"`` into ``[(2, 1), (3, 1), (5, -4)]``."""
    out = []
    for chunk in text.split(","):
        p, q = chunk.strip().split("/")
        out.append((int(p), int(q)))
    return out


def linking_signature(matrix: Sequence[Sequence[int]]) -> int:
    """Signature of a symmetric integer matrix by exact congruence diagonalization."""
    A = [[Fraction(x) for x in row] for row in matrix]
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix must be square")
    for i in range(n):
        for j in range(i):
            if A[i][j] != A[j][i]:
                raise ValueError("matrix must be symmetric")
    pos = neg = 0
    while A:
        n = len(A)
        k = next((i for i in range(n) if A[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if A[i][j] != 0), None)
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            # row/col i += row/col j makes A[i][i] = 2 A[i][j] != 0
            for c in range(n):
                A[i][c] += A[j][c]
            for r in range(n):
                A[r][i] += A[r][j]
            k = i
        d = A[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        rest = [r for r in range(n) if r != k]
        A = [[A[r][c] - A[r][k] * A[k][c] / d for c in rest] for r in rest]
    return pos - neg
