"""Exact scalars, polynomials in the formal rank ``N`` and truncated hbar-series.

Every exact quantity produced by the package is an :class:`NPoly` (a
polynomial in ``N`` over the rationals) or an :class:`HSeries` (a truncated
series in ``hbar`` whose coefficients are :class:`NPoly`).  Scalars are plain
:class:`fractions.Fraction` values.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Dict, Mapping, Optional, Tuple, Union

__all__ = [
    "ExactScalar",
    "NPoly",
    "HSeries",
    "MIN_HBAR_EXPONENT",
    "TruncationError",
    "scalar",
    "scalar_to_str",
    "scalar_from_str",
    "npoly_eval",
    "series_mul",
    "series_log",
    "series_exp",
]

ExactScalar = Fraction

#: lowest hbar power allowed in any series (the closed-surface floor hbar^-2)
MIN_HBAR_EXPONENT = -2


class TruncationError(ValueError):
    """Raised when two series with different truncation orders are combined."""


def scalar(x) -> Fraction:
    """Coerce an int, Fraction or ``"num/den"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return scalar_from_str(x)
    raise TypeError(f"cannot interpret {x!r} as an exact scalar")


def scalar_to_str(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def scalar_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


_Coercible = Union[int, Fraction, "NPoly"]


class NPoly:
    """Polynomial in the formal symbol ``N`` with rational coefficients.

    Immutable and hashable.  Zero coefficients are never stored.

    >>> N = NPoly.N()
    >>> p = 2 * (N**3 - N)
    >>> p
    NPoly(2*N^3 - 2*N)
    >>> npoly_eval(p, 2)
    Fraction(12, 1)
    """

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Optional[Mapping[int, object]] = None):
        clean: Dict[int, Fraction] = {}
        if coeffs:
            for deg, c in coeffs.items():
                deg = int(deg)
                if deg < 0:
                    raise ValueError("NPoly degrees must be nonnegative")
                c = scalar(c)
                if c:
                    clean[deg] = clean.get(deg, Fraction(0)) + c
                    if not clean[deg]:
                        del clean[deg]
        self._coeffs: Tuple[Tuple[int, Fraction], ...] = tuple(sorted(clean.items()))
        self._hash = None

    # constructors -----------------------------------------------------------------
    @classmethod
    def N(cls) -> "NPoly":
        return cls({1: 1})

    @classmethod
    def constant(cls, c) -> "NPoly":
        return cls({0: c})

    @classmethod
    def coerce(cls, x: _Coercible) -> "NPoly":
        if isinstance(x, NPoly):
            return x
        return cls.constant(x)

    # accessors ----------------------------------------------------------------------
    @property
    def coefficients(self) -> Dict[int, Fraction]:
        return dict(self._coeffs)

    def __getitem__(self, deg: int) -> Fraction:
        for d, c in self._coeffs:
            if d == deg:
                return c
        return Fraction(0)

    @property
    def degree(self) -> int:
        """Degree in ``N``; ``-1`` for the zero polynomial."""
        return self._coeffs[-1][0] if self._coeffs else -1

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_constant(self) -> bool:
        return self.degree <= 0

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    # arithmetic ---------------------------------------------------------------------
    def __add__(self, other):
        try:
            other = NPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._coeffs)
        for d, c in other._coeffs:
            out[d] = out.get(d, Fraction(0)) + c
        return NPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return NPoly({d: -c for d, c in self._coeffs})

    def __sub__(self, other):
        try:
            other = NPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return NPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = Fraction(other)
            return NPoly({d: c * v for d, v in self._coeffs})
        if not isinstance(other, NPoly):
            return NotImplemented
        out: Dict[int, Fraction] = {}
        for d1, c1 in self._coeffs:
            for d2, c2 in other._coeffs:
                out[d1 + d2] = out.get(d1 + d2, Fraction(0)) + c1 * c2
        return NPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("NPoly powers must be nonnegative integers")
        result = NPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, NPoly):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._coeffs == NPoly.constant(other)._coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("NPoly", self._coeffs))
        return self._hash

    def __call__(self, n):
        return npoly_eval(self, n)

    # presentation -------------------------------------------------------------------
    def __str__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for d, c in reversed(self._coeffs):
            mag = abs(c)
            if d == 0:
                body = scalar_to_str(mag)
            else:
                mono = "N" if d == 1 else f"N^{d}"
                body = mono if mag == 1 else f"{scalar_to_str(mag)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"NPoly({self})"

    def to_json(self) -> Dict[str, str]:
        return {str(d): scalar_to_str(c) for d, c in self._coeffs}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "NPoly":
        return cls({int(d): scalar_from_str(c) for d, c in data.items()})


def npoly_eval(p: NPoly, n) -> Fraction:
    """Exact value of ``p`` at ``N = n`` (Horner)."""
    n = scalar(n)
    acc = Fraction(0)
    if p.is_zero():
        return acc
    coeffs = p.coefficients
    for d in range(p.degree, -1, -1):
        acc = acc * n + coeffs.get(d, 0)
    return acc


class HSeries:
    """Series in ``hbar`` with :class:`NPoly` coefficients, known up to ``order``.

    Terms with exponent above ``order`` are unknown and are never stored.
    Exponents below ``MIN_HBAR_EXPONENT`` are rejected.

    Products only keep the order when both factors have nonnegative
    valuation; a factor with negative powers lowers the order of the result
    by that amount, so nothing below the returned order is ever wrong.
    """

    __slots__ = ("order", "_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[int, _Coercible]] = None, order: int = 0):
        if not isinstance(order, int):
            raise TypeError("truncation order must be an integer")
        if order < MIN_HBAR_EXPONENT:
            raise ValueError(f"truncation order {order} is below hbar^{MIN_HBAR_EXPONENT}")
        clean: Dict[int, NPoly] = {}
        for e, c in (terms or {}).items():
            e = int(e)
            c = NPoly.coerce(c)
            if c.is_zero():
                continue
            if e < MIN_HBAR_EXPONENT:
                raise ValueError(
                    f"hbar exponent {e} below the allowed floor {MIN_HBAR_EXPONENT}"
                )
            if e > order:
                continue
            clean[e] = clean[e] + c if e in clean else c
            if clean[e].is_zero():
                del clean[e]
        self.order = order
        self._terms: Tuple[Tuple[int, NPoly], ...] = tuple(sorted(clean.items()))
        self._hash = None

    @classmethod
    def constant(cls, c: _Coercible, order: int) -> "HSeries":
        return cls({0: c}, order)

    @classmethod
    def monomial(cls, exponent: int, coeff: _Coercible, order: int) -> "HSeries":
        return cls({exponent: coeff}, order)

    @classmethod
    def zero(cls, order: int) -> "HSeries":
        return cls({}, order)

    @property
    def terms(self) -> Dict[int, NPoly]:
        return dict(self._terms)

    def __getitem__(self, exponent: int) -> NPoly:
        for e, c in self._terms:
            if e == exponent:
                return c
        return NPoly()

    @property
    def valuation(self) -> float:
        return self._terms[0][0] if self._terms else math.inf

    def is_zero(self) -> bool:
        return not self._terms

    def truncate(self, order: int) -> "HSeries":
        if order > self.order:
            raise TruncationError(f"cannot raise truncation order {self.order} to {order}")
        return HSeries(dict(self._terms), order)

    def _check(self, other: "HSeries"):
        if self.order != other.order:
            raise TruncationError(
                f"mismatched truncation orders {self.order} and {other.order}"
            )

    def _lift(self, other) -> "HSeries":
        if isinstance(other, HSeries):
            self._check(other)
            return other
        return HSeries.constant(NPoly.coerce(other), self.order)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms:
            out[e] = out[e] + c if e in out else c
        return HSeries(out, self.order)

    __radd__ = __add__

    def __neg__(self):
        return HSeries({e: -c for e, c in self._terms}, self.order)

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, NPoly)) and not isinstance(other, bool):
            return HSeries({e: c * other for e, c in self._terms}, self.order)
        if not isinstance(other, HSeries):
            return NotImplemented
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("HSeries powers must be nonnegative integers")
        result = HSeries.constant(1, self.order)
        for _ in range(k):
            result = result * self
        return result

    def shift(self, k: int) -> "HSeries":
        """Multiply by ``hbar**k`` (the order moves with it)."""
        return HSeries({e + k: c for e, c in self._terms}, self.order + k)

    def __eq__(self, other):
        if isinstance(other, HSeries):
            return self.order == other.order and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("HSeries", self.order, self._terms))
        return self._hash

    def same_terms(self, other: "HSeries") -> bool:
        """Equality of the stored coefficients up to the smaller order."""
        k = min(self.order, other.order)
        return self.truncate(k)._terms == other.truncate(k)._terms

    def strip_hbar(self) -> NPoly:
        """Sum of all coefficients, i.e. the series at ``hbar = 1``."""
        total = NPoly()
        for _, c in self._terms:
            total = total + c
        return total

    def evaluate(self, n, hbar) -> complex:
        """Floating-point value at ``N = n`` and numeric ``hbar``."""
        total = 0.0
        for e, c in self._terms:
            total += float(npoly_eval(c, n)) * hbar**e
        return total

    def __str__(self):
        if not self._terms:
            return f"O(hbar^{self.order + 1})"
        chunks = []
        for e, c in self._terms:
            mono = "" if e == 0 else ("hbar" if e == 1 else f"hbar^{e}")
            coeff = str(c)
            if mono:
                chunks.append(f"({coeff})*{mono}")
            else:
                chunks.append(f"({coeff})")
        return " + ".join(chunks) + f" + O(hbar^{self.order + 1})"

    def __repr__(self):
        return f"HSeries({self})"

    def to_json(self) -> Dict[str, Dict[str, str]]:
        return {str(e): c.to_json() for e, c in self._terms}

    @classmethod
    def from_json(cls, data: Mapping[str, Mapping[str, str]], order: int) -> "HSeries":
        return cls({int(e): NPoly.from_json(c) for e, c in data.items()}, order)


def series_mul(a: HSeries, b: HSeries) -> HSeries:
    a._check(b)
    order = a.order
    if a.is_zero() or b.is_zero():
        return HSeries.zero(order)
    # a negative valuation in one factor exposes unknown terms of the other
    order = order + min(0, a.valuation) + min(0, b.valuation)
    order = max(order, MIN_HBAR_EXPONENT)
    out: Dict[int, NPoly] = {}
    for e1, c1 in a._terms:
        for e2, c2 in b._terms:
            e = e1 + e2
            if e > order:
                continue
            out[e] = out[e] + c1 * c2 if e in out else c1 * c2
    return HSeries(out, order)


def series_log(a: HSeries) -> HSeries:
    """Logarithm of a series whose constant term is exactly 1."""
    if a.valuation < 0:
        raise ValueError("log of a series with negative hbar powers is undefined")
    if a[0] != 1:
        raise ValueError("log requires the hbar^0 coefficient to be exactly 1")
    x = a - 1
    result = HSeries.zero(a.order)
    power = HSeries.constant(1, a.order)
    for k in range(1, a.order + 1):
        power = power * x
        if power.is_zero():
            break
        term = power / k
        result = result + term if k % 2 else result - term
    return result


def series_exp(a: HSeries) -> HSeries:
    """Exponential of a series without constant or negative-power terms."""
    if a.valuation < 1:
        if a.valuation == 0:
            raise ValueError("exp requires a vanishing hbar^0 coefficient")
        raise ValueError("exp of a series with negative hbar powers is undefined")
    result = HSeries.constant(1, a.order)
    power = HSeries.constant(1, a.order)
    for k in range(1, a.order + 1):
        power = power * a / k
        if power.is_zero():
            break
        result = result + power
    return result
