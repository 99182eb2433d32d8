"""Partitions, power sums, Schur functions and multi-colored symmetric functions.

A :class:`SymFunc` is a finite combination of power-sum monomials
``p_lambda_1 (x_1) ... p_lambda_r (x_r)`` in ``r`` colors, with coefficients
in :class:`~csmm.corealg.HSeries`.  ``p_0`` is the rank ``N`` and is folded
into the coefficient as soon as a monomial is built.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .corealg import HSeries, NPoly, scalar

__all__ = [
    "Partition",
    "SymFunc",
    "partitions_of",
    "sym_character",
    "z_factor",
    "schur_to_powersum",
    "powersum_to_schur",
    "symfunc_mul",
    "symfunc_scale",
    "symfunc_substitute_scale",
    "symfunc_exp",
    "DEFAULT_ORDER",
]

DEFAULT_ORDER = 8


class Partition(tuple):
    """Weakly decreasing tuple of positive integers.

    >>> Partition([1, 3, 1])
    Partition(3, 1, 1)
    >>> Partition([4, 1]).conjugate()
    Partition(2, 1, 1, 1)
    """

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        if any(p < 0 for p in parts):
            raise ValueError("partition parts must be nonnegative")
        return super().__new__(cls, sorted((p for p in parts if p), reverse=True))

    @property
    def weight(self) -> int:
        return sum(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > i) for i in range(self[0]))

    def multiplicities(self) -> Dict[int, int]:
        return dict(Counter(self))

    def z(self) -> int:
        """Centralizer order ``prod_j j^k_j k_j!`` of the cycle type."""
        return z_factor(self)

    def __repr__(self):
        return "Partition(" + ", ".join(map(str, self)) + ")"

    def to_json(self) -> List[int]:
        return list(self)


def partitions_of(n: int) -> List[Partition]:
    """All partitions of ``n`` in reverse lexicographic order.

    >>> [tuple(p) for p in partitions_of(4)]
    [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    """
    if n < 0:
        raise ValueError("cannot partition a negative integer")
    return [Partition(p) for p in _partitions(n, n)]


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> Tuple[Tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def z_factor(mu: Sequence[int]) -> int:
    out = 1
    for part, k in Counter(mu).items():
        out *= part**k * math.factorial(k)
    return out


def sym_character(lam: Sequence[int], mu: Sequence[int]) -> int:
    """Irreducible character ``chi^lam`` on the class of cycle type ``mu``.

    Murnaghan-Nakayama rule, removing border strips of length ``mu[0]``,
    ``mu[1]``, ... on the beta-set (abacus) of ``lam``.
    """
    lam, mu = Partition(lam), Partition(mu)
    if lam.weight != mu.weight:
        raise ValueError(f"weights differ: |{tuple(lam)}| != |{tuple(mu)}|")
    return _mn(tuple(lam), tuple(mu))


@lru_cache(maxsize=None)
def _mn(lam: Tuple[int, ...], mu: Tuple[int, ...]) -> int:
    if not mu:
        return 1
    k, rest = mu[0], mu[1:]
    length = len(lam)
    beta = [lam[i] + (length - 1 - i) for i in range(length)]
    beta_set = set(beta)
    total = 0
    for b in beta:
        target = b - k
        if target < 0 or target in beta_set:
            continue
        height = sum(1 for c in beta if target < c < b)
        new_beta = sorted((target if c == b else c for c in beta), reverse=True)
        new_lam = tuple(
            new_beta[i] - (length - 1 - i) for i in range(length)
        )
        new_lam = tuple(p for p in new_lam if p)
        total += (-1) ** height * _mn(new_lam, rest)
    return total


Key = Tuple[Partition, ...]


class SymFunc:
    """Finite combination of power-sum monomials in ``colors`` colors.

    ``terms`` maps an r-tuple of partitions to an :class:`HSeries`
    coefficient; all coefficients share the truncation ``order``.  Parts equal
    to zero (``p_0``) are converted to powers of ``N`` on construction.
    """

    __slots__ = ("colors", "order", "_terms")

    def __init__(self, colors: int, terms: Mapping[Sequence[Sequence[int]], object] = None,
                 order: int = DEFAULT_ORDER):
        if colors < 0:
            raise ValueError("number of colors must be nonnegative")
        self.colors = colors
        self.order = order
        clean: Dict[Key, HSeries] = {}
        N = NPoly.N()
        for raw_key, coeff in (terms or {}).items():
            if len(raw_key) != colors:
                raise ValueError(
                    f"monomial {raw_key!r} does not have {colors} color slots"
                )
            zeros = sum(1 for part in raw_key for p in part if p == 0)
            key = tuple(Partition(part) for part in raw_key)
            coeff = _as_series(coeff, order)
            if zeros:
                coeff = coeff * N**zeros
            if key in clean:
                clean[key] = clean[key] + coeff
            else:
                clean[key] = coeff
            if clean[key].is_zero():
                del clean[key]
        self._terms: Dict[Key, HSeries] = dict(sorted(clean.items(), key=_key_order))

    # constructors -----------------------------------------------------------------
    @classmethod
    def one(cls, colors: int = 1, order: int = DEFAULT_ORDER) -> "SymFunc":
        return cls(colors, {tuple(() for _ in range(colors)): 1}, order)

    @classmethod
    def monomial(cls, key: Sequence[Sequence[int]], coeff=1, order: int = DEFAULT_ORDER) -> "SymFunc":
        """``coeff * p_key``; a single partition is accepted for one color."""
        key = _normalize_key(key)
        return cls(len(key), {key: coeff}, order)

    @classmethod
    def zero(cls, colors: int = 1, order: int = DEFAULT_ORDER) -> "SymFunc":
        return cls(colors, {}, order)

    @property
    def terms(self) -> Dict[Key, HSeries]:
        return dict(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def coefficient(self, key) -> HSeries:
        key = _normalize_key(key)
        return self._terms.get(key, HSeries.zero(self.order))

    def is_zero(self) -> bool:
        return not self._terms

    # arithmetic ---------------------------------------------------------------------
    def _compatible(self, other: "SymFunc"):
        if self.colors != other.colors:
            raise ValueError(f"color count mismatch: {self.colors} vs {other.colors}")
        if self.order != other.order:
            raise ValueError(f"truncation mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        if not isinstance(other, SymFunc):
            return NotImplemented
        self._compatible(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return SymFunc(self.colors, out, self.order)

    def __neg__(self):
        return SymFunc(self.colors, {k: -c for k, c in self._terms.items()}, self.order)

    def __sub__(self, other):
        if not isinstance(other, SymFunc):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SymFunc):
            return symfunc_mul(self, other)
        if isinstance(other, (int, Fraction, NPoly, HSeries)) and not isinstance(other, bool):
            return symfunc_scale(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymFunc):
            return NotImplemented
        return (self.colors, self.order, self._terms) == (other.colors, other.order, other._terms)

    def __hash__(self):
        return hash((self.colors, self.order, tuple(self._terms.items())))

    def truncate(self, order: int) -> "SymFunc":
        return SymFunc(self.colors, {k: c.truncate(order) for k, c in self._terms.items()}, order)

    def __repr__(self):
        if not self._terms:
            return "SymFunc(0)"
        chunks = []
        for key, c in self._terms.items():
            mono = "*".join(
                f"p{list(part)}[{i}]" for i, part in enumerate(key) if part
            ) or "1"
            chunks.append(f"[{c}]*{mono}")
        return "SymFunc(" + " + ".join(chunks) + ")"

    def to_json(self) -> List[dict]:
        return [
            {"monomial": [p.to_json() for p in key], "coefficient": c.to_json()}
            for key, c in self._terms.items()
        ]


def _normalize_key(key) -> Tuple[Tuple[int, ...], ...]:
    key = tuple(key)
    if not key or all(isinstance(p, int) for p in key):
        return (tuple(key),)
    return tuple(tuple(part) for part in key)


def _key_order(item):
    # colors in order, partitions reverse-lex (larger first) within each color
    return tuple((p.weight, tuple(-x for x in p)) for p in item[0])


def _as_series(coeff, order: int) -> HSeries:
    if isinstance(coeff, HSeries):
        if coeff.order != order:
            raise ValueError(
                f"coefficient order {coeff.order} differs from SymFunc order {order}"
            )
        return coeff
    if isinstance(coeff, NPoly):
        return HSeries.constant(coeff, order)
    return HSeries.constant(scalar(coeff), order)


def symfunc_mul(a: SymFunc, b: SymFunc) -> SymFunc:
    a._compatible(b)
    out: Dict[Key, HSeries] = {}
    for ka, ca in a._terms.items():
        for kb, cb in b._terms.items():
            prod = ca * cb
            if prod.is_zero():
                continue
            key = tuple(Partition(pa + pb) for pa, pb in zip(ka, kb))
            out[key] = out[key] + prod if key in out else prod
    return SymFunc(a.colors, out, a.order)


def symfunc_scale(f: SymFunc, factor) -> SymFunc:
    """Multiply every coefficient by a scalar, ``NPoly`` or ``HSeries``."""
    return SymFunc(f.colors, {k: c * factor for k, c in f._terms.items()}, f.order)


def symfunc_substitute_scale(f: SymFunc, color: int, factor, squared: bool = False) -> SymFunc:
    """Rescale the variables of one color: ``p_lambda -> factor**|lambda| p_lambda``.

    With ``squared=True`` the argument is ``factor**2`` and every monomial of
    that color must have even degree; this lets irrational square-root
    rescalings act exactly on even functions.
    """
    if not 0 <= color < f.colors:
        raise ValueError(f"unknown color {color} (have {f.colors})")
    factor = scalar(factor)
    out = {}
    for key, c in f._terms.items():
        deg = key[color].weight
        if squared:
            if deg % 2:
                raise ValueError(
                    f"odd-degree monomial {tuple(key[color])} under a square-root rescaling"
                )
            out[key] = c * factor ** (deg // 2)
        else:
            out[key] = c * factor**deg
    return SymFunc(f.colors, out, f.order)


def symfunc_exp(f: SymFunc) -> SymFunc:
    """``exp(f)`` truncated at the order of ``f``; ``f`` must vanish at hbar^0."""
    for key, c in f._terms.items():
        if c.valuation < 1:
            raise ValueError("exp needs every coefficient to start at hbar^1 or later")
    result = SymFunc.one(f.colors, f.order)
    power = SymFunc.one(f.colors, f.order)
    for k in range(1, f.order + 1):
        power = symfunc_scale(symfunc_mul(power, f), Fraction(1, k))
        if power.is_zero():
            break
        result = result + power
    return result


def powersum_to_schur(mu: Sequence[int]) -> Dict[Partition, Fraction]:
    """``p_mu = sum_lam chi^lam(mu) s_lam``."""
    mu = Partition(mu)
    out = {}
    for lam in partitions_of(mu.weight):
        c = sym_character(lam, mu)
        if c:
            out[lam] = Fraction(c)
    return out


def schur_to_powersum(lam: Sequence[int], order: int = DEFAULT_ORDER) -> SymFunc:
    """``s_lam = sum_mu chi^lam(mu) / z_mu p_mu`` as a one-color SymFunc."""
    lam = Partition(lam)
    terms = {}
    for mu in partitions_of(lam.weight):
        c = sym_character(lam, mu)
        if c:
            terms[(mu,)] = Fraction(c, z_factor(mu))
    return SymFunc(1, terms, order)
