"""Gaussian Hermitian matrix integrals by Wick contraction.

The measure is ``exp(-tr M^2 / 2) dM`` so the propagator is
``<M_ij M_kl> = delta_il delta_jk``.  Moments of products of traces are
computed by enumerating pairings of half-edges and counting index loops;
no surfaces are built here (``csmm.diagrams`` does that independently).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple

from .corealg import HSeries, NPoly, series_log
from .symfun import Partition, SymFunc, schur_to_powersum

__all__ = [
    "wick_matchings",
    "gauss_moment",
    "gauss_moment_multicolor",
    "gauss_integrate",
    "schur_expectation",
    "harer_zagier",
    "free_energy",
    "CONVENTIONS",
]

#: ``linear``: p-monomials integrate to <p_lambda>, hbar passes through.
#: ``euler``: additionally shifts hbar by -|lambda|/2, the closed-surface grading.
CONVENTIONS = ("linear", "euler")


def wick_matchings(n: int) -> Iterator[List[int]]:
    """Lazily yield every pairing of ``range(n)`` as an involution list."""
    if n % 2:
        return
    pair = [-1] * n

    def rec():
        try:
            first = pair.index(-1)
        except ValueError:
            yield list(pair)
            return
        for j in range(first + 1, n):
            if pair[j] == -1:
                pair[first], pair[j] = j, first
                yield from rec()
                pair[first] = pair[j] = -1

    yield from rec()


def _trace_successor(lam: Sequence[int]) -> List[int]:
    succ = []
    start = 0
    for j in lam:
        succ += [start + (i + 1) % j for i in range(j)]
        start += j
    return succ


def _loops(succ: Sequence[int], pair: Sequence[int]) -> int:
    # index of half-edge h is identified with that of succ[pair[h]]
    seen = [False] * len(succ)
    loops = 0
    for h in range(len(succ)):
        if seen[h]:
            continue
        loops += 1
        while not seen[h]:
            seen[h] = True
            h = succ[pair[h]]
    return loops


def gauss_moment(lam: Sequence[int]) -> NPoly:
    """``< prod_j tr M^lam_j >`` as a polynomial in ``N``.

    >>> gauss_moment((4,))
    NPoly(2*N^3 + N)
    """
    zeros = sum(1 for j in lam if j == 0)  # tr M^0 = N
    return _moment(tuple(Partition(lam))) * NPoly.N() ** zeros


@lru_cache(maxsize=None)
def _moment(lam: Tuple[int, ...]) -> NPoly:
    n = sum(lam)
    if n % 2:
        return NPoly()
    succ = _trace_successor(lam)
    counts = {}
    for pair in wick_matchings(n):
        k = _loops(succ, pair)
        counts[k] = counts.get(k, 0) + 1
    return NPoly(counts)


def gauss_moment_multicolor(mus: Sequence[Sequence[int]]) -> NPoly:
    out = NPoly.constant(1)
    for mu in mus:
        out = out * gauss_moment(mu)
    return out


def gauss_integrate(f: SymFunc, convention: str = "linear") -> HSeries:
    """Integrate every color of ``f`` against its own Gaussian matrix.

    With ``convention="euler"`` a monomial of total weight ``2m`` is also
    multiplied by ``hbar^-m``, which turns the Vassiliev grading of a
    marked surface into ``-chi`` of the glued-up surface.  That shift is
    exact for untruncated inputs; truncated tails are not tracked through it.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    total = HSeries.zero(f.order)
    for key, coeff in f:
        moment = gauss_moment_multicolor(key)
        if moment.is_zero():
            continue
        term = coeff * moment
        if convention == "euler":
            weight = sum(p.weight for p in key)
            term = HSeries({e - weight // 2: c for e, c in term.terms.items()}, f.order)
        total = total + term
    return total


def schur_expectation(lam: Sequence[int]) -> NPoly:
    """``< s_lam(M) >`` by expanding into power sums."""
    return gauss_integrate(schur_to_powersum(lam, order=0)).strip_hbar()


def harer_zagier(m: int) -> NPoly:
    """``< tr M^2m >`` from the Harer-Zagier three-term recursion.

    ``(k+1) C_k = 2(2k-1) N C_{k-1} + (k-1)(2k-1)(2k-3) C_{k-2}``.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    N = NPoly.N()
    c = [N, N * N]
    for k in range(2, m + 1):
        nxt = (c[k - 1] * N * (2 * (2 * k - 1)) + c[k - 2] * ((k - 1) * (2 * k - 1) * (2 * k - 3))) / (k + 1)
        c.append(nxt)
    return c[m]


def free_energy(z: HSeries) -> HSeries:
    """Connected part ``log z``; ``z`` must start with exactly 1."""
    if z[0] != 1 or z.valuation < 0:
        raise ValueError("free energy needs a partition function with leading term 1")
    return series_log(z)
