import itertools
import math

import numpy as np
import pytest

from csmm.corealg import HSeries, NPoly, npoly_eval
from csmm.diagrams import lmo_pair, phi, psi, wheel
from csmm.gaussmm import (
    free_energy,
    gauss_integrate,
    gauss_moment,
    gauss_moment_multicolor,
    harer_zagier,
    schur_expectation,
    wick_matchings,
)
from csmm.symfun import SymFunc, partitions_of, schur_to_powersum

N = NPoly.N()


def eigen_moment(lam, n, nodes=12):
    """<prod tr M^k> from the GUE eigenvalue density, exact for polynomials."""
    t, w = np.polynomial.hermite.hermgauss(nodes)
    x1 = math.sqrt(2.0) * t
    num = den = 0.0
    for idx in itertools.product(range(nodes), repeat=n):
        x = x1[list(idx)]
        weight = np.prod(w[list(idx)])
        vdm = np.prod([(x[i] - x[j]) ** 2 for i, j in itertools.combinations(range(n), 2)])
        val = np.prod([np.sum(x**k) for k in lam]) if lam else 1.0
        num += weight * vdm * val
        den += weight * vdm
    return num / den


def test_moment_examples():
    assert gauss_moment((2,)) == N**2
    assert gauss_moment((1, 1)) == N
    assert gauss_moment((4,)) == 2 * N**3 + N
    assert gauss_moment((2, 2)) == N**4 + 2 * N**2
    assert gauss_moment(()) == NPoly.constant(1)
    assert gauss_moment((3,)).is_zero()


def test_multicolor_examples():
    assert gauss_moment_multicolor([(2,), (1, 1)]) == N**3
    assert gauss_moment_multicolor([(), ()]) == NPoly.constant(1)
    assert gauss_moment_multicolor([(2,), (2,)]) == N**4


def test_wick_counts():
    for m in range(5):
        assert sum(1 for _ in wick_matchings(2 * m)) == math.prod(range(1, 2 * m, 2))
    assert list(wick_matchings(3)) == []


@pytest.mark.parametrize("n", [1, 2, 3])
def test_moments_against_eigenvalue_quadrature(n):
    for w in range(0, 9, 2):
        for lam in partitions_of(w):
            exact = float(npoly_eval(gauss_moment(lam), n))
            assert eigen_moment(tuple(lam), n) == pytest.approx(exact, rel=1e-9, abs=1e-9)


def test_moment_at_one_is_double_factorial():
    for w in range(0, 11, 2):
        for lam in partitions_of(w):
            assert npoly_eval(gauss_moment(lam), 1) == math.prod(range(1, w, 2))


def test_harer_zagier():
    assert harer_zagier(0) == N
    assert harer_zagier(1) == N**2
    assert harer_zagier(2) == 2 * N**3 + N
    assert harer_zagier(3) == 5 * N**4 + 10 * N**2
    for m in range(7):
        assert harer_zagier(m) == gauss_moment((2 * m,))


def test_schur_expectations():
    assert schur_expectation((2,)) == N * (N + 1) / 2
    assert schur_expectation((1, 1)) == -N * (N - 1) / 2
    assert schur_expectation((1,)).is_zero()
    assert gauss_integrate(schur_to_powersum((2,), order=0)).strip_hbar() == N * (N + 1) / 2


def test_integrate_wheel_image():
    image = phi(psi(wheel(2)))
    assert gauss_integrate(image) == HSeries.monomial(2, 2 * N**3 - 2 * N, 2)
    euler = gauss_integrate(image, convention="euler")
    assert euler.strip_hbar() == 2 * (N**3 - N)
    assert euler.same_terms(lmo_pair(psi(wheel(2)), 1))
    assert gauss_integrate(SymFunc.one(1, 3)) == HSeries.constant(1, 3)
    with pytest.raises(ValueError):
        gauss_integrate(image, convention="bogus")


def test_free_energy():
    assert free_energy(HSeries.constant(1, 4)).is_zero()
    z = HSeries({0: 1, 2: N}, 4)
    assert free_energy(z) == HSeries({2: N, 4: -N**2 / 2}, 4)
    with pytest.raises(ValueError):
        free_energy(HSeries.constant(2, 4))
