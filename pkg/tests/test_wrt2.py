import cmath
import math

import mpmath
import pytest

from csmm.arithgeo import SL2Z
from csmm.wrt2 import (
    GroupDataSU2,
    complete_sl2z,
    s_matrix_su2,
    u_matrix_element_su2,
    u_matrix_su2,
    wrt_lens_su2,
)


def test_completion_examples():
    assert complete_sl2z(2, 1).rows == ((2, 1), (1, 1))
    assert complete_sl2z(1, 1).rows == ((1, 0), (1, 1))
    for p in range(1, 9):
        for q in range(-9, 10):
            if q and math.gcd(p, q) == 1:
                U = complete_sl2z(p, q)
                assert (U.p, U.q) == (p, q)
    with pytest.raises(ValueError):
        complete_sl2z(2, 4)
    with pytest.raises(ValueError):
        complete_sl2z(1, 0)


def test_group_data():
    g = GroupDataSU2(3)
    assert g.l == 5 and list(g.chamber) == [1, 2, 3, 4]
    with pytest.raises(ValueError):
        GroupDataSU2(0)


@pytest.mark.parametrize("l", [3, 5, 7])
def test_s_type_matrix_is_unitary(l):
    U = u_matrix_su2(SL2Z(0, -1, 1, 0), l)
    prod = U * U.H
    assert mpmath.mnorm(prod - mpmath.eye(l - 1), 1) < 1e-20
    assert abs(U[0, 0]) == pytest.approx(float(s_matrix_su2(1, 1, l)), abs=1e-15)


def test_matrix_element_errors():
    with pytest.raises(ValueError):
        u_matrix_element_su2(SL2Z(1, 1, 0, 1), 1, 1, 5)
    with pytest.raises(ValueError):
        u_matrix_element_su2(SL2Z(0, -1, 1, 0), 0, 1, 5)


def test_homomorphism_up_to_phase():
    mats = [SL2Z(0, -1, 1, 0), SL2Z(1, 0, 1, 1), SL2Z(2, 1, 1, 1), SL2Z(3, 1, 2, 1)]
    l = 5
    for A in mats:
        for B in mats:
            C = A @ B
            if C.q == 0:
                continue
            P = u_matrix_su2(A, l) * u_matrix_su2(B, l)
            UC = u_matrix_su2(C, l)
            for i in range(l - 1):
                for j in range(l - 1):
                    assert abs(P[i, j]) == pytest.approx(abs(UC[i, j]), abs=1e-12)


@pytest.mark.parametrize("k", range(1, 11))
def test_lens_11(k):
    l = k + 2
    z = wrt_lens_su2(1, 1, k)
    assert complex(z.value) == pytest.approx(math.sqrt(2 / l) * math.sin(math.pi / l), abs=1e-12)


def rt_formula(p, k):
    # |sum_a S_1a^2 theta_a^p| with twists theta_a = exp(2 pi i (a^2 - 1) / (4 (k + 2)))
    l = k + 2
    return abs(sum(
        (math.sqrt(2 / l) * math.sin(math.pi * a / l)) ** 2 * cmath.exp(2j * math.pi * p * (a * a - 1) / (4 * l))
        for a in range(1, l)
    ))


@pytest.mark.parametrize("p", range(1, 6))
def test_lens_p1_against_twist_formula(p):
    for k in range(1, 9):
        assert wrt_lens_su2(p, 1, k).abs == pytest.approx(rt_formula(p, k), abs=1e-12)


def test_rp3_vanishes_at_odd_level():
    for k in (1, 3, 5, 7):
        assert wrt_lens_su2(2, 1, k).abs < 1e-20


def test_result_json():
    out = wrt_lens_su2(3, 1, 2).to_json()
    assert set(out) == {"re", "im", "abs", "framing_phase"}
    assert out["abs"] == pytest.approx(math.hypot(out["re"], out["im"]))


def test_precision_is_respected():
    lo = wrt_lens_su2(5, 2, 6, precision=53).value
    hi = wrt_lens_su2(5, 2, 6, precision=200).value
    assert abs(lo - hi) < 1e-13


def test_completion_must_match():
    with pytest.raises(ValueError):
        wrt_lens_su2(2, 1, 3, completion=SL2Z(1, 0, 1, 1))
    alt = SL2Z(2, -1, 1, 0)
    assert wrt_lens_su2(2, 1, 4, completion=alt).abs == pytest.approx(wrt_lens_su2(2, 1, 4).abs, abs=1e-12)


def test_homeomorphic_lens_spaces_agree():
    # L(p, q) = L(p, q') when q' = +-q^(+-1) mod p
    for p in range(2, 8):
        for q in range(1, p):
            if math.gcd(p, q) != 1:
                continue
            qi = pow(q, -1, p)
            for q2 in {(-q) % p, qi, (-qi) % p}:
                for k in range(1, 7):
                    assert wrt_lens_su2(p, q2, k).abs == pytest.approx(wrt_lens_su2(p, q, k).abs, abs=1e-12)


@pytest.mark.parametrize("q", [1, 2, 3, -1])
def test_surgery_on_unit_fraction_gives_sphere(q):
    for k in range(1, 8):
        l = k + 2
        assert wrt_lens_su2(1, q, k).abs == pytest.approx(float(s_matrix_su2(1, 1, l)), abs=1e-12)
