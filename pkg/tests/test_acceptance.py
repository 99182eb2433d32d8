"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py``.
"""

import itertools
import math
import random
import sys
import time
from fractions import Fraction
from math import gcd
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import mpmath  # noqa: E402

from _acceptance_log import record  # noqa: E402
from _corpus import closed_corpus  # noqa: E402

from csmm import cli  # noqa: E402
from csmm.arithgeo import SL2Z, dedekind_sum, dedekind_sum_cot, seifert_data  # noqa: E402
from csmm.corealg import HSeries, NPoly, npoly_eval  # noqa: E402
from csmm.diagrams import glN_bruteforce, lmo_pair, phi, psi, wheel  # noqa: E402
from csmm.gaussmm import (  # noqa: E402
    gauss_integrate,
    gauss_moment,
    gauss_moment_multicolor,
    harer_zagier,
    schur_expectation,
)
from csmm.seifert import (  # noqa: E402
    gue_sample_many,
    lmo_seifert_ratio,
    seifert_integral_numeric,
    seifert_potential,
)
from csmm.symfun import SymFunc, partitions_of  # noqa: E402
from csmm.wrt2 import complete_sl2z, u_matrix_su2, wrt_lens_su2  # noqa: E402

N = NPoly.N()


class Check:
    """Collects sub-check failures and wall time for one criterion."""

    def __init__(self, number, title, limit=None):
        self.number, self.title, self.limit = number, title, limit
        self.failures = []
        self.count = 0

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def expect(self, ok, what):
        self.count += 1
        if not ok:
            self.failures.append(what)

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if self.limit is not None and elapsed > self.limit:
            self.failures.append(f"runtime {elapsed:.1f}s over {self.limit}s")
        detail = f"{self.count} checks, {elapsed:.2f}s"
        if self.failures:
            detail += "; first failure: " + str(self.failures[0])
        record(self.number, self.title, not self.failures, detail)
        assert not self.failures, self.failures
        return False


def test_criterion_1_worked_examples():
    with Check(1, "worked examples (moments, Schur, pairing, wheel image)", limit=1.0) as c:
        c.expect(gauss_moment((2,)) == N**2, "<p2>")
        c.expect(gauss_moment((1, 1)) == N, "<p1^2>")
        c.expect(lmo_pair(psi(wheel(2)), 1).strip_hbar() == 2 * (N**3 - N), "pairing of Psi(w2)")
        c.expect(schur_expectation((2,)) == N * (N + 1) / 2, "<s2>")
        c.expect(schur_expectation((1, 1)) == -N * (N - 1) / 2, "<s11>")
        expected = SymFunc(1, {((2,),): HSeries.monomial(2, 2 * N, 2),
                               ((1, 1),): HSeries.monomial(2, -2, 2)}, 2)
        c.expect(phi(psi(wheel(2))) == expected, "Phi Psi(w2)")


def _surface_value(key, m, colors):
    return lmo_pair(key, m, colors=colors, grading="normalized")[0]


def test_criterion_2_surface_pairing_equals_wick():
    with Check(2, "surface pairing = Wick integration (|lambda| <= 8; 2 colors <= 6)", limit=120) as c:
        for w in range(0, 9):
            for lam in partitions_of(w):
                value = _surface_value(lam, w // 2, ("x",))
                c.expect(value == gauss_moment(lam), f"one color {tuple(lam)}")
        for total in range(0, 7):
            for w1 in range(total + 1):
                for lam, mu in itertools.product(partitions_of(w1), partitions_of(total - w1)):
                    key = (lam, mu)
                    value = _surface_value(key, {"x": lam.weight // 2, "y": mu.weight // 2}, ("x", "y"))
                    c.expect(value == gauss_moment_multicolor(key), f"two colors {key}")


def test_criterion_3_weight_system_oracle():
    corpus = closed_corpus()
    with Check(3, f"Phi Psi = gl_N contraction on {len(corpus)} closed diagrams, N = 1, 2, 3", limit=300) as c:
        for name, d in corpus:
            value = gauss_integrate(phi(psi(d))).strip_hbar()
            for n in (1, 2, 3):
                brute = glN_bruteforce(d, n)
                c.expect(npoly_eval(value, n) == brute, f"{name} at N={n}")


def test_criterion_4_harer_zagier():
    with Check(4, "Harer-Zagier recursion, m <= 6") as c:
        for m in range(7):
            c.expect(gauss_moment((2 * m,)) == harer_zagier(m), f"m={m}")


def _random_coprime_pairs(rng, count, top):
    out = []
    while len(out) < count:
        p, q = rng.randint(1, top), rng.randint(1, top)
        if gcd(p, q) == 1:
            out.append((p, q))
    return out


def test_criterion_5_dedekind():
    rng = random.Random(0)
    with Check(5, "Dedekind reciprocity (200 pairs <= 10^6) and cotangent form (50 pairs)") as c:
        for p, q in _random_coprime_pairs(rng, 200, 10**6):
            spq = dedekind_sum(p, q, method="sawtooth")
            sqp = dedekind_sum(q, p, method="sawtooth")
            rhs = Fraction(-1, 4) + (Fraction(p, q) + Fraction(q, p) + Fraction(1, p * q)) / 12
            c.expect(spq + sqp == rhs, f"reciprocity ({p}, {q})")
            c.expect(dedekind_sum(p, q) == spq, f"fast path ({p}, {q})")
        for p, q in _random_coprime_pairs(rng, 50, 5000):
            exact = dedekind_sum(p, q, method="sawtooth")
            err = abs(dedekind_sum_cot(p, q) - mpmath.mpf(exact.numerator) / exact.denominator)
            c.expect(err < 1e-12, f"cotangent ({p}, {q}) off by {float(err):.3g}")


def _series_error(d, hbar):
    num = seifert_integral_numeric(d, 2, hbar, rtol=1e-14)
    series = lmo_seifert_ratio(d, 4).evaluate(2, hbar)
    return abs(series - num.value) / abs(num.value)


def test_criterion_6_series_vs_quadrature():
    spheres = {"L(2,1)": seifert_data([(2, 1)]), "Sigma(2,3,5)": seifert_data([(2, 1), (3, 1), (5, -4)])}
    with Check(6, "order-4 series vs quadrature at N = 2, hbar^6 error scaling", limit=300) as c:
        notes = []
        for name, d in spheres.items():
            e05, e025, e02 = (_series_error(d, h) for h in (0.05, 0.025, 0.02))
            ratio = e05 / e025
            notes.append(f"{name}: {e05:.2e}, {e02:.2e}, ratio {ratio:.1f}")
            c.expect(e05 < 1e-4, f"{name} at 0.05: {e05:.3g}")
            c.expect(e02 < 1e-6, f"{name} at 0.02: {e02:.3g}")
            c.expect(abs(ratio - 64) <= 0.2 * 64, f"{name} ratio {ratio:.3g}")
        print("; ".join(notes))


def test_criterion_7_monte_carlo():
    with Check(7, "GUE Monte Carlo within 3 stderr, |lambda| <= 4, N <= 3, 10^6 samples, seed 0", limit=120) as c:
        lams = [lam for w in range(1, 5) for lam in partitions_of(w)]
        for n in (1, 2, 3):
            estimates = gue_sample_many(n, lams, 10**6, seed=0)
            for lam, (mean, err) in zip(lams, estimates):
                exact = float(npoly_eval(gauss_moment(lam), n))
                c.expect(abs(mean - exact) <= 3 * err, f"N={n} {tuple(lam)}: {mean:.5f} vs {exact} (se {err:.2g})")


def test_criterion_8_su2_lens_suite():
    tol = 1e-9
    with Check(8, "SU(2) lens spaces: L(1,1), q -> q+p, completions, unitarity") as c:
        for k in range(1, 11):
            l = k + 2
            z = complex(wrt_lens_su2(1, 1, k).value)
            c.expect(abs(z - math.sqrt(2 / l) * math.sin(math.pi / l)) < tol, f"L(1,1) k={k}")
        for p in range(1, 6):
            for q in range(-6, 7):
                if q == 0 or q + p == 0 or gcd(p, q) != 1:
                    continue
                base = complete_sl2z(p, q)
                for k in range(1, 9):
                    ref = wrt_lens_su2(p, q, k).abs
                    c.expect(abs(wrt_lens_su2(p, q + p, k).abs - ref) < tol, f"q->q+p ({p},{q}) k={k}")
                    for t in (-2, -1, 1, 2):
                        alt = SL2Z(p, base.r + t * p, q, base.s + t * q)
                        c.expect(abs(wrt_lens_su2(p, q, k, completion=alt).abs - ref) < tol,
                                 f"completion t={t} ({p},{q}) k={k}")
        U = u_matrix_su2(SL2Z(0, -1, 1, 0), 5)
        c.expect(mpmath.mnorm(U * U.H - mpmath.eye(4), 1) < tol, "unitarity at l=5")


def test_criterion_9_grading_audit():
    suite = [[(2, 1)], [(3, 1)], [(2, 1), (3, 1), (5, -4)], [(2, 1), (3, 1), (5, 1)],
             [(2, -1), (3, 1), (7, 1)], [(3, 2), (4, -1), (5, 3)], [(5, 2), (7, -3)]]
    with Check(9, "grading audit of Seifert potentials and selftest gate") as c:
        for pairs in suite:
            violations = seifert_potential(seifert_data(pairs), 8).grading_violations()
            c.expect(not violations, f"{pairs}: {violations[:1]}")
        code, payload, _ = cli.run(["selftest"])
        c.expect(code == 0 and payload["result"]["passed"], "selftest")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    raise SystemExit(1 if failed else 0)
