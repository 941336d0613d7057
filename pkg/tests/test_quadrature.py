import math

import numpy as np
import pytest

from aos.errors import InvalidParameterError, ToleranceNotMetError
from aos.quadrature import (
    TailCertificate,
    gauss_hermite_rule,
    kahan_sum,
    log_axis_rule,
    sum_with_tail,
    tanh_sinh_rule,
)

SQRT_PI = math.sqrt(math.pi)


class TestGaussHermite:
    def test_one_point_rule(self):
        # zeroth moment forces node 0, weight sqrt(pi)
        r = gauss_hermite_rule(1)
        assert r.nodes.tolist() == [0.0]
        assert abs(r.weights[0] - SQRT_PI) < 1e-15

    def test_two_point_rule(self):
        # nodes +-1/sqrt(2), weights sqrt(pi)/2; cross-check the x^2 moment
        r = gauss_hermite_rule(2)
        np.testing.assert_allclose(r.nodes, [-math.sqrt(0.5), math.sqrt(0.5)],
                                   atol=1e-14)
        np.testing.assert_allclose(r.weights, [SQRT_PI / 2] * 2, atol=1e-14)
        assert abs(r.apply(lambda x: x ** 2).real - SQRT_PI / 2) < 1e-14

    @pytest.mark.parametrize("n", [1, 2, 5, 16, 64, 200])
    def test_zeroth_moment(self, n):
        r = gauss_hermite_rule(n)
        assert abs(r.weights.sum() - SQRT_PI) < 1e-13

    def test_nodes_increasing_weights_positive(self):
        r = gauss_hermite_rule(48)
        assert np.all(np.diff(r.nodes) > 0)
        assert np.all(r.weights > 0)

    def test_polynomial_exactness(self):
        # exact Gaussian moments: int x^{2k} e^{-x^2} = Gamma(k + 1/2)
        rng = np.random.default_rng(7)
        n = 14
        r = gauss_hermite_rule(n)
        moments = [math.gamma(k + 0.5) if k >= 0 else 0.0 for k in range(n)]
        for _ in range(20):
            deg = int(rng.integers(0, 2 * n - 1))
            coefs = rng.normal(size=deg + 1)
            exact = sum(c * moments[k // 2] for k, c in enumerate(coefs)
                        if k % 2 == 0)
            got = r.apply(lambda x: np.polynomial.polynomial.polyval(x, coefs))
            assert abs(got.real - exact) <= 1e-11 * max(1.0, abs(exact))

    def test_range_validation(self):
        with pytest.raises(InvalidParameterError):
            gauss_hermite_rule(0)
        with pytest.raises(InvalidParameterError):
            gauss_hermite_rule(513)

    def test_deterministic(self):
        a = gauss_hermite_rule(33)
        b = gauss_hermite_rule.__wrapped__(33)
        assert a.nodes.tobytes() == b.nodes.tobytes()
        assert a.weights.tobytes() == b.weights.tobytes()


class TestTanhSinh:
    def test_constant(self):
        r = tanh_sinh_rule(6)
        assert abs(r.weights.sum() - 1.0) < 1e-12

    def test_inverse_sqrt_singularity(self):
        r = tanh_sinh_rule(8)
        got = r.apply(lambda x: x ** -0.5).real
        assert abs(got - 2.0) < 1e-10

    def test_beta_moment(self):
        r = tanh_sinh_rule(7)
        got = r.apply(lambda x: x * (1 - x) ** 2).real
        assert abs(got - 1.0 / 12) < 1e-12

    def test_refinement_monotone_past_level_4(self):
        # successive refinements contract for the catalog-style integrands
        for fn in (lambda x: x ** 0.5 * (1 - x) ** 1.5,
                   lambda x: np.exp(1j * 3 * np.log(x)) * x ** 0.5):
            vals = [tanh_sinh_rule(lv).apply(fn) for lv in range(4, 10)]
            diffs = [abs(a - b) for a, b in zip(vals, vals[1:])]
            eps = 1e-16
            assert all(d2 <= d1 + eps for d1, d2 in zip(diffs, diffs[1:]))

    def test_level_validation(self):
        with pytest.raises(InvalidParameterError):
            tanh_sinh_rule(0)
        with pytest.raises(InvalidParameterError):
            tanh_sinh_rule(13)


class TestLogAxis:
    def test_gamma_one(self):
        r = log_axis_rule(1.0)
        assert abs(r.weights.sum() - 1.0) < 1e-12

    def test_gamma_three(self):
        r = log_axis_rule(3.0)
        assert abs(r.weights.sum() - 2.0) < 1e-12

    def test_complex_gamma_cross_check(self):
        from aos.specfun import gamma_complex
        r = log_axis_rule(3.0)
        got = r.apply(lambda x: np.exp(2j * np.log(x)))
        expect = gamma_complex(3 + 2j)
        assert abs(got - expect) < 1e-10 * abs(expect)

    def test_validation(self):
        with pytest.raises(InvalidParameterError):
            log_axis_rule(-1.0)
        with pytest.raises(InvalidParameterError):
            log_axis_rule(1.0, U=5.0)


class TestSumWithTail:
    def test_basel_series(self):
        # brute-force partial sums with the 1/N integral tail
        cert = sum_with_tail(lambda k: 1.0 / k ** 2, lambda n: 1.0 / n, 1e-7)
        assert cert.tail_bound <= 1e-7
        lo = cert.finite_part.real
        assert lo <= math.pi ** 2 / 6 <= lo + cert.tail_bound + 1e-15

    def test_geometric_exact(self):
        q = 0.5
        cert = sum_with_tail(lambda k: q ** k,
                             lambda n: q ** (n + 1) / (1 - q),
                             1e-14, k0=0, method="geometric")
        lo = cert.finite_part.real
        assert lo <= 2.0 <= lo + cert.tail_bound + 1e-15

    def test_mangoldt_vs_zeta_ratio(self):
        # two independent oracles for the log-derivative value at 3
        from aos.numtheory import mangoldt_series
        from aos.specfun import zeta_log_ratio
        cert = mangoldt_series(3.0, tol=1e-9)
        assert abs(cert.finite_part.real - (-zeta_log_ratio(3.0).real)) < 1e-8

    def test_bracket_against_higher_truncation(self):
        # the certificate must bracket a 10x longer direct sum
        term = lambda k: 1.0 / k ** 3
        cert = sum_with_tail(term, lambda n: 0.5 / n ** 2, 1e-6)
        longer = sum(term(k) for k in range(1, 10 * cert.terms_used + 1))
        assert cert.finite_part.real <= longer <= cert.upper + 1e-15

    def test_tolerance_not_met(self):
        with pytest.raises(ToleranceNotMetError) as err:
            sum_with_tail(lambda k: 1.0 / k, lambda n: 10.0, 1e-3, cap=1000)
        assert err.value.achieved is not None

    def test_certificate_invariants(self):
        with pytest.raises(InvalidParameterError):
            TailCertificate(1.0, -0.5, "geometric")


class TestDeterminism:
    def test_kahan_fixed_order(self):
        rng = np.random.default_rng(3)
        vals = rng.normal(size=100000)
        assert kahan_sum(vals) == kahan_sum(vals.copy())

    def test_rule_application_bit_identical(self):
        r = log_axis_rule(2.5)
        a = r.apply(lambda x: np.exp(1.3j * np.log(x)))
        b = r.apply(lambda x: np.exp(1.3j * np.log(x)))
        assert a == b
