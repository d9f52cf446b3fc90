from math import log

import mpmath as mp
import numpy as np
import pytest

from dirichlet_spaces.errors import PreconditionError
from dirichlet_spaces.euler import (
    log_divisor_square_sum, rl_kernel, rl_zeta_power_a2_norm, zeta_power_ap_norm,
    zeta_power_hp_norm)
from dirichlet_spaces.measures import WeightMeasure as W, moment_closed_form
from dirichlet_spaces.polynomial import divisor_counts


def series(k, s, N=200_000):
    # brute force sum_{n <= N} d_k(n)^2 n^-s, good for large s
    d = divisor_counts(k, N)[1:].astype(np.float64)
    return float(np.sum(d**2 * np.arange(1, N + 1, dtype=np.float64) ** -s))


class TestDivisorSums:
    def test_k1_is_zeta(self):
        L, tail = log_divisor_square_sum(1, [1.5, 2.0])
        np.testing.assert_allclose(np.exp(L), [float(mp.zeta(1.5)), np.pi**2 / 6], rtol=1e-13)
        assert np.all(tail == 0)

    @pytest.mark.parametrize("s", [1.2, 2.0, 3.0])
    def test_k2_ramanujan(self, s):
        # sum d(n)^2 n^-s = zeta(s)^4 / zeta(2s)
        ref = float(mp.zeta(s) ** 4 / mp.zeta(2 * s))
        L, tail = log_divisor_square_sum(2, s)
        assert abs(L[0] - log(ref)) <= max(tail[0], 1e-12)

    @pytest.mark.parametrize("k", [3, 4, 6])
    def test_against_brute_force(self, k):
        # large s so the truncated brute-force sum has converged
        s = 6.0
        L, tail = log_divisor_square_sum(k, s)
        assert L[0] == pytest.approx(log(series(k, s)), abs=1e-8 + tail[0])

    def test_errors(self):
        with pytest.raises(PreconditionError):
            log_divisor_square_sum(2, 1.0)
        with pytest.raises(PreconditionError):
            log_divisor_square_sum(0, 2.0)


class TestNorms:
    def test_hp(self):
        v, rel = zeta_power_hp_norm(1, 4, 1.5)
        # ||zeta_sigma||_{H^4}^4 = sum d(n)^2 n^(-2 sigma)
        assert v[0] == pytest.approx(float(mp.zeta(3) ** 4 / mp.zeta(6)) ** 0.25, rel=1e-12)
        v, rel = zeta_power_hp_norm(2, 2, 1.5)
        assert v[0] == pytest.approx(float(mp.zeta(3) ** 4 / mp.zeta(6)) ** 0.5, rel=1e-12)
        with pytest.raises(PreconditionError):
            zeta_power_hp_norm(1, 3, 1.0)

    def test_ap_against_coefficient_sum(self):
        # ||zeta^m_sigma||^2_{A^2_mu} = sum d_m(n)^2 n^(-2 sigma) w_n
        sigma, m = 1.5, 2
        mu = W.alpha_density(1)
        N = 200_000
        n = np.arange(1, N + 1)
        d = divisor_counts(m, N)[1:].astype(np.float64)
        ref = np.sqrt(np.sum(d**2 * n ** (-2 * sigma) * moment_closed_form(mu, n)))
        v, rel = zeta_power_ap_norm(m, 2, sigma, mu)
        assert v[0] == pytest.approx(ref, rel=1e-8)

    def test_rl_kernel_laplace(self):
        t, alpha, Lv = 1.0, 0.5, 1.3
        with mp.workdps(25):
            k = lambda y: y ** (2 * t + alpha) / mp.gamma(2 * t + alpha + 1) * mp.hyp1f1(alpha + 1, 2 * t + alpha + 1, -y)
            ref = mp.quad(lambda y: mp.e ** (-Lv * y) * k(y), [0, 10, mp.inf])
        assert float(ref) == pytest.approx(Lv ** (-2 * t) * (1 + Lv) ** (-(alpha + 1)), rel=1e-12)
        y = np.array([0.1, 5.0, 50.0])
        np.testing.assert_allclose(rl_kernel(t, alpha, y), [float(k(v)) for v in y], rtol=1e-10)

    @pytest.mark.parametrize("m,t,alpha", [(1, 1.0, 0.0), (2, 0.5, 1.0)])
    def test_rl_against_coefficient_sum(self, m, t, alpha):
        sigma = 1.5
        N = 200_000
        n = np.arange(2, N + 1)
        d = divisor_counts(m, N)[2:].astype(np.float64)
        ln = np.log(n)
        ref = np.sqrt(np.sum(d**2 * n ** (-2 * sigma) * ln ** (-2 * t) * (1 + ln) ** (-(alpha + 1))))
        v, rel = rl_zeta_power_a2_norm(m, t, sigma, alpha)
        assert v[0] == pytest.approx(ref, rel=1e-7)
