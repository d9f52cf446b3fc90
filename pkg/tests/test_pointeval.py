from math import log, pi, sqrt

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dirichlet_spaces.errors import PreconditionError, ToleranceError
from dirichlet_spaces.pointeval import (
    delta_lower_bound, delta_norm_a2, delta_norm_h2, delta_norm_hp, tail_integral)


def brute_kernel(sigma, a, n0=1, M=2000):
    # mpmath oracle: sum_{n >= n0} n^(-2 sigma) (1 + log n)^a as a 30-digit partial sum
    # plus the Euler-Maclaurin tail with the integral in incomplete-Gamma form
    with mp.workdps(30):
        sigma, a = mp.mpf(sigma), mp.mpf(a)
        f = lambda n: n ** (-2 * sigma) * (1 + mp.log(n)) ** a
        e = 2 * sigma - 1
        integral = mp.e**e * e ** (-(a + 1)) * mp.gammainc(a + 1, e * (1 + mp.log(M)))
        tail = integral + f(M) / 2 - mp.diff(f, M) / 12 + mp.diff(f, M, 3) / 720
        return float(mp.fsum(f(n) for n in range(n0, M)) + tail)


class TestKernel:
    def test_h2_sigma_one(self):
        kv = delta_norm_h2(1.0)
        assert kv.value == pytest.approx(1.282550, abs=1e-6)
        assert abs(kv.value - pi / sqrt(6)) <= kv.tail_bound
        assert kv.space == "H2"

    def test_h2_zeta_15(self):
        kv = delta_norm_h2(0.75, tol=1e-10)
        ref = float(mp.zeta(1.5)) ** 0.5
        assert abs(kv.value - ref) <= kv.tail_bound
        # a coarser run brackets the same number
        coarse = delta_norm_h2(0.75, tol=1e-6)
        assert abs(kv.value - coarse.value) <= kv.tail_bound + coarse.tail_bound

    def test_large_sigma(self):
        assert delta_norm_h2(40).value == pytest.approx(1, abs=1e-15)

    def test_a2_alpha0_sigma1(self):
        kv = delta_norm_a2(1.0, 0)
        # sum n^-2 (1 + log n) = zeta(2) - zeta'(2)
        ref = float(mp.sqrt(mp.zeta(2) - mp.zeta(2, 1, 1)))
        assert ref == pytest.approx(brute_kernel(1.0, 1) ** 0.5, rel=1e-14)
        assert abs(kv.value - ref) <= kv.tail_bound + 1e-14 * ref
        assert kv.tail_bound <= 1e-9 * kv.value

    @pytest.mark.parametrize("sigma,alpha", [(0.6, 0), (0.8, 1), (1.5, 2.5), (0.7, -0.5)])
    def test_against_mpmath(self, sigma, alpha):
        for sub in (False, True):
            kv = delta_norm_a2(sigma, alpha, sub)
            ref = brute_kernel(sigma, alpha + 1, 2 if sub else 1) ** 0.5
            assert abs(kv.value - ref) <= kv.tail_bound + 1e-13 * ref

    @pytest.mark.parametrize("sigma", [0.55, 0.7, 1.0, 3.0])
    def test_subspace_identity(self, sigma):
        full, sub = delta_norm_a2(sigma, 1), delta_norm_a2(sigma, 1, True)
        assert full.value**2 - sub.value**2 == pytest.approx(1, rel=1e-8)
        assert sub.space == "A2_alpha_infty" and full.space == "A2_alpha"

    def test_tail_integral(self):
        with mp.workdps(30):
            ref = mp.quad(lambda x: x ** (-1.4) * (1 + mp.log(x)) ** 2.5, [100, mp.inf])
        assert tail_integral(0.7, 2.5, 100) == pytest.approx(float(ref), rel=1e-10)

    def test_errors(self):
        for s in (0.5, 0.3):
            with pytest.raises(PreconditionError):
                delta_norm_a2(s, 0)
            with pytest.raises(PreconditionError):
                delta_norm_h2(s)
        with pytest.raises(PreconditionError):
            delta_norm_a2(1.0, -1)

    def test_unattainable_tol(self):
        with pytest.raises(ToleranceError) as info:
            delta_norm_a2(0.5001, 2.5, tol=1e-15)
        assert info.value.achieved > 1e-15

    def test_hp(self):
        assert delta_norm_hp(1.0, 2).value == pytest.approx(pi / sqrt(6), rel=1e-9)
        assert delta_norm_hp(1.0, 4).value == pytest.approx((pi**2 / 6) ** 0.25, rel=1e-9)
        with pytest.raises(PreconditionError):
            delta_norm_hp(1.0, 0.5)


class TestProperties:
    sigmas = np.linspace(0.52, 2.0, 12)

    @pytest.mark.parametrize("alpha", [0, 1])
    def test_sandwich_and_monotone(self, alpha):
        full = [delta_norm_a2(s, alpha) for s in self.sigmas]
        sub = [delta_norm_a2(s, alpha, True) for s in self.sigmas]
        for f, g in zip(full, sub):
            assert g.value <= f.value + f.tail_bound + g.tail_bound
            assert f.value <= 1 + 2 * g.value + f.tail_bound + 2 * g.tail_bound
        for seq in (full, sub):
            for a, b in zip(seq, seq[1:]):
                assert b.value <= a.value + a.tail_bound + b.tail_bound

    @given(st.floats(0.55, 3.0))
    @settings(max_examples=20)
    def test_increasing_in_alpha(self, sigma):
        vals = [delta_norm_a2(sigma, a).value for a in (-0.5, 0, 1, 2)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_large_sigma_decay(self):
        scaled = [2**s * delta_norm_a2(s, 1, True).value for s in np.linspace(2, 10, 9)]
        assert max(scaled) < 10

    @given(st.floats(0.55, 2.0), st.sampled_from([0, 1]))
    @settings(max_examples=15)
    def test_lower_bound_below_norm(self, sigma, alpha):
        kv = delta_norm_a2(sigma, alpha)
        for fam in ("constant", "monomial"):
            assert delta_lower_bound(sigma, alpha, 2, fam) <= kv.value + kv.tail_bound


class TestLowerBound:
    def test_monomial(self):
        sigma, alpha = 0.8, 1.0
        ref = 2**-sigma / (1 + log(2)) ** (-(alpha + 1) / 2)
        assert delta_lower_bound(sigma, alpha, 2, "monomial") == pytest.approx(ref, rel=1e-13)
        assert delta_lower_bound(sigma, alpha, 4, "monomial") >= 2**-sigma

    def test_constant(self):
        for p in (2, 4):
            assert delta_lower_bound(0.7, 0, p, "constant") == pytest.approx(1, rel=1e-15)

    def test_zeta_family_within_factor_three(self):
        exact = delta_norm_a2(0.55, 0).value
        lb = delta_lower_bound(0.55, 0, 2, {"family": "zeta-power", "m": [1, 2], "N": 1000})
        assert exact / 3 <= lb <= exact

    def test_errors(self):
        with pytest.raises(PreconditionError):
            delta_lower_bound(0.5, 0, 2)
        with pytest.raises(PreconditionError):
            delta_lower_bound(0.7, 0, 3)
        with pytest.raises(PreconditionError):
            delta_lower_bound(0.7, 0, 2, "gaussian")
