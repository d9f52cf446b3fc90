import numpy as np
import pytest
from hypothesis import given

from dirichlet_spaces.bohr import (
    Character, bohr_eval, factorize, lift_exponents, lift_samples, phase_chunks,
    sample_characters, twist)
from dirichlet_spaces.errors import PreconditionError
from dirichlet_spaces.norms import norm_hp_mc
from dirichlet_spaces.polynomial import DirichletPolynomial as P, convolve, evaluate

from conftest import polynomials


class TestFactorize:
    def test_examples(self):
        assert factorize(1) == []
        assert factorize(12) == [(2, 2), (3, 1)]
        assert factorize(97) == [(97, 1)]

    def test_large_input_uses_trial_division(self):
        n = 2**3 * 1000003 * 1000033
        assert factorize(n) == [(2, 3), (1000003, 1), (1000033, 1)]

    def test_rejects_nonpositive(self):
        with pytest.raises(PreconditionError):
            factorize(0)

    def test_exponent_matrix_reconstructs_indices(self):
        n = np.arange(1, 500)
        primes, E = lift_exponents(P(n, np.ones(len(n))))
        assert np.all(np.prod(primes[None, :].astype(float) ** E, axis=1) == n)


class TestCharacter:
    def test_bohr_eval_examples(self):
        chi = Character({2: 1j, 3: -1})
        assert bohr_eval(P.monomial(2), chi) == pytest.approx(1j)
        assert bohr_eval(P.monomial(4), chi) == pytest.approx(-1)
        assert bohr_eval(P.monomial(6), chi) == pytest.approx(-1j)
        assert chi(12) == pytest.approx(1j ** 2 * -1)

    def test_validation(self):
        with pytest.raises(PreconditionError):
            Character({4: 1})
        with pytest.raises(PreconditionError):
            Character({2: 1.1})

    def test_missing_prime(self):
        with pytest.raises(PreconditionError):
            bohr_eval(P.monomial(5), Character({2: 1}))

    @given(polynomials(max_index=60))
    def test_trivial_character_is_evaluation(self, f):
        primes = [p for p in range(2, 61) if factorize(p) == [(p, 1)]]
        chi = Character.trivial(primes)
        assert bohr_eval(f, chi, 0.7 + 1j) == pytest.approx(evaluate(f, 0.7 + 1j), rel=1e-12, abs=1e-12)

    @given(polynomials(max_index=30), polynomials(max_index=30))
    def test_multiplicative(self, f, g):
        primes = [p for p in range(2, 30) if factorize(p) == [(p, 1)]]
        chi = next(sample_characters(primes, 1, seed=7))
        lhs = bohr_eval(convolve(f, g), chi)
        rhs = bohr_eval(f, chi) * bohr_eval(g, chi)
        scale = np.sum(np.abs(f.coeffs)) * np.sum(np.abs(g.coeffs))
        assert abs(lhs - rhs) <= 1e-12 * scale

    def test_twist_matches_eval(self):
        f = P([2, 3, 6, 8], [1, 2, 3, 4])
        chi = Character({2: np.exp(0.3j), 3: np.exp(-1.1j)})
        assert evaluate(twist(f, chi), 0.4) == pytest.approx(bohr_eval(f, chi, 0.4), rel=1e-14)


class TestSampling:
    def test_mean_of_chi2(self):
        u = np.concatenate([b for _, b in phase_chunks(1, 10**5, seed=11)])
        z = np.exp(2j * np.pi * u[:, 0])
        bound = 3 / np.sqrt(10**5)
        assert abs(z.mean().real) < bound and abs(z.mean().imag) < bound
        assert np.mean(np.abs(z) ** 2) == pytest.approx(1, abs=1e-15)

    def test_seed_repeatability(self):
        a = next(sample_characters([2, 3, 5], 5, 42))
        b = next(sample_characters([2, 3, 5], 5, 42))
        assert a == b
        c = next(sample_characters([2, 3, 5], 5, 43))
        assert a != c

    def test_chunks_independent_of_split(self):
        full = np.concatenate([b for _, b in phase_chunks(3, 20000, 5)])
        # the same chunk index always produces the same block
        again = dict(phase_chunks(3, 20000, 5))
        assert np.array_equal(np.concatenate([again[i] for i in sorted(again)]), full)

    def test_parseval_on_polytorus(self):
        f = P([2, 3, 5, 12], [1, -0.5j, 2, 0.25])
        primes, E = lift_exponents(f)
        u = np.concatenate([b for _, b in phase_chunks(len(primes), 10**5, 3)])
        v = np.abs(lift_samples(f, u, E)) ** 2
        se = v.std(ddof=1) / np.sqrt(len(v))
        assert abs(v.mean() - np.sum(np.abs(f.coeffs) ** 2)) < 4 * se

    def test_monomial_lift_is_unimodular(self):
        est = norm_hp_mc(P.monomial(30), 3.0, samples=2000, seed=1)
        assert est.value == pytest.approx(1, abs=1e-14)
