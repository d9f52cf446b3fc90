import itertools
import json
from math import prod

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dirichlet_spaces.errors import PreconditionError
from dirichlet_spaces.polynomial import (
    DirichletPolynomial as P, add, convolve, derivative, divisor_counts, drop_constant,
    evaluate, from_json_dict, loads, power, scale, to_json_dict, translate, zeta_power)

from conftest import polynomials


def brute_dm(m, n):
    # ordered m-tuples of positive integers with product n
    divs = [d for d in range(1, n + 1) if n % d == 0]
    return sum(1 for t in itertools.product(divs, repeat=m) if prod(t) == n)


class TestConstruction:
    def test_zero_coefficients_pruned(self):
        f = P([1, 2, 3], [1.0, 0.0, 2.0])
        assert f.indices.tolist() == [1, 3]

    def test_unsorted_input_is_sorted(self):
        f = P([5, 2], [1, 2])
        assert f.indices.tolist() == [2, 5]
        assert f[2] == 2 and f[5] == 1

    def test_rejects_duplicates_and_bad_indices(self):
        with pytest.raises(PreconditionError):
            P([2, 2], [1, 1])
        with pytest.raises(PreconditionError):
            P([0], [1])
        with pytest.raises(PreconditionError):
            P([1], [np.nan])

    def test_immutable(self):
        f = P([2], [1])
        with pytest.raises(ValueError):
            f.coeffs[0] = 3


class TestEvaluate:
    def test_monomial_at_zero(self):
        assert evaluate(P.monomial(2), 0) == pytest.approx(1)

    def test_two_terms_at_one(self):
        assert evaluate(P([2, 3], [1, 1]), 1).real == pytest.approx(5 / 6, rel=1e-15)

    def test_zeta_partial_sum_at_two(self):
        N = 10**4
        v = evaluate(zeta_power(1, N), 2).real
        assert 0 < np.pi**2 / 6 - v <= 1 / N

    def test_array_argument(self):
        f = P([2, 3], [1, 1j])
        s = np.array([0.5, 1 + 2j, 3.0])
        assert np.allclose(evaluate(f, s), [evaluate(f, x) for x in s], rtol=1e-15)


class TestTranslate:
    def test_examples(self):
        assert translate(P.monomial(2), 1)[2] == pytest.approx(0.5)
        f = P([2, 5], [1, 1])
        assert translate(f, 0) == f
        a = translate(translate(f, 0.3), 0.7)
        b = translate(f, 1.0)
        assert np.allclose(a.coeffs, b.coeffs, rtol=1e-15)

    def test_negative_rejected(self):
        with pytest.raises(PreconditionError):
            translate(P.monomial(2), -0.1)

    @given(polynomials(), st.floats(0, 3), st.complex_numbers(max_magnitude=3))
    def test_translate_then_evaluate(self, f, sigma, s):
        lhs = evaluate(translate(f, sigma), s)
        rhs = evaluate(f, s + sigma)
        scale_ = np.sum(np.abs(f.coeffs) * f.indices ** -(s.real + sigma))
        assert abs(lhs - rhs) <= 1e-12 * scale_


class TestConvolve:
    def test_monomials(self):
        assert convolve(P.monomial(2), P.monomial(3)) == P.monomial(6)

    def test_divisor_counts_from_square(self):
        z = zeta_power(1, 20)
        zz = convolve(z, z)
        assert zz[4] == 3 and zz[12] == 6

    def test_overflow_reported(self):
        big = P.monomial(2**40)
        with pytest.raises(OverflowError):
            convolve(big, big)

    def test_limit_discards_large_products(self):
        z = zeta_power(1, 30)
        full = convolve(z, z)
        cut = convolve(z, z, limit=30)
        assert cut.max_index <= 30
        assert all(cut[n] == full[n] for n in range(1, 31))

    def test_sparse_and_dense_paths_agree(self, rng):
        f = P(rng.choice(np.arange(1, 10**6), 40, replace=False), rng.standard_normal(40))
        g = P(rng.choice(np.arange(1, 10**3), 30, replace=False), rng.standard_normal(30))
        sparse = convolve(f, g)
        brute = {}
        for n, a in f:
            for k, b in g:
                brute[n * k] = brute.get(n * k, 0) + a * b
        assert sparse.indices.tolist() == sorted(k for k, v in brute.items() if v != 0)
        assert np.allclose(sparse.coeffs, [brute[n] for n in sparse.indices.tolist()], rtol=1e-13)

    @given(polynomials(20), polynomials(20))
    def test_commutative(self, f, g):
        a, b = convolve(f, g), convolve(g, f)
        assert a.indices.tolist() == b.indices.tolist()
        assert np.allclose(a.coeffs, b.coeffs, rtol=1e-14, atol=1e-14)

    @given(polynomials(20), polynomials(20), polynomials(20))
    def test_associative(self, f, g, h):
        a = convolve(convolve(f, g), h)
        b = convolve(f, convolve(g, h))
        scale_ = max(1.0, float(np.max(np.abs(a.coeffs)))) if a else 1.0
        diff = add(a, scale(b, -1))
        assert not diff or np.max(np.abs(diff.coeffs)) <= 1e-12 * scale_

    @given(polynomials(), polynomials(), st.complex_numbers(max_magnitude=2))
    def test_multiplicative_under_evaluation(self, f, g, s):
        lhs = evaluate(convolve(f, g), s)
        rhs = evaluate(f, s) * evaluate(g, s)
        bound = np.sum(np.abs(evaluate(P(f.indices, np.abs(f.coeffs)), s.real)))
        bound *= np.sum(np.abs(evaluate(P(g.indices, np.abs(g.coeffs)), s.real)))
        assert abs(lhs - rhs) <= 1e-12 * max(abs(rhs), bound)


class TestZetaPower:
    def test_examples(self):
        for m in (1, 2, 3, 4):
            assert zeta_power(m, 10)[1] == 1
        assert zeta_power(2, 10)[6] == 4
        assert zeta_power(3, 10)[4] == 6

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_matches_brute_force(self, m):
        d = divisor_counts(m, 200)
        assert d[1:].tolist() == [brute_dm(m, n) for n in range(1, 201)]

    def test_power_of_truncation_agrees(self):
        z = zeta_power(1, 60)
        assert power(z, 3, limit=60) == zeta_power(3, 60)

    def test_rejects_bad_arguments(self):
        with pytest.raises(PreconditionError):
            zeta_power(0, 10)


class TestDerivativeAndArithmetic:
    def test_monomial_derivative(self):
        d = derivative(P.monomial(2), 1)
        assert d[2] == pytest.approx(-np.log(2))

    def test_constant_derivative_is_zero(self):
        assert derivative(P.constant(1.0), 1).is_zero

    def test_add_scale(self):
        f = P([2, 3], [1, 2j])
        assert add(f, scale(f, -1)).is_zero
        assert evaluate(scale(P.monomial(2), 2), 0) == pytest.approx(2)
        assert add(P.monomial(2), P.monomial(3)).indices.tolist() == [2, 3]
        assert (f - f).is_zero and (f + f) == scale(f, 2)

    def test_drop_constant(self):
        f = P([1, 4], [3, 1])
        assert drop_constant(f) == P.monomial(4)


class TestJson:
    def test_round_trip(self):
        f = P([2, 7, 11], [0.1 + 0.2j, -1 / 3, 1e-300])
        assert loads(json.dumps(to_json_dict(f))) == f

    @pytest.mark.parametrize("doc", [
        {"coeffs": [{"n": 2, "re": 1}, {"n": 2, "re": 1}]},
        {"coeffs": [{"n": 0, "re": 1}]},
        {"coeffs": [{"n": 1.5, "re": 1}]},
        {"coeffs": [{"re": 1}]},
        {"wrong": []},
    ])
    def test_rejects_malformed(self, doc):
        with pytest.raises(PreconditionError):
            from_json_dict(doc)
