"""Hardy and Bergman-type norms of Dirichlet polynomials.

* ``H^2`` is the l^2 norm of the coefficients.
* ``H^(2k)`` reduces to ``H^2``: ``|Bf|^(2k) = |B(f^k)|^2`` on the polytorus.
* general ``H^p`` is a Monte Carlo average over Haar-random characters.
* ``A^p_mu`` integrates ``||f_sigma||_{H^p}^p`` against ``mu``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import sqrt

import numpy as np

from . import bohr
from ._quadrature import measure_rule
from .errors import PreconditionError, ToleranceError
from .measures import WeightMeasure, integrate_measure, moment_closed_form, moment_weight
from .polynomial import power

METHODS = ("exact", "even-power", "quadrature", "monte-carlo")
OUTER_RTOL = 1e-8
_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class NormEstimate:
    """A norm value with its provenance.

    Attributes:
        value: the estimate, ``>= 0``.
        method: one of ``exact``, ``even-power``, ``quadrature``, ``monte-carlo``.
        error: 0 for exact values, an absolute error estimate otherwise.
        samples_or_nodes: Monte Carlo sample count or quadrature node count.
    """

    value: float
    method: str
    error: float = 0.0
    samples_or_nodes: int = 0

    def to_dict(self):
        return {"value": self.value, "method": self.method, "error": self.error,
                "samples_or_nodes": self.samples_or_nodes}


def _even_exponent(p):
    if isinstance(p, bool) or float(p) != int(p) or int(p) < 2 or int(p) % 2:
        raise PreconditionError(f"p must be an even integer >= 2, got {p}")
    return int(p)


def norm_h2(f):
    return NormEstimate(float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2))), "exact", 0.0, len(f))


def norm_hp_even(f, p):
    """Exact ``H^p`` norm for even ``p`` through ``||f^(p/2)||_{H^2}^(2/p)``."""
    k = _even_exponent(p) // 2
    if k == 1:
        return norm_h2(f)
    g = power(f, k)
    v = float(np.sum(np.abs(g.coeffs) ** 2)) ** (1.0 / (2 * k))
    return NormEstimate(v, "even-power", 0.0, len(g))


def _mc_summary(samples, p, count):
    # samples holds |Bf(chi_k)|^p  (or per-sample outer integrals)
    mean = float(np.mean(samples))
    se = float(np.std(samples, ddof=1)) / sqrt(count) if count > 1 else float("inf")
    if mean == 0:
        return 0.0, float(se)
    value = mean ** (1.0 / p)
    # delta method for m -> m^(1/p), plus a rounding allowance
    err = value * se / (p * mean) + 8 * p * _EPS * value
    return value, float(err)


def _map_chunks(fn, chunks, workers):
    # results are always reassembled in chunk order
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            return list(pool.map(fn, chunks))
    return [fn(c) for c in chunks]


def norm_hp_mc(f, p, samples=100_000, seed=0, workers=None):
    """Monte Carlo ``H^p`` norm: ``(mean_k |Bf(chi_k)|^p)^(1/p)``.

    Chunk ``i`` of the character stream is fixed by ``(seed, i)``, so the
    result is bit-identical for any ``workers`` value.
    """
    p = float(p)
    if not p >= 1:
        raise PreconditionError(f"p must be >= 1, got {p}")
    samples = int(samples)
    if samples < 1:
        raise PreconditionError("need at least one sample")
    if not f:
        return NormEstimate(0.0, "monte-carlo", 0.0, samples)
    primes, E = bohr.lift_exponents(f)
    chunks = list(bohr.phase_chunks(len(primes), samples, seed))
    vals = _map_chunks(lambda c: np.abs(bohr.lift_samples(f, c[1], E)) ** p, chunks, workers)
    value, err = _mc_summary(np.concatenate(vals), p, samples)
    return NormEstimate(value, "monte-carlo", err, samples)


def norm_hp(f, p, inner="even", samples=100_000, seed=0, workers=None):
    if inner == "even":
        return norm_hp_even(f, p)
    if inner == "mc":
        return norm_hp_mc(f, p, samples, seed, workers)
    raise PreconditionError(f"inner must be 'even' or 'mc', got {inner!r}")


def _check_measure_support(f, mu):
    if mu.shape[2] <= 0 and f.first_coefficient != 0:
        raise PreconditionError(
            "power-weight norms need a zero first coefficient (the n = 1 moment diverges)")


def norm_a2(f, mu, quadrature=False):
    """``(sum |a_n|^2 w_n)^(1/2)``.

    Args:
        quadrature: integrate every moment numerically (checked against the
            closed form) instead of using the closed form directly.
    """
    _check_measure_support(f, mu)
    if not f:
        return NormEstimate(0.0, "exact", 0.0, 0)
    if quadrature:
        w = np.array([moment_weight(mu, n) for n in f.indices.tolist()])
        method, nodes = "quadrature", len(f)
    else:
        w = moment_closed_form(mu, f.indices)
        method, nodes = "exact", len(f)
    v = float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2 * w)))
    return NormEstimate(v, method, 0.0, nodes)


def _tail_upper(f, mu, p):
    # sigma where (sum |a_n| n^-sigma)^p * density drops below 1e-14
    logc, g, lam = mu.shape
    a = np.abs(f.coeffs)
    rate = lam + p * (f.logs[0] if f.indices[0] > 1 else 0.0)
    if rate <= 0:
        raise PreconditionError("outer integral diverges for this measure")
    u = max(1.0, 2.0 / rate)
    while True:
        b = p * np.log(np.sum(a * np.exp(-u * f.logs))) + logc + g * np.log(u) - lam * u
        if b < np.log(1e-14) and u * rate > g + 1:
            return u
        u *= 1.5


def norm_ap(f, mu, p, inner="even", samples=20_000, seed=0, workers=None, order=24):
    """``(int_0^inf ||f_sigma||_{H^p}^p dmu(sigma))^(1/p)``.

    Args:
        inner: ``"even"`` (adaptive outer quadrature of the exact even-``p``
            integrand), ``"moment"`` (outer integral in closed form, even
            ``p`` only) or ``"mc"`` (common random characters, composite
            Gauss rule for the outer integral of each sample).
    """
    p_val = float(p)
    if not p_val >= 1:
        raise PreconditionError(f"p must be >= 1, got {p}")
    if not isinstance(mu, WeightMeasure):
        raise PreconditionError("mu must be a WeightMeasure")
    _check_measure_support(f, mu)
    if not f:
        return NormEstimate(0.0, "exact", 0.0, 0)
    if inner in ("even", "moment"):
        k = _even_exponent(p) // 2
        g = power(f, k) if k > 1 else f
        c2 = np.abs(g.coeffs) ** 2
        if inner == "moment":
            total = float(np.sum(c2 * moment_closed_form(mu, g.indices)))
            return NormEstimate(total ** (1.0 / p_val), "exact", 0.0, len(g))
        logs = 2.0 * g.logs
        decay = logs[0]
        total, abserr = integrate_measure(mu, lambda u: float(c2 @ np.exp(-u * logs)), decay,
                                          epsrel=OUTER_RTOL * 1e-2)
        if not abserr <= OUTER_RTOL * total:
            raise ToleranceError(f"outer quadrature error {abserr:.3g} above tolerance",
                                 achieved=abserr / total)
        value = total ** (1.0 / p_val)
        return NormEstimate(value, "quadrature", value * abserr / (p_val * total), len(g))
    if inner == "mc":
        return _norm_ap_mc(f, mu, p_val, samples, seed, workers, order)
    raise PreconditionError(f"inner must be 'even', 'moment' or 'mc', got {inner!r}")


def _norm_ap_mc(f, mu, p, samples, seed, workers, order):
    upper = _tail_upper(f, mu, p)
    start = min(upper / 4, 1.0 / (mu.shape[2] + p * f.logs[-1]))
    nodes, weights = measure_rule(mu, start, upper, order)
    # coefficient matrix a_n n^-sigma_j, shared by every sample
    damp = f.coeffs[:, None] * np.exp(-f.logs[:, None] * nodes[None, :])
    primes, E = bohr.lift_exponents(f)
    Ef = E.T.astype(np.float64)

    def chunk(c):
        arg = c[1] @ Ef
        arg -= np.floor(arg)
        vals = np.exp(2j * np.pi * arg) @ damp
        return (np.abs(vals) ** p) @ weights

    chunks = list(bohr.phase_chunks(len(primes), samples, seed))
    per_sample = np.concatenate(_map_chunks(chunk, chunks, workers))
    value, err = _mc_summary(per_sample, p, samples)
    return NormEstimate(value, "monte-carlo", err, samples)
