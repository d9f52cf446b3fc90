"""Norms of the full series zeta^m through Euler products.

Truncations ``zeta_N^m`` saturate long before ``sigma`` gets close to 1/2, so
the asymptotic experiments also work with the untruncated series. For
``k``-th divisor functions

    sum d_k(n)^2 n^(-s) = zeta(s)^(k^2) prod_p P_k(p^-s) (1 - p^-s)^((k-1)^2)

with ``P_k(x) = sum_j C(k-1, j)^2 x^j``. Each local correction factor is
``1 + O(p^(-2s))``, so the product converges fast and is cut at a prime
cutoff with an explicit tail estimate.
"""

from functools import lru_cache
from math import comb, lgamma, log

import numpy as np
from scipy import special

from ._quadrature import measure_rule, panel_rule, geometric_breaks
from ._sieve import primes_up_to
from .errors import PreconditionError

DEFAULT_PRIME_CUTOFF = 10**6
_BLOCK = 1 << 22


@lru_cache(maxsize=4)
def _log_primes(cutoff):
    lp = np.log(primes_up_to(int(cutoff)).astype(np.float64))
    lp.setflags(write=False)
    return lp


def _second_order(k):
    # coefficient of x^2 in P_k(x) (1 - x)^((k-1)^2)
    e = (k - 1) ** 2
    return comb(k - 1, 2) ** 2 - (k - 1) ** 2 * e + comb(e, 2)


def log_divisor_square_sum(k, s, prime_cutoff=DEFAULT_PRIME_CUTOFF):
    """``log sum_n d_k(n)^2 n^(-s)`` for real ``s > 1``.

    Args:
        k: divisor-function order (``k = 1`` gives ``log zeta(s)``).
        s: scalar or array, all ``> 1``.
        prime_cutoff: Euler factors for primes above this are dropped.

    Returns:
        (log_value, tail) arrays; ``tail`` estimates the absolute error in
        ``log_value`` from the dropped primes.
    """
    k = int(k)
    if k < 1:
        raise PreconditionError(f"divisor order must be >= 1, got {k}")
    s = np.atleast_1d(np.asarray(s, dtype=np.float64))
    if np.any(~(s > 1)):
        raise PreconditionError("the series converges only for s > 1")
    out = k * k * np.log(special.zeta(s))
    if k > 1:
        lp = _log_primes(prime_cutoff)
        coef = np.array([comb(k - 1, j) ** 2 for j in range(k)], dtype=np.float64)
        e = (k - 1) ** 2
        step = max(1, _BLOCK // max(len(lp), 1))
        for i in range(0, len(s), step):
            x = np.exp(-s[i:i + step, None] * lp[None, :])
            poly = np.polynomial.polynomial.polyval(x, coef)
            out[i:i + step] += (np.log(poly) + e * np.log1p(-x)).sum(axis=1)
        P = float(prime_cutoff)
        tail = 2.0 * abs(_second_order(k)) * P ** (1 - 2 * s) / (2 * s - 1)
    else:
        tail = np.zeros_like(s)
    return out, tail


def zeta_power_hp_norm(m, p, sigma, prime_cutoff=DEFAULT_PRIME_CUTOFF):
    """``||zeta^m_sigma||_{H^p}`` for even ``p`` and ``sigma > 1/2``.

    Uses ``||F||_{H^(2j)}^(2j) = ||F^j||_{H^2}^2`` with ``F^j = zeta^(m j)``.

    Returns:
        (value, relative_error) arrays.
    """
    p = _even(p)
    logv, tail = log_divisor_square_sum(m * p // 2, 2 * np.asarray(sigma, dtype=np.float64),
                                        prime_cutoff)
    return np.exp(logv / p), tail / p


def zeta_power_ap_norm(m, q, sigma, mu, prime_cutoff=DEFAULT_PRIME_CUTOFF, order=24):
    """``||zeta^m_sigma||_{A^q_mu}`` for even ``q`` and a decaying measure ``mu``.

    The outer integral over the translation parameter is a composite Gauss
    rule refined geometrically towards 0 at the scale ``2 sigma - 1``.

    Returns:
        (value, relative_error) arrays over ``sigma``.
    """
    q = _even(q)
    k = m * q // 2
    sig = np.atleast_1d(np.asarray(sigma, dtype=np.float64))
    vals, errs = np.empty(len(sig)), np.empty(len(sig))
    for i, x in enumerate(sig):
        eps = 2 * x - 1
        if not eps > 0:
            raise PreconditionError("sigma must exceed 1/2")
        y, w = measure_rule(mu, eps / 8, order=order)
        L, tail = log_divisor_square_sum(k, 2 * x + 2 * y, prime_cutoff)
        L = L + np.log(w)
        M = L.max()
        vals[i] = (M + np.log(np.exp(L - M).sum())) / q
        errs[i] = tail.max() / q
    return np.exp(vals), errs


def rl_kernel(t, alpha, y):
    """``k(y)`` with ``int_0^inf e^(-L y) k(y) dy = L^(-2t) (1 + L)^-(alpha+1)``."""
    b = 2 * t + alpha + 1
    y = np.asarray(y, dtype=np.float64)
    return np.exp((b - 1) * np.log(y) - lgamma(b)) * special.hyp1f1(alpha + 1, b, -y)


def rl_zeta_power_a2_norm(m, t, sigma, alpha, prime_cutoff=DEFAULT_PRIME_CUTOFF,
                          order=24, upper=400.0):
    """``||I_t (zeta^m - 1)_sigma||_{A^2_alpha}``.

    The weights ``(log n)^(-2t) (1 + log n)^-(alpha+1)`` are written as a
    Laplace transform in ``log n``, which turns the coefficient sum into a
    1-D integral of the Euler product.

    Returns:
        (value, relative_error) arrays over ``sigma``.
    """
    if not t > 0:
        raise PreconditionError("t must be positive")
    sig = np.atleast_1d(np.asarray(sigma, dtype=np.float64))
    vals, errs = np.empty(len(sig)), np.empty(len(sig))
    for i, x in enumerate(sig):
        eps = 2 * x - 1
        if not eps > 0:
            raise PreconditionError("sigma must exceed 1/2")
        y, w = panel_rule(geometric_breaks(eps / 8, upper), order)
        L, tail = log_divisor_square_sum(m, 2 * x + y, prime_cutoff)
        # drop the n = 1 term: sum_{n >= 2} = exp(L) - 1
        total = np.sum(w * np.expm1(L) * rl_kernel(t, alpha, y))
        vals[i] = 0.5 * log(total)
        errs[i] = tail.max() / 2
    return np.exp(vals), errs


def _even(p):
    if int(p) != p or p < 2 or int(p) % 2:
        raise PreconditionError(f"exponent must be an even integer >= 2, got {p}")
    return int(p)
