"""Norms of point evaluations on the real axis.

In ``A^2_alpha`` the coefficient weights are ``w_n = (1 + log n)^-(alpha+1)``,
so the reproducing kernel on the diagonal is

    K(sigma) = sum_n n^(-2 sigma) (1 + log n)^(alpha+1)

and ``||delta_sigma|| = K(sigma)^(1/2)``. The sum is split into an exact
partial sum up to ``N`` plus the integral-test bracket for the tail, which is
valid once the summand is decreasing. By vertical translation invariance the
norm depends only on ``sigma = Re s``, so only real points are exposed.
"""

from dataclasses import dataclass
from math import exp, lgamma, log, ceil

import numpy as np
from scipy import special

from .errors import PreconditionError, ToleranceError
from .measures import WeightMeasure
from .norms import _even_exponent, norm_ap
from .polynomial import DirichletPolynomial, evaluate, translate, zeta_power

N_START = 1000
N_CAP = 10**8
_CHUNK = 1 << 20
_EPS = np.finfo(np.float64).eps

SPACES = ("A2_alpha", "A2_alpha_infty", "H2")


@dataclass(frozen=True)
class KernelValue:
    """Point-evaluation norm with a rigorous truncation bracket.

    The true value lies in ``[value - tail_bound, value + tail_bound]``.
    """

    value: float
    truncation_N: int
    tail_bound: float
    space: str
    sigma: float
    alpha: float = None

    def to_dict(self):
        return {"value": self.value, "truncation_N": self.truncation_N,
                "tail_bound": self.tail_bound, "space": self.space,
                "sigma": self.sigma, "alpha": self.alpha}


def _partial(sigma, a, lo, hi):
    # sum_{lo <= n <= hi} n^(-2 sigma) (1 + log n)^a, fixed chunk order
    total = 0.0
    for start in range(lo, hi + 1, _CHUNK):
        n = np.arange(start, min(start + _CHUNK, hi + 1), dtype=np.float64)
        ln = np.log(n)
        total += float(np.sum(np.exp(-2.0 * sigma * ln + a * np.log1p(ln))))
    return total


def tail_integral(sigma, a, X):
    """``int_X^inf x^(-2 sigma) (1 + log x)^a dx`` via the incomplete Gamma function."""
    eps = 2.0 * sigma - 1.0
    V = 1.0 + log(X)
    logpre = eps - (a + 1) * log(eps) + lgamma(a + 1)
    return exp(logpre) * special.gammaincc(a + 1, eps * V)


def _kernel(sigma, a, n0, tol):
    """Partial sum from ``n0`` plus tail bracket, doubling ``N`` until tight."""
    sigma = float(sigma)
    if not sigma > 0.5:
        raise PreconditionError(f"point evaluation is bounded only for sigma > 1/2, got {sigma}")
    # summand decreases for x > exp(a / (2 sigma) - 1)
    x0 = exp(a / (2 * sigma) - 1) if a > 0 else 1.0
    N = max(N_START, int(ceil(x0)) + 1)
    S = _partial(sigma, a, n0, N)
    while True:
        lo = S + tail_integral(sigma, a, N + 1)
        hi = S + tail_integral(sigma, a, N)
        vlo, vhi = lo ** 0.5, hi ** 0.5
        value = float(0.5 * (vlo + vhi))
        bound = float(0.5 * (vhi - vlo) + 4 * _EPS * value * (1 + log(N)))
        if bound <= tol * value:
            return value, N, bound
        if 2 * N > N_CAP:
            raise ToleranceError(
                f"relative tail bound {bound / value:.3g} above tol {tol:.3g} at the cap N = {N}",
                achieved=bound / value)
        S += _partial(sigma, a, N + 1, 2 * N)
        N *= 2


def delta_norm_a2(sigma, alpha, subspace=False, tol=1e-9):
    """``||delta_sigma||`` on ``A^2_alpha`` or on its ``a_1 = 0`` subspace.

    Args:
        tol: required relative accuracy, ``tail_bound <= tol * value``.
    """
    alpha = float(alpha)
    if not alpha > -1:
        raise PreconditionError(f"alpha must exceed -1, got {alpha}")
    value, N, bound = _kernel(sigma, alpha + 1, 2 if subspace else 1, tol)
    space = "A2_alpha_infty" if subspace else "A2_alpha"
    return KernelValue(value, N, bound, space, float(sigma), alpha)


def delta_norm_h2(sigma, tol=1e-9):
    """``||delta_sigma||`` on ``H^2``, that is ``zeta(2 sigma)^(1/2)``."""
    value, N, bound = _kernel(sigma, 0.0, 1, tol)
    return KernelValue(value, N, bound, "H2", float(sigma), None)


def delta_norm_hp(sigma, p, tol=1e-9):
    """``zeta(2 sigma)^(1/p)``: the ``H^2`` kernel value raised to ``2/p``.

    The exponent ``1/p`` reproduces the ``p = 2`` kernel value.
    """
    p = float(p)
    if not p >= 1:
        raise PreconditionError(f"p must be >= 1, got {p}")
    kv = delta_norm_h2(sigma, tol)
    r = 2.0 / p
    value = kv.value ** r
    bound = r * kv.value ** (r - 1) * kv.tail_bound
    return KernelValue(value, kv.truncation_N, bound, "H2" if p == 2 else f"H{p:g}",
                       kv.sigma, None)


def _family_members(sigma, family):
    if isinstance(family, str):
        family = {"family": family}
    kind = family.get("family")
    if kind == "constant":
        yield DirichletPolynomial.constant(1.0)
    elif kind in ("monomial", "single-monomial"):
        yield DirichletPolynomial.monomial(int(family.get("n", 2)))
    elif kind in ("zeta-power", "translated-zeta-power"):
        ms = family.get("m", (1, 2))
        ms = [ms] if np.isscalar(ms) else ms
        N = int(family.get("N", 1000))
        shifts = family.get("eps")
        if shifts is None:
            shifts = sigma * np.array([0.5, 0.75, 1.0, 1.25, 1.5])
        for m in ms:
            base = zeta_power(int(m), N)
            for eps in shifts:
                yield translate(base, float(eps))
    else:
        raise PreconditionError(f"unknown test-function family {kind!r}")


def delta_lower_bound(sigma, alpha, p, family="monomial"):
    """Lower bound ``max_f |f(sigma)| / ||f||_{A^p_alpha}`` over a test family.

    Args:
        family: ``"constant"``, ``"monomial"`` (``{"family": "monomial", "n": k}``)
            or ``{"family": "zeta-power", "m": [...], "N": int, "eps": [...]}``
            (translates of truncated ``zeta^m``).
    """
    sigma = float(sigma)
    if not sigma > 0.5:
        raise PreconditionError(f"sigma must exceed 1/2, got {sigma}")
    p = _even_exponent(p)
    mu = WeightMeasure.alpha_density(alpha)
    best = 0.0
    for f in _family_members(sigma, family):
        nrm = norm_ap(f, mu, p, inner="moment").value
        if nrm > 0:
            best = max(best, abs(evaluate(f, sigma)) / nrm)
    return best
