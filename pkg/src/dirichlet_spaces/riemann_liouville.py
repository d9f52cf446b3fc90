"""The Riemann-Liouville semigroup ``I_t`` on Dirichlet polynomials.

On a series with zero first coefficient ``I_t`` acts diagonally:
``a_n n^-s -> a_n (log n)^-t n^-s``. The integral form, the line-integral
kernel constant ``k_t`` and the boundary reconstruction formula are provided
as numerical cross-checks of that coefficient action.
"""

from dataclasses import dataclass
from math import e, gamma, log, pi

import numpy as np
from scipy import integrate, special

from ._quadrature import gauss_legendre
from .errors import PreconditionError, ToleranceError
from .polynomial import DirichletPolynomial, evaluate

T_MAX = 64.0
IBP_TERMS = 4
_EPS = np.finfo(np.float64).eps


def _check_t(t):
    t = float(t)
    if not 0 < t <= T_MAX:
        raise PreconditionError(f"t must lie in (0, {T_MAX:g}], got {t}")
    return t


def _check_vanishing(f):
    if f.first_coefficient != 0:
        raise PreconditionError(
            "I_t needs a zero first coefficient (a_1 = 0); "
            f"got a_1 = {f.first_coefficient!r}")


def rl_apply(f, t):
    """``I_t f``: coefficient ``a_n`` becomes ``a_n / (log n)^t``."""
    t = _check_t(t)
    _check_vanishing(f)
    if not f:
        return f
    a = f.coeffs * np.exp(-t * np.log(f.logs))
    keep = a != 0
    return DirichletPolynomial._canonical(f.indices[keep], a[keep])


def rl_apply_quadrature(f, t, s):
    """``(1/Gamma(t)) int_0^inf x^(t-1) f(x + s) dx`` by adaptive quadrature.

    For ``t < 1`` the endpoint singularity is removed with ``x = y^(1/t)``.
    """
    t = _check_t(t)
    _check_vanishing(f)
    s = complex(s)
    if not s.real > 0:
        raise PreconditionError(f"the integral needs Re s > 0, got {s}")
    if not f:
        return 0j
    b = f.coeffs * np.exp(-s * f.logs)
    lam = f.logs
    # cut where the integrand is below 1e-17 of its scale
    scale = float(np.sum(np.abs(b)))
    X = (40.0 + max(t - 1, 0.0) * 4.0 + max(log(scale), 0.0)) / lam[0]

    def g(x):
        v = b @ np.exp(-x * lam)
        return np.array([v.real, v.imag])

    if t < 1:
        # x^(t-1) dx = dy / t
        val, err = integrate.quad_vec(lambda y: g(y ** (1.0 / t)), 0.0, X ** t,
                                      epsabs=0.0, epsrel=1e-11)
        val = val / t
    else:
        val, err = integrate.quad_vec(lambda x: x ** (t - 1) * g(x), 0.0, X,
                                      epsabs=0.0, epsrel=1e-11)
    return complex(val[0], val[1]) / gamma(t)


# --- oscillatory line integrals -----------------------------------------------

def _ibp_tail(T, c, omega, nu, terms=IBP_TERMS):
    """``int_T^inf (c - i tau)^-nu e^(-i omega tau) d tau`` by integration by parts.

    Returns the truncated expansion for each ``omega``.
    """
    omega = np.asarray(omega, dtype=np.float64)
    cc = -1j / omega
    E = np.exp(-1j * omega * T)
    out = np.zeros(omega.shape, dtype=np.complex128)
    poch = 1.0
    for k in range(terms):
        Gk = (1j) ** k * poch * (c - 1j * T) ** (-nu - k)
        out += cc ** (k + 1) * Gk * E
        poch *= nu + k
    return out


def _ibp_remainder(T, omega, nu, terms=IBP_TERMS):
    # |int_T^inf G^(K) E| <= (nu)_K T^(1 - nu - K) / (nu + K - 1), times omega^-K
    poch = special.poch(nu, terms)
    return np.asarray(omega, dtype=np.float64) ** (-terms) * poch * T ** (1 - nu - terms) / (nu + terms - 1)


def _cutoff(weight, nu, target, terms=IBP_TERMS):
    # smallest T with 2 * weight * (nu)_K T^(1-nu-K) / (nu+K-1) <= target
    poch = special.poch(nu, terms)
    return (2.0 * weight * poch / ((nu + terms - 1) * target)) ** (1.0 / (nu + terms - 1))


def _line_nodes(T, h, order=20):
    M = max(1, int(np.ceil(T / h)))
    h = T / M
    xg, wg = gauss_legendre(order)
    a = np.arange(M) * h
    nodes = (a[:, None] + (xg[None, :] + 1) * h / 2).ravel()
    weights = np.tile(wg * h / 2, M)
    return nodes, weights


@dataclass(frozen=True)
class LineIntegral:
    """Quadrature value, error estimate, truncation point and node count."""

    value: complex
    error: float
    cutoff: float
    nodes: int


def kt_quadrature(t, tol=1e-9):
    """``int e^(1-iy) / (1-iy)^(t+1) dy`` over the real line.

    The range ``|y| <= T`` is integrated with Gauss-Legendre panels and the
    two tails with a four-term integration-by-parts expansion whose
    remainder is bounded explicitly.

    Returns:
        LineIntegral with ``error`` = tail remainder plus a rounding estimate.
    """
    t = _check_t(t)
    nu = t + 1.0
    ref_scale = 2 * pi / gamma(t + 1)
    T = max(8.0, _cutoff(e, nu, 0.1 * tol * ref_scale))
    y, w = _line_nodes(T, min(0.5, 4.0 / (1.0 + nu)))
    F = w * np.exp(-1j * y) * (1 - 1j * y) ** (-nu)
    tail = _ibp_tail(T, 1.0, 1.0, nu)
    inner = F.sum()
    val = e * 2 * (inner + tail).real
    # both halves are conjugate, the integral is real
    rounding = e * 2 * _EPS * (np.abs(F).sum() + len(F) ** 0.5)
    err = 2 * e * float(_ibp_remainder(T, 1.0, nu)) + rounding
    return LineIntegral(complex(val), float(err), float(T), 2 * len(y))


def reference_kt(t):
    """Closed form ``2 pi / Gamma(t + 1)``."""
    return 2 * pi / gamma(float(t) + 1)


def kt_constant(t, tol=1e-9):
    """``k_t = int e^(1-iy)/(1-iy)^(t+1) dy``, checked against ``2 pi / Gamma(t+1)``.

    Raises:
        ToleranceError: the quadrature cannot certify relative accuracy ``tol``
            (catastrophic cancellation sets in for large ``t``) or disagrees
            with the reference.
    """
    res = kt_quadrature(t, tol)
    ref = reference_kt(t)
    kt = res.value.real
    if res.error > tol * ref:
        raise ToleranceError(
            f"k_t for t={t}: error estimate {res.error:.3g} exceeds tol*k_t = {tol * ref:.3g}",
            achieved=res.error / ref)
    if abs(kt - ref) > tol * ref:
        raise ToleranceError(f"k_t = {kt!r} disagrees with 2 pi/Gamma(t+1) = {ref!r}",
                             achieved=abs(kt - ref) / ref)
    return kt


def boundary_integral(f, t, theta, tol=1e-6):
    """``(1/k_t) int I_t f(i tau) / (theta - i tau)^(t+1) d tau`` with error estimate."""
    t = _check_t(t)
    _check_vanishing(f)
    theta = float(theta)
    if not theta > 0:
        raise PreconditionError(f"theta must be positive, got {theta}")
    if not f:
        return LineIntegral(0j, 0.0, 0.0, 0)
    g = rl_apply(f, t)
    nu = t + 1.0
    kt = 2 * pi / gamma(t + 1)
    omega = g.logs
    weight = float(np.sum(np.abs(g.coeffs) * omega ** (-IBP_TERMS)))
    T = max(8.0, 4.0 * theta, _cutoff(weight, nu, 0.1 * tol * kt))
    h = min(1.0, theta / 2, 4.0 / (omega[-1] + nu / theta))
    tau, w = _line_nodes(T, h)
    Gp = (theta - 1j * tau) ** (-nu)
    Gm = np.conj(Gp)
    body = np.sum(w * (evaluate(g, 1j * tau) * Gp + evaluate(g, -1j * tau) * Gm))
    tails = _ibp_tail(T, theta, omega, nu)
    tail = np.sum(g.coeffs * 2 * tails.real)
    rem = 2 * float(np.sum(np.abs(g.coeffs) * _ibp_remainder(T, omega, nu)))
    rounding = _EPS * float(np.sum(np.abs(g.coeffs))) * float(np.sum(w * np.abs(Gp))) * 2
    value = (body + tail) / kt
    return LineIntegral(complex(value), float((rem + rounding) / kt), float(T), 2 * len(tau))


def reconstruct(f, t, theta, tol=1e-4):
    """Recover ``f(theta)`` from the boundary values of ``I_t f``.

    Raises:
        ToleranceError: the estimate misses ``evaluate(f, theta)`` by more
            than ``tol``.
    """
    res = boundary_integral(f, t, theta, tol)
    ref = evaluate(f, float(theta))
    if not abs(res.value - ref) <= tol:
        raise ToleranceError(
            f"reconstruction {res.value!r} misses f(theta) = {ref!r} by {abs(res.value - ref):.3g}",
            achieved=abs(res.value - ref))
    return res.value
