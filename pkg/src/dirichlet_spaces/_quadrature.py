"""Fixed composite Gauss rules for vectorized integrals against weight measures."""

from functools import lru_cache

import numpy as np
from scipy import special

DEFAULT_ORDER = 24


@lru_cache(maxsize=32)
def gauss_legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


@lru_cache(maxsize=64)
def gauss_jacobi(order, g):
    # weight (1 + x)^g on [-1, 1]
    x, w = special.roots_jacobi(order, 0.0, g)
    return x, w


def geometric_breaks(start, upper, ratio=2.0):
    """``[0, start, ratio*start, ..., upper]``: panels refined towards 0."""
    b = [0.0]
    x = float(start)
    while x < upper:
        b.append(x)
        x *= ratio
    b.append(float(upper))
    return np.asarray(b)


def panel_rule(breaks, order=DEFAULT_ORDER):
    """Composite Gauss-Legendre nodes and weights over consecutive ``breaks``."""
    xg, wg = gauss_legendre(order)
    a, b = breaks[:-1], breaks[1:]
    half = (b - a)[:, None] / 2
    nodes = (a[:, None] + half * (xg[None, :] + 1)).ravel()
    weights = (half * wg[None, :]).ravel()
    return nodes, weights


def measure_rule(mu, start, upper=None, order=DEFAULT_ORDER):
    """Nodes and weights for ``int f(u) dmu(u)`` with ``dmu = C u^g e^(-lam u) du``.

    The first panel ``[0, start]`` uses Gauss-Jacobi with the ``u^g`` factor
    built in; the remaining panels are Gauss-Legendre, doubling in width up to
    ``upper`` (default: where ``e^(-lam u)`` is negligible).

    Returns:
        (nodes, weights) with the density folded into the weights.
    """
    logc, g, lam = mu.shape
    if upper is None:
        if lam <= 0:
            raise ValueError("an upper limit is required for measures without decay")
        upper = (40.0 + 5.0 * max(g, 0.0)) * 2.0 / lam
    start = min(start, upper / 2)
    xj, wj = gauss_jacobi(order, float(g))
    half = start / 2
    n0 = half * (xj + 1)
    w0 = wj * half ** (g + 1) * np.exp(logc - lam * n0)
    n1, w1 = panel_rule(geometric_breaks(start, upper)[1:], order)
    w1 = w1 * np.exp(logc + g * np.log(n1) - lam * n1)
    return np.concatenate([n0, n1]), np.concatenate([w0, w1])
