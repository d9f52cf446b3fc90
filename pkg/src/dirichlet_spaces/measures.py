"""Weight measures on (0, inf) and their Dirichlet moments.

Every supported measure has a density of the form ``C u^g exp(-lam u)``:

* ``alpha(a)``  C = 2^(a+1)/Gamma(a+1), g = a, lam = 2  (a probability density)
* ``power(b)``  C = 1, g = b, lam = 0                   (infinite mass)
* ``tilde(base, p, t)``  base density times ``u^(p t)``

so the moments ``w_n = int n^(-2u) dmu(u)`` all have the closed form
``C Gamma(g+1) / (lam + 2 log n)^(g+1)``. The quadrature path integrates the
density directly and is checked against that closed form.
"""

from dataclasses import dataclass, field
from math import lgamma, log, exp
from typing import Optional

import numpy as np
from scipy import integrate

from .errors import PreconditionError, ToleranceError

MOMENT_RTOL = 1e-8

# pointwise-check grids for the H- and D-conditions
LAMBDA_GRID = 2.0 ** -np.arange(1, 21)
U_GRID = np.geomspace(1e-3, 1e3, 200)


@dataclass(frozen=True)
class WeightMeasure:
    """Tagged measure on ``(0, inf)``.

    Build instances with :meth:`alpha_density`, :meth:`power` or
    :meth:`tilde` rather than calling the constructor directly.
    """

    kind: str
    param: float = 0.0
    base: Optional["WeightMeasure"] = None
    p: Optional[float] = None
    t: Optional[float] = None

    def __post_init__(self):
        if self.kind == "alpha":
            if not self.param > -1:
                raise PreconditionError(f"alpha-density needs alpha > -1, got {self.param}")
        elif self.kind == "power":
            if not self.param > -1:
                raise PreconditionError(f"power weight needs beta > -1, got {self.param}")
        elif self.kind == "tilde":
            if self.base is None:
                raise PreconditionError("tilde measure needs a base measure")
            if self.p is None or not self.p >= 1:
                raise PreconditionError(f"tilde measure needs p >= 1, got {self.p}")
            if self.t is None or not self.t > 0:
                raise PreconditionError(f"tilde measure needs t > 0, got {self.t}")
        else:
            raise PreconditionError(f"unknown measure kind {self.kind!r}")

    @classmethod
    def alpha_density(cls, alpha):
        return cls("alpha", float(alpha))

    @classmethod
    def power(cls, beta):
        return cls("power", float(beta))

    @classmethod
    def tilde(cls, base, p, t):
        return cls("tilde", 0.0, base, float(p), float(t))

    @property
    def alpha(self):
        return self.param if self.kind == "alpha" else None

    @property
    def beta(self):
        return self.param if self.kind == "power" else None

    @property
    def shape(self):
        """``(log C, g, lam)`` with density ``C u^g exp(-lam u)``."""
        if self.kind == "alpha":
            a = self.param
            return (a + 1) * log(2.0) - lgamma(a + 1), a, 2.0
        if self.kind == "power":
            return 0.0, self.param, 0.0
        logc, g, lam = self.base.shape
        return logc, g + self.p * self.t, lam

    @property
    def is_probability(self):
        return self.kind == "alpha"

    @property
    def total_mass(self):
        logc, g, lam = self.shape
        if lam == 0:
            return float("inf")
        return exp(logc + lgamma(g + 1) - (g + 1) * log(lam))

    def density(self, u):
        return density_at(self, u)

    def log_density(self, u):
        logc, g, lam = self.shape
        u = np.asarray(u, dtype=np.float64)
        with np.errstate(divide="ignore"):
            return logc + g * np.log(u) - lam * u

    def to_descriptor(self):
        if self.kind == "alpha":
            return {"kind": "alpha", "alpha": self.param}
        if self.kind == "power":
            return {"kind": "power", "beta": self.param}
        return {"kind": "tilde", "base": self.base.to_descriptor(), "p": self.p, "t": self.t}

    @classmethod
    def from_descriptor(cls, doc):
        """Parse ``{"kind": "alpha"|"power"|"tilde", "alpha", "beta", "p", "t"}``.

        A tilde descriptor takes its base from ``"base"`` if present, else from
        ``"alpha"`` (alpha-density) or ``"beta"`` (power weight).
        """
        if not isinstance(doc, dict) or "kind" not in doc:
            raise PreconditionError('measure descriptor must be an object with a "kind"')
        kind = doc["kind"]
        try:
            if kind == "alpha":
                return cls.alpha_density(float(doc["alpha"]))
            if kind == "power":
                return cls.power(float(doc["beta"]))
            if kind == "tilde":
                if "base" in doc:
                    base = cls.from_descriptor(doc["base"])
                elif doc.get("alpha") is not None:
                    base = cls.alpha_density(float(doc["alpha"]))
                elif doc.get("beta") is not None:
                    base = cls.power(float(doc["beta"]))
                else:
                    raise PreconditionError("tilde descriptor needs a base (alpha, beta or base)")
                return cls.tilde(base, float(doc["p"]), float(doc["t"]))
        except KeyError as exc:
            raise PreconditionError(f"measure descriptor missing field {exc}") from None
        raise PreconditionError(f"unknown measure kind {kind!r}")


def density_at(mu, sigma):
    """Pointwise density value at ``sigma > 0``."""
    s = np.asarray(sigma, dtype=np.float64)
    if np.any(~(s > 0)):
        raise PreconditionError("density is evaluated at sigma > 0 only")
    out = np.exp(mu.log_density(s))
    return float(out) if out.ndim == 0 else out


def integrate_measure(mu, func, decay, epsrel=1e-12):
    """``int_0^inf func(u) dmu(u)`` by adaptive Gauss-Kronrod quadrature.

    Args:
        func: smooth scalar function with ``|func(u)| <= c exp(-decay u)``.
        decay: decay rate of ``func``; together with the density's own rate it
            must be positive so the range can be cut at a finite ``U``.

    Returns:
        (value, abserr)
    """
    logc, g, lam = mu.shape
    rate = lam + decay
    if not rate > 0:
        raise PreconditionError("integral diverges: no exponential decay at infinity")
    upper = (40.0 + 5.0 * max(g, 0.0)) * 2.0 / rate
    head = min(upper, 1.0 / rate)
    scale = exp(logc)
    # the u^g factor is a QAWS algebraic weight on the first panel
    v1, e1 = integrate.quad(lambda u: func(u) * exp(-lam * u), 0.0, head,
                            weight="alg", wvar=(g, 0.0), epsabs=0.0, epsrel=epsrel,
                            limit=200)
    v2, e2 = integrate.quad(lambda u: func(u) * u**g * exp(-lam * u), head, upper,
                            epsabs=0.0, epsrel=epsrel, limit=200)
    return scale * (v1 + v2), scale * (e1 + e2)


def moment_closed_form(mu, n):
    """``w_n`` from the Gamma-function formula; vectorized over ``n``."""
    logc, g, lam = mu.shape
    n = np.asarray(n, dtype=np.float64)
    rate = lam + 2.0 * np.log(n)
    if np.any(rate <= 0):
        raise PreconditionError(
            f"moment diverges for {mu.kind} weight at n = 1 (infinite total mass)")
    out = np.exp(logc + lgamma(g + 1) - (g + 1) * np.log(rate))
    return float(out) if out.ndim == 0 else out


def moment_weight(mu, n, check=True):
    """``w_n = int n^(-2u) dmu(u)`` by quadrature.

    The result is compared with :func:`moment_closed_form` and a
    :class:`ToleranceError` is raised if they differ by more than 1e-8
    relative.
    """
    n = int(n)
    if n < 1:
        raise PreconditionError(f"moment index must be >= 1, got {n}")
    L = log(n)
    if mu.shape[2] + 2 * L <= 0:
        raise PreconditionError(
            f"moment diverges for {mu.kind} weight at n = 1 (infinite total mass)")
    value, _ = integrate_measure(mu, lambda u: exp(-2.0 * L * u), 2.0 * L)
    if check:
        ref = moment_closed_form(mu, n)
        if abs(value - ref) > MOMENT_RTOL * abs(ref):
            raise ToleranceError(
                f"moment quadrature {value!r} disagrees with closed form {ref!r} at n={n}",
                achieved=abs(value - ref) / abs(ref))
    return value


# --- H- and D-conditions -------------------------------------------------------

@dataclass(frozen=True)
class ConditionReport:
    """Verdict of a condition check, with the evidence behind it.

    ``value`` is the integral for the H-condition and the observed constant
    ``C`` for the D-condition. ``witness`` is a violating grid point, if any.
    """

    condition: str
    satisfied: bool
    value: Optional[float] = None
    witness: Optional[dict] = None
    notes: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {"condition": self.condition, "satisfied": self.satisfied,
                "value": self.value, "witness": self.witness, "notes": list(self.notes)}


def h_condition_integral(a, p, t):
    """``int_0^inf x^(t-1) q(1/(x+1))^(1/p) (x+1)^-(t+1/p) dx`` for ``q(l) = l^a``."""
    c = (1.0 + a) / p
    # [0, 1] directly; [1, inf) after x = 1/y, both with algebraic end weights
    v1, e1 = integrate.quad(lambda x: (1.0 + x) ** (-t - c), 0.0, 1.0,
                            weight="alg", wvar=(t - 1.0, 0.0), epsabs=0.0, epsrel=1e-12)
    v2, e2 = integrate.quad(lambda y: (1.0 + y) ** (-t - c), 0.0, 1.0,
                            weight="alg", wvar=(c - 1.0, 0.0), epsabs=0.0, epsrel=1e-12)
    return v1 + v2, e1 + e2


def check_H_condition(h, a, p, t):
    """Check ``h(l u) <= l^a h(u)`` on a grid and evaluate the integrability integral.

    Only power-law ``q(l) = l^a`` are examined, so a violated verdict means
    "violated for this q", not for every q.
    """
    if not a > -1:
        raise PreconditionError(f"q(l) = l^a needs a > -1, got {a}")
    if not p >= 1:
        raise PreconditionError(f"p must be >= 1, got {p}")
    if not t > 0:
        raise PreconditionError(f"t must be > 0, got {t}")
    value, _ = h_condition_integral(a, p, t)
    lam = LAMBDA_GRID[:, None]
    u = U_GRID[None, :]
    excess = h.log_density(lam * u) - h.log_density(u) - a * np.log(lam)
    notes = []
    if h.kind == "power" and not h.is_probability:
        notes.append("power weight has infinite mass; the inequality is checked as stated")
    if excess.max() > 1e-12:
        # report the violation closest to ratio/q = e, which stays representable
        score = np.where(excess > 1e-12, np.abs(excess - 1.0), np.inf)
        i, j = np.unravel_index(np.argmin(score), score.shape)
        lam_w, u_w = float(LAMBDA_GRID[i]), float(U_GRID[j])
        witness = {"lambda": lam_w, "u": u_w,
                   "ratio": float(np.exp(excess[i, j] + a * np.log(lam_w))),
                   "q": lam_w ** a}
        return ConditionReport("H", False, value, witness,
                               tuple(notes + [f"violated for q(l) = l^{a} only"]))
    return ConditionReport("H", True, value, None, tuple(notes))


def check_D_condition(h):
    """Estimate ``sup_u h(2u)/h(u)`` on a logarithmic grid.

    Satisfied when the ratio stays bounded: it must not still be growing at
    either end of the grid (relative change per grid step below 1%).
    """
    logr = h.log_density(2.0 * U_GRID) - h.log_density(U_GRID)
    notes = []
    growth_low = logr[0] - logr[1]
    growth_high = logr[-1] - logr[-2]
    if growth_low > 0.01 or growth_high > 0.01:
        j = 0 if growth_low > growth_high else len(U_GRID) - 1
        witness = {"u": float(U_GRID[j]), "ratio": float(np.exp(logr[j]))}
        return ConditionReport("D", False, None, witness,
                               ("ratio h(2u)/h(u) still growing at the grid edge",))
    # log h(2u) - log h(u) = g log 2 - lam u, so the sup is the u -> 0 limit
    logc, g, lam = h.shape
    C = float(2.0 ** g) if lam >= 0 else float(np.exp(logr.max()))
    notes.append(f"grid sup {float(np.exp(logr.max()))!r}")
    if h.kind == "alpha" or (h.kind == "tilde" and h.shape[2] > 0):
        notes.append(
            "literal ratio 2^g exp(-2u) is bounded, although alpha-densities are "
            "usually said to fail the D-condition; reported as computed")
    return ConditionReport("D", True, C, None, tuple(notes))
