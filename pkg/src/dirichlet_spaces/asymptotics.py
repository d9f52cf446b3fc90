"""Grid sweeps, log-log exponent fits and the scripted asymptotic experiments.

Every experiment returns an :class:`ExperimentResult` with one row per grid
point (``sigma, value, err, N, method``), the fitted exponent, the expected
value and tolerance, and a pass/fail verdict. Rows are always sorted by
``sigma`` and floats are written with 17 significant digits, so re-running an
experiment with the same ExperimentSpec reproduces its CSV byte for byte.
"""

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import euler
from .errors import PreconditionError, SaturationError
from .jsonio import dumps
from .measures import WeightMeasure, moment_closed_form
from .norms import norm_ap, norm_hp_even
from .pointeval import delta_norm_a2
from .polynomial import DirichletPolynomial, divisor_counts, translate, zeta_power
from .riemann_liouville import rl_apply

EXPERIMENTS = ("point-eval", "zeta-power", "norm-equivalence", "embedding")
CSV_HEADER = ("sigma", "value", "err", "N", "method")


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares fit of ``log y = slope log x + intercept``.

    ``grid`` holds the original ``(sigma, value)`` pairs; ``variable`` names
    the abscissa (``"log(sigma-1/2)"`` or ``"log(2sigma-1)"``).
    """

    slope: float
    intercept: float
    r_squared: float
    grid: tuple
    variable: str = "log(x)"

    def to_dict(self):
        return {"slope": self.slope, "intercept": self.intercept,
                "r_squared": self.r_squared, "variable": self.variable,
                "grid": [list(g) for g in self.grid]}


def fit_exponent(points, variable="log(x)", grid=None):
    """OLS of ``log y`` on ``log x``.

    Args:
        points: iterable of ``(x, y)`` with ``x, y > 0``; at least 3.
        grid: optional ``(sigma, value)`` pairs recorded in the result
            (defaults to ``points``).
    """
    pts = np.asarray(list(points), dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise PreconditionError("fit_exponent needs at least 3 (x, y) points")
    if not np.all(np.isfinite(pts)) or np.any(pts <= 0):
        raise PreconditionError("fit_exponent needs finite positive x and y")
    lx, ly = np.log(pts[:, 0]), np.log(pts[:, 1])
    if np.ptp(lx) == 0:
        raise PreconditionError("fit_exponent: all x values are equal")
    xm, ym = lx.mean(), ly.mean()
    dx, dy = lx - xm, ly - ym
    slope = float(dx @ dy / (dx @ dx))
    intercept = float(ym - slope * xm)
    ss_res = float(np.sum((dy - slope * dx) ** 2))
    ss_tot = float(dy @ dy)
    r2 = 1.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    g = pts if grid is None else grid
    return ExponentFit(slope, intercept, r2, tuple((float(a), float(b)) for a, b in g), variable)


@dataclass(frozen=True)
class ExperimentSpec:
    """Parameters of one experiment run.

    ``grid`` is ``(sigma_min, sigma_max, count, spacing)``; ``"log"`` spacing
    is logarithmic in ``sigma - 1/2`` (equivalently in ``2 sigma - 1``).
    ``method`` selects ``"euler"`` (full series) or ``"truncated"``
    (``zeta_N^m``) for the zeta experiments; ``route`` selects the embedding
    numerator (``"identity"`` or ``"rl"``).
    """

    experiment: str
    alpha: float = 0.0
    p: int = 2
    q: int = 2
    t: float = 1.0
    m: int = 1
    N: Optional[int] = None
    grid: tuple = (0.505, 0.6, 20, "log")
    seed: int = 0
    out: Optional[str] = None
    method: str = "euler"
    route: str = "identity"
    subspace: bool = False
    samples: int = 100
    tolerance: Optional[float] = None
    workers: Optional[int] = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise PreconditionError(f"unknown experiment {self.experiment!r}")
        lo, hi, count, spacing = self.grid
        if not 0.5 < lo < hi:
            raise PreconditionError(f"grid needs 1/2 < sigma_min < sigma_max, got {lo}, {hi}")
        if int(count) < 3:
            raise PreconditionError("grid needs at least 3 points")
        if spacing not in ("log", "linear"):
            raise PreconditionError(f"grid spacing must be 'log' or 'linear', got {spacing!r}")
        if not self.alpha > -1:
            raise PreconditionError(f"alpha must exceed -1, got {self.alpha}")
        if not self.t > 0:
            raise PreconditionError(f"t must be positive, got {self.t}")

    def sigmas(self):
        lo, hi, count, spacing = self.grid
        if spacing == "log":
            return 0.5 + np.geomspace(lo - 0.5, hi - 0.5, int(count))
        return np.linspace(lo, hi, int(count))

    def to_dict(self):
        d = asdict(self)
        d["grid"] = list(self.grid)
        return d


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    fit: Optional[ExponentFit]
    rows: list
    expected: Optional[float]
    tolerance: Optional[float]
    passed: bool
    verdict: str = ""
    diagnostics: dict = field(default_factory=dict)

    def summary(self):
        return {"experiment": self.spec.experiment, "spec": self.spec.to_dict(),
                "fit": self.fit.to_dict() if self.fit else None,
                "expected": self.expected, "tolerance": self.tolerance,
                "passed": self.passed, "verdict": self.verdict,
                "diagnostics": self.diagnostics}

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in sorted(self.rows, key=lambda r: (r["sigma"], r["method"])):
            w.writerow([_fmt(r[k]) for k in CSV_HEADER])
        return buf.getvalue()

    def write(self, path):
        """Write the CSV rows to ``path`` and the JSON summary next to it."""
        path = Path(path)
        path.write_text(self.to_csv())
        path.with_suffix(".json").write_text(dumps(self.summary(), indent=2) + "\n")


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _row(sigma, value, err, N, method):
    return {"sigma": float(sigma), "value": float(value), "err": float(err),
            "N": int(N), "method": method}


# --- point evaluation ------------------------------------------------------------

def _point_tolerance(alpha):
    return 0.05 if alpha == 0 else 0.08


def pointeval_checks(sigmas, alpha, workers=None):
    """Sandwich ``sub <= full <= 1 + 2 sub`` and monotonicity in ``sigma`` on a grid.

    All comparisons allow for the reported tail bounds.
    """
    sig = np.sort(np.asarray(sigmas, dtype=np.float64))
    full = _map(lambda s: delta_norm_a2(s, alpha, False), sig, workers)
    sub = _map(lambda s: delta_norm_a2(s, alpha, True), sig, workers)
    fv = np.array([k.value for k in full])
    fb = np.array([k.tail_bound for k in full])
    sv = np.array([k.value for k in sub])
    sb = np.array([k.tail_bound for k in sub])
    lower = bool(np.all(sv <= fv + sb + fb))
    upper = bool(np.all(fv <= 1 + 2 * sv + fb + 2 * sb))
    mono_f = bool(np.all(fv[1:] <= fv[:-1] + fb[1:] + fb[:-1]))
    mono_s = bool(np.all(sv[1:] <= sv[:-1] + sb[1:] + sb[:-1]))
    return {"sandwich_lower": lower, "sandwich_upper": upper,
            "monotone_full": mono_f, "monotone_subspace": mono_s,
            "identity_max_dev": float(np.max(np.abs(fv**2 - sv**2 - 1) / fv**2)),
            "full": fv.tolist(), "subspace": sv.tolist()}


def experiment_point_eval(spec):
    """Fit ``||delta_sigma||_{A^2_alpha}`` against ``sigma - 1/2``; expected slope ``-(alpha+2)/2``."""
    if int(spec.p) != 2:
        raise PreconditionError("point-eval experiment runs on the exact p = 2 path only")
    sig = spec.sigmas()
    vals = _map(lambda s: delta_norm_a2(s, spec.alpha, spec.subspace), sig, spec.workers)
    rows = [_row(k.sigma, k.value, k.tail_bound, k.truncation_N, "kernel") for k in vals]
    fit = fit_exponent([(s - 0.5, k.value) for s, k in zip(sig, vals)], "log(sigma-1/2)",
                       [(s, k.value) for s, k in zip(sig, vals)])
    expected = -(spec.alpha + 2) / 2
    tol = spec.tolerance if spec.tolerance is not None else _point_tolerance(spec.alpha)
    diag = pointeval_checks(sig, spec.alpha, spec.workers)
    other = [k.value for k in _map(lambda s: delta_norm_a2(s, spec.alpha, not spec.subspace),
                                   sig, spec.workers)]
    diag["other_space_slope"] = fit_exponent(list(zip(sig - 0.5, other))).slope
    ok = abs(fit.slope - expected) <= tol
    return ExperimentResult(spec, fit, rows, expected, tol, ok,
                            "match" if ok else "mismatch", diag)


# --- zeta powers ---------------------------------------------------------------

def _zeta_tolerance(m):
    return {1: 0.05, 2: 0.2, 3: 0.5}.get(int(m), 0.5)


def _truncated_h2(m, N, sig):
    d2 = divisor_counts(m, N)[1:].astype(np.float64) ** 2
    ln = np.log(np.arange(1, N + 1, dtype=np.float64))
    out = np.empty(len(sig))
    for i, s in enumerate(sig):
        out[i] = np.sqrt(np.sum(d2 * np.exp(-2 * s * ln)))
    return out


def _zeta_values(spec, N, sig):
    if spec.method == "euler":
        v, rel = euler.zeta_power_hp_norm(spec.m, 2, sig, N)
        return v, v * rel
    if spec.method == "truncated":
        return _truncated_h2(spec.m, N, sig), np.zeros(len(sig))
    raise PreconditionError(f"method must be 'euler' or 'truncated', got {spec.method!r}")


def experiment_zeta_power(spec):
    """Fit ``||zeta^m_sigma||_{H^2}`` against ``2 sigma - 1``; expected slope ``-m^2/2``.

    ``N`` is the prime cutoff of the Euler product (``method="euler"``) or the
    truncation of ``zeta_N^m`` (``method="truncated"``).

    Raises:
        SaturationError: refitting with ``2N`` moves the slope by half the
            tolerance or more.
    """
    m = int(spec.m)
    if not 1 <= m <= 3:
        raise PreconditionError("zeta-power experiment supports m in {1, 2, 3}")
    N = int(spec.N or 10**6)
    if spec.method == "truncated" and N > 10**7:
        raise PreconditionError("truncated zeta-power is limited to N <= 10^7")
    sig = spec.sigmas()
    tol = spec.tolerance if spec.tolerance is not None else _zeta_tolerance(m)
    v, err = _zeta_values(spec, N, sig)
    fit = fit_exponent(list(zip(2 * sig - 1, v)), "log(2sigma-1)", list(zip(sig, v)))
    v2, _ = _zeta_values(spec, 2 * N, sig)
    refit = fit_exponent(list(zip(2 * sig - 1, v2))).slope
    diag = {"refit_slope_2N": refit, "saturation_shift": abs(refit - fit.slope)}
    if abs(refit - fit.slope) >= tol / 2:
        raise SaturationError(
            f"grid too aggressive for N = {N}: slope {fit.slope:.4f} moves to {refit:.4f} "
            "when N is doubled", slope=fit.slope, refit_slope=refit)
    rows = [_row(s, a, b, N, spec.method) for s, a, b in zip(sig, v, err)]
    expected = -m * m / 2
    ok = abs(fit.slope - expected) <= tol
    return ExperimentResult(spec, fit, rows, expected, tol, ok,
                            "match" if ok else "mismatch", diag)


# --- norm equivalence ------------------------------------------------------------

def random_vanishing_polynomials(count, seed, max_index=1000, max_terms=8):
    """Seeded family of random polynomials with ``a_1 = 0``."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(int(count)):
        k = int(rng.integers(1, max_terms + 1))
        n = rng.choice(np.arange(2, max_index + 1), size=k, replace=False)
        c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        out.append(DirichletPolynomial(n, c))
    return out


def weight_ratio_envelope(alpha, t, max_index):
    """``[sqrt(min rho_n), sqrt(max rho_n)]`` with ``rho_n = w^(alpha+2t)_n / ((log n)^-2t w^(alpha)_n)``.

    Computed directly from the moment closed form over ``2 <= n <= max_index``.
    """
    n = np.arange(2, int(max_index) + 1)
    rho = (moment_closed_form(WeightMeasure.alpha_density(alpha + 2 * t), n)
           / (np.log(n) ** (-2 * t) * moment_closed_form(WeightMeasure.alpha_density(alpha), n)))
    return float(np.sqrt(rho.min())), float(np.sqrt(rho.max())), float(np.max(1 / rho))


def norm_ratio(f, alpha, t, p):
    """``||f||_{A^p_{alpha+tp}} / ||I_t f||_{A^p_alpha}`` with exact even-p norms."""
    num = norm_ap(f, WeightMeasure.alpha_density(alpha + t * p), p, inner="moment").value
    den = norm_ap(rl_apply(f, t), WeightMeasure.alpha_density(alpha), p, inner="moment").value
    return num / den


def experiment_norm_equivalence(spec):
    """Ratio statistics of ``||f||_{A^p_{alpha+tp}} / ||I_t f||_{A^p_alpha}`` on random ``f``.

    Passes for ``p = 2`` if every ratio lies in the weight-ratio envelope and
    the spread is below ``sup ((1+log n)/log n)^(2t)``; for ``p = 4`` if the
    spread is below 10.
    """
    p = int(spec.p)
    if p < 2 or p % 2:
        raise PreconditionError("norm-equivalence needs an even p")
    max_index = int(spec.N or 1000)
    polys = random_vanishing_polynomials(spec.samples, spec.seed, max_index)
    ratios = np.array(_map(lambda f: norm_ratio(f, spec.alpha, spec.t, p), polys, spec.workers))
    spread = float(ratios.max() / ratios.min())
    rows = [{"sigma": "", "value": float(r), "err": 0.0, "N": int(f.max_index),
             "method": "moment"} for r, f in zip(ratios, polys)]
    mono = np.array([norm_ratio(DirichletPolynomial.monomial(n), spec.alpha, spec.t, p)
                     for n in (2, 10, 100, max_index)])
    diag = {"min": float(ratios.min()), "max": float(ratios.max()), "spread": spread,
            "monomial_ratios": mono.tolist()}
    if p == 2:
        lo, hi, sup = weight_ratio_envelope(spec.alpha, spec.t, max_index)
        bound = sup
        inside = bool(np.all(ratios >= lo * (1 - 1e-12)) and np.all(ratios <= hi * (1 + 1e-12)))
        diag.update({"envelope": [lo, hi], "inside_envelope": inside})
        ok = inside and spread <= bound
    else:
        bound = 10.0
        ok = spread <= bound
    return ExperimentResult(spec, None, rows, bound, None, bool(ok),
                            "within-bound" if ok else "outside-bound", diag)


# --- embedding dichotomy ------------------------------------------------------------

BOUNDED_THRESHOLD = -0.1


def predicted_embedding_slope(m, p, q, alpha, t):
    """Growth exponent of the test ratio in ``2 sigma - 1`` (meaningful for ``p < q``)."""
    return -(m * m * (q - p) / 4 - (alpha + q * t + 1) / q)


def _embedding_values(spec, N, sig):
    m, p, q = int(spec.m), int(spec.p), int(spec.q)
    if spec.method == "euler":
        den, rel_d = euler.zeta_power_hp_norm(m, p, sig, N)
        if spec.route == "identity":
            mu = WeightMeasure.alpha_density(spec.alpha + q * spec.t)
            num, rel_n = euler.zeta_power_ap_norm(m, q, sig, mu, N)
        elif spec.route == "rl":
            if q != 2:
                raise PreconditionError("the rl route is available for q = 2 only")
            num, rel_n = euler.rl_zeta_power_a2_norm(m, spec.t, sig, spec.alpha, N)
        else:
            raise PreconditionError(f"route must be 'identity' or 'rl', got {spec.route!r}")
        R = num / den
        return R, R * (rel_n + rel_d)
    if spec.method == "truncated":
        base = zeta_power(m, N)
        vanishing = base - DirichletPolynomial.constant(1.0)
        mu = WeightMeasure.alpha_density(spec.alpha)
        R = np.empty(len(sig))
        for i, s in enumerate(sig):
            num = norm_ap(rl_apply(translate(vanishing, s), spec.t), mu, q, inner="moment").value
            den = norm_hp_even(translate(base, s), p).value
            R[i] = num / den
        return R, np.zeros(len(sig))
    raise PreconditionError(f"method must be 'euler' or 'truncated', got {spec.method!r}")


def experiment_embedding(spec):
    """Growth exponent of ``||I_t F_sigma||_{A^q_alpha} / ||F_sigma||_{H^p}`` for ``F = zeta^m``.

    Verdict ``bounded-consistent`` when the slope exceeds -0.1 (the ratio does
    not blow up as ``sigma -> 1/2``), ``unbounded-consistent`` otherwise.
    """
    p, q = int(spec.p), int(spec.q)
    for name, v in (("p", p), ("q", q)):
        if v < 2 or v % 2:
            raise PreconditionError(f"{name} must be an even integer, got {v}")
    N = int(spec.N or (10**5 if spec.method == "euler" else 1000))
    sig = spec.sigmas()
    R, err = _embedding_values(spec, N, sig)
    fit = fit_exponent(list(zip(2 * sig - 1, R)), "log(2sigma-1)", list(zip(sig, R)))
    tol = spec.tolerance if spec.tolerance is not None else 0.25
    R2, _ = _embedding_values(spec, 2 * N, sig)
    refit = fit_exponent(list(zip(2 * sig - 1, R2))).slope
    diag = {"refit_slope_2N": refit, "saturation_shift": abs(refit - fit.slope)}
    if abs(refit - fit.slope) >= tol / 2:
        raise SaturationError(
            f"grid too aggressive for N = {N}: slope {fit.slope:.4f} moves to {refit:.4f} "
            "when N is doubled", slope=fit.slope, refit_slope=refit)
    verdict = "unbounded-consistent" if fit.slope <= BOUNDED_THRESHOLD else "bounded-consistent"
    bounded = p >= q
    ok = verdict == ("bounded-consistent" if bounded else "unbounded-consistent")
    expected = None
    if not bounded:
        expected = predicted_embedding_slope(spec.m, p, q, spec.alpha, spec.t)
        ok = ok and abs(fit.slope - expected) <= tol
    diag["predicted_slope"] = predicted_embedding_slope(spec.m, p, q, spec.alpha, spec.t)
    method = spec.method if spec.method == "truncated" else f"euler-{spec.route}"
    rows = [_row(s, a, b, N, method) for s, a, b in zip(sig, R, err)]
    return ExperimentResult(spec, fit, rows, expected, tol if not bounded else None, bool(ok),
                            verdict, diag)


RUNNERS = {
    "point-eval": experiment_point_eval,
    "zeta-power": experiment_zeta_power,
    "norm-equivalence": experiment_norm_equivalence,
    "embedding": experiment_embedding,
}


def run_experiment(spec):
    """Dispatch on ``spec.experiment`` and write outputs if ``spec.out`` is set."""
    result = RUNNERS[spec.experiment](spec)
    if spec.out:
        result.write(spec.out)
    return result
