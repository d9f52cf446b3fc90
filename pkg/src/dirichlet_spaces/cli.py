"""Command-line interface.

Every run is described completely by its argv, which is echoed into the JSON
payload on stdout. Human-readable messages go to stderr. Exit codes:

    0  ok
    2  precondition violation (including bad flags)
    3  tolerance not attained
    4  saturation diagnostic failed
"""

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import asymptotics, measures, norms, pointeval, riemann_liouville as rl
from .errors import PreconditionError, SaturationError, ToleranceError
from .jsonio import dumps
from .polynomial import evaluate, from_json_dict, to_json_dict, zeta_power

EXIT_CODES = {"ok": 0, "precondition-violation": 2, "tolerance-unattained": 3, "saturation": 4}


@dataclass
class CommandResult:
    status: str
    payload: dict
    message: str = ""

    @property
    def exit_code(self):
        return EXIT_CODES[self.status]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # raise instead of exiting so dispatch() can return a CommandResult
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _read_poly(path):
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"input is not valid JSON: {exc}") from None
    except OSError as exc:
        raise PreconditionError(f"cannot read input: {exc}") from None
    return from_json_dict(doc)


def _measure(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"--measure is not valid JSON: {exc}") from None
    return measures.WeightMeasure.from_descriptor(doc)


def _grid(text):
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise PreconditionError(f"--grid must be a:b:k or a:b:k:spacing, got {text!r}")
    try:
        lo, hi, k = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise PreconditionError(f"--grid must be a:b:k, got {text!r}") from None
    return (lo, hi, k, parts[3] if len(parts) == 4 else "log")


# --- subcommands -------------------------------------------------------------------

def cmd_norm(a):
    f = _read_poly(a.input)
    if a.space == "hp":
        est = norms.norm_hp(f, a.p, a.inner, a.samples, a.seed, a.threads)
    else:
        if a.measure is None:
            raise PreconditionError("--space ap needs --measure")
        est = norms.norm_ap(f, _measure(a.measure), a.p, a.inner,
                            samples=a.samples, seed=a.seed, workers=a.threads)
    return est.to_dict()


def cmd_rl(a):
    f = _read_poly(a.input)
    g = rl.rl_apply(f, a.t)
    doc = to_json_dict(g)
    if a.output:
        Path(a.output).write_text(dumps(doc, indent=1) + "\n")
        return {"output": a.output, "support": len(g)}
    return {"polynomial": doc}


def cmd_verify_kt(a):
    res = rl.kt_quadrature(a.t, a.tol)
    ref = rl.reference_kt(a.t)
    ok = res.error <= a.tol * ref and abs(res.value.real - ref) <= a.tol * ref
    payload = {"kt": res.value.real, "reference": ref, "error": res.error,
               "cutoff": res.cutoff, "nodes": res.nodes, "ok": ok}
    if not ok:
        raise _Failure("tolerance-unattained", payload,
                       f"k_t for t={a.t} not certified to relative tol {a.tol:g} "
                       f"(error estimate {res.error / ref:.3g})")
    return payload


def cmd_reconstruct(a):
    f = _read_poly(a.input)
    res = rl.boundary_integral(f, a.t, a.theta, a.tol)
    ref = complex(evaluate(f, a.theta))
    ok = abs(res.value - ref) <= a.tol
    payload = {"value": res.value, "reference": ref, "error": res.error,
               "cutoff": res.cutoff, "nodes": res.nodes, "ok": ok}
    if not ok:
        raise _Failure("tolerance-unattained", payload,
                       f"reconstruction misses f(theta) by {abs(res.value - ref):.3g}")
    return payload


def cmd_delta_norm(a):
    if a.space == "h2":
        kv = pointeval.delta_norm_h2(a.sigma, a.tol)
    else:
        kv = pointeval.delta_norm_a2(a.sigma, a.alpha, a.space == "a2-infty", a.tol)
    return kv.to_dict()


def cmd_fit(a):
    spec = asymptotics.ExperimentSpec(
        experiment=a.experiment, alpha=a.alpha, p=a.p, q=a.q, t=a.t, m=a.m, N=a.N,
        grid=_grid(a.grid), seed=a.seed, out=a.out, method=a.method, route=a.route,
        subspace=a.subspace, samples=a.samples, tolerance=a.tolerance, workers=a.threads)
    res = asymptotics.run_experiment(spec)
    out = res.summary()
    if not a.out:
        out["csv"] = res.to_csv()
    return out


def cmd_check_conditions(a):
    mu = _measure(a.measure)
    out = {}
    if a.condition in ("H", "both"):
        out["H"] = measures.check_H_condition(mu, a.a, a.p, a.t).to_dict()
    if a.condition in ("D", "both"):
        out["D"] = measures.check_D_condition(mu).to_dict()
    return out


def cmd_zeta_power(a):
    f = zeta_power(a.m, a.N)
    doc = to_json_dict(f)
    if a.output:
        Path(a.output).write_text(dumps(doc) + "\n")
        return {"output": a.output, "support": len(f)}
    return {"polynomial": doc}


class _Failure(Exception):
    def __init__(self, status, payload, message):
        super().__init__(message)
        self.status = status
        self.payload = payload


def build_parser():
    p = _Parser(prog="dirichlet-spaces",
                description="Norms, point evaluation and fractional integration of Dirichlet series.")
    p.add_argument("--threads", type=int, default=None, help="cap on worker threads")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("norm", help="H^p or A^p_mu norm of a polynomial")
    s.add_argument("--space", choices=("hp", "ap"), required=True)
    s.add_argument("--p", type=float, default=2.0)
    s.add_argument("--measure", help='JSON descriptor, e.g. {"kind": "alpha", "alpha": 0}')
    s.add_argument("--inner", choices=("even", "mc", "moment"), default="even")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--input", required=True, help="polynomial JSON file, or - for stdin")
    s.set_defaults(run=cmd_norm)

    s = sub.add_parser("rl", help="apply I_t to a polynomial")
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--output")
    s.set_defaults(run=cmd_rl)

    s = sub.add_parser("verify-kt", help="check the kernel constant k_t")
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--tol", type=float, default=1e-6)
    s.set_defaults(run=cmd_verify_kt)

    s = sub.add_parser("reconstruct", help="recover f(theta) from boundary values of I_t f")
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--theta", type=float, required=True)
    s.add_argument("--tol", type=float, default=1e-4)
    s.add_argument("--input", required=True)
    s.set_defaults(run=cmd_reconstruct)

    s = sub.add_parser("delta-norm", help="norm of point evaluation at sigma")
    s.add_argument("--alpha", type=float, default=0.0)
    s.add_argument("--sigma", type=float, required=True)
    s.add_argument("--space", choices=("a2", "a2-infty", "h2"), default="a2")
    s.add_argument("--tol", type=float, default=1e-9, help="relative accuracy")
    s.set_defaults(run=cmd_delta_norm)

    s = sub.add_parser("fit", help="run an asymptotic experiment and fit its exponent")
    s.add_argument("--experiment", choices=asymptotics.EXPERIMENTS, required=True)
    s.add_argument("--alpha", type=float, default=0.0)
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--t", type=float, default=1.0)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--N", type=int, default=None)
    s.add_argument("--grid", default="0.505:0.6:20", help="sigma_min:sigma_max:count[:log|linear]")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--method", choices=("euler", "truncated"), default="euler")
    s.add_argument("--route", choices=("identity", "rl"), default="identity")
    s.add_argument("--subspace", action="store_true")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--tolerance", type=float, default=None)
    s.add_argument("--out", help="CSV path; the JSON summary is written next to it")
    s.set_defaults(run=cmd_fit)

    s = sub.add_parser("check-conditions", help="H- and D-condition checks for a measure")
    s.add_argument("--measure", required=True)
    s.add_argument("--condition", choices=("H", "D", "both"), default="both")
    s.add_argument("--a", type=float, default=0.0, help="exponent of q(l) = l^a")
    s.add_argument("--p", type=float, default=2.0)
    s.add_argument("--t", type=float, default=1.0)
    s.set_defaults(run=cmd_check_conditions)

    s = sub.add_parser("zeta-power", help="truncated zeta^m as a polynomial")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--output")
    s.set_defaults(run=cmd_zeta_power)
    return p


def dispatch(argv):
    """Parse ``argv``, run the subcommand and package the outcome."""
    argv = list(argv)
    base = {"argv": argv}
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        return CommandResult("precondition-violation", {**base, "status": "precondition-violation",
                                                        "error": str(exc)}, str(exc))
    try:
        payload = args.run(args)
        status, message = "ok", ""
    except _Failure as exc:
        payload, status, message = exc.payload, exc.status, str(exc)
    except PreconditionError as exc:
        payload, status, message = {"error": str(exc)}, "precondition-violation", str(exc)
    except ToleranceError as exc:
        payload = {"error": str(exc), "achieved": exc.achieved}
        status, message = "tolerance-unattained", str(exc)
    except SaturationError as exc:
        payload = {"error": str(exc), "slope": exc.slope, "refit_slope": exc.refit_slope}
        status, message = "saturation", str(exc)
    except OverflowError as exc:
        payload, status, message = {"error": str(exc)}, "precondition-violation", str(exc)
    return CommandResult(status, {**base, "status": status, **payload}, message)


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    if any(a in ("-h", "--help") for a in argv):
        try:
            build_parser().parse_args(argv)
        except SystemExit as exc:
            return exc.code
    res = dispatch(argv)
    sys.stdout.write(dumps(res.payload, indent=2) + "\n")
    if res.message:
        sys.stderr.write(f"{res.status}: {res.message}\n")
    elif "verdict" in res.payload:
        sys.stderr.write(f"{res.payload['experiment']}: {res.payload['verdict']} "
                         f"(passed={res.payload['passed']})\n")
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
