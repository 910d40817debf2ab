"""Command line interface.

Usage: ``hadalab <verb> [input] [options]`` where ``input`` is a path to a
JSON file, inline JSON, a case name (see :data:`hadalab.catalog.CASES`) or
``-`` for stdin.

Exit status is 0 on success, 2 on invalid input and 3 when a numerical
procedure does not converge.

"""
import argparse
import json
import math
import os
import sys
from typing import Any, Dict, List, Optional

import attr
import numpy as np
import pandas as pd

from . import __version__
from .catalog import CASES, AnalysisCase, case_from_json
from .dirichlet import DirichletSeries, inverse_laplace_atoms, log_atoms
from .divisor import convergence_exponent, total_origin_mult
from .drivers import AnalysisDriver, AnalysisSettings
from .hadamard import TruncationSpec, appendix2_ratio
from .newtoncramer import (
    ExtractionError,
    OriginHandling,
    PairingConvergenceError,
    PoissonNewtonProblem,
    bump,
    extract_discrepancy,
    plateau,
    residual_sweep,
    verify_poisson_newton,
)
from .report import DEFINITIONS
from .specfun import EULER_GAMMA, bernoulli_integral, digamma
from .utils import UNDETERMINED, is_sentinel
from .vertline import EvaluatorError, LineFunction, vertical_order_scan


EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_CONVERGED = 3


class CommandError(ValueError):
    """Invalid command input (exit status 2)."""


def _positive(kind):
    def convert(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid {kind.__name__} value: {text!r}")
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value

    convert.__name__ = f"positive {kind.__name__}"
    return convert


def _non_negative_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


positive_float = _positive(float)
positive_int = _positive(int)


def load_input(text: Optional[str], stdin=None) -> Dict[str, Any]:
    """Parse the command input (file path, inline JSON, case name or stdin)."""
    if text is None or text == "-":
        source = (stdin or sys.stdin).read()
    elif text in CASES:
        return {"case": text}
    elif os.path.isfile(text):
        with open(text) as f:
            source = f.read()
    else:
        source = text

    try:
        obj = json.loads(source)
    except json.JSONDecodeError as err:
        raise CommandError(f"malformed JSON at line {err.lineno}, column {err.colno}: {err.msg}")

    if not isinstance(obj, dict):
        raise CommandError(f"expected a JSON object, got {type(obj).__name__}")
    return obj


def emit_plot_data(data: pd.DataFrame, quantity: str, definition: str = "") -> str:
    """CSV text of a sampled series, preceded by comment lines naming the
    quantity and its definition.
    """
    header = f"# quantity: {quantity}\n"
    if definition:
        header += f"# definition: {definition}\n"
    return header + data.to_csv(index=False, float_format="%.12g")


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _settings(args, **kwargs) -> AnalysisSettings:
    return AnalysisSettings(
        tol=args.tol,
        T_max=float(args.tmax),
        m_max=args.mmax,
        cs=tuple(args.c) if args.c else None,
        parallel=args.parallel,
        scheduler=args.scheduler,
        **kwargs,
    )


def _case(obj) -> AnalysisCase:
    try:
        return case_from_json(obj)
    except KeyError as err:
        raise CommandError(f"invalid case input: {err.args[0]}")


def _series(obj) -> DirichletSeries:
    if "lambdas" not in obj:
        raise CommandError("a Dirichlet series needs 'lambdas' and 'coeffs'")
    return DirichletSeries.from_json(obj)


def _test_function(obj: Dict[str, Any], min_order: int):
    kind = obj.get("kind", "bump")
    max_order = max(int(obj.get("max_order", 8)), min_order)
    if kind == "bump":
        return bump(float(obj["center"]), float(obj["radius"]), max_order=max_order)
    if kind == "plateau":
        return plateau(float(obj["radius"]), max_order=max_order)
    raise CommandError(f"unknown test function kind {kind!r} (bump, plateau)")


def _measure_output(mu, args, quantity):
    if args.out == "csv":
        return emit_plot_data(mu.to_dataframe(), quantity)
    return _json_text(mu.to_json())


def run_analyze(args, obj) -> str:
    case = _case(obj)
    settings = _settings(
        args,
        extract=args.extract,
        gW_bound=args.gw,
        radius=args.radius,
        max_points=args.points,
    )

    hooks = []
    if args.progress:
        from .monitoring import ProgressBar

        hooks.append(ProgressBar(frontend="console", file=sys.stderr))

    report = AnalysisDriver(case, settings, hooks=hooks).run()

    if args.out == "csv":
        return emit_plot_data(
            report.line_table(), "line_l1_norm", DEFINITIONS["line_l1_norm"]
        )
    return _json_text(report.to_json())


def run_bk(args, obj) -> str:
    mu = log_atoms(_series(obj), args.T, parallel=args.parallel, scheduler=args.scheduler)
    return _measure_output(mu, args, "b_k (atoms of -log f)")


def run_atoms(args, obj) -> str:
    mu = inverse_laplace_atoms(
        _series(obj), args.T, parallel=args.parallel, scheduler=args.scheduler
    )
    return _measure_output(mu, args, "atoms of the inverse Laplace transform of f'/f")


def _origin_handling(choice, case, phi):
    if choice != "auto":
        return OriginHandling(choice)
    a, b = phi.support
    if total_origin_mult(case.divisor) and not a < 0 < b:
        return OriginHandling.TRANSLATE
    return OriginHandling.POWER


def run_verify_pn(args, obj) -> str:
    case = _case(obj)
    if "phi" not in obj:
        raise CommandError("verify-pn input needs a 'phi' test function")

    d = convergence_exponent(case.divisor)
    phi = _test_function(obj["phi"], min_order=max(d, 1) + 1)
    a, b = phi.support

    use_line = case.atoms is None or (case.delta0_mass != 0 and a < 0 < b)
    if use_line:
        source = case.log_derivative
    else:
        source = case.atoms(b)

    problem = PoissonNewtonProblem(case.divisor, d, case.known_discrepancy, source)
    origin = _origin_handling(obj.get("origin", args.origin), case, phi)
    line_c = args.c[0] if args.c else max(1.0, case.log_derivative.valid_half_plane + 1.0)
    truncations = [int(n) for n in obj.get("truncations", [args.points])]
    kwargs = dict(origin=origin, tau=args.tau, line_c=line_c, tol=args.tol)

    if args.out == "csv":
        sweep = residual_sweep(problem, phi, truncations, **kwargs)
        return emit_plot_data(sweep, "Poisson-Newton residual vs. truncation")

    results = [
        verify_poisson_newton(problem, phi, TruncationSpec(max_points=n), **kwargs)
        for n in truncations
    ]
    return _json_text(
        {
            "case": case.name,
            "d": d,
            "phi": phi.name,
            "origin": origin.value,
            "inverse_laplace_side": "line" if use_line else "atoms",
            "results": [r.to_json() for r in results],
        }
    )


def run_m0(args, obj) -> str:
    case = _case(obj)
    cs = tuple(args.c) if args.c else case.line_cs
    scan = vertical_order_scan(
        case.log_derivative,
        cs,
        m_max=args.mmax,
        T_max=float(args.tmax),
        tol=args.tol,
        parallel=args.parallel,
        scheduler=args.scheduler,
    )

    if args.out == "csv":
        frames = []
        for (c, m), res in sorted(scan.results.items()):
            frame = res.samples.copy()
            frame.insert(0, "m", m)
            frame.insert(0, "c", c)
            frames.append(frame)
        data = pd.concat(frames, ignore_index=True)
        return emit_plot_data(data, "|c + it|^-m |f'/f(c + it)|", DEFINITIONS["m0"])

    verdicts = [
        {
            "c": c,
            "m": m,
            "l1_norm": None if is_sentinel(res.value) else res.value,
            "tail_exponent": res.tail_exponent,
            "verdict": res.verdict.value,
        }
        for (c, m), res in sorted(scan.results.items())
    ]
    return _json_text(
        {
            "case": case.name,
            "m0": str(scan.m0) if scan.m0 is UNDETERMINED else scan.m0,
            "cs": list(scan.cs),
            "lines_agree": scan.lines_agree,
            "verdicts": verdicts,
            "diagnostics": scan.diagnostics,
        }
    )


def run_discrepancy(args, obj) -> str:
    case = _case(obj)
    a = float(obj.get("a", 0.0))
    b = float(obj.get("b", 0.0))
    g = case.log_derivative

    def shifted(s):
        s = np.asarray(s, dtype=complex)
        return g(s) + a + 2 * b * s

    rhs = LineFunction(
        shifted,
        g.valid_half_plane,
        name=f"{g.name} + {a} + {2 * b} s",
        max_modulus=g.max_modulus,
    )

    radius = args.radius
    if case.atoms is not None:
        first = case.atoms(4 * radius + 2).freqs
        if first.size:
            radius = min(radius, 0.9 * first[0])

    d = convergence_exponent(case.divisor)
    line_c = args.c[0] if args.c else max(1.0, g.valid_half_plane + 1.0)
    poly = extract_discrepancy(
        PoissonNewtonProblem(case.divisor, d, rhs_source=rhs),
        gW_bound=args.gw,
        radius=radius,
        trunc=TruncationSpec(max_points=args.points),
        line_c=line_c,
        tol=args.tol,
        atoms=case.atoms,
    )

    if args.out == "csv":
        coeffs = np.array(poly.raw_coeffs, dtype=complex)
        data = pd.DataFrame(
            {"l": np.arange(coeffs.size), "coeff_re": coeffs.real, "coeff_im": coeffs.imag}
        )
        return emit_plot_data(data, "discrepancy coefficients", DEFINITIONS["coeffs"])

    payload = poly.to_json()
    payload.update({"case": case.name, "d": d, "a": a, "b": b, "radius": radius})
    return _json_text(payload)


def run_sharpness(args, obj) -> str:
    ks = args.k or [10]
    cs = args.c or [1.0]
    results = [appendix2_ratio(k, c, args.eps) for k in ks for c in cs]

    if args.out == "csv":
        data = pd.DataFrame(
            [{"k": r.k, "c": r.c, "ratio_log": r.ratio_log} for r in results]
        )
        return emit_plot_data(data, "log(|g(s_k)| / |s_k|^(1 - eps))")
    return _json_text({"eps": args.eps, "results": [attr.asdict(r) for r in results]})


def run_gamma_check(args, obj) -> str:
    rng = np.random.default_rng(args.seed)
    re = rng.uniform(0.5, 20.0, args.n)
    im = rng.uniform(-50.0, 50.0, args.n)

    failures = 0
    worst = 0.0
    for s in re + 1j * im:
        res = digamma(s)
        worst = max(worst, abs(res.phi_prime) / res.bound)
        failures += not res.bound_ok

    checks = {
        "psi(1) + gamma": abs(digamma(1.0).psi + EULER_GAMMA),
        "psi(1/2) + gamma + 2 log 2": abs(digamma(0.5).psi + EULER_GAMMA + 2 * math.log(2)),
        "bernoulli integral - 1/24": abs(bernoulli_integral() - 1 / 24),
    }
    passed = all(v < 1e-10 for v in checks.values()) and failures == 0

    return _json_text(
        {
            "checks": checks,
            "bound": {
                "seed": args.seed,
                "n": args.n,
                "failures": failures,
                "max_ratio": worst,
            },
            "passed": passed,
        }
    )


_RUNNERS = {
    "analyze": run_analyze,
    "bk": run_bk,
    "atoms": run_atoms,
    "verify-pn": run_verify_pn,
    "m0": run_m0,
    "discrepancy": run_discrepancy,
    "sharpness": run_sharpness,
    "gamma-check": run_gamma_check,
}

_NO_INPUT = ("sharpness", "gamma-check")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=positive_float, default=1e-8, help="Absolute tolerance (default: 1e-8).")
    common.add_argument("--T", type=positive_float, default=50.0, help="Frequency cutoff of atom enumerations (default: 50).")
    common.add_argument("--c", type=float, action="append", help="Abscissa of a vertical line (repeatable).")
    common.add_argument("--mmax", type=_non_negative_int, default=6, help="Largest power of |s| tried (default: 6).")
    common.add_argument("--tmax", type=positive_float, default=65536.0, help="Largest |t| of line integrals (default: 65536).")
    common.add_argument("--out", choices=["json", "csv"], default="json", help="Output format (default: json).")
    common.add_argument("--seed", type=int, default=0, help="Seed of random samples (default: 0).")
    common.add_argument("-o", "--output", help="Write to this file instead of stdout.")
    common.add_argument("--parallel", action="store_true", help="Run independent units with dask.")
    common.add_argument("--scheduler", help="Dask scheduler used with --parallel.")

    parser = argparse.ArgumentParser(
        prog="hadalab",
        description="Exponents, vertical orders and Poisson-Newton checks of meromorphic functions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", metavar="verb")
    sub.required = True

    def add(verb, help_text, with_input=True):
        p = sub.add_parser(verb, parents=[common], help=help_text)
        if with_input:
            p.add_argument("input", nargs="?", default="-", help="JSON file, inline JSON, case name or '-' (stdin).")
        return p

    p = add("analyze", "full report of a case or divisor")
    p.add_argument("--extract", action="store_true", help="Extract the discrepancy numerically.")
    p.add_argument("--progress", action="store_true", help="Show a progress bar on stderr (needs tqdm).")
    p.add_argument("--gw", type=positive_int, default=4, help="Number of discrepancy coefficients tried (default: 4).")
    p.add_argument("--radius", type=positive_float, default=1.0, help="Plateau radius of extraction (default: 1).")
    p.add_argument("--points", type=positive_int, default=200_000, help="Divisor points used (default: 200000).")

    add("bk", "atoms of -log f for a Dirichlet series")
    add("atoms", "atoms of the inverse Laplace transform of f'/f")

    p = add("verify-pn", "Poisson-Newton residual on a test function")
    p.add_argument("--points", type=positive_int, default=100_000, help="Divisor points used (default: 100000).")
    p.add_argument("--origin", choices=["auto", "power", "translate"], default="auto", help="Handling of a zero or pole at 0.")
    p.add_argument("--tau", type=positive_float, default=0.3, help="Translation used with --origin translate (default: 0.3).")

    add("m0", "vertical order of a case or divisor")

    p = add("discrepancy", "discrepancy polynomial of f exp(a s + b s^2)")
    p.add_argument("--gw", type=positive_int, default=4, help="Number of coefficients tried (default: 4).")
    p.add_argument("--radius", type=positive_float, default=1.0, help="Plateau radius (default: 1).")
    p.add_argument("--points", type=positive_int, default=200_000, help="Divisor points used (default: 200000).")

    p = add("sharpness", "growth ratio on the sharpness divisor", with_input=False)
    p.add_argument("--k", type=positive_int, action="append", help="Index of the sample point (repeatable, default: 10).")
    p.add_argument("--eps", type=float, default=0.1, help="Exponent defect in [0, 1) (default: 0.1).")

    p = add("gamma-check", "Binet formula checks of the digamma function", with_input=False)
    p.add_argument("--n", type=positive_int, default=1000, help="Number of random points (default: 1000).")

    return parser


def run(args, stdin=None) -> str:
    """Run a parsed command and return its output text."""
    obj = {} if args.verb in _NO_INPUT else load_input(args.input, stdin)
    return _RUNNERS[args.verb](args, obj)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        text = run(args)
    except (PairingConvergenceError, EvaluatorError) as err:
        print(f"hadalab {args.verb}: not converged: {err}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except (
        CommandError,
        ExtractionError,
        ValueError,
        KeyError,
        TypeError,
        ImportError,
        ZeroDivisionError,
    ) as err:
        msg = err.args[0] if isinstance(err, KeyError) and err.args else err
        print(f"hadalab {args.verb}: {msg}", file=sys.stderr)
        return EXIT_INVALID

    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)

    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
