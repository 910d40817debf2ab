"""Named classical cases: divisor, logarithmic derivative on vertical
lines and (where known) the atoms of its inverse Laplace transform.

"""
import math
from typing import Callable, Dict, Optional, Tuple

import attr
import numpy as np
from scipy.special import psi

from .dirichlet import AtomicMeasure, DirichletSeries
from .divisor import (
    Appendix2Divisor,
    Divisor,
    DivisorPoint,
    DivisorSum,
    ExplicitDivisor,
    NegativeIntegers,
    VerticalLattice,
    convergence_exponent,
    from_json,
    sigma1,
)
from .hadamard import log_derivative_function
from .newtoncramer import DiscrepancyPolynomial
from .specfun import EULER_GAMMA, coth_logderiv, von_mangoldt, zeta_logderiv
from .vertline import LineFunction


@attr.s(auto_attribs=True, frozen=True)
class AnalysisCase:
    """A meromorphic function given by its divisor and its logarithmic
    derivative.

    Parameters
    ----------
    name : str
    divisor : :class:`~hadalab.divisor.Divisor`
    log_derivative : :class:`~hadalab.vertline.LineFunction`
        ``f'/f`` on its half-plane of definition.
    is_dirichlet : bool
        Whether ``f`` is a (non-constant) Dirichlet series.
    line_cs : tuple of float
        Abscissas of the lines used for the vertical order.
    atoms : callable, optional
        ``atoms(T)`` returns the atoms of the inverse Laplace transform of
        ``f'/f`` with frequency ``<= T`` (excluding a mass at 0).
    delta0_mass : float
        Mass of the inverse Laplace transform of ``f'/f`` at 0.
    known_discrepancy : :class:`~hadalab.newtoncramer.DiscrepancyPolynomial`, optional
    series : :class:`~hadalab.dirichlet.DirichletSeries`, optional

    """

    name: str
    divisor: Divisor
    log_derivative: LineFunction
    is_dirichlet: bool = False
    line_cs: Tuple[float, ...] = attr.ib(default=(1.0, 3.0), converter=tuple)
    atoms: Optional[Callable[[float], AtomicMeasure]] = attr.ib(default=None, eq=False)
    delta0_mass: float = 0.0
    known_discrepancy: Optional[DiscrepancyPolynomial] = None
    series: Optional[DirichletSeries] = attr.ib(default=None, eq=False)
    description: str = ""


def lattice_log_derivative(step: float, mult: int = 1) -> Callable:
    """Closed form ``mult (pi/step) coth(pi s/step)`` of the Hadamard part
    (center 0) of a lattice ``i step Z`` with the origin included.
    """

    def evaluate(s):
        z = math.pi * np.asarray(s, dtype=complex) / step
        return mult * (math.pi / step) * coth_logderiv(z)

    return evaluate


def negative_integers_log_derivative(mult: int = -1) -> Callable:
    """Closed form ``-mult (psi(s) + gamma)`` of the Hadamard part (center
    0) of ``{0, -1, -2, ...}`` with multiplicity ``mult``.
    """

    def evaluate(s):
        return -mult * (psi(np.asarray(s, dtype=complex)) + EULER_GAMMA)

    return evaluate


def _with_origin(func: Callable, extra: int) -> Callable:
    if extra == 0:
        return func

    def evaluate(s):
        s = np.asarray(s, dtype=complex)
        return func(s) + extra / s

    return evaluate


def hadamard_closed_form(div: Divisor) -> Optional[Callable]:
    """Closed-form logarithmic derivative of the Hadamard part at center 0,
    when the divisor kind has one (None otherwise).

    The closed forms count the origin with the multiplicity of the other
    points; any other origin multiplicity adds ``(origin_mult - mult) / s``.
    """
    if isinstance(div, VerticalLattice) and div.offset == 0 and div.exclude_zero:
        return _with_origin(
            lattice_log_derivative(div.step, div.mult), div.origin_mult - div.mult
        )
    if (
        isinstance(div, NegativeIntegers)
        and div.offset == 0
        and div.step == 1
        and div.start == 1
    ):
        return _with_origin(
            negative_integers_log_derivative(div.mult), div.origin_mult - div.mult
        )
    return None


def _periodic_atoms(period, mass):
    def atoms(T):
        freqs = period * np.arange(1, int(math.floor(T / period)) + 1)
        return AtomicMeasure(freqs, np.full(freqs.size, mass), cutoff=T)

    return atoms


def _mangoldt_atoms(T):
    lam = von_mangoldt(int(math.floor(math.exp(T))))
    n = np.flatnonzero(lam)
    return AtomicMeasure(np.log(n), -lam[n], cutoff=T)


def sinh_case() -> AnalysisCase:
    return AnalysisCase(
        "sinh",
        VerticalLattice(math.pi, origin_mult=1),
        LineFunction(coth_logderiv, 0.0, name="coth"),
        line_cs=(0.5, 2.0),
        atoms=_periodic_atoms(2.0, 2.0),
        delta0_mass=1.0,
        known_discrepancy=DiscrepancyPolynomial(()),
        description="sinh(s) = s prod (1 + s^2 / (pi k)^2)",
    )


def gamma_case() -> AnalysisCase:
    return AnalysisCase(
        "gamma",
        NegativeIntegers(origin_mult=-1),
        LineFunction(lambda s: psi(np.asarray(s, dtype=complex)), 0.0, name="digamma"),
        line_cs=(1.0, 3.0),
        known_discrepancy=DiscrepancyPolynomial((EULER_GAMMA,)),
        description="Gamma(s), poles at 0, -1, -2, ...",
    )


def zeta_case() -> AnalysisCase:
    divisor = DivisorSum(
        (
            ExplicitDivisor([DivisorPoint(1.0, -1)]),
            NegativeIntegers(mult=1, start=1, step=2.0),
        )
    )
    n = np.arange(2, 64, dtype=float)
    return AnalysisCase(
        "zeta",
        divisor,
        LineFunction(zeta_logderiv, 1.0, name="zeta'/zeta"),
        is_dirichlet=True,
        line_cs=(1.5, 3.0),
        atoms=_mangoldt_atoms,
        series=DirichletSeries(np.log(n), np.ones(n.size), abscissa=1.0),
        description="Riemann zeta: pole at 1 and trivial zeros -2, -4, ...",
    )


def comb_case() -> AnalysisCase:
    def logderiv(s):
        return 1 / np.expm1(np.asarray(s, dtype=complex))

    return AnalysisCase(
        "comb",
        VerticalLattice(2 * math.pi, origin_mult=1),
        LineFunction(logderiv, 0.0, name="1/(exp(s) - 1)"),
        is_dirichlet=True,
        line_cs=(0.5, 2.0),
        atoms=_periodic_atoms(1.0, 1.0),
        known_discrepancy=DiscrepancyPolynomial((0.5,)),
        series=DirichletSeries([1.0], [-1.0]),
        description="1 - exp(-s), zeros at 2 pi i k",
    )


def appendix2_case(max_points: int = 64) -> AnalysisCase:
    divisor = Appendix2Divisor()
    return AnalysisCase(
        "appendix2",
        divisor,
        LineFunction(
            log_derivative_function(divisor, 1, center=0.0, max_points=max_points),
            0.0,
            name="hadamard part",
            max_modulus=truncation_radius(divisor, max_points),
        ),
        line_cs=(1.0, 3.0),
        description="zeros i n^2 2^n with multiplicity 2^n",
    )


CASES: Dict[str, Callable[[], AnalysisCase]] = {
    "sinh": sinh_case,
    "gamma": gamma_case,
    "zeta": zeta_case,
    "comb": comb_case,
    "appendix2": appendix2_case,
}


def get_case(name: str) -> AnalysisCase:
    try:
        factory = CASES[name]
    except KeyError:
        raise KeyError(f"unknown case {name!r}, choose one of {sorted(CASES)}")
    return factory()


def truncation_radius(div: Divisor, max_points: int) -> float:
    """Largest modulus among the first ``max_points`` points of ``div``
    (infinite when they are all the points).
    """
    rho, _ = div.points(max_points)
    if div.is_finite or rho.size < max_points or rho.size == 0:
        return math.inf
    return float(np.abs(rho).max())


def _default_line_cs(s1):
    cs = []
    for offset in (0.5, 2.0):
        c = s1 + offset
        cs.append(c + 0.25 if c == 0 else c)
    return tuple(cs)


def case_from_json(obj, max_points: int = 10_000) -> AnalysisCase:
    """Case from ``{"case": name}`` or from a divisor description
    (optionally wrapped as ``{"divisor": {...}, "is_dirichlet": ...}``).

    A custom divisor is analyzed through the logarithmic derivative of
    its Hadamard part at center 0: closed form when available, otherwise
    the sum over the first ``max_points`` points, which is only used
    within their :func:`truncation_radius`.
    """
    if "case" in obj:
        return get_case(obj["case"])

    div_obj = obj.get("divisor", obj)
    div = from_json(div_obj)
    s1 = sigma1(div).value

    closed = hadamard_closed_form(div)
    if closed is None:
        d = convergence_exponent(div)
        evaluator = log_derivative_function(div, d, center=0.0, max_points=max_points)
        name = "hadamard part (truncated)"
        max_modulus = truncation_radius(div, max_points)
    else:
        evaluator = closed
        name = "hadamard part"
        max_modulus = math.inf

    return AnalysisCase(
        obj.get("name", div.kind.value),
        div,
        LineFunction(evaluator, s1, name=name, max_modulus=max_modulus),
        is_dirichlet=bool(obj.get("is_dirichlet", False)),
        line_cs=tuple(obj.get("cs", _default_line_cs(s1))),
    )
