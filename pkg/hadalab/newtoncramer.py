"""Test functions, pairings of the Newton-Cramer distribution ``W(f)``,
Poisson-Newton verification, discrepancy extraction and classification.

"""
import math
import numbers
from enum import Enum
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

import attr
import numpy as np
import pandas as pd
from numpy.polynomial import Polynomial

from .dirichlet import AtomicMeasure
from .divisor import Divisor, EmptyDivisorError, sigma1, total_origin_mult
from .hadamard import TruncationSpec
from .quadrature import gauss_kronrod, gauss_legendre_panels
from .utils import complex_to_json, fsum_complex
from .vertline import LineFunction


class OriginHandling(Enum):
    POWER = "power"
    TRANSLATE = "translate"


class Classification(Enum):
    HADAMARD = "HadamardType"
    WEIERSTRASS = "WeierstrassType"
    INCONCLUSIVE = "Inconclusive"


class PairingConvergenceError(RuntimeError):
    """Raised when a pairing along a vertical line does not converge."""

    pass


class ExtractionError(ValueError):
    """Raised when discrepancy coefficients cannot be isolated with the
    chosen test functions.
    """

    pass


class DirichletExponentError(ValueError):
    """Raised when a Dirichlet series is given a convergence exponent
    below 2 (non-constant Dirichlet series have ``d >= 2``).
    """

    pass


# elements per block when summing over divisor points
_CHUNK_ELEMENTS = 2 ** 22


def _check_support(instance, attribute, value):
    if not value[0] < value[1]:
        raise ValueError(f"invalid support {value}, expected a < b")


@attr.s(frozen=True)
class TestFunction:
    """Smooth function with compact support and exact derivatives.

    Parameters
    ----------
    support : (float, float)
        The function and all its derivatives vanish outside this interval.
    max_order : int
        Highest derivative order available.
    evaluator : callable
        ``evaluator(t, order)`` returns the derivative of order ``order`` at
        the points ``t`` (1-d array inside the support).
    name : str, optional

    """

    __test__ = False

    support: Tuple[float, float] = attr.ib(
        converter=lambda v: (float(v[0]), float(v[1])), validator=_check_support
    )
    max_order: int = attr.ib(converter=int)
    evaluator: Callable[[np.ndarray, int], np.ndarray] = attr.ib(repr=False)
    name: str = attr.ib(default="", kw_only=True)

    def __call__(self, t, order: int = 0):
        if not 0 <= order <= self.max_order:
            raise ValueError(
                f"derivative of order {order} requested, test function "
                f"{self.name!r} provides orders up to {self.max_order}"
            )
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        a, b = self.support
        inside = (flat > a) & (flat < b)

        values = self.evaluator(flat[inside], order)
        out = np.zeros(flat.shape, dtype=np.result_type(values, float))
        out[inside] = values

        out = out.reshape(t.shape)
        return out[()] if out.ndim == 0 else out

    def integral(self, order: int = 0, abs_tol: float = 1e-13, absolute: bool = False):
        """Integral of the derivative of order ``order`` (or of its
        absolute value) over the support.
        """
        a, b = self.support
        if absolute:
            func = lambda t: np.abs(self(t, order))  # noqa: E731
        else:
            func = lambda t: self(t, order)  # noqa: E731
        return gauss_kronrod(func, a, b, abs_tol=abs_tol, initial_intervals=8).value

    def __add__(self, other):
        if not isinstance(other, TestFunction):
            return NotImplemented
        support = (min(self.support[0], other.support[0]), max(self.support[1], other.support[1]))
        return TestFunction(
            support,
            min(self.max_order, other.max_order),
            lambda t, k: self(t, k) + other(t, k),
            name=f"({self.name} + {other.name})",
        )

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return TestFunction(
            self.support,
            self.max_order,
            lambda t, k: scalar * self.evaluator(t, k),
            name=f"{scalar} * {self.name}",
        )

    __rmul__ = __mul__


def _bump_polynomials(max_order):
    """Polynomials ``P_k`` with ``h^(k) = P_k / u**(2k) * h`` for
    ``h = exp(1/u)``, ``u = x**2 - 1``.
    """
    x = Polynomial([0.0, 1.0])
    u = Polynomial([-1.0, 0.0, 1.0])
    polys = [Polynomial([1.0])]
    for k in range(max_order):
        p = polys[-1]
        polys.append(p.deriv() * u ** 2 - (4 * k * x * u + 2 * x) * p)
    return polys


def bump(center: float, radius: float, max_order: int = 8) -> TestFunction:
    """Mollifier ``exp(1 + 1/(x**2 - 1))``, ``x = (t - center) / radius``.

    Equal to 1 at ``center``, supported on ``[center - radius, center + radius]``.

    Examples
    --------
    >>> phi = bump(2.0, 0.5)
    >>> float(phi(2.0))
    1.0

    """
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    center = float(center)
    radius = float(radius)
    polys = _bump_polynomials(max_order)

    def evaluator(t, order):
        x = (t - center) / radius
        u = x * x - 1
        log_scale = 1 + 1 / u - 2 * order * np.log(-u)
        return polys[order](x) * np.exp(log_scale) * radius ** (-order)

    return TestFunction(
        (center - radius, center + radius),
        max_order,
        evaluator,
        name=f"bump({center}, {radius})",
    )


def plateau(radius: float, max_order: int = 8, n_panels: int = 64) -> TestFunction:
    """Smooth even function equal to 1 on ``[-radius/2, radius/2]`` and
    supported on ``[-radius, radius]``.

    The transition is the normalized integral of a bump supported on
    ``[radius/2, radius]``; its values come from a cumulative
    Gauss-Legendre table and its derivatives from the bump's exact ones.
    """
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    radius = float(radius)
    b = bump(0.75 * radius, 0.25 * radius, max_order=max(max_order - 1, 0))

    edges = np.linspace(0.5 * radius, radius, n_panels + 1)
    panels = gauss_legendre_panels(b, edges[:-1], edges[1:])
    # from_right[i] = integral of b over [edges[i], radius]
    from_right = np.concatenate([np.cumsum(panels[::-1])[::-1], [0.0]])
    norm = from_right[0]
    h = edges[1] - edges[0]

    def transition(y):
        i = np.clip(((y - edges[0]) // h).astype(int), 0, n_panels - 1)
        partial = gauss_legendre_panels(b, y, edges[i + 1])
        return (from_right[i + 1] + partial) / norm

    def evaluator(t, order):
        y = np.abs(t)
        if order == 0:
            out = np.ones(t.shape)
            mid = y > 0.5 * radius
            out[mid] = transition(y[mid])
            return out
        return np.sign(t) ** order * (-b(y, order - 1) / norm)

    return TestFunction((-radius, radius), max_order, evaluator, name=f"plateau({radius})")


def monomial_times(phi: TestFunction, j: int) -> TestFunction:
    """Test function ``t**j * phi(t)`` (derivatives by the Leibniz rule)."""
    if j < 0:
        raise ValueError(f"j must be nonnegative, got {j}")

    def evaluator(t, order):
        out = np.zeros(t.shape)
        for i in range(min(order, j) + 1):
            coeff = math.comb(order, i) * math.perm(j, i)
            out = out + coeff * t ** (j - i) * phi(t, order - i)
        return out

    return TestFunction(phi.support, phi.max_order, evaluator, name=f"t^{j} * {phi.name}")


def exp_times(phi: TestFunction, tau: float) -> TestFunction:
    """Test function ``exp(tau t) * phi(t)``."""

    def evaluator(t, order):
        out = np.zeros(t.shape)
        for i in range(order + 1):
            out = out + math.comb(order, i) * tau ** i * phi(t, order - i)
        return np.exp(tau * t) * out

    return TestFunction(
        phi.support, phi.max_order, evaluator, name=f"exp({tau} t) * {phi.name}"
    )


@attr.s(auto_attribs=True, frozen=True)
class DiscrepancyPolynomial:
    """Coefficients ``c_l`` of ``P_f(s) = sum c_l s**l = -Q_f'(s)``.

    ``residual`` is the largest propagated pairing error of the extracted
    coefficients and ``noise`` the threshold under which trailing
    coefficients were dropped.
    """

    coeffs: Tuple[complex, ...] = attr.ib(converter=lambda c: tuple(complex(v) for v in c))
    residual: float = 0.0
    noise: float = 0.0
    raw_coeffs: Tuple[complex, ...] = attr.ib(
        default=(), converter=lambda c: tuple(complex(v) for v in c), eq=False
    )

    @property
    def gW(self) -> int:
        return len(self.coeffs)

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial(self.coeffs or (0j,))

    def to_weierstrass(self) -> Polynomial:
        """``Q_f`` with ``Q_f(0) = 0``."""
        return -self.polynomial.integ()

    def delta_pairing(self, phi: TestFunction) -> complex:
        """``sum c_l <delta_0^(l), phi> = sum c_l (-1)**l phi^(l)(0)``."""
        if self.gW - 1 > phi.max_order:
            raise ValueError(
                f"test function provides orders up to {phi.max_order}, "
                f"{self.gW - 1} needed"
            )
        return fsum_complex(
            [c * (-1) ** l * phi(0.0, l) for l, c in enumerate(self.coeffs)]
        )

    def to_json(self) -> Dict[str, Any]:
        return {
            "coeffs": [complex_to_json(c) for c in self.coeffs],
            "gW": self.gW,
            "residual": self.residual,
            "noise": self.noise,
        }


@attr.s(auto_attribs=True, frozen=True)
class PairingResult:
    value: complex
    abs_error_est: float
    truncation_used: Dict[str, Any] = attr.ib(factory=dict, eq=False)


@attr.s(auto_attribs=True, frozen=True)
class LdValue:
    value: Union[complex, np.ndarray]
    tail_bound: Union[float, np.ndarray]
    heuristic: bool
    n_points: int


def _ld_sum(rho, mult, d, t):
    """``sum n rho**-d (exp(rho t) - 1)`` for ``t > 0``, zero elsewhere."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros(t.shape, dtype=complex)
    pos = t > 0
    tp = t[pos]
    if rho.size == 0 or tp.size == 0:
        return out

    weights = mult * rho ** (-float(d))
    acc = np.zeros(tp.size, dtype=complex)
    step = max(_CHUNK_ELEMENTS // tp.size, 1)
    for i in range(0, rho.size, step):
        block = np.expm1(rho[i : i + step, None] * tp[None, :])
        acc += (weights[i : i + step, None] * block).sum(axis=0)
    out[pos] = acc
    return out


def _tail_info(div, n_used, d):
    """Remainder sum beyond ``n_used`` points, exponential rate and
    whether the bound is heuristic.
    """
    tail = div.tail_sum(n_used, d)
    if tail == 0:
        return 0.0, 0.0, False
    try:
        s1 = sigma1(div)
    except EmptyDivisorError:
        return 0.0, 0.0, False
    return tail, max(s1.value, 0.0), not s1.exact


def L_d_eval(div: Divisor, d: int, t, trunc: Optional[TruncationSpec] = None) -> LdValue:
    """Partial sum of ``L_d(t) = sum n_rho rho**-d (exp(rho t) - 1)`` for
    ``t >= 0`` (``L_d`` vanishes for ``t < 0``).

    The tail bound ``2 exp(max(sigma1, 0) t) sum_tail |n_rho| |rho|**-d``
    is flagged heuristic when ``sigma1`` is only a lower bound.
    """
    if trunc is None:
        trunc = TruncationSpec()
    scalar = np.ndim(t) == 0
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))

    rho, mult = div.points(trunc.max_points)
    value = _ld_sum(rho, mult, d, t_arr)

    tail, rate, heuristic = _tail_info(div, rho.size, d)
    with np.errstate(invalid="ignore"):
        bound = np.where(t_arr > 0, 2 * np.exp(rate * t_arr) * tail, 0.0)

    if scalar:
        return LdValue(complex(value[0]), float(bound[0]), heuristic, int(rho.size))
    return LdValue(value, bound, heuristic, int(rho.size))


def _pair_ld(rho, mult, d, phi, lo, hi, abs_tol, extra=None):
    def integrand(t):
        values = _ld_sum(rho, mult, d, t)
        if extra is not None:
            values = values + extra(t)
        return values * phi(t, d)

    return gauss_kronrod(integrand, lo, hi, abs_tol=abs_tol, initial_intervals=8)


def pair_W(
    div: Divisor,
    d: int,
    phi: TestFunction,
    trunc: Optional[TruncationSpec] = None,
    abs_tol: float = 1e-8,
) -> PairingResult:
    """Pairing ``<W(f), phi> = (-1)**d int L_d(t) phi^(d)(t) dt``, plus
    ``n0 int_0^inf phi`` for a multiplicity ``n0`` at the origin.

    Finite divisors (``d = 0``) are paired through ``L_1``.

    Parameters
    ----------
    div : :class:`~hadalab.divisor.Divisor`
    d : int
        Convergence exponent.
    phi : :class:`TestFunction`
        Must provide derivatives up to ``max(d, 1)``.
    trunc : :class:`~hadalab.hadamard.TruncationSpec`, optional
    abs_tol : float, optional
        Quadrature tolerance.

    Returns
    -------
    result : :class:`PairingResult`
        ``abs_error_est`` adds the quadrature error and the tail bound of
        ``L_d`` times ``int |phi^(d)|``.

    """
    if trunc is None:
        trunc = TruncationSpec()
    d_eff = max(int(d), 1)
    if phi.max_order < d_eff:
        raise ValueError(
            f"insufficient derivative order: pairing needs order {d_eff}, "
            f"test function provides {phi.max_order}"
        )

    a, b = phi.support
    lo = max(a, 0.0)
    rho, mult = div.points(trunc.max_points)
    origin = total_origin_mult(div)
    used = {"max_points": trunc.max_points, "n_points": int(rho.size), "d": d_eff}

    if lo >= b or (rho.size == 0 and origin == 0):
        return PairingResult(0j, 0.0, dict(used, heuristic=False))

    res = _pair_ld(rho, mult, d_eff, phi, lo, b, abs_tol)
    value = (-1) ** d_eff * complex(res.value)
    error = res.abs_error

    if origin:
        ores = gauss_kronrod(phi, lo, b, abs_tol=abs_tol, initial_intervals=8)
        value += origin * ores.value
        error += ores.abs_error

    tail, rate, heuristic = _tail_info(div, rho.size, d_eff)
    if tail:
        abs_deriv = gauss_kronrod(
            lambda t: np.abs(phi(t, d_eff)), lo, b, abs_tol=abs_tol, initial_intervals=8
        ).value
        error += 2 * math.exp(rate * b) * tail * abs_deriv

    used.update(n_intervals=res.n_intervals, heuristic=heuristic)
    return PairingResult(value, float(error), used)


def pair_atoms(mu: AtomicMeasure, phi: TestFunction) -> complex:
    """``sum mass * phi(freq)`` over the atoms inside the support of ``phi``."""
    a, b = phi.support
    inside = (mu.freqs > a) & (mu.freqs < b)
    if not np.any(inside):
        return 0j
    return fsum_complex(mu.masses[inside] * phi(mu.freqs[inside]))


def _line_period(g, c, a, b):
    # periodic images beyond the support, damped by exp(-(c - sigma) X)
    X = max(b + 1.0, b - a + 1.0)
    if math.isfinite(g.valid_half_plane):
        X = max(X, min(40.0 / (c - g.valid_half_plane), 800.0))
    return X


def _laplace_on_grid(phi, n, c, a, X, K, U):
    """``int phi^(n)(t) exp((c + iu) t) dt`` at ``u = k 2 pi / X``,
    ``|k| <= K``, by FFT of samples on a grid of period ``X`` starting at ``a``.
    """
    size = 2 ** int(math.ceil(math.log2(max(2.0 * U * X / math.pi, 4 * K + 4))))
    dt = X / size
    t = a + dt * np.arange(size)
    y = phi(t, n) * np.exp(c * t)
    spectrum = size * np.fft.ifft(y)

    k = np.arange(-K, K + 1)
    u = k * (2 * math.pi / X)
    return u, dt * np.exp(1j * u * a) * spectrum[k % size]


def pair_inverse_laplace_line(
    g: LineFunction,
    c: float,
    phi: TestFunction,
    n: int = 0,
    tol: float = 1e-7,
    n_max: int = 8,
    U_start: float = 64.0,
    U_max: float = 8192.0,
) -> PairingResult:
    """Pairing of the inverse Laplace transform of ``g`` (taken along the
    line ``Re s = c``) with ``phi``.

    Computes ``(1/2pi) int g(c+iu) Phi(c+iu) du`` with
    ``Phi(s) = int phi(t) exp(st) dt = (-1)**n s**-n int phi^(n)(t) exp(st) dt``
    by the trapezoidal rule in ``u``. The grid spacing ``2pi/X`` makes the
    periodic images of ``phi`` fall where the transform is negligible. The
    range ``|u| <= U`` is doubled until the result changes by less than
    ``tol``. If no convergence is reached at ``U_max``, ``n`` is increased.

    Raises
    ------
    PairingConvergenceError
        When no ``n <= min(n_max, phi.max_order)`` gives convergence.

    """
    if c <= g.valid_half_plane:
        raise ValueError(
            f"line Re s = {c} is not in the half-plane Re s > {g.valid_half_plane}"
        )
    if n > phi.max_order:
        raise ValueError(f"n={n} exceeds the test function order {phi.max_order}")

    a, b = phi.support
    X = _line_period(g, c, a, b)
    du = 2 * math.pi / X
    last = math.inf
    n_top = min(n_max, phi.max_order)

    K_max = int(U_max / du)
    k = np.arange(-K_max, K_max + 1)
    g_values = np.full(k.size, np.nan, dtype=complex)

    while n <= n_top:
        if n > 0 and c == 0:
            raise ValueError("division by s**n needs c != 0")

        u, transform = _laplace_on_grid(phi, n, c, a, X, K_max, U_max)
        weights = (-1) ** n * transform
        if n:
            weights = weights / (c + 1j * u) ** n

        total = 0j
        previous = None
        K_done = -1
        U = U_start
        while U <= U_max:
            K = min(int(U / du), K_max)
            shell = (np.abs(k) > K_done) & (np.abs(k) <= K)
            missing = shell & np.isnan(g_values)
            if np.any(missing):
                g_values[missing] = g.on_line(c, u[missing])
            total += fsum_complex(g_values[shell] * weights[shell]) * du / (2 * math.pi)
            K_done = K

            if previous is not None:
                last = abs(total - previous)
                if last <= tol:
                    used = {"n": n, "U": U, "X": X, "n_nodes": 2 * K + 1}
                    return PairingResult(total, float(last), used)
            previous = total
            U *= 2
        n += 1

    raise PairingConvergenceError(
        f"pairing did not converge (last change {last:.3g} > tol={tol}, "
        f"U_max={U_max}, n up to {n_top})"
    )


@attr.s(auto_attribs=True, frozen=True)
class PoissonNewtonProblem:
    """Divisor side and inverse-Laplace side of a Poisson-Newton identity.

    ``rhs_source`` is either the atomic measure of the inverse Laplace
    transform of ``f'/f`` or ``f'/f`` itself as a line function.
    """

    divisor: Divisor
    d: int
    known_discrepancy: Optional[DiscrepancyPolynomial] = None
    rhs_source: Union[AtomicMeasure, LineFunction, None] = None


@attr.s(auto_attribs=True, frozen=True)
class PoissonNewtonResult:
    lhs: complex
    rhs: complex
    residual: float
    truncation: int
    tau: Optional[float]
    c_coeffs: Tuple[complex, ...] = ()
    lhs_error: float = 0.0
    rhs_error: float = 0.0

    def to_json(self) -> Dict[str, Any]:
        return {
            "lhs": complex_to_json(self.lhs),
            "rhs": complex_to_json(self.rhs),
            "residual": self.residual,
            "truncation": self.truncation,
            "tau": self.tau,
            "c_coeffs": [complex_to_json(c) for c in self.c_coeffs],
        }


def _inverse_laplace_pairing(source, phi, tau, line_c, tol):
    if isinstance(source, AtomicMeasure):
        mu = source if tau == 0 else source.exp_weighted(tau)
        return pair_atoms(mu, phi), 0.0
    if isinstance(source, LineFunction):
        if tau:
            phi = exp_times(phi, tau)
        res = pair_inverse_laplace_line(source, line_c, phi, tol=tol)
        return res.value, res.abs_error_est
    raise TypeError(f"unsupported inverse-Laplace source {type(source).__name__}")


def _lhs_pairing(problem, phi, trunc, origin, tau):
    if origin is OriginHandling.TRANSLATE:
        a, b = phi.support
        if a < 0 < b:
            raise ValueError(
                "translated origin handling needs a test function supported "
                "away from 0 (the discrepancy of f(s - tau) is not known)"
            )
        return pair_W(problem.divisor.translate(tau), problem.d, phi, trunc)
    return pair_W(problem.divisor, problem.d, phi, trunc)


def verify_poisson_newton(
    problem: PoissonNewtonProblem,
    phi: TestFunction,
    trunc: Optional[TruncationSpec] = None,
    origin: Union[str, OriginHandling] = OriginHandling.POWER,
    tau: float = 0.3,
    line_c: float = 1.0,
    tol: float = 1e-7,
) -> PoissonNewtonResult:
    """Compare both sides of ``W(f) = sum c_l delta_0^(l) + L^-1(f'/f)``
    on ``phi``.

    With ``origin="translate"`` the function ``f(s - tau)`` is analyzed:
    its divisor is translated and the inverse-Laplace side is multiplied by
    ``exp(tau t)``.
    """
    if trunc is None:
        trunc = TruncationSpec()
    origin = OriginHandling(origin)
    if problem.rhs_source is None:
        raise ValueError("the problem has no inverse-Laplace source")
    shift = tau if origin is OriginHandling.TRANSLATE else 0.0

    lhs = _lhs_pairing(problem, phi, trunc, origin, shift)

    rhs, rhs_error = _inverse_laplace_pairing(problem.rhs_source, phi, shift, line_c, tol)
    coeffs = ()
    if problem.known_discrepancy is not None:
        coeffs = problem.known_discrepancy.coeffs
        if origin is OriginHandling.POWER:
            rhs += problem.known_discrepancy.delta_pairing(phi)

    return PoissonNewtonResult(
        complex(lhs.value),
        complex(rhs),
        float(abs(lhs.value - rhs)),
        trunc.max_points,
        shift if origin is OriginHandling.TRANSLATE else None,
        coeffs,
        lhs.abs_error_est,
        rhs_error,
    )


def residual_sweep(
    problem: PoissonNewtonProblem,
    phi: TestFunction,
    truncations: Sequence[int],
    **kwargs,
) -> pd.DataFrame:
    """Poisson-Newton residual for each number of divisor points."""
    rows = []
    for n in truncations:
        res = verify_poisson_newton(problem, phi, TruncationSpec(max_points=n), **kwargs)
        rows.append({"truncation": int(n), "residual": res.residual})
    return pd.DataFrame(rows, columns=["truncation", "residual"])


@attr.s(auto_attribs=True, frozen=True)
class IntegrationByPartsCheck:
    pairing_d: complex
    pairing_d1: complex
    difference: float


def integrate_by_parts_check(
    div: Divisor, d: int, phi: TestFunction, abs_tol: float = 1e-10
) -> IntegrationByPartsCheck:
    """Pair ``D^d L_d`` and ``D^(d+1)`` of its primitive
    ``L_{d+1}(t) - t S_d`` (``S_d = sum n_rho rho**-d``) with ``phi``.

    Both are the same distribution; only finite divisors are accepted.
    """
    if not div.is_finite:
        raise ValueError("integration-by-parts check needs a finite divisor")
    d = max(int(d), 1)
    if phi.max_order < d + 1:
        raise ValueError(f"test function must provide order {d + 1}")

    rho, mult = div.points_within(math.inf)
    lo, hi = max(phi.support[0], 0.0), phi.support[1]
    if lo >= hi or rho.size == 0:
        return IntegrationByPartsCheck(0j, 0j, 0.0)

    s_d = fsum_complex(mult * rho ** (-float(d)))

    first = (-1) ** d * _pair_ld(rho, mult, d, phi, lo, hi, abs_tol).value

    def correction(t):
        return np.where(t > 0, -t * s_d, 0.0)

    second = (-1) ** (d + 1) * _pair_ld(
        rho, mult, d + 1, phi, lo, hi, abs_tol, extra=correction
    ).value

    return IntegrationByPartsCheck(complex(first), complex(second), float(abs(first - second)))


def extract_discrepancy(
    problem: PoissonNewtonProblem,
    gW_bound: int = 4,
    radius: float = 1.0,
    trunc: Optional[TruncationSpec] = None,
    line_c: float = 1.0,
    tol: float = 1e-8,
    noise_factor: float = 10.0,
    atoms: Optional[Union[AtomicMeasure, Callable[[float], AtomicMeasure]]] = None,
) -> DiscrepancyPolynomial:
    """Coefficients ``c_l`` of the discrepancy polynomial.

    Both sides are paired with ``phi_j(t) = t**j * plateau(radius)``;
    since ``phi_j^(l)(0) = j! [l = j]``,
    ``c_j = (-1)**j (lhs_j - rhs_j) / j!``. Trailing coefficients below
    ``noise_factor`` times their pairing error are dropped.

    The atoms of the inverse-Laplace side are those of an
    :class:`~hadalab.dirichlet.AtomicMeasure` source, otherwise ``atoms``
    (a measure, or a callable ``atoms(T)`` as in the catalog cases) when
    given for a line source.

    Raises
    ------
    ExtractionError
        If an atom of the inverse-Laplace side lies in ``(0, radius]``.

    """
    if not 1 <= gW_bound <= 6:
        raise ValueError(f"gW_bound must be in [1, 6], got {gW_bound}")
    source = problem.rhs_source
    if source is None:
        raise ValueError("the problem has no inverse-Laplace source")
    if isinstance(source, AtomicMeasure):
        atoms = source
    elif atoms is not None and not isinstance(atoms, AtomicMeasure):
        atoms = atoms(radius)
    if atoms is not None:
        inside = atoms.freqs[(atoms.freqs > 0) & (atoms.freqs <= radius)]
        if inside.size:
            raise ExtractionError(
                f"discrepancy extraction invalid here: atom at {inside[0]} "
                f"inside (0, {radius}]"
            )
    if trunc is None:
        trunc = TruncationSpec(max_points=200_000)

    base = plateau(radius, max_order=max(problem.d, gW_bound, 1) + 1)

    raw = []
    errors = []
    for j in range(gW_bound):
        phi = monomial_times(base, j)
        lhs = pair_W(problem.divisor, problem.d, phi, trunc)
        rhs, rhs_error = _inverse_laplace_pairing(source, phi, 0.0, line_c, tol)
        scale = math.factorial(j)
        raw.append((-1) ** j * (lhs.value - rhs) / scale)
        errors.append((lhs.abs_error_est + rhs_error) / scale)

    coeffs = list(raw)
    while coeffs and abs(coeffs[-1]) <= noise_factor * errors[len(coeffs) - 1]:
        coeffs.pop()

    residual = float(max(errors))
    return DiscrepancyPolynomial(coeffs, residual, noise_factor * residual, raw)


def classify(
    d: int,
    m0,
    gW: Optional[int] = None,
    is_dirichlet: bool = False,
    residual: Optional[float] = None,
    threshold: float = 1e-4,
) -> Classification:
    """Hadamard/Weierstrass type from the exponent, the vertical order and
    the discrepancy degree.

    Hadamard type follows from ``m0 <= d`` or from being a Dirichlet
    series. Weierstrass type needs ``gW > d - 1`` with an extraction
    residual below ``threshold``.

    Raises
    ------
    DirichletExponentError
        For Dirichlet inputs with ``d < 2``.

    """
    if is_dirichlet and d < 2:
        raise DirichletExponentError(
            f"d={d} contradicts the exponent bound d >= 2 for non-constant "
            "Dirichlet series (bad divisor model)"
        )
    if is_dirichlet or (
        isinstance(m0, numbers.Integral) and not isinstance(m0, bool) and m0 <= d
    ):
        return Classification.HADAMARD
    if gW is not None and gW > d - 1:
        if residual is None or residual <= threshold:
            return Classification.WEIERSTRASS
    return Classification.INCONCLUSIVE
