"""L1 norms of ``|s|**-m f'/f(s)`` along vertical lines ``Re s = c``,
the vertical order and the monotonicity of the norms in ``c``.

"""
import math
import warnings
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import attr
import numpy as np
import pandas as pd

from .quadrature import gauss_kronrod, gauss_kronrod_panels
from .utils import DIVERGENT, UNDETERMINED, HalfPlaneError, compute_all, is_sentinel


class Verdict(Enum):
    CONVERGENT = "convergent"
    DIVERGENT = "divergent"


class EvaluatorError(RuntimeError):
    """Raised when a line function fails (or returns a non-finite value)
    at some point of a vertical line.
    """

    def __init__(self, t, c, cause=None):
        self.t = float(t)
        self.c = float(c)
        msg = f"evaluator failed at s = {self.c} + {self.t}i"
        if cause is not None:
            msg += f": {cause}"
        super().__init__(msg)


@attr.s(frozen=True)
class LineFunction:
    """Function (a logarithmic derivative) evaluated on vertical lines.

    Parameters
    ----------
    evaluator : callable
        Maps an array of complex points to an array of values.
    valid_half_plane : float
        The evaluator is defined for ``Re s > valid_half_plane``.
    vectorized : bool, optional
        If False, ``evaluator`` takes scalars and is wrapped with
        :func:`numpy.vectorize` (default: True).
    name : str, optional
    max_modulus : float, optional
        The evaluator is only reliable for ``|s| <= max_modulus`` (e.g. a
        sum truncated to the divisor points in a disk). Infinite by default.

    """

    evaluator: Callable = attr.ib()
    valid_half_plane: float = attr.ib(converter=float)
    vectorized: bool = attr.ib(default=True, kw_only=True)
    name: str = attr.ib(default="", kw_only=True)
    max_modulus: float = attr.ib(default=math.inf, converter=float, kw_only=True)

    _func = attr.ib(init=False, repr=False, eq=False)

    def __attrs_post_init__(self):
        func = self.evaluator
        if not self.vectorized:
            func = np.vectorize(func, otypes=[complex])
        object.__setattr__(self, "_func", func)

    def __call__(self, s):
        return self._func(s)

    def on_line(self, c: float, t: np.ndarray) -> np.ndarray:
        """Values at ``c + i t``, raising :class:`EvaluatorError` with the
        offending ``t`` on failure.

        A :class:`ZeroDivisionError` (the line meets a zero or a pole) is
        passed through unchanged.
        """
        t = np.asarray(t, dtype=float)
        s = c + 1j * t
        try:
            values = np.asarray(self._func(s), dtype=complex)
        except ZeroDivisionError:
            raise
        except Exception as err:
            for ti in t.ravel():
                try:
                    self._func(np.array([c + 1j * ti]))
                except Exception:
                    raise EvaluatorError(ti, c, err) from err
            raise EvaluatorError(t.ravel()[0], c, err) from err

        bad = ~np.isfinite(values)
        if np.any(bad):
            raise EvaluatorError(t[bad].ravel()[0], c, "non-finite value")
        return np.broadcast_to(values, t.shape)

    def cached(self) -> "LineFunction":
        """Copy remembering its values on point arrays already seen.

        The quadrature nodes of a line do not depend on ``m``, so a scan
        over ``m`` evaluates the function once per node array.
        """
        cache = {}
        func = self._func

        def evaluator(s):
            s = np.asarray(s, dtype=complex)
            key = (s.shape, s.tobytes())
            if key not in cache:
                cache[key] = np.asarray(func(s), dtype=complex)
            return cache[key]

        return attr.evolve(self, evaluator=evaluator, vectorized=True)

    @classmethod
    def zero(cls):
        return cls(lambda s: np.zeros(np.shape(s), dtype=complex), -math.inf, name="zero")


@attr.s(auto_attribs=True, frozen=True)
class LineIntegralResult:
    """L1 norm of ``|c + it|**-m |g(c + it)|`` over the real line.

    ``value`` is :data:`~hadalab.utils.DIVERGENT` when the fitted tail
    exponent is not below ``-1 - margin``.
    """

    c: float
    m: int
    value: Union[float, object]
    tail_exponent: float
    windows_used: int
    abs_error_est: float
    verdict: Verdict
    window_edges: np.ndarray = attr.ib(eq=False, repr=False)
    window_levels: np.ndarray = attr.ib(eq=False, repr=False)
    samples: pd.DataFrame = attr.ib(eq=False, repr=False)

    @property
    def convergent(self) -> bool:
        return self.verdict is Verdict.CONVERGENT

    def to_csv(self, path_or_buf=None, **kwargs):
        """Dump the sampled integrand (columns ``t`` and ``abs_integrand``)."""
        return self.samples.to_csv(path_or_buf, index=False, **kwargs)


def _window_edges(T_max):
    n_windows = int(math.floor(math.log2(T_max)))
    edges = 2.0 ** np.arange(n_windows + 1)
    if T_max > edges[-1]:
        # shorter last window ending at T_max
        edges = np.append(edges, float(T_max))
    return edges


def _integrate_window(g, c, m, lo, hi, tol, panel_length, max_panels):
    def integrand(t):
        s = c + 1j * t
        return np.abs(s) ** (-m) * np.abs(g.on_line(c, t))

    n_panels = max(int(math.ceil((hi - lo) / panel_length)), 1)
    if n_panels > max_panels:
        res = gauss_kronrod_panels(integrand, lo, hi, max_panels)
    else:
        res = gauss_kronrod(
            integrand, lo, hi, abs_tol=tol * (hi - lo), initial_intervals=n_panels
        )
    t = np.linspace(lo, hi, 16)
    return res.value, res.abs_error, t, integrand(t)


def line_l1_norm(
    g: LineFunction,
    c: float,
    m: int,
    T_max: float = 2.0 ** 16,
    tol: float = 1e-8,
    margin: float = 0.1,
    min_windows: int = 4,
    panel_length: float = 2.0,
    max_panels: int = 128,
    parallel: bool = False,
    scheduler=None,
) -> LineIntegralResult:
    """Integral of ``|c + it|**-m |g(c + it)|`` over ``t`` in the real line.

    The line is cut into ``[-1, 1]`` and dyadic windows ``[2**j, 2**(j+1)]``
    (and their mirror images) up to ``T_max``. The mean integrand level of
    each window (both signs of ``t`` averaged) is fitted against ``t`` in
    log-log scale over the upper half of the windows (at least
    ``min_windows``). The integral is declared convergent when the fitted
    slope is below ``-1 - margin``; the part beyond ``T_max`` is then
    extrapolated from the fit.

    Parameters
    ----------
    g : :class:`LineFunction`
    c : float
        Abscissa of the line (nonzero, in the domain of ``g``).
    m : int
        Power of ``|s|`` dividing the integrand.
    T_max : float, optional
        Integration range (at least 64).
    tol : float, optional
        Absolute tolerance per unit length of ``t``.
    panel_length : float, optional
        Length of the initial quadrature panels.
    max_panels : int, optional
        Windows needing more panels than this are integrated with a fixed
        G7/K15 rule on ``max_panels`` longer panels instead of the adaptive
        rule.
    parallel : bool, optional
        Integrate the windows through dask.

    """
    if c == 0:
        raise ValueError("vertical lines through the origin are excluded (c != 0)")
    if c <= g.valid_half_plane:
        raise HalfPlaneError(
            f"line Re s = {c} is not in the half-plane Re s > {g.valid_half_plane}"
        )
    if T_max < 64:
        raise ValueError(f"T_max must be at least 64, got {T_max}")
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    if abs(complex(c, T_max)) > g.max_modulus:
        raise EvaluatorError(
            T_max,
            c,
            f"{g.name or 'evaluator'} is only reliable for |s| <= {g.max_modulus:g}",
        )

    edges = _window_edges(T_max)
    windows = [(-1.0, 1.0)]
    for lo, hi in zip(edges[:-1], edges[1:]):
        windows.append((lo, hi))
        windows.append((-hi, -lo))

    def make_task(lo, hi):
        return lambda: _integrate_window(g, c, m, lo, hi, tol, panel_length, max_panels)

    results = compute_all(
        [make_task(lo, hi) for lo, hi in windows], parallel=parallel, scheduler=scheduler
    )

    values = np.array([r[0] for r in results])
    errors = np.array([r[1] for r in results])
    samples = pd.DataFrame(
        {
            "t": np.concatenate([r[2] for r in results]),
            "abs_integrand": np.concatenate([r[3] for r in results]),
        }
    ).sort_values("t", kind="mergesort", ignore_index=True)

    total = math.fsum(values)
    abs_error = math.fsum(errors)

    lengths = edges[1:] - edges[:-1]
    levels = (values[1::2] + values[2::2]) / (2 * lengths)

    n_fit = max(min_windows, int(math.ceil(levels.size / 2)))
    fit_levels = levels[-n_fit:]
    fit_mid = np.sqrt(edges[:-1] * edges[1:])[-n_fit:]
    positive = fit_levels > 0

    if not np.any(levels > 0):
        beta = -math.inf
        tail = 0.0
    elif np.count_nonzero(positive) < 2:
        beta = math.nan
        tail = math.inf
    else:
        beta, log_a = np.polyfit(np.log(fit_mid[positive]), np.log(fit_levels[positive]), 1)
        beta = float(beta)
        if beta < -1:
            tail = 2 * math.exp(log_a) * T_max ** (beta + 1) / (-beta - 1)
        else:
            tail = math.inf

    if beta < -1 - margin:
        verdict = Verdict.CONVERGENT
        value = total + tail
        abs_error += tail
    else:
        verdict = Verdict.DIVERGENT
        value = DIVERGENT

    return LineIntegralResult(
        float(c),
        int(m),
        value,
        beta,
        int(n_fit),
        float(abs_error),
        verdict,
        edges,
        levels,
        samples,
    )


@attr.s(auto_attribs=True, frozen=True)
class VerticalOrderScan:
    """Verdicts of :func:`line_l1_norm` on several lines, for ``m = 0, 1, ...``
    until all lines agree on convergence.
    """

    m0: Union[int, object]
    cs: Tuple[float, ...]
    results: Dict[Tuple[float, int], LineIntegralResult] = attr.ib(eq=False)
    lines_agree: bool = True
    diagnostics: List[str] = attr.ib(factory=list, eq=False)

    def verdict_table(self) -> pd.DataFrame:
        """Verdicts as a table with one row per ``c`` and one column per ``m``."""
        rows = {}
        for (c, m), res in self.results.items():
            rows.setdefault(c, {})[m] = res.verdict.value
        return pd.DataFrame.from_dict(rows, orient="index").sort_index()


def vertical_order_scan(
    g: LineFunction,
    cs: Sequence[float],
    m_max: int = 6,
    T_max: float = 2.0 ** 16,
    tol: float = 1e-8,
    parallel: bool = False,
    scheduler=None,
    **kwargs,
) -> VerticalOrderScan:
    """Smallest ``m <= m_max`` for which the L1 integral converges on all
    lines ``Re s = c``.

    When the verdicts differ between lines for some ``m`` (the vertical
    order does not depend on ``c``), the scan stops with an undetermined
    order and a warning.
    """
    cs = tuple(float(c) for c in cs)
    if len(set(cs)) < 2:
        raise ValueError("at least two distinct values of c are required")
    for c in cs:
        if c <= g.valid_half_plane:
            raise HalfPlaneError(
                f"line Re s = {c} is not in the half-plane Re s > {g.valid_half_plane}"
            )

    g = g.cached()
    results = {}
    diagnostics = []

    for m in range(m_max + 1):

        def make_task(c, m=m):
            return lambda: line_l1_norm(g, c, m, T_max, tol, **kwargs)

        line_results = compute_all(
            [make_task(c) for c in cs], parallel=parallel, scheduler=scheduler
        )
        for c, res in zip(cs, line_results):
            results[(c, m)] = res

        verdicts = {res.verdict for res in line_results}
        if len(verdicts) > 1:
            msg = (
                f"verdicts for m={m} differ across lines c={list(cs)} "
                "although the vertical order does not depend on c"
            )
            warnings.warn(msg, UserWarning, stacklevel=2)
            diagnostics.append(msg)
            return VerticalOrderScan(UNDETERMINED, cs, results, False, diagnostics)

        if verdicts == {Verdict.CONVERGENT}:
            return VerticalOrderScan(m, cs, results, True, diagnostics)

    diagnostics.append(f"no m <= {m_max} gives a convergent integral")
    return VerticalOrderScan(UNDETERMINED, cs, results, True, diagnostics)


def vertical_order_estimate(
    g: LineFunction,
    cs: Sequence[float],
    m_max: int = 6,
    T_max: float = 2.0 ** 16,
    tol: float = 1e-8,
    **kwargs,
):
    """Vertical order estimate (an int or :data:`~hadalab.utils.UNDETERMINED`)."""
    return vertical_order_scan(g, cs, m_max, T_max, tol, **kwargs).m0


@attr.s(auto_attribs=True, frozen=True)
class MonotonicityResult:
    lhs: Union[float, object]
    rhs: Union[float, object]
    holds: bool


def c_monotonicity_check(
    g0: LineFunction,
    m0: int,
    c: float,
    c_prime: float,
    T_max: float = 2.0 ** 16,
    tol: float = 1e-8,
    **kwargs,
) -> MonotonicityResult:
    """Compare the L1 norms of ``s**-m0 g0(s)`` on the lines ``c' >= c``:
    ``lhs`` (line ``c'``) should not exceed ``rhs`` (line ``c``).
    """
    if not g0.valid_half_plane < c <= c_prime:
        raise ValueError(
            f"expected {g0.valid_half_plane} < c <= c_prime, got c={c}, c_prime={c_prime}"
        )

    rhs = line_l1_norm(g0, c, m0, T_max, tol, **kwargs).value
    if c_prime == c:
        lhs = rhs
    else:
        lhs = line_l1_norm(g0, c_prime, m0, T_max, tol, **kwargs).value

    if is_sentinel(rhs):
        holds = True
    elif is_sentinel(lhs):
        holds = False
    else:
        holds = lhs <= rhs * (1 + tol)

    return MonotonicityResult(lhs, rhs, bool(holds))
