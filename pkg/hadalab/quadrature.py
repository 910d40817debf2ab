"""Adaptive Gauss-Kronrod quadrature on finite intervals.

All integrands are called with a 1-d numpy array of abscissas and must
return an array of the same length (real or complex).

"""
import warnings
from typing import Callable, Union

import attr
import numpy as np

from .utils import CompensatedSum


# 15-point Kronrod abscissas (nonnegative half) and weights, with the
# weights of the embedded 7-point Gauss rule.
_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_INDEX = np.array([1, 3, 5, 7, 9, 11, 13])
GAUSS_WEIGHTS = np.concatenate([_WG, _WG[-2::-1]])


@attr.s(auto_attribs=True, frozen=True)
class QuadResult:
    """Result of an adaptive quadrature."""

    value: Union[float, complex]
    abs_error: float
    n_intervals: int
    converged: bool


def _rule(func, lo, hi):
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = center[:, None] + half[:, None] * KRONROD_NODES[None, :]

    values = np.asarray(func(nodes.ravel())).reshape(nodes.shape)

    kronrod = half * (values @ KRONROD_WEIGHTS)
    gauss = half * (values[:, GAUSS_INDEX] @ GAUSS_WEIGHTS)

    return kronrod, np.abs(kronrod - gauss)


def gauss_kronrod(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    abs_tol: float = 1e-10,
    rel_tol: float = 0.0,
    initial_intervals: int = 1,
    max_intervals: int = 200_000,
) -> QuadResult:
    """Integrate ``func`` over ``[a, b]`` by adaptive bisection with the
    G7/K15 pair.

    All intervals still to be refined are evaluated in one vectorized call
    of ``func``. An interval of length ``h`` is accepted when its error
    estimate ``|K15 - G7|`` is below ``tol * h / (b - a)``, with
    ``tol = max(abs_tol, rel_tol * |I|)``.

    Parameters
    ----------
    func : callable
        Vectorized integrand.
    a, b : float
        Finite integration bounds.
    abs_tol, rel_tol : float, optional
        Absolute and relative tolerances on the whole integral.
    initial_intervals : int, optional
        Number of equal sub-intervals to start with (useful for
        oscillating integrands).
    max_intervals : int, optional
        Limit on the total number of evaluated intervals. When reached, all
        remaining intervals are accepted and a :class:`RuntimeWarning` is
        issued.

    Returns
    -------
    result : :class:`QuadResult`

    """
    if a == b:
        return QuadResult(0.0, 0.0, 0, True)
    if b < a:
        res = gauss_kronrod(
            func, b, a, abs_tol, rel_tol, initial_intervals, max_intervals
        )
        return attr.evolve(res, value=-res.value)

    length = b - a
    edges = np.linspace(a, b, max(int(initial_intervals), 1) + 1)
    lo, hi = edges[:-1], edges[1:]

    total = CompensatedSum()
    error = 0.0
    n_eval = 0
    is_complex = False
    converged = True

    while lo.size:
        kronrod, err = _rule(func, lo, hi)
        n_eval += lo.size
        is_complex = is_complex or np.iscomplexobj(kronrod)

        estimate = abs(total.value + kronrod.sum())
        tol = max(abs_tol, rel_tol * estimate)
        h = hi - lo
        accept = (err <= tol * h / length) | (h <= 4 * np.spacing(np.abs(lo) + np.abs(hi)))

        if n_eval + 2 * np.count_nonzero(~accept) > max_intervals:
            accept[:] = True
            converged = False

        total.add(kronrod[accept])
        error += float(err[accept].sum())

        mid = 0.5 * (lo[~accept] + hi[~accept])
        lo, hi = (
            np.concatenate([lo[~accept], mid]),
            np.concatenate([mid, hi[~accept]]),
        )

    if not converged:
        warnings.warn(
            f"subdivision limit reached on [{a}, {b}] "
            f"(error estimate {error:.3g})",
            RuntimeWarning,
            stacklevel=2,
        )

    value = total.value if is_complex else total.value.real

    return QuadResult(value, error, n_eval, converged)


def gauss_kronrod_panels(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    n_panels: int,
) -> QuadResult:
    """Non-adaptive G7/K15 rule on ``n_panels`` equal panels of ``[a, b]``.

    Costs exactly ``15 * n_panels`` evaluations of ``func``; the error
    estimate is the sum of the ``|K15 - G7|`` differences and is not
    checked against any tolerance.
    """
    edges = np.linspace(a, b, max(int(n_panels), 1) + 1)
    kronrod, err = _rule(func, edges[:-1], edges[1:])

    total = CompensatedSum()
    total.add(kronrod)
    value = total.value if np.iscomplexobj(kronrod) else total.value.real

    return QuadResult(value, float(err.sum()), edges.size - 1, True)


def gauss_legendre_panels(
    func: Callable[[np.ndarray], np.ndarray],
    a: np.ndarray,
    b: np.ndarray,
    order: int = 16,
) -> np.ndarray:
    """Fixed-order Gauss-Legendre rule applied to many panels at once.

    ``a`` and ``b`` are arrays of panel bounds (same shape); returns the
    integral over each panel.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)

    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = center[..., None] + half[..., None] * x
    values = np.asarray(func(nodes.ravel())).reshape(nodes.shape)

    return half * (values @ w)
