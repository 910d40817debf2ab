"""Elementary factors, truncated Hadamard products and the logarithmic
derivative of the Hadamard part, with uniform tail bounds.

"""
import functools
import math
import warnings
from enum import Enum
from typing import Callable, Optional, Sequence

import attr
import numpy as np
from scipy.special import polygamma

from .divisor import Appendix2Divisor, Divisor, total_origin_mult
from .utils import HalfPlaneError, fsum_complex
from .validators import in_bounds


class TailBoundMode(Enum):
    FROM_TAIL_MODEL = "from_tail_model"
    NONE = "none"


class DivisorPointError(ZeroDivisionError):
    """Raised when evaluating at a zero or a pole of the divisor."""

    def __init__(self, rho, mult):
        self.rho = complex(rho)
        self.mult = int(mult)
        kind = "zero" if self.mult > 0 else "pole"
        super().__init__(
            f"evaluation at divisor point {self.rho} ({kind} of multiplicity "
            f"{abs(self.mult)})"
        )


@attr.s(auto_attribs=True, frozen=True)
class TruncationSpec:
    """How many divisor points to use and how to bound the remainder."""

    max_points: int = attr.ib(
        default=10_000, converter=int, validator=in_bounds((1, None))
    )
    abs_tol: float = attr.ib(
        default=1e-10, converter=float, validator=in_bounds((0, None), (False, True))
    )
    tail_bound_mode: TailBoundMode = attr.ib(
        default=TailBoundMode.FROM_TAIL_MODEL, converter=TailBoundMode
    )


def elementary_factor(n: int, z):
    """Weierstrass elementary factor ``E_n(z) = (1 - z) exp(z + ... + z**n / n)``.

    Works element-wise on arrays.
    """
    z = np.asarray(z, dtype=complex)
    j = np.arange(1, n + 1)
    exponent = (z[..., None] ** j / j).sum(axis=-1)
    res = (1 - z) * np.exp(exponent)
    return res[()] if res.ndim == 0 else res


def log_elementary_factor(n: int, z):
    """A logarithm of ``E_n(z)`` computed as ``log(1 - z) + sum z**j / j``."""
    z = np.asarray(z, dtype=complex)
    j = np.arange(1, n + 1)
    res = np.log1p(-z) + (z[..., None] ** j / j).sum(axis=-1)
    return res[()] if res.ndim == 0 else res


def _check_not_on_divisor(rho, mult, s, rel_tol=1e-14):
    hit = np.abs(rho - s) <= rel_tol * np.abs(rho)
    if np.any(hit):
        i = int(np.argmax(hit))
        raise DivisorPointError(rho[i], mult[i])


@attr.s(auto_attribs=True, frozen=True)
class PartialProduct:
    """Truncated Hadamard product.

    ``log_increments`` holds the change of ``log|partial product|`` between
    consecutive dyadic checkpoints (1, 2, 4, ... points), a diagnostic of
    convergence only.
    """

    value: complex
    log_value: complex
    n_points: int
    log_increments: np.ndarray = attr.ib(eq=False)


def hadamard_part(
    div: Divisor, d: int, s: complex, trunc: Optional[TruncationSpec] = None
) -> PartialProduct:
    """Truncated Hadamard part ``s**n0 * prod E_{d-1}(s / rho)**n_rho``.

    Parameters
    ----------
    div : :class:`~hadalab.divisor.Divisor`
    d : int
        Convergence exponent of ``div``. Elementary factors of order
        ``max(d - 1, 0)`` are used.
    s : complex
        Evaluation point.
    trunc : :class:`TruncationSpec`, optional
        Only ``max_points`` is used; the product tail has no certified bound.

    Raises
    ------
    DivisorPointError
        If ``s`` is one of the enumerated points (or the origin with a
        nonzero multiplicity).

    """
    if trunc is None:
        trunc = TruncationSpec()

    s = complex(s)
    origin = total_origin_mult(div)
    if s == 0 and origin:
        raise DivisorPointError(0, origin)

    rho, mult = div.points(trunc.max_points)
    _check_not_on_divisor(rho, mult, s)

    terms = mult * log_elementary_factor(max(d - 1, 0), s / rho)
    if origin:
        log_value = origin * np.log(s) + fsum_complex(terms)
    else:
        log_value = fsum_complex(terms)

    if terms.size:
        checkpoints = 2 ** np.arange(int(math.log2(terms.size)) + 1) - 1
        partial = np.cumsum(terms.real)[checkpoints]
        increments = np.abs(np.diff(partial))
    else:
        increments = np.array([])

    return PartialProduct(complex(np.exp(log_value)), log_value, rho.size, increments)


def g_rho(rho, s, d: int, center: float = 0.0):
    """Closed form ``(s - c)**(d-1) / ((rho - c)**(d-1) * (s - rho))`` of the
    contribution of one point to the logarithmic derivative (``c`` is the
    expansion center).
    """
    rho = np.asarray(rho, dtype=complex)
    s = np.asarray(s, dtype=complex)
    w = s - rho
    a = np.abs(w)
    recip = np.conj(w) / a / a
    e = max(d - 1, 0)
    if e:
        recip = recip * ((s - center) / (rho - center)) ** e
    return recip


def g_rho_partial_fractions(rho, s, d: int, center: float = 0.0):
    """Same quantity as :func:`g_rho`, as
    ``1/(s - rho) + sum_{l<d-1} (s - c)**l / (rho - c)**(l+1)``.
    """
    rho = np.asarray(rho, dtype=complex)
    s = np.asarray(s, dtype=complex)
    res = 1 / (s - rho)
    for l in range(max(d - 1, 0)):
        res = res + (s - center) ** l / (rho - center) ** (l + 1)
    return res


def uniform_bound_constant(sigma1: float, sigma2: float) -> float:
    """Constant ``C`` with ``|g_rho(s)| <= C |s-c|**d / |rho-c|**d`` for
    ``Re s > sigma2 > sigma1 >= Re rho`` and real center ``c <= sigma1``.
    """
    if sigma2 <= sigma1:
        raise HalfPlaneError(f"sigma2={sigma2} must be larger than sigma1={sigma1}")
    return 2.0 / (sigma2 - sigma1)


def g_rho_scaled(rho, s, d: int, center: float = 0.0):
    """``g_rho(s) * (rho - c)**d / (s - c)**d``, bounded by
    :func:`uniform_bound_constant`.
    """
    rho = np.asarray(rho, dtype=complex)
    s = np.asarray(s, dtype=complex)
    return g_rho(rho, s, d, center) * ((rho - center) / (s - center)) ** d


@attr.s(auto_attribs=True, frozen=True)
class LogDerivativeSum:
    value: complex
    tail_bound: Optional[float]
    n_points: int
    converged: bool


def _tail_bound(div, d, sigma1, center, s, n_used, rho_next):
    if rho_next is None and div.is_finite:
        return 0.0

    scale = 1.0
    if center != 0 and d > 0:
        if rho_next is None or abs(rho_next) < 2 * abs(center):
            return math.inf
        scale = 2.0 ** d

    tail = div.tail_sum(n_used, d)
    if not math.isfinite(tail):
        return math.inf

    const = uniform_bound_constant(max(sigma1, center), s.real)
    return 2.0 * const * abs(s - center) ** d * scale * tail


def log_derivative_sum(
    div: Divisor,
    d: int,
    sigma1: float,
    s: complex,
    trunc: Optional[TruncationSpec] = None,
    center: Optional[float] = None,
) -> LogDerivativeSum:
    """Logarithmic derivative of the Hadamard part of ``div`` at ``s``.

    Each point contributes ``n_rho * g_rho(s)`` (see :func:`g_rho`); the
    origin contributes ``n0 / s``. Terms are added in enumeration order with
    correctly rounded summation.

    Parameters
    ----------
    div : :class:`~hadalab.divisor.Divisor`
    d : int
        Convergence exponent.
    sigma1 : float
        Abscissa of the divisor; ``Re s`` must be larger.
    s : complex
    trunc : :class:`TruncationSpec`, optional
    center : float, optional
        Real expansion center (default: ``sigma1``). Use 0 for the
        Hadamard part normalized at the origin.

    Returns
    -------
    result : :class:`LogDerivativeSum`
        ``tail_bound`` bounds the contribution of the points not summed
        (``None`` when ``tail_bound_mode`` is ``"none"``, ``inf`` when no
        bound is available).

    """
    if trunc is None:
        trunc = TruncationSpec()
    if center is None:
        center = sigma1

    s = complex(s)
    if s.real <= sigma1:
        raise HalfPlaneError(
            f"outside right half-plane: Re s = {s.real} <= sigma1 = {sigma1}"
        )
    if center > s.real:
        raise ValueError(f"expansion center {center} must not exceed Re s = {s.real}")

    rho, mult = div.points(trunc.max_points + 1)
    rho_next = complex(rho[-1]) if rho.size > trunc.max_points else None
    rho, mult = rho[: trunc.max_points], mult[: trunc.max_points]

    _check_not_on_divisor(rho, mult, s)
    if d >= 2 and np.any(rho == center):
        raise ValueError(f"divisor point at the expansion center {center}")

    value = fsum_complex(mult * g_rho(rho, s, d, center))
    origin = total_origin_mult(div)
    if origin:
        value += origin / s

    if trunc.tail_bound_mode is TailBoundMode.NONE:
        bound = None
        converged = rho_next is None and div.is_finite
    else:
        bound = _tail_bound(div, d, sigma1, center, s, rho.size, rho_next)
        converged = bound <= trunc.abs_tol

    return LogDerivativeSum(value, bound, int(rho.size), converged)


def log_derivative_function(
    div: Divisor,
    d: int,
    center: float = 0.0,
    max_points: int = 10_000,
    chunk_size: int = 2048,
) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized (untruncated-tail) logarithmic derivative of the
    Hadamard part, for use on vertical lines.
    """
    rho, mult = div.points(max_points)
    origin = total_origin_mult(div)

    def evaluate(s):
        s = np.atleast_1d(np.asarray(s, dtype=complex))
        out = np.empty(s.shape, dtype=complex)
        step = max(chunk_size * 512 // max(rho.size, 1), 1)
        for i in range(0, s.size, step):
            block = s[i : i + step]
            hit = np.abs(rho[None, :] - block[:, None]) <= 1e-14 * np.abs(rho)
            if np.any(hit):
                j = int(np.argwhere(hit)[0, 1])
                raise DivisorPointError(rho[j], mult[j])
            terms = mult * g_rho(rho[None, :], block[:, None], d, center)
            out[i : i + step] = terms.sum(axis=1)
        if origin:
            out += origin / s
        return out

    return evaluate


@attr.s(auto_attribs=True, frozen=True)
class GrowthProbe:
    C0: float
    max_ratio_point: Optional[complex]
    ratios: np.ndarray = attr.ib(eq=False)
    stabilized: bool = True


def growth_bound_probe(
    div: Divisor,
    d: int,
    sigma1: float,
    sigma2: float,
    samples: Sequence[complex],
    trunc: Optional[TruncationSpec] = None,
    exponent: Optional[float] = None,
) -> GrowthProbe:
    """Empirical constant of ``|f_H'/f_H (s)| <= C0 |s|**exponent`` on a
    right half-plane.

    ``exponent`` defaults to ``d``. The constant is flagged as not
    stabilized (and a warning is issued) when the largest ratio is
    reached at the last sample after three increasing ratios.

    """
    if sigma2 <= max(0.0, sigma1):
        raise HalfPlaneError(f"sigma2={sigma2} must exceed max(0, sigma1={sigma1})")

    samples = np.asarray(samples, dtype=complex).ravel()
    bad = np.flatnonzero(samples.real <= sigma2)
    if bad.size:
        i = int(bad[0])
        raise HalfPlaneError(
            f"sample {i} ({samples[i]}) is not in the half-plane Re s > {sigma2}"
        )

    if exponent is None:
        exponent = d

    ratios = np.array(
        [
            abs(log_derivative_sum(div, d, sigma1, s, trunc).value) / abs(s) ** exponent
            for s in samples
        ]
    )

    if not ratios.size or not np.any(ratios):
        return GrowthProbe(0.0, None, ratios)

    imax = int(np.argmax(ratios))
    stabilized = not (
        imax == ratios.size - 1
        and ratios.size >= 4
        and np.all(np.diff(ratios[-4:]) > 0)
    )
    if not stabilized:
        warnings.warn(
            f"growth constant did not stabilize over the samples "
            f"(exponent {exponent}, last ratio {ratios[-1]:.4g})",
            UserWarning,
            stacklevel=2,
        )

    return GrowthProbe(float(ratios[imax]), complex(samples[imax]), ratios, stabilized)


def appendix2_divisor() -> Appendix2Divisor:
    """Zeros ``i n**2 2**n`` of multiplicity ``2**n`` (n >= 1): a divisor
    with convergence exponent 1 whose logarithmic derivative is not
    ``O(|s|**(1 - eps))``.
    """
    return Appendix2Divisor()


C1_THIRD_SUM = math.pi ** 2 / 3


@functools.lru_cache(maxsize=32)
def _first_sum_sup(c: float, k_max: int = 64) -> float:
    """Sup over k <= k_max of ``|sum_{n<k} 2**n / (c + i(k**2 2**k - n**2 2**n))|``.

    The sum is bounded by ``2 / (k**2 + 2k - 1)``, so it is largest for
    small k.
    """
    sup = 0.0
    for k in range(2, k_max + 1):
        n = np.arange(1, k, dtype=float)
        D = k * k * 2.0 ** k - n * n * 2.0 ** n
        sup = max(sup, abs(np.sum(2.0 ** n / (c + 1j * D))))
    return sup


def _log_abs_hypot(log_c, log_d):
    """``log |c + iD|`` from ``log c`` and ``log |D|``."""
    log_d = np.asarray(log_d, dtype=float)
    return log_d + 0.5 * np.log1p(np.exp(2 * (log_c - log_d)))


@attr.s(auto_attribs=True, frozen=True)
class SharpnessResult:
    k: int
    c: float
    eps: float
    log_abs_g: float
    log_abs_s: float
    ratio_log: float
    lower_bound_log: float
    lower_bound_check: bool
    C0: float
    C1: float


def appendix2_ratio(k: int, c: float, eps: float, n_extra: int = 200) -> SharpnessResult:
    """Log of ``|g(s)| / |s|**(1 - eps)`` at ``s = c + i k**2 2**k``, where
    ``g`` is the logarithmic derivative of the Hadamard part of
    :func:`appendix2_divisor`.

    All magnitudes are handled as logarithms (with phases), so ``k`` may be
    a few hundreds. The sum runs over ``n <= k + n_extra``; the remainder is
    approximated by ``i * polygamma(1, N + 1)``.

    Also checks ``|g(s)| >= 2**k / c - C0 - C1`` where ``C1 = pi**2 / 3``
    bounds the terms ``n > k`` and ``C0`` (sup over k of the terms
    ``n < k``) is computed numerically.

    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if c <= 0:
        raise ValueError(f"c must be > 0, got {c}")
    if not 0 <= eps < 1:
        raise ValueError(f"eps must be in [0, 1), got {eps}")

    log2 = math.log(2.0)
    log_c = math.log(c)
    big_n = k + n_extra
    n = np.arange(1, big_n + 1, dtype=float)

    log_mag = np.empty(big_n)
    phase = np.empty(big_n)

    below = n < k
    above = n > k
    at = n == k

    # log|D| with D = k^2 2^k - n^2 2^n, factored to avoid overflow
    log_d = np.zeros(big_n)
    nb = n[below]
    log_d[below] = 2 * math.log(k) + k * log2 + np.log1p(-((nb / k) ** 2) * 2.0 ** (nb - k))
    na = n[above]
    log_d[above] = 2 * np.log(na) + na * log2 + np.log1p(-((k / na) ** 2) * 2.0 ** (k - na))

    off = ~at
    log_mag[off] = n[off] * log2 - _log_abs_hypot(log_c, log_d[off])
    arg = np.pi / 2 - np.arctan(np.exp(log_c - log_d[off]))
    phase[off] = np.where(below[off], -arg, arg)

    log_mag[at] = k * log2 - log_c
    phase[at] = 0.0

    top = log_mag.max()
    scaled = np.exp(log_mag - top + 1j * phase)
    total = fsum_complex(scaled) + 1j * float(polygamma(1, big_n + 1)) * math.exp(-top)
    log_abs_g = top + math.log(abs(total))

    log_k2 = 2 * math.log(k) + k * log2
    log_abs_s = log_k2 + 0.5 * math.log1p(math.exp(2 * (log_c - log_k2)))
    ratio_log = log_abs_g - (1 - eps) * log_abs_s

    C0 = _first_sum_sup(float(c))
    C1 = C1_THIRD_SUM
    slack = (C0 + C1) * c * math.exp(-k * log2)
    if slack < 1:
        lower_bound_log = k * log2 - log_c + math.log1p(-slack)
    else:
        lower_bound_log = -math.inf
    lower_bound_check = log_abs_g >= lower_bound_log - 1e-12

    return SharpnessResult(
        k,
        float(c),
        float(eps),
        float(log_abs_g),
        float(log_abs_s),
        float(ratio_log),
        float(lower_bound_log),
        bool(lower_bound_check),
        float(C0),
        float(C1),
    )
