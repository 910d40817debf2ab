"""Closed-form oracles: digamma through Binet's second formula, the
logarithmic derivatives of sinh and of the Riemann zeta function.

"""
import math
from typing import Sequence

import attr
import numpy as np
from scipy.special import bernoulli

from .dirichlet import DirichletSeries
from .quadrature import gauss_kronrod
from .utils import HalfPlaneError


class PoleError(ZeroDivisionError):
    """Raised when evaluating a function at (or too close to) a pole."""

    pass


EULER_GAMMA = 0.57721566490153286060651209008240243

# e**(-2 pi t) < 1e-18 beyond this abscissa
BINET_CUTOFF = 18 * math.log(10) / (2 * math.pi)


def _bernoulli_weight(t):
    """``t / (exp(2 pi t) - 1)`` with its limit ``1 / (2 pi)`` at 0."""
    t = np.asarray(t, dtype=float)
    out = np.full(t.shape, 1 / (2 * math.pi))
    nz = t != 0
    out[nz] = t[nz] / np.expm1(2 * math.pi * t[nz])
    return out


@attr.s(auto_attribs=True, frozen=True)
class BinetResult:
    psi: complex
    phi_prime: complex
    bound: float
    bound_ok: bool


def binet_phi_prime(s: complex, abs_tol: float = 1e-13) -> complex:
    """``phi'(s) = -2 int_0^inf 1 / (s**2 + t**2) * t / (exp(2 pi t) - 1) dt``
    (derivative of ``phi(s) = 2 int_0^inf arctan(t/s) / (exp(2 pi t) - 1) dt``).
    """
    s = complex(s)

    def integrand(t):
        return _bernoulli_weight(t) / (s * s + t * t)

    res = gauss_kronrod(integrand, 0.0, BINET_CUTOFF, abs_tol=abs_tol, initial_intervals=8)
    return -2 * complex(res.value)


def digamma(s: complex, abs_tol: float = 1e-13) -> BinetResult:
    """Digamma function on the right half-plane from Binet's second formula
    ``psi(s) = log(s) - 1/(2s) + phi'(s)``.

    Also returns ``phi'(s)`` and checks it against the bound
    ``1 / (12 (Re s)**2)`` (``|s**2 + t**2| >= (Re s)**2`` and the weight
    integrates to 1/24); it equals ``1 / (24 Re s)`` at ``Re s = 2`` and is
    smaller beyond.

    Examples
    --------
    >>> digamma(1.0).psi
    (-0.5772156649015...+0j)

    """
    s = complex(s)
    if s.real <= 0:
        raise HalfPlaneError(f"outside right half-plane: Re s = {s.real} <= 0")

    phi_prime = binet_phi_prime(s, abs_tol)
    psi = np.log(s) - 1 / (2 * s) + phi_prime
    bound = 1 / (12 * s.real ** 2)

    return BinetResult(
        complex(psi), phi_prime, bound, bool(abs(phi_prime) <= bound * (1 + 1e-9))
    )


@attr.s(auto_attribs=True, frozen=True)
class LineBound:
    C0: float
    holds: bool
    excess: np.ndarray = attr.ib(eq=False)


def digamma_line_bound(c: float, u_samples: Sequence[float]) -> LineBound:
    """Empirical constant of ``|psi(c + iu)| <= log|u| + C0`` for ``|u| >= 1``.

    ``holds`` is False when the constant is not finite or when the largest
    excess is reached at the last sample after increasing excesses.
    """
    if c <= 0:
        raise HalfPlaneError(f"c must be positive, got {c}")

    u = np.asarray(u_samples, dtype=float).ravel()
    if np.any(np.abs(u) < 1):
        raise ValueError("all samples must satisfy |u| >= 1")

    u = u[np.argsort(np.abs(u), kind="stable")]
    excess = np.array([abs(digamma(complex(c, ui)).psi) - math.log(abs(ui)) for ui in u])

    C0 = float(np.max(excess))
    growing = (
        excess.size >= 4
        and int(np.argmax(excess)) == excess.size - 1
        and np.all(np.diff(excess[-4:]) > 0)
    )
    return LineBound(C0, bool(np.isfinite(C0) and not growing), excess)


def bernoulli_integral(cutoff: float = BINET_CUTOFF, abs_tol: float = 1e-15) -> float:
    """``int_0^inf t / (exp(2 pi t) - 1) dt`` (equal to ``B_2 / 4 = 1/24``)."""
    res = gauss_kronrod(_bernoulli_weight, 0.0, cutoff, abs_tol=abs_tol, initial_intervals=8)
    return float(res.value)


def coth_logderiv(s, pole_tol: float = 1e-12):
    """Logarithmic derivative ``coth(s)`` of sinh, evaluated as
    ``(1 + exp(-2s)) / (1 - exp(-2s))`` for ``Re s >= 0`` (odd symmetry
    otherwise).
    """
    s = np.asarray(s, dtype=complex)
    k = np.round(s.imag / np.pi)
    near = np.abs(s - 1j * np.pi * k) < pole_tol
    if np.any(near):
        bad = complex(np.atleast_1d(s)[np.atleast_1d(near)][0])
        raise PoleError(f"coth has a pole at {bad} (multiple of pi*i)")

    sign = np.where(s.real >= 0, 1.0, -1.0)
    w = np.exp(-2 * sign * s)
    res = sign * (1 + w) / (1 - w)
    return res[()] if res.ndim == 0 else res


def _bernoulli_terms(n_terms):
    b = bernoulli(2 * n_terms)
    return [b[2 * j] / math.factorial(2 * j) for j in range(1, n_terms + 1)]


def zeta_and_derivative(s, n_terms: int = 20, chunk_size: int = 2 ** 20):
    """``zeta(s)`` and ``zeta'(s)`` by Euler-Maclaurin summation, element-wise.

    The direct sum runs up to ``N = max|s| / pi + 10``; the Bernoulli
    corrections then decrease at least like ``4**-j`` and ``n_terms`` of
    them leave a negligible remainder.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    big_n = max(int(np.max(np.abs(s)) / math.pi) + 10, 20)

    zeta = np.zeros(s.shape, dtype=complex)
    dzeta = np.zeros(s.shape, dtype=complex)

    log_n = np.log(np.arange(1, big_n, dtype=float))
    rows = max(chunk_size // s.size, 1)
    for i in range(0, log_n.size, rows):
        ln = log_n[i : i + rows, None]
        terms = np.exp(-ln * s[None, :])
        zeta += terms.sum(axis=0)
        dzeta -= (ln * terms).sum(axis=0)

    log_big = math.log(big_n)
    pw = np.exp(-s * log_big)

    # integral and boundary terms
    zeta += big_n * pw / (s - 1) + pw / 2
    dzeta += -log_big * big_n * pw / (s - 1) - big_n * pw / (s - 1) ** 2 - log_big * pw / 2

    # Bernoulli corrections B_2j/(2j)! s(s+1)...(s+2j-2) N**(-s-2j+1),
    # each factor (s + i) scaled by 1/N
    poly = np.ones(s.shape, dtype=complex)
    dlog_poly = np.zeros(s.shape, dtype=complex)
    for j, coeff in enumerate(_bernoulli_terms(n_terms), start=1):
        factors = (0,) if j == 1 else (2 * j - 3, 2 * j - 2)
        for i in factors:
            poly = poly * (s + i) / big_n
            dlog_poly = dlog_poly + 1 / (s + i)
        term = coeff * poly * pw
        zeta += term
        dzeta += term * (dlog_poly - log_big)

    return zeta, dzeta


def zeta_logderiv(s, margin: float = 0.1):
    """``zeta'(s) / zeta(s)`` for ``Re s > 1 + margin`` (Euler-Maclaurin)."""
    arr = np.asarray(s, dtype=complex)
    if np.any(arr.real <= 1 + margin):
        raise HalfPlaneError(
            f"outside implemented half-plane Re s > {1 + margin}: "
            f"min Re s = {float(np.min(arr.real))}"
        )
    zeta, dzeta = zeta_and_derivative(arr.ravel())
    res = (dzeta / zeta).reshape(arr.shape)
    return res[()] if res.ndim == 0 else res


def von_mangoldt(n_max: int) -> np.ndarray:
    """Values ``Lambda(n)`` for ``n = 0, ..., n_max`` (log p on prime powers,
    zero elsewhere), from a sieve of Eratosthenes.
    """
    n_max = int(n_max)
    out = np.zeros(n_max + 1)
    is_prime = np.ones(n_max + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, int(math.isqrt(n_max)) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False

    for p in np.flatnonzero(is_prime):
        logp = math.log(p)
        q = int(p)
        while q <= n_max:
            out[q] = logp
            q *= int(p)
    return out


def _mangoldt_cutoff(sigma, tol):
    # int_M^inf log(x) x**-sigma dx < tol
    m = 16.0
    while m ** (1 - sigma) * (math.log(m) / (sigma - 1) + 1 / (sigma - 1) ** 2) > tol:
        m *= 2
    return int(m)


def zeta_logderiv_series(s, tol: float = 1e-10, max_terms: int = 10_000_000):
    """``-sum Lambda(n) n**-s``, truncated where the remainder falls below
    ``tol`` (practical for ``Re s >= 2``).
    """
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    sigma = float(np.min(arr.real))
    if sigma <= 1:
        raise HalfPlaneError(f"series diverges for Re s = {sigma} <= 1")

    n_max = _mangoldt_cutoff(sigma, tol)
    if n_max > max_terms:
        raise ValueError(
            f"{n_max} terms needed for tolerance {tol} at Re s = {sigma} "
            f"(more than max_terms={max_terms})"
        )

    lam = von_mangoldt(n_max)
    n = np.flatnonzero(lam)
    terms = lam[n][None, :] * np.exp(-np.log(n)[None, :] * arr[:, None])
    res = -terms.sum(axis=1)
    return res[0] if np.ndim(s) == 0 else res.reshape(np.shape(s))


def zeta_series(n_max: int):
    """Truncation ``1 + sum_{2 <= n <= n_max} n**-s`` of the zeta function as
    a Dirichlet series, with remainder bound ``n_max**(1-sigma) / (sigma-1)``.
    """
    n = np.arange(2, int(n_max) + 1, dtype=float)

    def tail(sigma):
        return n_max ** (1 - sigma) / (sigma - 1)

    return DirichletSeries(np.log(n), np.ones(n.size), abscissa=1.0, tail_bound=tail)
