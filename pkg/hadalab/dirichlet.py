"""Generalized Dirichlet series ``f(s) = 1 + sum a_n exp(-lambda_n s)``,
the multinomial coefficients of ``-log f`` and the atomic inverse Laplace
transform of ``f'/f``.

"""
import heapq
import math
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import attr
import numpy as np
import pandas as pd
import xarray as xr
from scipy.special import gammaln

from .utils import (
    HalfPlaneError,
    compute_all,
    complex_from_json,
    complex_to_json,
    fsum_complex,
)
from .validators import strictly_increasing


DEFAULT_MERGE_TOL = 1e-9


def _as_float_array(value):
    return np.atleast_1d(np.asarray(value, dtype=float))


def _as_complex_array(value):
    return np.atleast_1d(np.asarray(value, dtype=complex))


@attr.s(frozen=True, repr=False)
class DirichletSeries:
    """Finite Dirichlet series ``1 + sum_n a_n exp(-lambda_n s)``.

    Parameters
    ----------
    lambdas : array-like
        Strictly increasing positive frequencies.
    coeffs : array-like
        Complex coefficients (same length as ``lambdas``).
    abscissa : float, optional
        Declared abscissa of absolute convergence (default: 0).
    tail_bound : callable, optional
        ``tail_bound(sigma)`` bounds the modulus of the terms that were
        truncated away (for series standing for an infinite one).

    """

    lambdas: np.ndarray = attr.ib(
        converter=_as_float_array, validator=strictly_increasing(positive=True), eq=False
    )
    coeffs: np.ndarray = attr.ib(converter=_as_complex_array, eq=False)
    abscissa: float = attr.ib(default=0.0, converter=float)
    tail_bound: Optional[Callable[[float], float]] = attr.ib(
        default=None, kw_only=True, eq=False
    )

    def __attrs_post_init__(self):
        if self.lambdas.size != self.coeffs.size:
            raise ValueError(
                f"{self.lambdas.size} frequencies but {self.coeffs.size} coefficients"
            )
        if not math.isfinite(self.abscissa):
            raise ValueError("abscissa must be finite")

    def __len__(self):
        return self.lambdas.size

    @property
    def is_trivial(self) -> bool:
        """True for ``f == 1``."""
        return not np.any(self.coeffs)

    def __repr__(self):
        return (
            f"<DirichletSeries ({len(self)} terms, abscissa={self.abscissa})>"
        )

    def to_json(self) -> Dict[str, Any]:
        return {
            "lambdas": self.lambdas.tolist(),
            "coeffs": [complex_to_json(a) for a in self.coeffs],
            "abscissa": self.abscissa,
        }

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "DirichletSeries":
        coeffs = [complex_from_json(a) for a in obj.get("coeffs", [])]
        return cls(obj.get("lambdas", []), coeffs, obj.get("abscissa", 0.0))


def _check_half_plane(f, s):
    re = np.real(s)
    if np.any(re <= f.abscissa):
        raise HalfPlaneError(
            "outside half-plane of absolute convergence: "
            f"Re s = {float(np.min(re))} <= {f.abscissa}"
        )


def _exp_sum(freqs, weights, s):
    s = np.asarray(s, dtype=complex)
    terms = weights * np.exp(-np.multiply.outer(s, freqs))
    res = terms.sum(axis=-1)
    return res[()] if res.ndim == 0 else res


def evaluate(f: DirichletSeries, s):
    """``f(s) = 1 + sum a_n exp(-lambda_n s)`` (element-wise on arrays).

    Raises
    ------
    HalfPlaneError
        If ``Re s`` does not exceed the abscissa of ``f``.

    """
    _check_half_plane(f, s)
    return 1 + _exp_sum(f.lambdas, f.coeffs, s)


def evaluate_with_bound(f: DirichletSeries, s: complex) -> Tuple[complex, float]:
    """Value at ``s`` and a bound of the truncation error (0 when ``f`` has
    no declared tail).
    """
    value = complex(evaluate(f, s))
    bound = 0.0 if f.tail_bound is None else float(f.tail_bound(complex(s).real))
    return value, bound


def log_derivative(f: DirichletSeries, s):
    """``f'(s) / f(s)``."""
    _check_half_plane(f, s)
    df = -_exp_sum(f.lambdas, f.lambdas * f.coeffs, s)
    return df / (1 + _exp_sum(f.lambdas, f.coeffs, s))


@attr.s(frozen=True)
class FrequencyVector:
    """Multi-index ``k`` of the frequency lattice with ``freq = <lambda, k>``."""

    k: Tuple[int, ...] = attr.ib(converter=lambda v: tuple(int(x) for x in v))
    freq: float = attr.ib(converter=float)

    @k.validator
    def _check_k(self, attribute, value):
        if any(x < 0 for x in value):
            raise ValueError(f"negative entry in {value}")
        if sum(value) < 1:
            raise ValueError("frequency vector must have norm >= 1")

    @property
    def norm(self) -> int:
        return sum(self.k)


def lattice_enumerate(
    lambdas: Sequence[float], T: float, max_vectors: int = 1_000_000
) -> List[FrequencyVector]:
    """All ``k`` with ``<lambda, k> <= T``, in nondecreasing frequency.

    A best-first frontier keyed by ``(freq, k)`` is expanded from the unit
    vectors; the children of ``k`` increment an index not smaller than its
    last nonzero index, so that every vector is reached exactly once.
    Vectors with equal frequencies are all returned (no merging).

    """
    lambdas = [float(x) for x in lambdas]
    if any(x <= 0 for x in lambdas):
        raise ValueError("frequencies must be positive")

    n = len(lambdas)
    heap = []
    for i in range(n):
        k = tuple(1 if j == i else 0 for j in range(n))
        heapq.heappush(heap, (lambdas[i], k, i))

    out = []
    while heap:
        freq, k, last = heapq.heappop(heap)
        if freq > T:
            break
        out.append(FrequencyVector(k, freq))
        if len(out) > max_vectors:
            raise RuntimeError(
                f"more than {max_vectors} lattice vectors below T={T}; "
                "lower T or raise max_vectors"
            )
        for i in range(last, n):
            child = k[:i] + (k[i] + 1,) + k[i + 1 :]
            child_freq = math.fsum(kj * lj for kj, lj in zip(child, lambdas))
            heapq.heappush(heap, (child_freq, child, i))

    return out


def bk_multinomial(k, coeffs: Sequence[complex]) -> complex:
    """Coefficient ``b_k = (-1)**|k| / |k| * |k|! / prod(k_j!) * prod(a_j**k_j)``
    of ``exp(-<lambda, k> s)`` in ``-log f(s)``.

    Log-factorials are used for ``|k| > 20``.
    """
    if isinstance(k, FrequencyVector):
        k = k.k
    k = [int(x) for x in k]
    coeffs = [complex(a) for a in coeffs]
    m = sum(k)
    if m < 1:
        raise ValueError("b_k is defined for |k| >= 1")

    sign = -1 if m % 2 else 1

    if any(kj and a == 0 for kj, a in zip(k, coeffs)):
        return 0j

    if m <= 20:
        multinomial = math.factorial(m)
        prod = 1 + 0j
        for kj, a in zip(k, coeffs):
            multinomial //= math.factorial(kj)
            prod *= a ** kj
        return sign * multinomial * prod / m

    log_mag = float(gammaln(m + 1)) - math.log(m)
    phase = 0.0
    for kj, a in zip(k, coeffs):
        if kj:
            log_mag += kj * math.log(abs(a)) - float(gammaln(kj + 1))
            phase += kj * math.atan2(a.imag, a.real)
    return sign * math.exp(log_mag) * complex(math.cos(phase), math.sin(phase))


@attr.s(frozen=True, repr=False)
class AtomicMeasure:
    """Finite sum of point masses ``sum mass * delta_freq`` on ``(0, cutoff]``."""

    freqs: np.ndarray = attr.ib(
        converter=_as_float_array, validator=strictly_increasing(positive=True), eq=False
    )
    masses: np.ndarray = attr.ib(converter=_as_complex_array, eq=False)
    cutoff: float = attr.ib(default=math.inf, converter=float)

    def __attrs_post_init__(self):
        if self.freqs.size != self.masses.size:
            raise ValueError("freqs and masses must have the same length")
        if self.freqs.size and self.freqs[-1] > self.cutoff * (1 + DEFAULT_MERGE_TOL):
            raise ValueError(f"atom at {self.freqs[-1]} beyond cutoff {self.cutoff}")

    @classmethod
    def empty(cls, cutoff=math.inf):
        return cls(np.empty(0), np.empty(0, dtype=complex), cutoff)

    @classmethod
    def from_atoms(
        cls, freqs, masses, cutoff=math.inf, merge_tol: float = DEFAULT_MERGE_TOL
    ) -> "AtomicMeasure":
        """Build a measure from unsorted atoms, merging close frequencies and
        dropping zero masses.
        """
        freqs, masses = merge_atoms(freqs, masses, merge_tol)
        return cls(freqs, masses, cutoff)

    def __len__(self):
        return self.freqs.size

    def __iter__(self) -> Iterator[Tuple[float, complex]]:
        return zip(self.freqs.tolist(), self.masses.tolist())

    def laplace(self, s):
        """``sum mass * exp(-freq * s)``."""
        return _exp_sum(self.freqs, self.masses, s)

    def scaled_by_frequency(self) -> "AtomicMeasure":
        return AtomicMeasure(self.freqs, self.freqs * self.masses, self.cutoff)

    def exp_weighted(self, tau: float) -> "AtomicMeasure":
        """Measure ``exp(tau t) * mu`` (inverse Laplace transform of
        ``F(s - tau)``).
        """
        return AtomicMeasure(self.freqs, np.exp(tau * self.freqs) * self.masses, self.cutoff)

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "freq": self.freqs,
                "mass_re": self.masses.real,
                "mass_im": self.masses.imag,
            }
        )

    def to_dataset(self) -> xr.Dataset:
        ds = xr.Dataset(
            {"mass": ("freq", self.masses)}, coords={"freq": self.freqs}
        )
        ds.attrs["cutoff"] = self.cutoff
        return ds

    def to_json(self) -> Dict[str, Any]:
        return {
            "cutoff": self.cutoff,
            "atoms": [
                {"freq": f, "mass": complex_to_json(m)} for f, m in self
            ],
        }

    def __repr__(self):
        from .formatting import repr_measure

        return repr_measure(self)


def merge_atoms(freqs, masses, merge_tol: float = DEFAULT_MERGE_TOL):
    """Sort atoms by frequency and add up the masses of frequencies that lie
    within ``merge_tol`` (relative) of the first frequency of their group.

    Atoms with a zero total mass are dropped.
    """
    freqs = np.asarray(freqs, dtype=float).ravel()
    masses = np.asarray(masses, dtype=complex).ravel()
    if not freqs.size:
        return freqs, masses

    order = np.argsort(freqs, kind="stable")
    freqs = freqs[order]
    masses = masses[order]

    out_f, out_m = [], []
    start = 0
    for i in range(1, freqs.size + 1):
        if i == freqs.size or freqs[i] - freqs[start] > merge_tol * abs(freqs[start]):
            out_f.append(freqs[start])
            out_m.append(fsum_complex(masses[start:i]))
            start = i

    out_f = np.array(out_f)
    out_m = np.array(out_m, dtype=complex)
    keep = out_m != 0
    return out_f[keep], out_m[keep]


def log_atoms(
    f: DirichletSeries,
    T: float,
    merge_tol: float = DEFAULT_MERGE_TOL,
    parallel: bool = False,
    scheduler=None,
    chunk_size: int = 4096,
) -> AtomicMeasure:
    """Atoms ``(<lambda, k>, b_k)`` of ``-log f`` up to frequency ``T``.

    Parameters
    ----------
    f : :class:`DirichletSeries`
    T : float
        Frequency cutoff.
    merge_tol : float, optional
        Relative tolerance under which frequencies are considered equal
        (repetitions happen when the ``lambda_n`` are rationally dependent).
    parallel : bool, optional
        Compute the coefficients by chunks of lattice vectors with dask.
    scheduler : str, optional
        Dask scheduler used when ``parallel=True``.

    """
    if f.is_trivial:
        return AtomicMeasure.empty(T)

    vectors = lattice_enumerate(f.lambdas, T)
    coeffs = f.coeffs.tolist()

    def make_chunk(chunk):
        return lambda: [bk_multinomial(v, coeffs) for v in chunk]

    chunks = [vectors[i : i + chunk_size] for i in range(0, len(vectors), chunk_size)]
    results = compute_all(
        (make_chunk(c) for c in chunks), parallel=parallel, scheduler=scheduler
    )

    freqs = np.array([v.freq for v in vectors])
    masses = np.array([b for r in results for b in r], dtype=complex)
    return AtomicMeasure.from_atoms(freqs, masses, T, merge_tol)


def inverse_laplace_atoms(
    f: DirichletSeries, T: float, merge_tol: float = DEFAULT_MERGE_TOL, **kwargs
) -> AtomicMeasure:
    """Atoms ``(nu, nu * b)`` of the inverse Laplace transform of ``f'/f``:
    since ``-log f = sum b exp(-nu s)``, ``f'/f(s) = sum nu b exp(-nu s)``.
    """
    return log_atoms(f, T, merge_tol, **kwargs).scaled_by_frequency()


def _truncated_product(p, q, T, merge_tol):
    pf, pc = p
    qf, qc = q
    freqs = np.add.outer(pf, qf).ravel()
    coeffs = np.multiply.outer(pc, qc).ravel()
    keep = freqs <= T * (1 + merge_tol)
    return merge_atoms(freqs[keep], coeffs[keep], merge_tol)


def series_log_oracle(
    f: DirichletSeries, T: float, merge_tol: float = DEFAULT_MERGE_TOL
) -> AtomicMeasure:
    """``-log f`` up to frequency ``T`` from the series
    ``-log(1 + g) = sum_j (-1)**j g**j / j`` applied to the exponential
    polynomial ``g = f - 1``.
    """
    if f.is_trivial or T < f.lambdas[0]:
        return AtomicMeasure.empty(T)

    keep = f.lambdas <= T * (1 + merge_tol)
    g = merge_atoms(f.lambdas[keep], f.coeffs[keep], merge_tol)

    j_max = int(math.floor(T * (1 + merge_tol) / f.lambdas[0]))
    freqs, coeffs = [], []
    power = g
    for j in range(1, j_max + 1):
        if j > 1:
            power = _truncated_product(power, g, T, merge_tol)
        if not power[0].size:
            break
        freqs.append(power[0])
        coeffs.append((-1) ** j * power[1] / j)

    return AtomicMeasure.from_atoms(
        np.concatenate(freqs), np.concatenate(coeffs), T, merge_tol
    )


def roundtrip_check(
    f: DirichletSeries,
    T: float,
    samples: Sequence[complex],
    merge_tol: float = DEFAULT_MERGE_TOL,
) -> float:
    """Largest ``|exp(-sum b exp(-nu s)) - f(s)|`` over the samples."""
    samples = np.asarray(samples, dtype=complex).ravel()
    if not samples.size:
        return 0.0
    _check_half_plane(f, samples)

    mu = log_atoms(f, T, merge_tol)
    approx = np.exp(-mu.laplace(samples)) if len(mu) else np.ones(samples.shape)
    return float(np.max(np.abs(approx - evaluate(f, samples))))
