"""Divisors of meromorphic functions: weighted point sets enumerated in
nondecreasing modulus, their abscissa sigma1 and convergence exponent.

"""
import math
import warnings
from enum import Enum
from typing import Any, ClassVar, Dict, Iterator, List, Optional, Sequence, Tuple

import attr
import numpy as np

from .validators import in_bounds, nonzero


class DivisorKind(Enum):
    EXPLICIT = "explicit"
    VERTICAL_LATTICE = "vertical_lattice"
    NEGATIVE_INTEGERS = "negative_integers"
    APPENDIX2 = "appendix2"
    SUM = "sum"


class EmptyDivisorError(ValueError):
    """Raised when a quantity is requested from an empty divisor."""

    pass


class UndecidableExponentError(ValueError):
    """Raised when the convergence exponent of an infinite divisor is
    requested without a tail model.
    """

    pass


class InsufficientDataError(ValueError):
    """Raised when too few divisor points are available for a fit."""

    pass


# largest index of the sharpness divisor representable in double precision
APPENDIX2_MAX_INDEX = 1000


def _order(rho: np.ndarray) -> np.ndarray:
    """Indices sorting points by modulus, ties broken by increasing
    argument in (-pi, pi].
    """
    return np.lexsort((np.angle(rho), np.abs(rho)))


@attr.s(auto_attribs=True, frozen=True)
class DivisorPoint:
    """A zero (``mult > 0``) or pole (``mult < 0``) of a meromorphic
    function, away from the origin.
    """

    rho: complex = attr.ib(converter=complex, validator=nonzero())
    mult: int = attr.ib(converter=int, validator=nonzero())


@attr.s(auto_attribs=True, frozen=True)
class TailModel:
    """Declared growth of the counting function ``N(r) ~ constant * r**alpha``.

    Parameters
    ----------
    alpha : float
        Density exponent.
    boundary_converges : bool
        Whether ``sum |n| |rho|**-alpha`` converges (only relevant when
        alpha is an integer).
    constant : float, optional
        Constant of the power law, used by :meth:`check`.
    factor : float, optional
        Allowed slack of :meth:`check` (default: 4).

    """

    alpha: float = attr.ib(converter=float, validator=in_bounds((0, None)))
    boundary_converges: bool = attr.ib(default=False, converter=bool)
    constant: Optional[float] = None
    factor: float = attr.ib(default=4.0, validator=in_bounds((1, None)))

    def exponent(self) -> int:
        """Least integer d >= 1 with a convergent ``sum |n| |rho|**-d``."""
        if self.alpha == math.floor(self.alpha) and self.boundary_converges:
            d = int(self.alpha)
        else:
            d = math.floor(self.alpha) + 1
        return max(d, 1)

    def check(self, div: "Divisor", radii: Sequence[float]) -> bool:
        """Return True if the counting function of ``div`` agrees with
        the power law within ``factor`` at all given radii (radii with an
        empty count are skipped).
        """
        if self.constant is None:
            raise ValueError("tail model has no constant to check against")

        for r in radii:
            count = div.count_within(r)
            if count == 0:
                continue
            ratio = count / (self.constant * r ** self.alpha)
            if not (1 / self.factor <= ratio <= self.factor):
                return False
        return True

    @classmethod
    def combine(cls, models: Sequence["TailModel"]) -> "TailModel":
        """Tail model of a union of divisors."""
        alpha = max(m.alpha for m in models)
        top = [m for m in models if m.alpha == alpha]
        constant = None
        if all(m.constant is not None for m in top):
            constant = sum(m.constant for m in top)
        return cls(
            alpha,
            boundary_converges=all(m.boundary_converges for m in top),
            constant=constant,
        )

    def to_json(self) -> Dict[str, Any]:
        obj = {"alpha": self.alpha, "boundary_converges": self.boundary_converges}
        if self.constant is not None:
            obj["constant"] = self.constant
        return obj


@attr.s(auto_attribs=True, frozen=True)
class Sigma1:
    value: float
    exact: bool


@attr.s(frozen=True, repr=False)
class Divisor:
    """Base class of divisors.

    A divisor is enumerated in nondecreasing ``|rho|`` with ties broken by
    increasing argument. The multiplicity of the origin (the factor
    ``s**origin_mult``) is kept apart from the enumerated points.

    Subclasses implement :meth:`points`, :meth:`count_within`,
    :meth:`tail_sum` and :meth:`translate`.

    """

    kind: ClassVar[DivisorKind]

    origin_mult: int = attr.ib(default=0, converter=int, kw_only=True)
    tail_model: Optional[TailModel] = attr.ib(default=None, kw_only=True)
    declared_sigma1: Optional[float] = attr.ib(default=None, kw_only=True)

    @property
    def is_finite(self) -> bool:
        return False

    def points(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """Return the first ``n`` points (locations and multiplicities) in
        enumeration order. Multiplicities are returned as floats.
        """
        raise NotImplementedError()

    def count_within(self, r: float) -> int:
        """Sum of ``|n_rho|`` over points with ``|rho| <= r``."""
        raise NotImplementedError()

    def tail_sum(self, n_used: int, d: int) -> float:
        """Upper bound of ``sum |n_rho| |rho|**-d`` over the points beyond
        the first ``n_used`` ones (``inf`` if it diverges).
        """
        raise NotImplementedError()

    def translate(self, tau: float) -> "Divisor":
        """Divisor of ``f(s - tau)``."""
        raise NotImplementedError()

    def _default_tail_model(self) -> Optional[TailModel]:
        return None

    def _exact_sigma1(self) -> Optional[float]:
        return None

    def effective_tail_model(self) -> Optional[TailModel]:
        if self.tail_model is not None:
            return self.tail_model
        return self._default_tail_model()

    def __iter__(self) -> Iterator[DivisorPoint]:
        n = 256
        start = 0
        while True:
            rho, mult = self.points(n)
            for r, m in zip(rho[start:], mult[start:]):
                yield DivisorPoint(r, int(m))
            if rho.size < n:
                return
            start = rho.size
            n *= 2

    def points_within(self, r: float) -> Tuple[np.ndarray, np.ndarray]:
        n = 256
        while True:
            rho, mult = self.points(n)
            if rho.size < n or np.abs(rho[-1]) > r:
                keep = np.abs(rho) <= r
                return rho[keep], mult[keep]
            n *= 2

    def _base_json(self) -> Dict[str, Any]:
        obj = {"kind": self.kind.value}
        if self.origin_mult:
            obj["origin_mult"] = self.origin_mult
        if self.tail_model is not None:
            obj["tail_model"] = self.tail_model.to_json()
        if self.declared_sigma1 is not None:
            obj["sigma1"] = self.declared_sigma1
        return obj

    def to_json(self) -> Dict[str, Any]:
        raise NotImplementedError()

    def __repr__(self):
        from .formatting import repr_divisor

        return repr_divisor(self)


def _as_points(points) -> Tuple[DivisorPoint, ...]:
    merged = {}
    for p in points:
        if not isinstance(p, DivisorPoint):
            p = DivisorPoint(*p)
        merged[p.rho] = merged.get(p.rho, 0) + p.mult

    items = [(rho, m) for rho, m in merged.items() if m != 0]
    if not items:
        return ()
    rho = np.array([rho for rho, _ in items], dtype=complex)
    return tuple(DivisorPoint(*items[i]) for i in _order(rho))


@attr.s(frozen=True, repr=False)
class ExplicitDivisor(Divisor):
    """Finite divisor given by its points (repeated locations are merged)."""

    kind = DivisorKind.EXPLICIT

    point_list: Tuple[DivisorPoint, ...] = attr.ib(converter=_as_points, default=())

    @property
    def is_finite(self):
        return True

    def __len__(self):
        return len(self.point_list)

    def points(self, n):
        selected = self.point_list[: max(int(n), 0)]
        return (
            np.array([p.rho for p in selected], dtype=complex),
            np.array([p.mult for p in selected], dtype=float),
        )

    def count_within(self, r):
        return sum(abs(p.mult) for p in self.point_list if abs(p.rho) <= r)

    def tail_sum(self, n_used, d):
        rest = self.point_list[n_used:]
        return math.fsum(abs(p.mult) * abs(p.rho) ** -d for p in rest)

    def _exact_sigma1(self):
        if not self.point_list:
            return None
        return max(p.rho.real for p in self.point_list)

    def translate(self, tau):
        shifted = []
        origin = 0
        for p in self.point_list:
            rho = p.rho + tau
            if rho == 0:
                origin += p.mult
            else:
                shifted.append(DivisorPoint(rho, p.mult))
        if self.origin_mult and tau != 0:
            shifted.append(DivisorPoint(tau, self.origin_mult))
        elif tau == 0:
            origin += self.origin_mult
        return ExplicitDivisor(
            shifted,
            origin_mult=origin,
            declared_sigma1=_shift(self.declared_sigma1, tau),
        )

    def to_json(self):
        obj = self._base_json()
        obj["points"] = [
            {"re": p.rho.real, "im": p.rho.imag, "mult": p.mult}
            for p in self.point_list
        ]
        return obj


def _shift(value, tau):
    return None if value is None else value + tau


def _with_origin(div: Divisor, tau: float, origin_mult: int) -> Divisor:
    """Add the translated origin point ``(tau, origin_mult)`` to ``div``."""
    if origin_mult == 0:
        return div
    return DivisorSum((div, ExplicitDivisor([DivisorPoint(tau, origin_mult)])))


def _zeta_sum(d: int, start: float) -> float:
    """Upper bound of ``sum_{j >= 0} (start + j)**-d`` for ``start > 0``."""
    if d <= 1:
        return math.inf
    return start ** -d + start ** (1 - d) / (d - 1)


@attr.s(frozen=True, repr=False)
class VerticalLattice(Divisor):
    """Points ``offset + i*step*k``, k in Z (k = 0 excluded by default),
    all with the same multiplicity.
    """

    kind = DivisorKind.VERTICAL_LATTICE

    step: float = attr.ib(converter=float, validator=in_bounds((0, None), (False, True)))
    mult: int = attr.ib(default=1, converter=int, validator=nonzero())
    offset: float = attr.ib(default=0.0, converter=float)
    exclude_zero: bool = attr.ib(default=True, converter=bool)

    def __attrs_post_init__(self):
        if self.offset == 0 and not self.exclude_zero:
            raise ValueError(
                "a vertical lattice through the origin must set exclude_zero; "
                "record the origin multiplicity in origin_mult instead"
            )

    def _k_values(self, n):
        j = np.arange(n)
        if self.exclude_zero:
            k = j // 2 + 1
            sign = np.where(j % 2 == 0, -1, 1)
        else:
            k = (j + 1) // 2
            sign = np.where(j % 2 == 1, -1, 1)
        return sign * k

    def points(self, n):
        k = self._k_values(max(int(n), 0))
        rho = self.offset + 1j * self.step * k
        return rho, np.full(k.size, float(self.mult))

    def count_within(self, r):
        if r < abs(self.offset):
            return 0
        kmax = math.floor(math.sqrt(r * r - self.offset ** 2) / self.step)
        count = 2 * kmax + (0 if self.exclude_zero else 1)
        return abs(self.mult) * count

    def tail_sum(self, n_used, d):
        k = self._k_values(n_used + 1)[-1]
        kmin = max(abs(int(k)), 1)
        return 2 * abs(self.mult) * self.step ** -d * _zeta_sum(d, kmin)

    def _default_tail_model(self):
        return TailModel(1.0, False, constant=2 * abs(self.mult) / self.step)

    def _exact_sigma1(self):
        return self.offset

    def translate(self, tau):
        new_offset = self.offset + tau
        kwargs = {
            "tail_model": self.tail_model,
            "declared_sigma1": _shift(self.declared_sigma1, tau),
        }
        if tau == 0:
            return attr.evolve(self)
        if new_offset == 0 and not self.exclude_zero:
            raise ValueError(
                "translation moves a lattice point to the origin; choose another tau"
            )
        if self.exclude_zero and self.origin_mult == self.mult and new_offset == tau:
            return VerticalLattice(
                self.step, self.mult, new_offset, exclude_zero=False, **kwargs
            )
        shifted = VerticalLattice(
            self.step, self.mult, new_offset, exclude_zero=self.exclude_zero, **kwargs
        )
        return _with_origin(shifted, tau, self.origin_mult)

    def to_json(self):
        obj = self._base_json()
        obj.update(step=self.step, mult=self.mult, exclude_zero=self.exclude_zero)
        if self.offset:
            obj["offset"] = self.offset
        return obj


@attr.s(frozen=True, repr=False)
class NegativeIntegers(Divisor):
    """Points ``offset - step*n`` for n >= start, all with the same
    multiplicity.
    """

    kind = DivisorKind.NEGATIVE_INTEGERS

    mult: int = attr.ib(default=-1, converter=int, validator=nonzero())
    start: int = attr.ib(default=1, converter=int, validator=in_bounds((0, None)))
    step: float = attr.ib(
        default=1.0, converter=float, validator=in_bounds((0, None), (False, True))
    )
    offset: float = attr.ib(default=0.0, converter=float)

    def __attrs_post_init__(self):
        q = self.offset / self.step
        if q == math.floor(q) and q >= self.start:
            raise ValueError(
                f"point at the origin (n = {int(q)}); record it in origin_mult instead"
            )

    def points(self, n):
        n = max(int(n), 0)
        extra = math.ceil(abs(self.offset) / self.step) + 2
        idx = np.arange(self.start, self.start + n + extra)
        rho = (self.offset - self.step * idx).astype(complex)
        rho = rho[_order(rho)][:n]
        return rho, np.full(rho.size, float(self.mult))

    def count_within(self, r):
        lo = max(self.start, math.ceil((self.offset - r) / self.step))
        hi = math.floor((self.offset + r) / self.step)
        return abs(self.mult) * max(0, hi - lo + 1)

    def tail_sum(self, n_used, d):
        rho, _ = self.points(n_used + 1)
        rmin = abs(rho[-1])
        if d <= 1:
            return math.inf
        return 2 * abs(self.mult) * (rmin ** -d + rmin ** (1 - d) / (self.step * (d - 1)))

    def _default_tail_model(self):
        return TailModel(1.0, False, constant=abs(self.mult) / self.step)

    def _exact_sigma1(self):
        return self.offset - self.step * self.start

    def translate(self, tau):
        if tau == 0:
            return attr.evolve(self)
        shifted = attr.evolve(
            self,
            offset=self.offset + tau,
            origin_mult=0,
            declared_sigma1=_shift(self.declared_sigma1, tau),
        )
        return _with_origin(shifted, tau, self.origin_mult)

    def to_json(self):
        obj = self._base_json()
        obj.update(mult=self.mult, start=self.start)
        if self.step != 1:
            obj["step"] = self.step
        if self.offset:
            obj["offset"] = self.offset
        return obj


@attr.s(frozen=True, repr=False)
class Appendix2Divisor(Divisor):
    """Sharpness divisor: zeros ``offset + i n**2 2**n`` of multiplicity
    ``2**n``, n >= 1.
    """

    kind = DivisorKind.APPENDIX2

    offset: float = attr.ib(default=0.0, converter=float)

    def points(self, n):
        # enumeration stops at APPENDIX2_MAX_INDEX (double precision range)
        n = min(max(int(n), 0), APPENDIX2_MAX_INDEX)
        idx = np.arange(1, n + 1, dtype=float)
        pow2 = np.exp2(idx)
        return self.offset + 1j * idx ** 2 * pow2, pow2

    def count_within(self, r):
        count = 0
        n = 1
        while n <= APPENDIX2_MAX_INDEX and abs(complex(self.offset, n * n * 2.0 ** n)) <= r:
            count += 2 ** n
            n += 1
        return count

    def tail_sum(self, n_used, d):
        big_n = n_used + 1
        if d <= 0:
            return math.inf
        if d == 1:
            return math.pi ** 2 / 6 if n_used == 0 else 1.0 / n_used
        return 2.0 ** (big_n * (1 - d)) / (big_n ** (2 * d) * (1 - 2.0 ** (1 - d)))

    def _default_tail_model(self):
        return TailModel(1.0, True)

    def _exact_sigma1(self):
        return self.offset

    def translate(self, tau):
        if tau == 0:
            return attr.evolve(self)
        shifted = attr.evolve(
            self,
            offset=self.offset + tau,
            origin_mult=0,
            declared_sigma1=_shift(self.declared_sigma1, tau),
        )
        return _with_origin(shifted, tau, self.origin_mult)

    def to_json(self):
        obj = self._base_json()
        if self.offset:
            obj["offset"] = self.offset
        return obj


@attr.s(frozen=True, repr=False)
class DivisorSum(Divisor):
    """Union of divisors (multiplicities of coinciding points add up)."""

    kind = DivisorKind.SUM

    parts: Tuple[Divisor, ...] = attr.ib(converter=tuple)

    @parts.validator
    def _check_parts(self, attribute, value):
        if not value:
            raise ValueError("a divisor sum needs at least one part")

    @property
    def is_finite(self):
        return all(p.is_finite for p in self.parts)

    def labelled_points(self, n):
        rhos, mults, labels = [], [], []
        for i, part in enumerate(self.parts):
            rho, mult = part.points(n)
            rhos.append(rho)
            mults.append(mult)
            labels.append(np.full(rho.size, i))
        rho = np.concatenate(rhos)
        idx = _order(rho)[: max(int(n), 0)]
        return rho[idx], np.concatenate(mults)[idx], np.concatenate(labels)[idx]

    def points(self, n):
        rho, mult, _ = self.labelled_points(n)
        return rho, mult

    def count_within(self, r):
        return sum(p.count_within(r) for p in self.parts)

    def tail_sum(self, n_used, d):
        _, _, labels = self.labelled_points(n_used)
        counts = np.bincount(labels, minlength=len(self.parts))
        return math.fsum(
            p.tail_sum(int(c), d) for p, c in zip(self.parts, counts)
        )

    def _default_tail_model(self):
        models = []
        for p in self.parts:
            if p.is_finite:
                models.append(TailModel(0.0, True))
            else:
                m = p.effective_tail_model()
                if m is None:
                    return None
                models.append(m)
        return TailModel.combine(models)

    def _exact_sigma1(self):
        values = [p._exact_sigma1() for p in self.parts if not _is_empty(p)]
        if not values or any(v is None for v in values):
            return None
        return max(values)

    def translate(self, tau):
        parts = [attr.evolve(p, origin_mult=0).translate(tau) for p in self.parts]
        origin = self.origin_mult + sum(p.origin_mult for p in self.parts)
        if tau == 0:
            return attr.evolve(self)
        return _with_origin(
            DivisorSum(
                parts,
                tail_model=self.tail_model,
                declared_sigma1=_shift(self.declared_sigma1, tau),
            ),
            tau,
            origin,
        )

    def to_json(self):
        obj = self._base_json()
        obj["parts"] = [p.to_json() for p in self.parts]
        return obj


def _is_empty(div: Divisor) -> bool:
    return isinstance(div, ExplicitDivisor) and not div.point_list


def total_origin_mult(div: Divisor) -> int:
    """Multiplicity of the origin, including nested parts of a sum."""
    if isinstance(div, DivisorSum):
        return div.origin_mult + sum(total_origin_mult(p) for p in div.parts)
    return div.origin_mult


def sigma1(div: Divisor, n_points: int = 1000) -> Sigma1:
    """Abscissa ``sup Re(rho)`` of a divisor.

    Parameters
    ----------
    div : :class:`Divisor`
    n_points : int, optional
        Number of enumerated points scanned when the divisor kind does not
        determine the value.

    Returns
    -------
    sigma1 : :class:`Sigma1`
        The value and whether it is exact or only a lower bound. A declared
        ``sigma1`` takes precedence. The origin counts as a point when its
        multiplicity is nonzero.

    """
    if div.declared_sigma1 is not None:
        return Sigma1(float(div.declared_sigma1), True)

    origin = 0.0 if total_origin_mult(div) else -math.inf

    if _is_empty(div) or (isinstance(div, DivisorSum) and all(map(_is_empty, div.parts))):
        if origin == 0.0:
            return Sigma1(0.0, True)
        raise EmptyDivisorError("empty divisor")

    value = div._exact_sigma1()
    if value is not None:
        return Sigma1(max(value, origin), True)

    rho, _ = div.points(n_points)
    return Sigma1(max(float(rho.real.max()), origin), div.is_finite)


def block_sum_ratios(
    div: Divisor, d: int, n_blocks: int = 16, max_points: int = 2 ** 15
) -> np.ndarray:
    """Ratios of consecutive nonempty dyadic blocks of ``sum |n| |rho|**-d``.

    Blocks are ``r0 * [2**j, 2**(j+1))`` with ``r0`` the smallest modulus.
    """
    rho, mult = div.points(max_points)
    if rho.size == 0:
        return np.array([])

    modulus = np.abs(rho)
    r0 = modulus[0]
    keep = modulus < r0 * 2.0 ** n_blocks
    if not div.is_finite and rho.size == max_points:
        # drop the last, possibly incomplete block
        keep &= modulus < r0 * 2.0 ** math.floor(math.log2(modulus[-1] / r0))

    block = np.floor(np.log2(modulus[keep] / r0)).astype(int)
    sums = np.bincount(block, weights=np.abs(mult[keep]) * modulus[keep] ** -float(d))
    sums = sums[sums > 0]

    return sums[1:] / sums[:-1]


def _blocks_decay(ratios: np.ndarray, threshold: float = 0.9, n_min: int = 5):
    if ratios.size < n_min:
        return None
    return bool(np.all(ratios[-n_min:] <= threshold))


def convergence_exponent(div: Divisor) -> int:
    """Convergence exponent ``d``: least integer with
    ``sum |n_rho| |rho|**-d`` finite.

    Finite divisors have ``d = 0``. For infinite divisors ``d`` is decided
    from the (declared or kind-provided) tail model; dyadic block sums are
    used as a cross-check and a :class:`UserWarning` is issued when they
    disagree with the model.

    """
    if div.is_finite:
        return 0

    model = div.effective_tail_model()
    if model is None:
        raise UndecidableExponentError(
            f"undecidable, supply tail model for {div.kind.value!r} divisor"
        )

    d = model.exponent()

    boundary_case = d == model.alpha
    if not boundary_case:
        decays = _blocks_decay(block_sum_ratios(div, d))
        if decays is False:
            warnings.warn(
                f"dyadic block sums of |n| |rho|^-{d} do not decay geometrically; "
                "the tail model may be inconsistent with the divisor",
                UserWarning,
                stacklevel=2,
            )

    return d


def counting_function(div: Divisor, r: float) -> int:
    """Sum of ``|n_rho|`` over divisor points with ``|rho| <= r`` (the
    origin is not counted).
    """
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    return int(div.count_within(r))


@attr.s(auto_attribs=True, frozen=True)
class EmpiricalExponent:
    alpha_fit: float
    d_suggested: int
    saturated: bool
    radii: np.ndarray = attr.ib(eq=False)
    counts: np.ndarray = attr.ib(eq=False)


def empirical_exponent(
    div: Divisor, r_max: float, min_points: int = 20, min_count: int = 4
) -> EmpiricalExponent:
    """Fit ``log N(r)`` against ``log r`` over dyadic radii ``r_max / 2**j``.

    When the counting function stagnates over the upper half of the range
    (``N(r_max) == N(r_max / 2)``), the divisor is flagged ``saturated``
    and the fit is restricted to radii beyond the largest point modulus.

    """
    rho, mult = div.points_within(r_max)
    n_total = int(np.abs(mult).sum())

    if n_total < min_points:
        raise InsufficientDataError(
            f"insufficient data: {n_total} points within radius {r_max} "
            f"(at least {min_points} required)"
        )

    r_min = float(np.abs(rho).min())
    radii = [r_max]
    while radii[-1] / 2 >= r_min:
        radii.append(radii[-1] / 2)
    radii = np.array(radii[::-1])
    counts = np.array([div.count_within(r) for r in radii], dtype=float)

    saturated = len(radii) >= 2 and counts[-1] == counts[-2]

    if saturated:
        keep = radii >= np.abs(rho).max()
    else:
        keep = counts >= min_count

    if np.count_nonzero(keep) < 2:
        alpha = 0.0
    else:
        alpha = float(np.polyfit(np.log(radii[keep]), np.log(counts[keep]), 1)[0])

    if saturated:
        d_suggested = 0
    else:
        d_suggested = math.floor(alpha) + 1

    return EmpiricalExponent(alpha, d_suggested, bool(saturated), radii, counts)


def _tail_model_from_json(obj) -> Optional[TailModel]:
    if obj is None:
        return None
    return TailModel(
        obj["alpha"],
        obj.get("boundary_converges", False),
        constant=obj.get("constant"),
    )


def from_json(obj: Dict[str, Any]) -> Divisor:
    """Build a divisor from its JSON description.

    Examples
    --------
    >>> from_json({"kind": "vertical_lattice", "step": 3.14159, "mult": 1})

    """
    try:
        kind = DivisorKind(obj["kind"])
    except KeyError:
        raise KeyError("divisor description has no 'kind' entry")
    except ValueError:
        raise ValueError(
            f"unknown divisor kind {obj['kind']!r}, should be one of "
            + ", ".join(repr(k.value) for k in DivisorKind)
        )

    common = {
        "origin_mult": obj.get("origin_mult", 0),
        "tail_model": _tail_model_from_json(obj.get("tail_model")),
        "declared_sigma1": obj.get("sigma1"),
    }

    if kind is DivisorKind.EXPLICIT:
        points = [
            DivisorPoint(complex(p.get("re", 0.0), p.get("im", 0.0)), p["mult"])
            for p in obj.get("points", [])
        ]
        return ExplicitDivisor(points, **common)

    elif kind is DivisorKind.VERTICAL_LATTICE:
        return VerticalLattice(
            obj["step"],
            obj.get("mult", 1),
            obj.get("offset", 0.0),
            exclude_zero=obj.get("exclude_zero", True),
            **common,
        )

    elif kind is DivisorKind.NEGATIVE_INTEGERS:
        return NegativeIntegers(
            obj.get("mult", -1),
            obj.get("start", 1),
            obj.get("step", 1.0),
            obj.get("offset", 0.0),
            **common,
        )

    elif kind is DivisorKind.APPENDIX2:
        return Appendix2Divisor(obj.get("offset", 0.0), **common)

    else:
        parts: List[Divisor] = [from_json(p) for p in obj["parts"]]
        return DivisorSum(parts, **common)
