"""
Internal utilties; not for external use.

"""
import math
from typing import Any, Callable, Iterable, Iterator, List, Mapping, TypeVar

import dask
import numpy as np


K = TypeVar("K")
V = TypeVar("V")


class _Sentinel:
    """Named singleton placeholders for results that are not numbers
    (e.g., an undetermined vertical order).

    Instances are cached by name so that identity checks (``is``) hold
    across modules and after unpickling.

    """

    _instances = {}

    def __new__(cls, name):
        if name not in _Sentinel._instances:
            obj = super(_Sentinel, cls).__new__(cls)
            obj.name = name
            _Sentinel._instances[name] = obj
        return _Sentinel._instances[name]

    def __getnewargs__(self):
        return (self.name,)

    def __repr__(self):
        return self.name

    def __str__(self):
        return self.name


UNDETERMINED = _Sentinel("undetermined")
"""
Sentinel returned when a vertical order cannot be decided (verdicts
disagree across lines or no order up to the maximum converges).
"""

UNKNOWN = _Sentinel("unknown")
"""Sentinel for a Weierstrass degree that was not extracted."""

DIVERGENT = _Sentinel("divergent")
"""Sentinel for the value of a non-integrable line integral."""


def is_sentinel(obj):
    return isinstance(obj, _Sentinel)


class HalfPlaneError(ValueError):
    """Raised when a point lies outside the half-plane where a
    quantity is defined or implemented.
    """

    pass


class Frozen(Mapping[K, V]):
    """Wrapper around an object implementing the mapping interface to make it
    immutable. If you really want to modify the mapping, the mutable version is
    saved under the `mapping` attribute.
    """

    __slots__ = ("mapping",)

    def __init__(self, mapping: Mapping[K, V]):
        self.mapping = mapping

    def __getitem__(self, key: K) -> V:
        return self.mapping[key]

    def __iter__(self) -> Iterator[K]:
        return iter(self.mapping)

    def __len__(self) -> int:
        return len(self.mapping)

    def __contains__(self, key: object) -> bool:
        return key in self.mapping

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.mapping!r})"


class CompensatedSum:
    """Running complex sum with Neumaier compensation.

    Real and imaginary parts are compensated independently. Values added
    as numpy arrays are first reduced with :func:`math.fsum`.

    """

    __slots__ = ("_re", "_im", "_c_re", "_c_im")

    def __init__(self, start=0.0):
        start = complex(start)
        self._re = start.real
        self._im = start.imag
        self._c_re = 0.0
        self._c_im = 0.0

    @staticmethod
    def _step(total, comp, x):
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        return t, comp

    def add(self, value):
        if isinstance(value, np.ndarray):
            value = fsum_complex(value)
        value = complex(value)
        self._re, self._c_re = self._step(self._re, self._c_re, value.real)
        self._im, self._c_im = self._step(self._im, self._c_im, value.imag)
        return self

    def __iadd__(self, value):
        return self.add(value)

    @property
    def value(self) -> complex:
        return complex(self._re + self._c_re, self._im + self._c_im)

    def __repr__(self):
        return f"{type(self).__name__}({self.value!r})"


def fsum_complex(values) -> complex:
    """Correctly rounded sum of complex values (real and imaginary
    parts summed separately with :func:`math.fsum`).
    """
    arr = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(arr.real), math.fsum(arr.imag))


def compute_all(
    funcs: Iterable[Callable[[], Any]], parallel: bool = False, scheduler=None
) -> List[Any]:
    """Call each zero-argument callable and return results in input order,
    optionally through dask.delayed.
    """
    funcs = list(funcs)

    if parallel:
        futures = [dask.delayed(f)() for f in funcs]
        return list(dask.compute(*futures, scheduler=scheduler))
    else:
        return [f() for f in funcs]


def complex_to_json(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def complex_from_json(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    try:
        return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
    except AttributeError:
        raise TypeError(f"cannot read a complex number from {obj!r}")
