"""Analysis report: exponent, vertical order, discrepancy and type of a
meromorphic function, with JSON and xarray exports.

"""
import math
from typing import Any, Dict, List, Optional, Tuple, Union

import attr
import numpy as np
import pandas as pd
import xarray as xr

from .newtoncramer import Classification
from .utils import UNDETERMINED, UNKNOWN, complex_to_json, is_sentinel
from .vertline import LineIntegralResult


DEFINITIONS = {
    "d": "convergence exponent: least integer d with sum |n_rho| |rho|^-d finite",
    "sigma1": "abscissa of the divisor: sup of Re(rho) over its points",
    "m0": (
        "vertical order: least m with |s|^-m f'/f integrable on lines Re s = c > sigma1 "
        "(empirical: decided from the fitted tail slope of dyadic windows)"
    ),
    "gW": "degree of the Weierstrass polynomial Q_f (number of discrepancy coefficients)",
    "coeffs": "discrepancy coefficients c_l of P_f = -Q_f' = sum c_l s^l",
    "hadamard_genus": "d - 1 (0 for finite divisors)",
    "genus": "max(gW, d - 1)",
    "order_lower_bound": "lower bound of the growth order (d - 1, at least 1 for Dirichlet series)",
    "distributional_order": "order of the inverse Laplace transform of f'/f, at most m0",
    "classification": "HadamardType when genus = d - 1 >= gW, WeierstrassType when gW > d - 1",
    "line_l1_norm": "integral of |c + it|^-m |f'/f(c + it)| over the real line",
}


def _maybe_str(value):
    return str(value) if is_sentinel(value) else value


@attr.s(auto_attribs=True, frozen=True, repr=False)
class AnalysisReport:
    """Results of an analysis (see :class:`~hadalab.drivers.AnalysisDriver`).

    ``m0`` may be :data:`~hadalab.utils.UNDETERMINED` and ``gW`` / ``genus``
    :data:`~hadalab.utils.UNKNOWN` when the corresponding stage was skipped
    or failed.
    """

    case_name: str
    d: int
    sigma1: float
    sigma1_exact: bool
    m0: Union[int, object]
    gW: Union[int, object]
    coeffs: Tuple[complex, ...]
    classification: Classification
    is_dirichlet: bool = False
    discrepancy_residual: Optional[float] = None
    line_results: Dict[Tuple[float, int], LineIntegralResult] = attr.ib(
        factory=dict, eq=False
    )
    diagnostics: List[str] = attr.ib(factory=list, eq=False)
    definitions: Dict[str, str] = attr.ib(factory=lambda: dict(DEFINITIONS), eq=False)

    @property
    def hadamard_genus(self) -> int:
        return max(self.d - 1, 0)

    @property
    def genus(self):
        if is_sentinel(self.gW):
            return UNKNOWN
        return max(self.gW, self.hadamard_genus)

    @property
    def order_lower_bound(self) -> int:
        if self.is_dirichlet:
            return max(self.d - 1, 1)
        return max(self.d - 1, 0)

    @property
    def distributional_order_bound(self):
        """Upper bound of the distributional vertical order (``m <= m0``)."""
        return self.m0

    def to_json(self) -> Dict[str, Any]:
        return {
            "case": self.case_name,
            "d": self.d,
            "sigma1": self.sigma1,
            "sigma1_exact": self.sigma1_exact,
            "m0": _maybe_str(self.m0),
            "gW": _maybe_str(self.gW),
            "coeffs": [complex_to_json(c) for c in self.coeffs],
            "classification": self.classification.value,
            "hadamard_genus": self.hadamard_genus,
            "genus": _maybe_str(self.genus),
            "order_lower_bound": self.order_lower_bound,
            "is_dirichlet": self.is_dirichlet,
            "discrepancy_residual": self.discrepancy_residual,
            "diagnostics": list(self.diagnostics),
            "definitions": dict(self.definitions),
        }

    def line_table(self) -> pd.DataFrame:
        """One row per ``(c, m)`` with the L1 norm (NaN if divergent),
        the fitted tail exponent and the verdict.
        """
        rows = []
        for (c, m), res in sorted(self.line_results.items()):
            value = math.nan if is_sentinel(res.value) else res.value
            rows.append(
                {
                    "c": c,
                    "m": m,
                    "l1_norm": value,
                    "tail_exponent": res.tail_exponent,
                    "verdict": res.verdict.value,
                }
            )
        return pd.DataFrame(rows, columns=["c", "m", "l1_norm", "tail_exponent", "verdict"])

    def to_dataset(self) -> xr.Dataset:
        """Scalar results as attributes, line integrals over ``(c, m)`` and
        discrepancy coefficients over ``l``.
        """
        data_vars = {}
        table = self.line_table()
        if len(table):
            grid = table.set_index(["c", "m"])[["l1_norm", "tail_exponent"]]
            line_ds = xr.Dataset.from_dataframe(grid)
            data_vars["line_l1_norm"] = line_ds["l1_norm"].assign_attrs(
                description=self.definitions.get("line_l1_norm", "")
            )
            data_vars["tail_exponent"] = line_ds["tail_exponent"]

        coords = {}
        if self.coeffs:
            coords["l"] = np.arange(len(self.coeffs))
            data_vars["discrepancy_coeff"] = xr.DataArray(
                np.array(self.coeffs, dtype=complex),
                dims="l",
                attrs={"description": self.definitions.get("coeffs", "")},
            )

        attrs = {
            "case": self.case_name,
            "d": self.d,
            "sigma1": self.sigma1,
            "m0": str(_maybe_str(self.m0)),
            "gW": str(_maybe_str(self.gW)),
            "classification": self.classification.value,
            "hadamard_genus": self.hadamard_genus,
            "genus": str(_maybe_str(self.genus)),
            "order_lower_bound": self.order_lower_bound,
            "is_dirichlet": int(self.is_dirichlet),
        }

        return xr.Dataset(data_vars, coords=coords, attrs=attrs)

    def __repr__(self):
        from .formatting import repr_report

        return repr_report(self)
