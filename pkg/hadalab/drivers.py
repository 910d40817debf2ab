import warnings
from typing import Any, Dict, Iterator, Mapping, Optional, Sequence, Tuple

import attr

from .catalog import AnalysisCase
from .divisor import convergence_exponent, sigma1
from .hadamard import TruncationSpec
from .hook import AnalysisStage, RuntimeHook, flatten_hooks, group_hooks
from .newtoncramer import (
    ExtractionError,
    PairingConvergenceError,
    PoissonNewtonProblem,
    classify,
    extract_discrepancy,
)
from .report import AnalysisReport
from .utils import UNDETERMINED, UNKNOWN, Frozen, HalfPlaneError
from .validators import in_bounds
from .vertline import EvaluatorError, vertical_order_scan


class RuntimeContext(Mapping[str, Any]):
    """A mapping providing runtime information about the current analysis."""

    _context_keys = (
        "case_name",
        "stage",
        "cs",
        "m_max",
        "T_max",
        "tol",
    )

    def __init__(self, **kwargs):
        self._context = {k: None for k in self._context_keys}

        self.update(**kwargs)

    def update(self, **kwargs):
        for k, v in kwargs.items():
            self.__setitem__(k, v)

    def __getitem__(self, key: str) -> Any:
        return self._context[key]

    def __setitem__(self, key: str, value: Any):
        if key not in self._context_keys:
            raise KeyError(
                f"Invalid key {key!r}, should be one of {self._context_keys!r}"
            )

        self._context[key] = value

    def __len__(self) -> int:
        return len(self._context)

    def __iter__(self) -> Iterator[str]:
        return iter(self._context)

    def __contains__(self, key: object) -> bool:
        return key in self._context

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._context!r})"


@attr.s(auto_attribs=True, frozen=True)
class AnalysisSettings:
    tol: float = attr.ib(default=1e-8, validator=in_bounds((0, None), (False, True)))
    T_max: float = attr.ib(default=2.0 ** 16, validator=in_bounds((64, None)))
    m_max: int = attr.ib(default=6, validator=in_bounds((0, None)))
    cs: Optional[Tuple[float, ...]] = attr.ib(
        default=None, converter=attr.converters.optional(tuple)
    )
    extract: bool = False
    gW_bound: int = attr.ib(default=4, validator=in_bounds((1, 6)))
    radius: float = attr.ib(default=1.0, validator=in_bounds((0, None), (False, True)))
    line_c: Optional[float] = None
    max_points: int = attr.ib(default=200_000, validator=in_bounds((1, None)))
    parallel: bool = False
    scheduler: Optional[str] = None


def _get_all_active_hooks(hooks):
    """Get all active runtime hooks (i.e, provided as argument, activated from
    context manager or globally registered) and return them grouped by runtime
    event.

    """
    active_hooks = set(hooks) | RuntimeHook.active

    return group_hooks(flatten_hooks(active_hooks))


class AnalysisDriver:
    """Run the analysis stages of a case and collect an
    :class:`~hadalab.report.AnalysisReport`.

    Stages run in order: exponent, vertical order, discrepancy,
    classification. Numerical failures of the vertical order or
    discrepancy stages are recorded as diagnostics and leave the
    corresponding result undetermined / unknown.
    """

    def __init__(
        self,
        case: AnalysisCase,
        settings: Optional[AnalysisSettings] = None,
        hooks: Optional[Sequence] = None,
    ):
        self.case = case
        self.settings = settings or AnalysisSettings()

        if hooks is None:
            hooks = []
        self.hooks = _get_all_active_hooks(hooks)

        cs = self.settings.cs or case.line_cs
        self.context = RuntimeContext(
            case_name=case.name,
            cs=tuple(cs),
            m_max=self.settings.m_max,
            T_max=self.settings.T_max,
            tol=self.settings.tol,
        )
        self.state: Dict[str, Any] = {}
        self.diagnostics = []
        self.line_results = {}

    def _call_hooks(self, stage, trigger):
        self.context["stage"] = stage.value
        for h in self.hooks.get(stage, {}).get(trigger, []):
            h(self.case, Frozen(self.context), Frozen(self.state))

    def _run_stage(self, stage, func):
        self._call_hooks(stage, "pre")
        func()
        self._call_hooks(stage, "post")

    def _exponent(self):
        div = self.case.divisor
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            self.state["d"] = convergence_exponent(div)
        self.diagnostics += [str(w.message) for w in caught]

        s1 = sigma1(div)
        self.state["sigma1"] = s1.value
        self.state["sigma1_exact"] = s1.exact

    def _vertical_order(self):
        s = self.settings
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                scan = vertical_order_scan(
                    self.case.log_derivative,
                    self.context["cs"],
                    m_max=s.m_max,
                    T_max=s.T_max,
                    tol=s.tol,
                    parallel=s.parallel,
                    scheduler=s.scheduler,
                )
        except (EvaluatorError, HalfPlaneError, ZeroDivisionError) as err:
            self.diagnostics.append(f"vertical order: {err}")
            self.state["m0"] = UNDETERMINED
            return

        self.diagnostics += [str(w.message) for w in caught if str(w.message) not in scan.diagnostics]
        self.diagnostics += scan.diagnostics
        self.line_results = scan.results
        self.state["m0"] = scan.m0

    def _discrepancy(self):
        s = self.settings
        self.state["discrepancy_residual"] = None

        if not s.extract:
            known = self.case.known_discrepancy
            if known is None:
                self.state["gW"] = UNKNOWN
                self.state["coeffs"] = ()
            else:
                self.state["gW"] = known.gW
                self.state["coeffs"] = known.coeffs
                self.diagnostics.append("discrepancy polynomial taken from the case definition")
            return

        radius = s.radius
        if self.case.atoms is not None:
            first = self.case.atoms(4 * radius + 2).freqs
            if first.size:
                radius = min(radius, 0.9 * first[0])

        g = self.case.log_derivative
        line_c = s.line_c if s.line_c is not None else max(1.0, g.valid_half_plane + 1.0)
        problem = PoissonNewtonProblem(self.case.divisor, self.state["d"], rhs_source=g)

        try:
            poly = extract_discrepancy(
                problem,
                gW_bound=s.gW_bound,
                radius=radius,
                trunc=TruncationSpec(max_points=s.max_points),
                line_c=line_c,
                atoms=self.case.atoms,
            )
        except (
            PairingConvergenceError,
            ExtractionError,
            EvaluatorError,
            ZeroDivisionError,
        ) as err:
            self.diagnostics.append(f"discrepancy: {err}")
            self.state["gW"] = UNKNOWN
            self.state["coeffs"] = ()
            return

        self.state["gW"] = poly.gW
        self.state["coeffs"] = poly.coeffs
        self.state["discrepancy_residual"] = poly.residual

    def _classify(self):
        gW = self.state["gW"]
        self.state["classification"] = classify(
            self.state["d"],
            self.state["m0"],
            gW=None if gW is UNKNOWN else gW,
            is_dirichlet=self.case.is_dirichlet,
            residual=self.state["discrepancy_residual"],
        )

    def run(self) -> AnalysisReport:
        self._run_stage(AnalysisStage.EXPONENT, self._exponent)
        self._run_stage(AnalysisStage.VERTICAL_ORDER, self._vertical_order)
        self._run_stage(AnalysisStage.DISCREPANCY, self._discrepancy)
        self._run_stage(AnalysisStage.CLASSIFY, self._classify)

        return AnalysisReport(
            self.case.name,
            self.state["d"],
            self.state["sigma1"],
            self.state["sigma1_exact"],
            self.state["m0"],
            self.state["gW"],
            tuple(self.state["coeffs"]),
            self.state["classification"],
            is_dirichlet=self.case.is_dirichlet,
            discrepancy_residual=self.state["discrepancy_residual"],
            line_results=dict(self.line_results),
            diagnostics=list(self.diagnostics),
        )
