"""
hadamard-lab.

"""
# flake8: noqa

__version__ = "0.1.0"

from .hook import AnalysisStage, RuntimeHook, runtime_hook
from .divisor import (
    Divisor,
    DivisorPoint,
    DivisorSum,
    ExplicitDivisor,
    NegativeIntegers,
    VerticalLattice,
    Appendix2Divisor,
    TailModel,
    convergence_exponent,
    sigma1,
    from_json as divisor_from_json,
)
from .dirichlet import (
    AtomicMeasure,
    DirichletSeries,
    inverse_laplace_atoms,
    log_atoms,
)
from .vertline import LineFunction, line_l1_norm, vertical_order_scan
from .newtoncramer import (
    Classification,
    DiscrepancyPolynomial,
    OriginHandling,
    PoissonNewtonProblem,
    TestFunction,
    bump,
    classify,
    extract_discrepancy,
    plateau,
    verify_poisson_newton,
)
from .catalog import AnalysisCase, get_case
from .drivers import AnalysisDriver, AnalysisSettings
from .report import AnalysisReport
from .stores import ReportStore
from .utils import DIVERGENT, UNDETERMINED, UNKNOWN
from . import monitoring
