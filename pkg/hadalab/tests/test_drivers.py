import numpy as np
import pytest

from hadalab.catalog import AnalysisCase, comb_case
from hadalab.drivers import AnalysisDriver, AnalysisSettings, RuntimeContext
from hadalab.newtoncramer import Classification
from hadalab.utils import UNDETERMINED, UNKNOWN
from hadalab.vertline import LineFunction


@pytest.fixture
def broken_case(sinh_divisor):
    return AnalysisCase(
        "broken",
        sinh_divisor,
        LineFunction(lambda s: np.full(np.shape(s), np.nan, dtype=complex), 0.0),
        line_cs=(0.5, 2.0),
    )


def test_runtime_context():
    with pytest.raises(KeyError, match=".*Invalid key.*"):
        RuntimeContext(invalid=False)

    assert len(RuntimeContext()) == len(RuntimeContext._context_keys)

    # test iter
    assert set(RuntimeContext()) == set(RuntimeContext._context_keys)

    assert repr(RuntimeContext()).startswith("RuntimeContext({")


class TestAnalysisSettings:
    def test_defaults(self):
        s = AnalysisSettings()

        assert s.tol == 1e-8
        assert s.T_max == 2.0 ** 16
        assert s.m_max == 6
        assert s.cs is None

    def test_converters(self):
        assert AnalysisSettings(cs=[0.5, 2.0]).cs == (0.5, 2.0)

    @pytest.mark.parametrize(
        "kwargs",
        [{"tol": 0.0}, {"T_max": 32}, {"m_max": -1}, {"gW_bound": 7}, {"radius": 0.0}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError, match="out of bounds"):
            AnalysisSettings(**kwargs)


class TestAnalysisDriver:
    def test_constructor(self, case, settings):
        driver = AnalysisDriver(case, settings)

        assert driver.case is case
        assert driver.context["cs"] == (0.5, 2.0)
        assert driver.context["T_max"] == 256

        driver = AnalysisDriver(case, AnalysisSettings(cs=(1.0, 3.0)))
        assert driver.context["cs"] == (1.0, 3.0)

    def test_run(self, case, settings):
        report = AnalysisDriver(case, settings).run()

        assert report.case_name == "sinh"
        assert report.d == 2
        assert report.sigma1 == 0.0
        assert report.sigma1_exact
        assert report.m0 == 2
        assert report.gW == 0
        assert report.coeffs == ()
        assert report.classification is Classification.HADAMARD
        assert (0.5, 2) in report.line_results
        assert "discrepancy polynomial taken from the case definition" in report.diagnostics

    def test_run_unknown_discrepancy(self, gamma_divisor, settings):
        case = AnalysisCase(
            "digamma-free",
            gamma_divisor,
            LineFunction(lambda s: np.ones(np.shape(s), dtype=complex), 0.0),
        )
        report = AnalysisDriver(case, settings).run()

        assert report.gW is UNKNOWN
        assert report.genus is UNKNOWN

    def test_evaluator_failure(self, broken_case, settings):
        report = AnalysisDriver(broken_case, settings).run()

        assert report.m0 is UNDETERMINED
        assert report.gW is UNKNOWN
        assert report.classification is Classification.INCONCLUSIVE
        assert any(d.startswith("vertical order: evaluator failed") for d in report.diagnostics)

    def test_extraction_failure(self, broken_case):
        settings = AnalysisSettings(T_max=64, m_max=0, extract=True, max_points=1000)
        report = AnalysisDriver(broken_case, settings).run()

        assert report.gW is UNKNOWN
        assert any(d.startswith("discrepancy: evaluator failed") for d in report.diagnostics)

    def test_extract(self):
        settings = AnalysisSettings(T_max=256, extract=True, radius=0.5, max_points=20_000)
        report = AnalysisDriver(comb_case(), settings).run()

        assert report.gW == 1
        assert report.coeffs[0] == pytest.approx(0.5, abs=1e-4)
        assert report.discrepancy_residual < 1e-3
        assert report.classification is Classification.HADAMARD
