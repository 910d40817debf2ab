import pytest

from hadalab.catalog import sinh_case
from hadalab.drivers import AnalysisSettings
from hadalab.newtoncramer import Classification
from hadalab.report import AnalysisReport


@pytest.fixture
def case():
    return sinh_case()


@pytest.fixture
def settings():
    # short lines keep the vertical order stage fast
    return AnalysisSettings(T_max=256)


@pytest.fixture
def report():
    return AnalysisReport(
        "toy",
        2,
        0.0,
        True,
        2,
        1,
        (0.5,),
        Classification.HADAMARD,
        diagnostics=["note"],
    )


@pytest.fixture
def report_repr():
    return "\n".join(
        [
            "<hadalab.AnalysisReport 'toy'>",
            "Divisor:",
            "    d         2",
            "    sigma1    0",
            "    genus_H   1",
            "    order_lb  1",
            "Vertical order:",
            "    m0        2",
            "    lines     0",
            "Discrepancy:",
            "    gW        1",
            "    coeffs    0.5",
            "    genus     1",
            "Classification:",
            "    type      HadamardType",
            "Diagnostics:",
            "    - note",
            "",
        ]
    )
