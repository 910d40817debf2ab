# flake8: noqa

from hadalab.tests.fixture_divisors import (
    explicit_divisor,
    explicit_divisor_repr,
    sinh_divisor,
    gamma_divisor,
    zeta_divisor,
    appendix2_divisor,
)
from hadalab.tests.fixture_cases import case, settings, report, report_repr
