import math

import pytest

from hadalab.divisor import (
    Appendix2Divisor,
    DivisorPoint,
    DivisorSum,
    ExplicitDivisor,
    NegativeIntegers,
    VerticalLattice,
)


@pytest.fixture
def explicit_divisor():
    return ExplicitDivisor([DivisorPoint(1 + 1j, 2), DivisorPoint(-2, -1)])


@pytest.fixture
def explicit_divisor_repr():
    return "\n".join(
        [
            "<hadalab.ExplicitDivisor (explicit)>",
            "    points   2",
            "    first    1+1j (+2), -2 (-1)",
            "",
        ]
    )


@pytest.fixture
def sinh_divisor():
    # zeros i pi k, k in Z, the origin kept apart
    return VerticalLattice(math.pi, origin_mult=1)


@pytest.fixture
def gamma_divisor():
    return NegativeIntegers(origin_mult=-1)


@pytest.fixture
def zeta_divisor():
    return DivisorSum(
        (
            ExplicitDivisor([DivisorPoint(1.0, -1)]),
            NegativeIntegers(mult=1, start=1, step=2.0),
        )
    )


@pytest.fixture
def appendix2_divisor():
    return Appendix2Divisor()
