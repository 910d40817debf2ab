import math

import numpy as np
import pytest

from hadalab.quadrature import (
    KRONROD_WEIGHTS,
    GAUSS_WEIGHTS,
    QuadResult,
    gauss_kronrod,
    gauss_kronrod_panels,
    gauss_legendre_panels,
)


def test_rule_weights():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-14)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-14)


class TestGaussKronrod:
    @pytest.mark.parametrize(
        "func,a,b,expected",
        [
            (np.sin, 0.0, math.pi, 2.0),
            (np.exp, -1.0, 1.0, math.e - 1 / math.e),
            (lambda t: 1 / (1 + t ** 2), -50.0, 50.0, 2 * math.atan(50.0)),
            (np.sqrt, 0.0, 1.0, 2 / 3),
        ],
    )
    def test_real(self, func, a, b, expected):
        res = gauss_kronrod(func, a, b, abs_tol=1e-12)

        assert isinstance(res, QuadResult)
        assert res.converged
        assert res.value == pytest.approx(expected, abs=1e-10)
        assert isinstance(res.value, float)

    def test_complex(self):
        res = gauss_kronrod(lambda t: np.exp(1j * t), 0.0, math.pi / 2, abs_tol=1e-13)

        assert res.value == pytest.approx(1 + 1j, abs=1e-12)

    def test_oscillating(self):
        res = gauss_kronrod(
            lambda t: np.cos(40 * t), 0.0, 2.0, abs_tol=1e-12, initial_intervals=16
        )

        assert res.value == pytest.approx(math.sin(80.0) / 40, abs=1e-11)

    def test_reversed_and_empty(self):
        assert gauss_kronrod(np.cos, 1.0, 0.0).value == pytest.approx(-math.sin(1.0))

        res = gauss_kronrod(np.cos, 1.0, 1.0)
        assert res.value == 0.0
        assert res.n_intervals == 0

    def test_subdivision_limit(self):
        with pytest.warns(RuntimeWarning, match="subdivision limit"):
            res = gauss_kronrod(
                lambda t: np.abs(t - 1 / 3) ** -0.5, 0.0, 1.0, abs_tol=1e-14, max_intervals=50
            )

        assert not res.converged
        assert res.n_intervals <= 50


def test_gauss_legendre_panels():
    a = np.array([0.0, 1.0, 2.0])
    b = a + 1.0

    actual = gauss_legendre_panels(lambda t: t ** 3, a, b, order=4)
    expected = (b ** 4 - a ** 4) / 4

    np.testing.assert_allclose(actual, expected, rtol=1e-14)


def test_gauss_kronrod_panels():
    calls = []

    def func(t):
        calls.append(t.size)
        return np.cos(t) + 1j * t

    res = gauss_kronrod_panels(func, 0.0, 10.0, 4)

    assert calls == [60]
    assert res.n_intervals == 4
    assert res.value == pytest.approx(math.sin(10.0) + 50j, rel=1e-12)
    assert res.abs_error < 1e-10
