import math

import numpy as np
import pandas as pd
import pytest

from hadalab.catalog import comb_case, sinh_case
from hadalab.dirichlet import AtomicMeasure
from hadalab.divisor import DivisorPoint, ExplicitDivisor, convergence_exponent
from hadalab.hadamard import TruncationSpec
from hadalab.newtoncramer import (
    Classification,
    DirichletExponentError,
    DiscrepancyPolynomial,
    ExtractionError,
    OriginHandling,
    PoissonNewtonProblem,
    TestFunction,
    L_d_eval,
    bump,
    classify,
    exp_times,
    extract_discrepancy,
    integrate_by_parts_check,
    monomial_times,
    pair_atoms,
    pair_inverse_laplace_line,
    pair_W,
    plateau,
    residual_sweep,
    verify_poisson_newton,
)
from hadalab.utils import UNDETERMINED
from hadalab.vertline import LineFunction


def finite_difference(phi, t, order, h=1e-5):
    return (phi(t + h, order) - phi(t - h, order)) / (2 * h)


@pytest.fixture
def comb_problem():
    case = comb_case()
    d = convergence_exponent(case.divisor)
    return PoissonNewtonProblem(
        case.divisor, d, case.known_discrepancy, rhs_source=case.atoms(10.0)
    )


class TestTestFunction:
    def test_bump(self):
        phi = bump(2.0, 0.5)

        assert phi.support == (1.5, 2.5)
        assert float(phi(2.0)) == 1.0
        np.testing.assert_array_equal(phi([1.0, 1.5, 2.5, 3.0]), np.zeros(4))
        assert phi(2.25) == pytest.approx(math.exp(1 - 4 / 3))

    @pytest.mark.parametrize("order", [0, 1, 4])
    def test_bump_derivatives(self, order):
        phi = bump(0.5, 1.0)
        t = np.array([-0.2, 0.3, 0.9])

        np.testing.assert_allclose(
            phi(t, order + 1), finite_difference(phi, t, order), rtol=1e-5, atol=1e-8
        )

    def test_plateau(self):
        phi = plateau(1.0)

        assert phi(0.0) == 1.0
        assert phi(0.5) == 1.0
        assert phi(0.75) == pytest.approx(0.5, abs=1e-12)
        assert phi(0.8) == pytest.approx(phi(-0.8), abs=1e-14)
        assert phi(1.0) == 0.0

    def test_plateau_derivatives(self):
        phi = plateau(1.0)
        t = np.array([-0.7, 0.6, 0.85])

        np.testing.assert_allclose(
            phi(t, 1), finite_difference(phi, t, 0), rtol=1e-5, atol=1e-8
        )
        np.testing.assert_allclose(
            phi(t, 2), finite_difference(phi, t, 1), rtol=1e-5, atol=1e-7
        )

    def test_monomial_times(self):
        phi = bump(0.0, 1.0)
        psi = monomial_times(phi, 2)
        t = np.array([-0.4, 0.3])

        np.testing.assert_allclose(psi(t), t ** 2 * phi(t))
        np.testing.assert_allclose(psi(t, 1), 2 * t * phi(t) + t ** 2 * phi(t, 1))

        with pytest.raises(ValueError, match="nonnegative"):
            monomial_times(phi, -1)

    def test_exp_times(self):
        phi = bump(1.0, 0.5)
        psi = exp_times(phi, 0.3)
        t = np.array([0.8, 1.2])

        np.testing.assert_allclose(psi(t), np.exp(0.3 * t) * phi(t))
        np.testing.assert_allclose(
            psi(t, 1), np.exp(0.3 * t) * (0.3 * phi(t) + phi(t, 1))
        )

    def test_arithmetic(self):
        phi = 2 * bump(0.0, 1.0)
        assert phi(0.0) == 2.0

        total = bump(0.0, 1.0) + bump(3.0, 1.0)
        assert total.support == (-1.0, 4.0)
        assert total(3.0) == 1.0

    def test_integral(self):
        phi = bump(0.0, 1.0)
        assert phi.integral(1) == pytest.approx(0.0, abs=1e-12)
        assert phi.integral(1, absolute=True) == pytest.approx(2.0, rel=1e-10)

    def test_invalid(self):
        with pytest.raises(ValueError, match="radius must be positive"):
            bump(0.0, 0.0)
        with pytest.raises(ValueError, match="invalid support"):
            TestFunction((1.0, 0.0), 2, lambda t, k: t)
        with pytest.raises(ValueError, match="orders up to 2"):
            bump(0.0, 1.0, max_order=2)(0.0, 3)


class TestDiscrepancyPolynomial:
    def test_properties(self):
        poly = DiscrepancyPolynomial((1.0, 2.0))

        assert poly.gW == 2
        np.testing.assert_array_equal(poly.to_weierstrass().coef, [0.0, -1.0, -1.0])
        assert DiscrepancyPolynomial(()).gW == 0

    def test_delta_pairing(self):
        phi = bump(0.2, 1.0)
        poly = DiscrepancyPolynomial((2.0, 3.0))

        assert poly.delta_pairing(phi) == pytest.approx(2 * phi(0.0) - 3 * phi(0.0, 1))

        with pytest.raises(ValueError, match="orders up to 0"):
            poly.delta_pairing(bump(0.2, 1.0, max_order=0))

    def test_to_json(self):
        obj = DiscrepancyPolynomial((0.5,), residual=1e-9).to_json()
        assert obj == {
            "coeffs": [{"re": 0.5, "im": 0.0}],
            "gW": 1,
            "residual": 1e-9,
            "noise": 0.0,
        }


class TestPairings:
    def test_L_d_eval(self):
        div = ExplicitDivisor([DivisorPoint(-1.0, 1)])
        res = L_d_eval(div, 1, [-1.0, 1.0])

        np.testing.assert_allclose(res.value, [0.0, 1 - math.exp(-1)])
        np.testing.assert_array_equal(res.tail_bound, [0.0, 0.0])
        assert not res.heuristic
        assert res.n_points == 1

        assert L_d_eval(div, 1, 2.0).value == pytest.approx(1 - math.exp(-2))

    def test_pair_atoms(self):
        mu = AtomicMeasure([1.0, 2.0, 3.0], [1.0, 1.0, 1.0])
        assert pair_atoms(mu, bump(2.0, 0.5)) == 1.0
        assert pair_atoms(mu, bump(5.0, 0.5)) == 0j

    def test_pair_W_order(self, sinh_divisor):
        with pytest.raises(ValueError, match="insufficient derivative order"):
            pair_W(sinh_divisor, 2, bump(2.0, 0.5, max_order=1))

    def test_pair_W_negative_support(self, sinh_divisor):
        res = pair_W(sinh_divisor, 2, bump(-2.0, 0.5))
        assert res.value == 0j

    def test_integrate_by_parts(self, explicit_divisor):
        res = integrate_by_parts_check(explicit_divisor, 1, bump(1.0, 0.5))

        assert abs(res.pairing_d) > 0
        assert res.difference < 1e-8

        with pytest.raises(ValueError, match="finite divisor"):
            integrate_by_parts_check(comb_case().divisor, 2, bump(1.0, 0.5))

    def test_line_pairing(self):
        # coth(s) = 1 + 2 sum exp(-2ms)
        g = LineFunction(lambda s: 1 / np.tanh(s), 0.0)
        res = pair_inverse_laplace_line(g, 1.0, bump(2.0, 0.5))

        assert res.value == pytest.approx(2.0, abs=1e-6)
        assert res.truncation_used["n"] == 0

    def test_line_pairing_invalid(self):
        g = LineFunction(lambda s: 1 / np.tanh(s), 0.0)

        with pytest.raises(ValueError, match="not in the half-plane"):
            pair_inverse_laplace_line(g, -1.0, bump(2.0, 0.5))
        with pytest.raises(ValueError, match="exceeds the test function order"):
            pair_inverse_laplace_line(g, 1.0, bump(2.0, 0.5, max_order=2), n=3)


class TestPoissonNewton:
    def test_comb(self, comb_problem):
        phi = bump(2.5, 0.9)
        res = verify_poisson_newton(comb_problem, phi, TruncationSpec(max_points=2000))

        assert comb_problem.d == 2
        assert res.rhs == pytest.approx(phi(2.0) + phi(3.0), abs=1e-14)
        assert res.residual < 1e-5
        assert res.tau is None
        assert res.c_coeffs == (0.5,)

    def test_sinh_translate(self, sinh_divisor):
        case = sinh_case()
        problem = PoissonNewtonProblem(
            sinh_divisor, 2, case.known_discrepancy, rhs_source=case.atoms(10.0)
        )
        res = verify_poisson_newton(
            problem, bump(2.0, 0.5), TruncationSpec(max_points=2001), origin="translate"
        )

        assert res.tau == 0.3
        assert res.rhs == pytest.approx(2 * math.exp(0.6))
        assert res.residual < 1e-5

    def test_translate_support(self, comb_problem):
        with pytest.raises(ValueError, match="supported away from 0"):
            verify_poisson_newton(
                comb_problem, bump(0.0, 0.5), origin=OriginHandling.TRANSLATE
            )

    def test_no_source(self, sinh_divisor):
        problem = PoissonNewtonProblem(sinh_divisor, 2)

        with pytest.raises(ValueError, match="no inverse-Laplace source"):
            verify_poisson_newton(problem, bump(2.0, 0.5))

    def test_to_json(self, comb_problem):
        res = verify_poisson_newton(comb_problem, bump(2.5, 0.9), TruncationSpec(max_points=200))
        obj = res.to_json()

        assert obj["truncation"] == 200
        assert obj["c_coeffs"] == [{"re": 0.5, "im": 0.0}]

    def test_residual_sweep(self, comb_problem):
        df = residual_sweep(comb_problem, bump(2.5, 0.9), [200, 2000])

        assert isinstance(df, pd.DataFrame)
        assert list(df.columns) == ["truncation", "residual"]
        assert list(df["truncation"]) == [200, 2000]
        assert (df["residual"] < 1e-5).all()


class TestExtractDiscrepancy:
    def test_comb(self, comb_problem):
        poly = extract_discrepancy(
            comb_problem, radius=0.5, trunc=TruncationSpec(max_points=20_000)
        )

        assert poly.gW == 1
        assert poly.coeffs[0] == pytest.approx(0.5, abs=1e-4)
        assert len(poly.raw_coeffs) == 4

    def test_atom_inside_window(self, sinh_divisor):
        problem = PoissonNewtonProblem(
            sinh_divisor, 2, rhs_source=AtomicMeasure([0.5, 2.0], [1.0, 1.0])
        )
        with pytest.raises(ExtractionError, match="atom at 0.5"):
            extract_discrepancy(problem, radius=1.0)

    def test_atom_inside_window_line_source(self, sinh_divisor):
        case = sinh_case()
        problem = PoissonNewtonProblem(sinh_divisor, 2, rhs_source=case.log_derivative)

        with pytest.raises(ExtractionError, match="atom at 2.0"):
            extract_discrepancy(problem, radius=3.0, atoms=case.atoms)
        with pytest.raises(ExtractionError, match="atom at 2.0"):
            extract_discrepancy(problem, radius=3.0, atoms=case.atoms(10.0))

    def test_invalid(self, comb_problem):
        with pytest.raises(ValueError, match="gW_bound"):
            extract_discrepancy(comb_problem, gW_bound=0)


class TestClassify:
    @pytest.mark.parametrize(
        "args,kwargs,expected",
        [
            ((2, 2), {}, Classification.HADAMARD),
            ((2, 5), {"is_dirichlet": True}, Classification.HADAMARD),
            ((1, 2), {"gW": 1, "residual": 1e-6}, Classification.WEIERSTRASS),
            ((1, 2), {"gW": 1}, Classification.WEIERSTRASS),
            ((1, 3), {"gW": 1, "residual": 1e-2}, Classification.INCONCLUSIVE),
            ((2, 4), {"gW": 1}, Classification.INCONCLUSIVE),
            ((1, UNDETERMINED), {}, Classification.INCONCLUSIVE),
            ((2, np.int64(2)), {}, Classification.HADAMARD),
            ((2, np.int64(3)), {}, Classification.INCONCLUSIVE),
        ],
    )
    def test_classify(self, args, kwargs, expected):
        assert classify(*args, **kwargs) is expected

    def test_dirichlet_exponent(self):
        with pytest.raises(DirichletExponentError, match="d >= 2"):
            classify(1, 2, is_dirichlet=True)
