import itertools
import math

import attr
import numpy as np
import pytest

from hadalab.divisor import (
    Appendix2Divisor,
    Divisor,
    DivisorKind,
    DivisorPoint,
    DivisorSum,
    EmptyDivisorError,
    ExplicitDivisor,
    InsufficientDataError,
    NegativeIntegers,
    TailModel,
    UndecidableExponentError,
    VerticalLattice,
    block_sum_ratios,
    convergence_exponent,
    counting_function,
    empirical_exponent,
    from_json,
    sigma1,
    total_origin_mult,
)


@attr.s(frozen=True, repr=False)
class OpaqueDivisor(Divisor):
    """Infinite divisor without any tail model."""

    kind = DivisorKind.EXPLICIT

    def points(self, n):
        k = np.arange(1, n + 1)
        return k * 1j + 0.0, np.ones(n)


class TestDivisorPoint:
    def test_nonzero(self):
        with pytest.raises(ValueError, match="'rho' must be nonzero"):
            DivisorPoint(0, 1)

        with pytest.raises(ValueError, match="'mult' must be nonzero"):
            DivisorPoint(1j, 0)

    def test_converters(self):
        p = DivisorPoint(2, 3.0)
        assert p.rho == 2 + 0j
        assert isinstance(p.mult, int)


class TestTailModel:
    @pytest.mark.parametrize(
        "model,expected",
        [
            (TailModel(1.0), 2),
            (TailModel(1.0, True), 1),
            (TailModel(0.5), 1),
            (TailModel(0.0, True), 1),
            (TailModel(2.3), 3),
        ],
    )
    def test_exponent(self, model, expected):
        assert model.exponent() == expected

    def test_check(self, sinh_divisor):
        model = sinh_divisor.effective_tail_model()
        assert model.constant == pytest.approx(2 / math.pi)
        assert model.check(sinh_divisor, [10.0, 100.0, 1000.0])

        assert not TailModel(1.0, constant=100.0).check(sinh_divisor, [10.0, 100.0])

        with pytest.raises(ValueError, match="no constant"):
            TailModel(1.0).check(sinh_divisor, [10.0])

    def test_combine(self):
        model = TailModel.combine([TailModel(1.0, False, 0.5), TailModel(0.0, True)])

        assert model == TailModel(1.0, False, 0.5)

    def test_invalid(self):
        with pytest.raises(ValueError, match="out of bounds"):
            TailModel(-1.0)


class TestExplicitDivisor:
    def test_merge_and_order(self):
        div = ExplicitDivisor([(2, 3), (1j, 1), (1j, -1), (-1, 2)])

        assert len(div) == 2
        rho, mult = div.points(10)
        np.testing.assert_array_equal(rho, [-1, 2])
        np.testing.assert_array_equal(mult, [2.0, 3.0])

    def test_counts(self, explicit_divisor):
        assert explicit_divisor.is_finite
        assert explicit_divisor.count_within(1.5) == 2
        assert explicit_divisor.count_within(10) == 3
        assert explicit_divisor.tail_sum(1, 1) == pytest.approx(0.5)
        assert explicit_divisor.tail_sum(2, 1) == 0

    def test_translate(self, explicit_divisor):
        shifted = explicit_divisor.translate(2.0)

        assert shifted.origin_mult == -1
        assert shifted.point_list == (DivisorPoint(3 + 1j, 2),)

    def test_translate_origin(self):
        div = ExplicitDivisor([(1j, 1)], origin_mult=2)
        shifted = div.translate(0.5)

        assert shifted.origin_mult == 0
        assert DivisorPoint(0.5, 2) in shifted.point_list

    def test_repr(self, explicit_divisor, explicit_divisor_repr):
        assert repr(explicit_divisor) == explicit_divisor_repr


class TestVerticalLattice:
    def test_points(self, sinh_divisor):
        points = list(itertools.islice(iter(sinh_divisor), 3))

        assert points == [
            DivisorPoint(-1j * math.pi, 1),
            DivisorPoint(1j * math.pi, 1),
            DivisorPoint(-2j * math.pi, 1),
        ]

    def test_count_within(self, sinh_divisor):
        assert sinh_divisor.count_within(10.0) == 6
        assert sinh_divisor.count_within(3.0) == 0

        shifted = VerticalLattice(1.0, mult=-2, offset=3.0)
        assert shifted.count_within(2.0) == 0
        assert shifted.count_within(5.0) == 2 * 2 * 4

    def test_tail_sum_bounds(self, sinh_divisor):
        rho, mult = sinh_divisor.points(200_000)
        for n_used in (0, 10, 1000):
            exact_tail = np.sum(np.abs(mult[n_used:]) * np.abs(rho[n_used:]) ** -2.0)
            assert sinh_divisor.tail_sum(n_used, 2) >= exact_tail

        assert sinh_divisor.tail_sum(10, 1) == math.inf

    @pytest.mark.parametrize(
        "kwargs,match",
        [
            ({"step": 0.0}, "out of bounds"),
            ({"step": 1.0, "exclude_zero": False}, "exclude_zero"),
            ({"step": 1.0, "mult": 0}, "nonzero"),
        ],
    )
    def test_invalid(self, kwargs, match):
        with pytest.raises(ValueError, match=match):
            VerticalLattice(**kwargs)

    def test_translate(self, sinh_divisor):
        shifted = sinh_divisor.translate(0.3)

        assert isinstance(shifted, VerticalLattice)
        assert shifted.offset == 0.3
        assert not shifted.exclude_zero
        assert total_origin_mult(shifted) == 0

        rho, _ = shifted.points(3)
        np.testing.assert_allclose(rho, [0.3, 0.3 - 1j * math.pi, 0.3 + 1j * math.pi])
        assert sigma1(shifted).value == pytest.approx(0.3)

        assert sinh_divisor.translate(0.0) == sinh_divisor


class TestNegativeIntegers:
    def test_points(self, gamma_divisor):
        rho, mult = gamma_divisor.points(4)

        np.testing.assert_array_equal(rho, [-1, -2, -3, -4])
        np.testing.assert_array_equal(mult, [-1, -1, -1, -1])

    def test_offset_ordering(self):
        div = NegativeIntegers(mult=1, offset=2.5)
        rho, _ = div.points(4)

        np.testing.assert_allclose(rho, [0.5, -0.5, 1.5, -1.5])
        np.testing.assert_allclose(np.abs(rho), np.sort(np.abs(rho)))

    def test_count_within(self, gamma_divisor):
        assert gamma_divisor.count_within(5.5) == 5
        assert gamma_divisor.count_within(0.5) == 0

    def test_origin_point(self):
        with pytest.raises(ValueError, match="origin_mult"):
            NegativeIntegers(offset=2.0)

    def test_translate(self, gamma_divisor):
        shifted = gamma_divisor.translate(0.3)

        assert isinstance(shifted, DivisorSum)
        assert total_origin_mult(shifted) == 0
        assert shifted.count_within(0.31) == 1
        assert sigma1(shifted).value == pytest.approx(0.3)


class TestAppendix2Divisor:
    def test_points(self, appendix2_divisor):
        rho, mult = appendix2_divisor.points(3)

        np.testing.assert_array_equal(rho, [2j, 16j, 72j])
        np.testing.assert_array_equal(mult, [2, 4, 8])

    def test_counts(self, appendix2_divisor):
        assert appendix2_divisor.count_within(20.0) == 6
        assert appendix2_divisor.tail_sum(0, 1) == pytest.approx(math.pi ** 2 / 6)

        rho, mult = appendix2_divisor.points(60)
        exact_tail = np.sum(mult[5:] / np.abs(rho[5:]) ** 2)
        assert appendix2_divisor.tail_sum(5, 2) >= exact_tail


class TestDivisorSum:
    def test_points(self, zeta_divisor):
        rho, mult = zeta_divisor.points(4)

        np.testing.assert_array_equal(rho, [1, -2, -4, -6])
        np.testing.assert_array_equal(mult, [-1, 1, 1, 1])
        assert zeta_divisor.count_within(10.0) == 6
        assert not zeta_divisor.is_finite

    def test_tail_model(self, zeta_divisor):
        model = zeta_divisor.effective_tail_model()

        assert model.alpha == 1.0
        assert not model.boundary_converges

    def test_empty(self):
        with pytest.raises(ValueError, match="at least one part"):
            DivisorSum(())


class TestSigma1:
    def test_cases(self, sinh_divisor, gamma_divisor, zeta_divisor, appendix2_divisor):
        assert sigma1(sinh_divisor).value == 0.0
        # the pole at the origin counts
        assert sigma1(gamma_divisor).value == 0.0
        assert sigma1(NegativeIntegers()).value == -1.0
        assert sigma1(zeta_divisor).value == 1.0
        assert sigma1(appendix2_divisor).value == 0.0
        assert all(
            sigma1(d).exact
            for d in (sinh_divisor, gamma_divisor, zeta_divisor, appendix2_divisor)
        )

    def test_declared(self, sinh_divisor):
        div = attr.evolve(sinh_divisor, declared_sigma1=0.5)
        assert sigma1(div).value == 0.5

    def test_empty(self):
        with pytest.raises(EmptyDivisorError, match="empty divisor"):
            sigma1(ExplicitDivisor())

        assert sigma1(ExplicitDivisor(origin_mult=2)).value == 0.0

    def test_lower_bound(self):
        s1 = sigma1(OpaqueDivisor())

        assert s1.value == 0.0
        assert not s1.exact


class TestConvergenceExponent:
    def test_cases(self, sinh_divisor, gamma_divisor, zeta_divisor, appendix2_divisor):
        assert convergence_exponent(sinh_divisor) == 2
        assert convergence_exponent(gamma_divisor) == 2
        assert convergence_exponent(zeta_divisor) == 2
        assert convergence_exponent(appendix2_divisor) == 1

    def test_finite(self, explicit_divisor):
        assert convergence_exponent(explicit_divisor) == 0

    def test_undecidable(self):
        with pytest.raises(UndecidableExponentError, match="supply tail model"):
            convergence_exponent(OpaqueDivisor())

    def test_inconsistent_model(self):
        div = VerticalLattice(1.0, tail_model=TailModel(0.5))

        with pytest.warns(UserWarning, match="do not decay geometrically"):
            assert convergence_exponent(div) == 1

    def test_declared_model(self):
        div = VerticalLattice(1.0, tail_model=TailModel(1.0, True))
        assert convergence_exponent(div) == 1


def test_block_sum_ratios(sinh_divisor, explicit_divisor):
    ratios = block_sum_ratios(sinh_divisor, 2)

    assert ratios.size >= 5
    assert np.all(ratios[-5:] < 0.6)

    assert block_sum_ratios(ExplicitDivisor(), 1).size == 0


def test_counting_function(sinh_divisor):
    assert counting_function(sinh_divisor, 10.0) == 6

    with pytest.raises(ValueError, match="nonnegative"):
        counting_function(sinh_divisor, -1.0)


class TestEmpiricalExponent:
    def test_lattice(self):
        res = empirical_exponent(VerticalLattice(1.0), 1024.0)

        assert res.alpha_fit == pytest.approx(1.0, abs=1e-6)
        assert not res.saturated

    def test_saturated(self):
        div = ExplicitDivisor([(k, 1) for k in range(1, 31)])
        res = empirical_exponent(div, 1000.0)

        assert res.saturated
        assert res.d_suggested == 0

    def test_insufficient(self, explicit_divisor):
        with pytest.raises(InsufficientDataError, match="insufficient data"):
            empirical_exponent(explicit_divisor, 100.0)


class TestFromJson:
    @pytest.mark.parametrize(
        "div",
        [
            ExplicitDivisor([(1 + 2j, 1)], origin_mult=-1),
            VerticalLattice(math.pi, origin_mult=1),
            NegativeIntegers(mult=1, step=2.0, offset=0.5),
            Appendix2Divisor(offset=1.0),
            DivisorSum(
                (ExplicitDivisor([(1.0, -1)]), NegativeIntegers(mult=1, step=2.0)),
                tail_model=TailModel(1.0),
            ),
        ],
    )
    def test_to_json(self, div):
        assert from_json(div.to_json()) == div

    def test_sum_kind(self):
        div = from_json(
            {
                "kind": "sum",
                "parts": [
                    {"kind": "explicit", "points": [{"re": 1, "mult": -1}]},
                    {"kind": "negative_integers", "mult": 1, "step": 2},
                ],
            }
        )

        assert convergence_exponent(div) == 2
        assert sigma1(div).value == 1.0

    def test_errors(self):
        with pytest.raises(KeyError, match="no 'kind'"):
            from_json({"step": 1.0})

        with pytest.raises(ValueError, match="unknown divisor kind"):
            from_json({"kind": "spiral"})
