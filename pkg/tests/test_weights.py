"""Weight description validation and exact evaluation."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from shiftcert import (
    ConstantTail,
    RationalFunction,
    RationalTail,
    WeightSpec,
    scale_spec,
    validate,
)
from shiftcert.fixtures import two_level

from conftest import random_valid_spec


class TestValidate:
    def test_example_one_bound(self, ex1):
        report = validate(ex1)
        assert report.ok
        assert report.sup_bound == 2

    def test_zero_window_value(self):
        spec = WeightSpec(0, (Fraction(0),), ConstantTail(Fraction(1)), ConstantTail(Fraction(1)))
        report = validate(spec)
        assert not report.ok
        assert any(v.code == "zero-weight" for v in report.violations)

    def test_unbounded_tail(self):
        spec = WeightSpec(
            0,
            (Fraction(1),),
            RationalTail(RationalFunction.of([0, -1])),  # -n, positive on the left
            ConstantTail(Fraction(1)),
        )
        report = validate(spec)
        assert any(v.code == "unbounded-tail" for v in report.violations)

    def test_pole_on_tail_domain(self):
        spec = WeightSpec(
            0,
            (Fraction(1),),
            RationalTail(RationalFunction.of([-1], [5, 1])),  # pole at n = -5
            ConstantTail(Fraction(1)),
        )
        report = validate(spec)
        assert any(v.code == "tail-pole" for v in report.violations)

    def test_tail_with_zero_value(self):
        spec = WeightSpec(
            0,
            (Fraction(1),),
            RationalTail(RationalFunction.of([2, 1], [0, 1])),  # (n+2)/n: zero at -2
            ConstantTail(Fraction(1)),
        )
        report = validate(spec)
        assert any(v.code == "nonpositive-tail" for v in report.violations)

    def test_degree_cap(self):
        coeffs = [0] * 18 + [1]
        spec = WeightSpec(
            0,
            (Fraction(1),),
            ConstantTail(Fraction(1)),
            RationalTail(RationalFunction.of([1], coeffs)),
        )
        report = validate(spec)
        assert any(v.code == "degree-cap" for v in report.violations)

    def test_sup_bound_covers_samples(self):
        rng = random.Random(20240817)
        for _ in range(25):
            spec = random_valid_spec(rng)
            report = validate(spec)
            assert report.ok
            for n in range(-60, 61):
                assert spec.value(n) <= report.sup_bound


class TestEvaluation:
    def test_left_tail_modulus(self, ex1):
        assert ex1.value(-3) == Fraction(1, 3)

    def test_window_value(self, ex2):
        assert ex2.value(0) == Fraction(2, 3)

    def test_right_tail_formula(self, ex2):
        assert ex2.value(4) == Fraction(7, 4)

    def test_float_exact_dyadic(self, ex1):
        assert ex1.value_float(-2) == 0.5

    def test_float_rounding(self, ex2):
        assert ex2.value_float(3) == 1.6666666666666667

    def test_two_level_at_origin(self):
        assert two_level().value_float(0) == 1.0

    def test_positive_on_wide_range(self, fixture_specs):
        # Positivity over every integer is certified by validate; corroborate
        # on a dense band plus geometric samples out to 10^6.
        samples = list(range(-400, 401)) + [
            s * 10**k for k in range(3, 7) for s in (-1, 1)
        ]
        for spec in fixture_specs.values():
            for n in samples:
                assert spec.value(n) > 0

    def test_float_within_half_ulp(self):
        rng = random.Random(7)
        for _ in range(20):
            spec = random_valid_spec(rng)
            for n in range(-40, 41):
                exact = spec.value(n)
                approx = spec.value_float(n)
                ulp = math.ulp(approx)
                assert abs(Fraction(approx) - exact) <= Fraction(ulp) / 2


class TestScaling:
    def test_scale_values(self, ex2):
        scaled = scale_spec(ex2, Fraction(3, 2))
        for n in range(-10, 11):
            assert scaled.value(n) == ex2.value(n) * Fraction(3, 2)

    def test_scale_requires_positive(self, ex1):
        with pytest.raises(ValueError):
            scale_spec(ex1, Fraction(0))

    def test_scale_bound(self, ex1):
        assert validate(scale_spec(ex1, Fraction(5))).sup_bound == 10
