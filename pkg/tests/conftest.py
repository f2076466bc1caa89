"""Shared fixtures: canonical specs, random spec recipes, a growth rule."""

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
    validate,
)
from shiftcert.classifier import Criterion, VerdictClass
from shiftcert.fixtures import example_one, example_two, flat_pair, two_level


@pytest.fixture(scope="session")
def ex1() -> WeightSpec:
    return example_one()


@pytest.fixture(scope="session")
def ex2() -> WeightSpec:
    return example_two()


@pytest.fixture(scope="session")
def ex3() -> WeightSpec:
    return two_level()


@pytest.fixture(scope="session")
def fixture_specs() -> dict[str, WeightSpec]:
    return {
        "ex1": example_one(),
        "ex2": example_two(),
        "ex3": two_level(),
        "flatpair": flat_pair(),
    }


def rand_fraction(rng: random.Random, lo: int = 1, hi: int = 8) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, hi))


def increasing_left_tail(rng: random.Random, window_start: int) -> RationalTail:
    """f(n) = c - b/(n - s) with the pole at s >= window_start: strictly
    increasing and positive on n <= window_start - 1."""
    c = rand_fraction(rng) + Fraction(1, 2)
    b = rand_fraction(rng)
    s = window_start + rng.randint(0, 4)
    return RationalTail(RationalFunction.of([-c * s - b, c], [-s, 1]))


def increasing_right_tail(
    rng: random.Random, window_end: int, floor: Fraction
) -> RationalTail:
    """Strictly increasing tail on n >= window_end + 1 staying above floor."""
    b = rand_fraction(rng)
    s = window_end - rng.randint(0, 4)
    gap = window_end + 1 - s
    c = floor + b / gap + rand_fraction(rng)
    return RationalTail(RationalFunction.of([-c * s - b, c], [-s, 1]))


def _ascending_window(
    rng: random.Random, base: Fraction, length: int
) -> tuple[Fraction, ...]:
    values = []
    current = base
    for _ in range(length):
        current = current + rand_fraction(rng)
        values.append(current)
    return tuple(values)


def make_strict_spec(rng: random.Random) -> WeightSpec:
    start = rng.randint(-3, 3)
    left = increasing_left_tail(rng, start)
    base = left.fn(start - 1)
    window = _ascending_window(rng, base, rng.randint(1, 4))
    right = increasing_right_tail(rng, start + len(window) - 1, window[-1])
    return WeightSpec(start, window, left, right)


def make_flat_tail_spec(rng: random.Random) -> WeightSpec:
    start = rng.randint(-3, 3)
    left = increasing_left_tail(rng, start)
    base = left.fn(start - 1)
    rising = _ascending_window(rng, base, rng.randint(1, 3))
    flat_repeat = rng.randint(0, 2)
    window = rising + (rising[-1],) * flat_repeat
    return WeightSpec(start, window, left, ConstantTail(window[-1]))


def make_flat_pair_spec(rng: random.Random) -> WeightSpec:
    start = rng.randint(-3, 3)
    left = increasing_left_tail(rng, start)
    base = left.fn(start - 1)
    rising = _ascending_window(rng, base, rng.randint(1, 2))
    top = rising[-1] + rand_fraction(rng)
    window = rising + (rising[-1], top)
    if rng.random() < 0.5:
        right = ConstantTail(top)
    else:
        right = increasing_right_tail(rng, start + len(window) - 1, top)
    return WeightSpec(start, window, left, right)


def make_two_level_spec(rng: random.Random) -> WeightSpec:
    low = rand_fraction(rng)
    high = low + rand_fraction(rng)
    start = rng.randint(-3, 3)
    run = rng.randint(1, 3)
    window = (low,) * run + (high,) * rng.randint(0, 2)
    return WeightSpec(start, window, ConstantTail(low), ConstantTail(high))


def make_normal_spec(rng: random.Random) -> WeightSpec:
    c = rand_fraction(rng)
    start = rng.randint(-3, 3)
    window = (c,) * rng.randint(1, 3)
    return WeightSpec(start, window, ConstantTail(c), ConstantTail(c))


def make_not_hyponormal_spec(rng: random.Random) -> WeightSpec:
    spec = make_strict_spec(rng)
    values = list(spec.window_values)
    drop = values[0] / (1 + rand_fraction(rng))
    values.append(drop)
    return WeightSpec(spec.window_start, tuple(values), spec.left_tail, spec.right_tail)


RECIPES = (
    (make_strict_spec, VerdictClass.NEAR_SUBNORMAL, Criterion.STRICT_INCREASE),
    (make_flat_tail_spec, VerdictClass.NEAR_SUBNORMAL, Criterion.FLAT_TAIL),
    (
        make_flat_pair_spec,
        VerdictClass.HYPONORMAL_NOT_NEAR_SUBNORMAL,
        Criterion.FLAT_PAIR,
    ),
    (
        make_two_level_spec,
        VerdictClass.HYPONORMAL_NOT_NEAR_SUBNORMAL,
        Criterion.CONSTANT_LEFT,
    ),
    (make_normal_spec, VerdictClass.NORMAL, None),
    (make_not_hyponormal_spec, VerdictClass.NOT_HYPONORMAL, None),
)


def random_labelled_spec(rng: random.Random):
    maker, klass, criterion = RECIPES[rng.randrange(len(RECIPES))]
    spec = maker(rng)
    assert validate(spec).ok
    return spec, klass, criterion


def random_valid_spec(rng: random.Random) -> WeightSpec:
    return random_labelled_spec(rng)[0]


def int_cleared_coeffs(p) -> list[int]:
    """Coefficients scaled by the denominator lcm: integer Horner preserves
    signs and zeros while staying far faster than Fraction arithmetic."""
    if p.is_zero:
        return []
    scale = 1
    for c in p.coeffs:
        scale = scale * c.denominator // math.gcd(scale, c.denominator)
    return [int(c * scale) for c in p.coeffs]


def _int_eval(coeffs: list[int], n: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def brute_force_ray_sign(f, ray, span: int = 10**4):
    """Independent sign scan of f at every ray integer within span.

    Returns ("pole", index) on a denominator zero, else
    (zeros, has_positive, has_negative) over the scanned segment.
    """
    num = int_cleared_coeffs(f.num)
    den = int_cleared_coeffs(f.den)
    if ray.kind == "le":
        points = range(ray.bound - span, ray.bound + 1)
    else:
        points = range(ray.bound, ray.bound + span + 1)
    zeros: list[int] = []
    has_pos = has_neg = False
    for n in points:
        d = _int_eval(den, n)
        if d == 0:
            return ("pole", n)
        value = _int_eval(num, n) if num else 0
        sign = (value > 0) - (value < 0)
        if d < 0:
            sign = -sign
        if sign == 0 and num:
            zeros.append(n)
        elif sign > 0:
            has_pos = True
        elif sign < 0:
            has_neg = True
    return (zeros, has_pos, has_neg)


def growth_weight_rule(tau: float = 10.0, depth: int = 198):
    """Weight rule whose transformed weights grow without bound.

    Squared moduli descend from 4 by steps proportional to 2^(-n^2/tau),
    so the step ratios d_{n+1}/d_n explode toward -inf. Not expressible
    with rational-function tails (those always give finite transform
    limits); used to exercise the oracle's growth diagnostic.
    """
    steps = {n: 2.0 ** (-(n * n) / tau) for n in range(0, -depth - 2, -1)}
    eps = 2.0 / sum(steps.values())
    sq = {0: 4.0}
    for n in range(0, -depth - 1, -1):
        sq[n - 1] = sq[n] - eps * steps[n]

    def rule(k: int) -> float:
        if k >= 1:
            return 2.0
        return math.sqrt(sq[max(k, -depth)])

    return rule
