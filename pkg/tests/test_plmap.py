from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plrot.errors import (
    BaseMismatch,
    BaseTooSmall,
    Discontinuity,
    NoPeriodUpTo,
    NotBijective,
    NotCovering,
    SlopeNotPowerOfN,
)
from plrot.flows import example42
from plrot.plmap import (
    FixedPointSet,
    compose,
    evaluate,
    evaluate_lift,
    fixed_point_set,
    from_intervals,
    identity,
    invert,
    power,
    power_exponent,
    rotation,
    rotation_number_float,
    rotation_number_oracle,
    validate_map,
)

from .conftest import pl_maps, rationals


class TestValidate:
    def test_t0_is_valid(self, t0):
        assert len(t0.pieces) == 3
        assert [p.exponent for p in t0.pieces] == [-1, 0, 1]

    def test_triples_any_order(self, t0):
        raw = [(F(3, 4), 1, F(1, 2)), (0, -1, 0), (F(1, 2), 0, F(1, 4))]
        assert validate_map(raw, 2) == t0

    def test_dict_pieces(self, t0):
        raw = [{"domain_left": p.domain_left, "exponent": p.exponent, "image_left": p.image_left} for p in t0.pieces]
        assert validate_map(raw, 2) == t0

    def test_discontinuity(self):
        with pytest.raises(Discontinuity):
            from_intervals(2, [(0, F(1, 2), 0, F(1, 4)), (F(1, 2), 1, F(1, 2), 1)])

    def test_slope_not_power(self):
        with pytest.raises(SlopeNotPowerOfN):
            from_intervals(2, [(0, F(1, 4), 0, F(3, 4)), (F(1, 4), 1, F(3, 4), 1)])

    def test_not_covering(self):
        with pytest.raises(NotCovering):
            from_intervals(2, [(0, F(1, 2), 0, F(1, 2)), (F(3, 4), 1, F(1, 2), F(3, 4))])
        with pytest.raises(NotCovering):
            validate_map([(0, 0, 0), (0, 1, F(1, 2))], 2)
        with pytest.raises(NotCovering):
            validate_map([(F(3, 2), 0, 0)], 2)

    def test_not_bijective(self):
        # slope 2 everywhere: a degree-two cover
        with pytest.raises(NotBijective):
            validate_map([(0, 1, 0)], 2)

    def test_base_too_small(self):
        with pytest.raises(BaseTooSmall):
            validate_map([(0, 0, 0)], 1)

    def test_wrapping_piece_is_cut_at_zero(self):
        t = validate_map([(F(1, 4), 0, F(1, 2))], 2)
        assert t == rotation(F(1, 4))

    def test_normal_form_merges_equal_slopes(self):
        t = validate_map([(0, 0, F(1, 3)), (F(1, 2), 0, F(5, 6))], 2)
        assert t == rotation(F(1, 3))
        assert len(t.pieces) == 1

    def test_identity_single_piece(self):
        assert identity(2).pieces == ((F(0), 0, F(0)),)

    @pytest.mark.parametrize("ratio,n,k", [(F(8), 2, 3), (F(1, 9), 3, -2), (F(1), 5, 0), (F(6), 2, None), (F(2, 3), 2, None)])
    def test_power_exponent(self, ratio, n, k):
        assert power_exponent(ratio, n) == k


class TestEvaluate:
    def test_examples(self, t0):
        assert evaluate(t0, F(1, 8)) == F(1, 16)
        assert evaluate(rotation(F(2, 5)), F(4, 5)) == F(1, 5)
        assert evaluate_lift(t0, F(7, 8) + 1) == F(3, 4) + 1

    def test_canonical_lift_base_point(self):
        t = example42(2, 2)
        assert 0 <= evaluate_lift(t, 0) < 1

    @given(pl_maps(), rationals(), st.integers(-5, 5))
    def test_lift_equivariance(self, t, x, j):
        assert evaluate_lift(t, x + j) == evaluate_lift(t, x) + j

    @given(pl_maps(), rationals(0, 1), rationals(0, 1))
    def test_lift_strictly_monotone(self, t, x, d):
        if not 0 < d < 1:
            return
        y = x + d
        tx, ty = evaluate_lift(t, x), evaluate_lift(t, y)
        assert tx < ty < tx + 1


class TestGroup:
    def test_rotation_composition(self):
        assert compose(rotation(F(1, 3)), rotation(F(1, 3))) == rotation(F(2, 3))

    def test_inverse(self, t0):
        assert compose(t0, invert(t0)) == identity(2)
        assert compose(t0, invert(t0)).is_identity()

    def test_power(self, t0):
        assert evaluate(power(t0, 2), F(1, 8)) == F(1, 32)
        assert power(t0, 0) == identity(2)
        assert power(t0, -1) == invert(t0)

    def test_base_mismatch(self):
        with pytest.raises(BaseMismatch):
            compose(rotation(F(1, 2), 2), rotation(F(1, 2), 3))

    @given(pl_maps(bases=(2,)), pl_maps(bases=(2,)), rationals(0, 1))
    def test_homomorphism(self, s, t, x):
        assert evaluate(compose(s, t), x) == evaluate(s, evaluate(t, x))

    @given(pl_maps())
    def test_inverse_law(self, t):
        assert compose(t, invert(t)) == identity(t.base)
        assert compose(invert(t), t) == identity(t.base)

    @settings(max_examples=40)
    @given(pl_maps(max_leaves=5), st.integers(-3, 3), st.integers(-3, 3))
    def test_power_additive(self, t, a, b):
        assert power(t, a + b) == compose(power(t, a), power(t, b))

    @given(pl_maps(), st.integers(0, 10**6))
    def test_normal_form_unique(self, t, seed):
        # cut every piece at its midpoint and reshuffle; same function, same form
        import random

        raw = []
        for i, p in enumerate(t.pieces):
            a, r = t.piece_domain(i)
            mid = (a + r) / 2
            raw.append((p.domain_left, p.exponent, p.image_left))
            raw.append((mid, p.exponent, evaluate(t, mid)))
        random.Random(seed).shuffle(raw)
        assert validate_map(raw, t.base) == t


class TestFixedPoints:
    def test_t0(self, t0):
        assert fixed_point_set(t0) == FixedPointSet((F(0),), ())

    def test_rotation_has_none(self):
        assert not fixed_point_set(rotation(F(1, 3)))

    def test_identity_whole_circle(self):
        assert fixed_point_set(identity()) == FixedPointSet((), ((F(0), F(1)),))

    def test_interval_across_zero(self):
        # fixed on [5/8, 1] and [0, 1/4], moved in between
        t = validate_map([(0, 0, 0), (F(1, 4), -1, F(1, 4)), (F(1, 2), 1, F(3, 8)), (F(5, 8), 0, F(5, 8))], 2)
        assert fixed_point_set(t) == FixedPointSet((), ((F(5, 8), F(5, 8)),))

    @given(pl_maps(), st.integers(1, 4))
    def test_points_are_fixed(self, t, q):
        p = power(t, q)
        fs = fixed_point_set(p)
        for x in fs.points:
            assert evaluate(p, x) == x
        for left, length in fs.intervals:
            for x in (left, left + length / 3, left + length):
                assert evaluate(p, x % 1) == x % 1


class TestOracle:
    def test_t0(self, t0):
        res = rotation_number_oracle(t0, 64)
        assert res == (F(0), 1, F(0))

    def test_rotation(self):
        res = rotation_number_oracle(rotation(F(2, 5)), 25)
        assert res.rotation_number == F(2, 5)
        assert res.least_period == 5

    def test_example42_period_seven(self):
        res = rotation_number_oracle(example42(1, 1), 2**5 * 5)
        assert res.least_period == 7
        # p computed by the oracle itself, frozen here
        assert res.rotation_number == F(2, 7)
        # independent check: the witness really returns after 7 steps with displacement 2
        y = res.witness
        for _ in range(7):
            y = evaluate_lift(example42(1, 1), y)
        assert y - res.witness == 2

    def test_default_budget_is_bound(self, t0):
        assert rotation_number_oracle(t0).least_period == 1

    def test_no_period(self):
        with pytest.raises(NoPeriodUpTo):
            rotation_number_oracle(rotation(F(1, 7)), 6)

    @settings(max_examples=30, deadline=None)
    @given(pl_maps(max_leaves=5), st.integers(1, 4))
    def test_power_scales_rotation(self, t, j):
        base = rotation_number_oracle(t, 400)
        if base.least_period > 40:
            return
        assert rotation_number_oracle(power(t, j), 400).rotation_number == (j * base.rotation_number) % 1

    @settings(max_examples=30, deadline=None)
    @given(pl_maps(bases=(2,), max_leaves=4), pl_maps(bases=(2,), max_leaves=4))
    def test_conjugacy_invariance(self, s, t):
        conj = compose(s, compose(t, invert(s)))
        assert rotation_number_oracle(conj, 400).rotation_number == rotation_number_oracle(t, 400).rotation_number


class TestFloat:
    def test_rotation_third(self):
        assert abs(rotation_number_float(rotation(F(1, 3)), 300) - 1 / 3) <= 1 / 300

    def test_t0_exact_zero(self, t0):
        assert rotation_number_float(t0, 100) == 0.0

    def test_rotation_two_fifths(self):
        assert abs(rotation_number_float(rotation(F(2, 5)), 1000) - 0.4) <= 1 / 1000

    def test_semi_stable_fixed_point_no_drift(self):
        # fixed point 1/3 repels on the left (slope 3), attracts on the right;
        # round-off must not carry the orbit across it
        t = validate_map([(0, -1, F(11, 27)), (F(1, 9), 1, F(4, 9)), (F(5, 27), 2, F(2, 3)), (F(2, 9), 1, 0), (F(1, 3), -2, F(1, 3))], 3)
        approx = rotation_number_float(t, 10**4)
        assert min(approx, 1 - approx) <= 1e-3
