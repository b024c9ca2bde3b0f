"""Operation counting: wrapper transparency, counts, and the golden table."""

import math
from pathlib import Path

import numpy as np
import pytest

from conftest import random_rotation
from se23nav import (
    CountedScalar,
    GravityModel,
    ImuInput,
    NavState,
    OpCountReport,
    Tally,
    count_step,
    propagate,
    report_table,
    rk4_step,
)
from se23nav import _kernels
from se23nav.opcount import counted_closed_step, counted_rk4_group_step, unwrap

GOLDEN = Path(__file__).parent / "data" / "flops_golden.csv"

COUNT_INPUT = ImuInput((0.0, 0.0, 1.0), (0.0, 1.0, 9.80665))
COUNT_GRAV = GravityModel()


def random_ingredients(rng):
    rot = random_rotation(rng)
    rot_t = tuple(tuple(float(v) for v in row) for row in rot)
    vec = lambda lo, hi: tuple(float(v) for v in rng.uniform(lo, hi, 3))
    return (
        rot_t,
        vec(-3.0, 3.0),
        vec(-3.0, 3.0),
        vec(-2.0, 2.0),
        vec(-10.0, 10.0),
        vec(-10.0, 10.0),
    )


class TestCountedScalar:
    def test_binary_ops_count_and_compute(self):
        tally = Tally()
        a = CountedScalar(6.0, tally)
        b = CountedScalar(2.0, tally)
        assert (a + b).value == 8.0
        assert (a - b).value == 4.0
        assert (a * b).value == 12.0
        assert (a / b).value == 3.0
        assert (tally.add, tally.sub, tally.mul, tally.div) == (1, 1, 1, 1)
        assert tally.total() == 4

    def test_reflected_ops_count(self):
        tally = Tally()
        a = CountedScalar(4.0, tally)
        assert (1.0 + a).value == 5.0
        assert (1.0 - a).value == -3.0
        assert (3.0 * a).value == 12.0
        assert (8.0 / a).value == 2.0
        assert (tally.add, tally.sub, tally.mul, tally.div) == (1, 1, 1, 1)

    def test_negation_and_comparison_count_as_sub(self):
        tally = Tally()
        a = CountedScalar(4.0, tally)
        assert (-a).value == -4.0
        assert a > 1.0
        assert not (a <= 1.0)
        assert a >= CountedScalar(4.0, tally)
        assert not (a < 0.0)
        assert tally.sub == 5
        assert tally.total() == 5

    def test_transcendental_methods(self):
        tally = Tally()
        assert CountedScalar(9.0, tally).sqrt().value == 3.0
        assert CountedScalar(0.0, tally).sin().value == 0.0
        assert CountedScalar(0.0, tally).cos().value == 1.0
        assert (tally.sqrt, tally.trig) == (1, 2)

    def test_no_silent_decay_to_float(self):
        # math.* functions need __float__; the wrapper must refuse it so
        # uncounted escapes fail loudly
        with pytest.raises(TypeError):
            math.sqrt(CountedScalar(4.0, Tally()))

    def test_rejects_int_operands(self):
        a = CountedScalar(4.0, Tally())
        with pytest.raises(TypeError):
            a + 1
        with pytest.raises(TypeError):
            2 * a

    def test_dot_product_costs_three_mul_two_add(self):
        tally = Tally()
        x = [CountedScalar(v, tally) for v in (1.0, 2.0, 3.0)]
        y = [CountedScalar(v, tally) for v in (4.0, 5.0, 6.0)]
        out = x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
        assert out.value == 32.0
        assert (tally.mul, tally.add) == (3, 2)
        assert tally.total() == 5

    def test_mat3_mul_costs_45(self, rng):
        tally = Tally()
        wrap = lambda m: tuple(
            tuple(CountedScalar(float(v), tally) for v in row) for row in m
        )
        _kernels.mat3_mul(wrap(rng.normal(size=(3, 3))), wrap(rng.normal(size=(3, 3))))
        assert (tally.mul, tally.add) == (27, 18)
        assert tally.total() == 45

    def test_unwrap_nested(self):
        tally = Tally()
        nested = ((CountedScalar(1.0, tally), 2.0), CountedScalar(3.0, tally))
        assert unwrap(nested) == ((1.0, 2.0), 3.0)


class TestInstrumentationTransparency:
    def test_closed_step_bitwise_equal(self, rng):
        # the counted run must be the plain run, bit for bit
        for _ in range(30):
            rot, vel, pos, gyro, accel, grav = random_ingredients(rng)
            h = float(rng.uniform(0.05, 1.2))
            plain = _kernels.closed_step(
                rot, vel, pos, gyro, accel, grav, h, general=True
            )
            counted = unwrap(
                counted_closed_step(rot, vel, pos, gyro, accel, grav, h, Tally())
            )
            assert counted == plain

    def test_closed_step_matches_propagate(self, rng):
        # above the small-angle crossover propagate takes the same branch
        # the counter pins, so the public API value is reproduced exactly
        rot, vel, pos, gyro, accel, grav = random_ingredients(rng)
        h = 0.9
        assert np.linalg.norm(gyro) * h > 0.5
        out = propagate(
            NavState(np.array(rot), vel, pos),
            ImuInput(gyro, accel),
            GravityModel(grav),
            h,
        )
        counted = unwrap(
            counted_closed_step(rot, vel, pos, gyro, accel, grav, h, Tally())
        )
        assert np.array_equal(np.array(counted[0]), out.rot)
        assert np.array_equal(np.array(counted[1]), out.vel)
        assert np.array_equal(np.array(counted[2]), out.pos)

    def test_rk4_group_step_bitwise_equal_to_flat(self, rng):
        # dense 5x5 RK4 and the flattened 15-state RK4 perform the same
        # arithmetic on group elements: identical results, not just close
        for _ in range(30):
            rot, vel, pos, gyro, accel, grav = random_ingredients(rng)
            h = float(rng.uniform(0.05, 1.2))
            flat = _kernels.rk4_flat_step(rot, vel, pos, gyro, accel, grav, h)
            x = (
                rot[0] + (vel[0], pos[0]),
                rot[1] + (vel[1], pos[1]),
                rot[2] + (vel[2], pos[2]),
                (0.0, 0.0, 0.0, 1.0, 0.0),
                (0.0, 0.0, 0.0, 0.0, 1.0),
            )
            gen_left = (
                (0.0, 0.0, 0.0, grav[0], 0.0),
                (0.0, 0.0, 0.0, grav[1], 0.0),
                (0.0, 0.0, 0.0, grav[2], 0.0),
                (0.0, 0.0, 0.0, 0.0, -1.0),
                (0.0, 0.0, 0.0, 0.0, 0.0),
            )
            gen_right = (
                (0.0, -gyro[2], gyro[1], accel[0], 0.0),
                (gyro[2], 0.0, -gyro[0], accel[1], 0.0),
                (-gyro[1], gyro[0], 0.0, accel[2], 0.0),
                (0.0, 0.0, 0.0, 0.0, 1.0),
                (0.0, 0.0, 0.0, 0.0, 0.0),
            )
            group = _kernels.rk4_group_step(x, gen_left, gen_right, h)
            for i in range(3):
                assert group[i][:3] == flat[0][i]
                assert group[i][3] == flat[1][i]
                assert group[i][4] == flat[2][i]
            assert group[3] == (0.0, 0.0, 0.0, 1.0, 0.0)
            assert group[4] == (0.0, 0.0, 0.0, 0.0, 1.0)

    def test_counted_rk4_matches_public_step(self, rng):
        rot, vel, pos, gyro, accel, grav = random_ingredients(rng)
        h = 0.1
        out = rk4_step(
            NavState(np.array(rot), vel, pos),
            ImuInput(gyro, accel),
            GravityModel(grav),
            h,
        )
        counted = unwrap(
            counted_rk4_group_step(rot, vel, pos, gyro, accel, grav, h, Tally())
        )
        got = np.array(counted)
        assert np.array_equal(got[:3, :3], out.rot)
        assert np.array_equal(got[:3, 3], out.vel)
        assert np.array_equal(got[:3, 4], out.pos)


class TestCountStep:
    def test_frozen_closed_counts(self):
        rep = count_step("closed", COUNT_INPUT, COUNT_GRAV, 0.1)
        assert (rep.add, rep.sub, rep.mul, rep.div, rep.sqrt, rep.trig) == (
            66,
            16,
            108,
            4,
            1,
            2,
        )
        assert rep.total == 197
        assert rep.total_no_transcendental == 194

    def test_frozen_rk4_counts(self):
        rep = count_step("rk4", COUNT_INPUT, COUNT_GRAV, 0.1)
        assert (rep.add, rep.sub, rep.mul, rep.div, rep.sqrt, rep.trig) == (
            1075,
            3,
            1151,
            1,
            0,
            0,
        )
        assert rep.total == 2230

    def test_ratio_exceeds_four(self):
        closed = count_step("closed", COUNT_INPUT, COUNT_GRAV, 0.1)
        rk4 = count_step("rk4", COUNT_INPUT, COUNT_GRAV, 0.1)
        assert rk4.total / closed.total >= 4.0

    def test_counts_are_value_independent(self, rng):
        h1 = count_step("closed", COUNT_INPUT, COUNT_GRAV, 0.1)
        other_u = ImuInput(rng.uniform(0.5, 2.0, 3), rng.uniform(-10.0, 10.0, 3))
        other_g = GravityModel(rng.uniform(-10.0, 10.0, 3))
        h2 = count_step("closed", other_u, other_g, 0.73)
        assert h1 == h2
        assert count_step("rk4", COUNT_INPUT, COUNT_GRAV, 0.1) == count_step(
            "rk4", other_u, other_g, 0.73
        )

    def test_rejects_zero_rate_for_closed(self):
        with pytest.raises(ValueError, match="zero angular rate"):
            count_step("closed", ImuInput.zero(), COUNT_GRAV, 0.1)

    def test_rk4_accepts_zero_rate(self):
        rep = count_step("rk4", ImuInput.zero(), COUNT_GRAV, 0.1)
        assert rep.total == 2230

    def test_rejects_unknown_method(self):
        with pytest.raises(ValueError, match="unknown method"):
            count_step("euler", COUNT_INPUT, COUNT_GRAV, 0.1)

    def test_rejects_bad_step(self):
        for h in (0.0, -1.0, float("nan")):
            with pytest.raises(ValueError):
                count_step("closed", COUNT_INPUT, COUNT_GRAV, h)


class TestReportTable:
    def test_matches_golden_csv(self):
        reports = [
            count_step("closed", COUNT_INPUT, COUNT_GRAV, 0.1),
            count_step("rk4", COUNT_INPUT, COUNT_GRAV, 0.1),
        ]
        _, csv_text = report_table(reports)
        assert csv_text == GOLDEN.read_text()

    def test_table_carries_ratio_line(self):
        reports = [
            count_step("closed", COUNT_INPUT, COUNT_GRAV, 0.1),
            count_step("rk4", COUNT_INPUT, COUNT_GRAV, 0.1),
        ]
        table, _ = report_table(reports)
        assert "rk4/closed total ratio: 11.32" in table
        assert "reference comparison point: 12" in table

    def test_single_report_has_no_ratio(self):
        table, csv_text = report_table(
            [count_step("rk4", COUNT_INPUT, COUNT_GRAV, 0.1)]
        )
        assert "ratio" not in table
        assert len(csv_text.splitlines()) == 2

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            report_table([])

    def test_csv_row_format(self):
        rep = OpCountReport("demo", 1, 2, 3, 4, 5, 6)
        assert rep.csv_row() == "demo,1,2,3,4,5,6,21,10"
