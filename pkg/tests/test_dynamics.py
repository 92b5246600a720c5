import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dcga.core import Population
from dcga.dynamics import (DynamicEnvironment, PhaseLandscape, TrapSpec,
                           SHAPE_PEAK_AT_ONES, SHAPE_PEAK_AT_ZEROS,
                           SHAPE_STANDARD, changed, current_optimum, evaluate,
                           make_environment, phase_of,
                           theoretical_schema_proportion,
                           theoretical_schema_proportion_exact, trap_value,
                           trap_value_exact)

TRAP4 = TrapSpec(4, 4.0, 5.0, SHAPE_STANDARD)
TRAP4_ZEROS = TrapSpec(4, 4.0, 5.0, SHAPE_PEAK_AT_ZEROS)
TRAP4_ONES = TrapSpec(4, 4.0, 5.0, SHAPE_PEAK_AT_ONES)
TRAP3_ONES = TrapSpec(3, 3.0, 5.0, SHAPE_PEAK_AT_ONES)


def local_maxima(values):
    out = []
    for u, v in enumerate(values):
        left_ok = u == 0 or v > values[u - 1]
        right_ok = u == len(values) - 1 or v > values[u + 1]
        if left_ok and right_ok:
            out.append(u)
    return out


class TestTrapValue:
    def test_standard_key_points(self):
        assert trap_value(4, TRAP4) == 5.0
        assert trap_value(0, TRAP4) == 4.0
        assert trap_value(3, TRAP4) == 0.0

    def test_standard_exact_table(self):
        values = [trap_value_exact(u, TRAP4) for u in range(5)]
        assert values == [4, Fraction(8, 3), Fraction(4, 3), 0, 5]

    def test_peak_at_zeros_table(self):
        values = [trap_value_exact(u, TRAP4_ZEROS) for u in range(5)]
        assert values == [5, Fraction(4, 3), Fraction(8, 3), 4, 0]
        assert local_maxima(values) == [0, 3]

    def test_peak_at_ones_table(self):
        values = [trap_value_exact(u, TRAP4_ONES) for u in range(5)]
        assert values == [0, 4, Fraction(8, 3), Fraction(4, 3), 5]
        assert local_maxima(values) == [1, 4]

    def test_order3_peak_at_ones_table(self):
        values = [trap_value_exact(u, TRAP3_ONES) for u in range(4)]
        assert values == [0, 3, Fraction(3, 2), 5]
        assert local_maxima(values) == [1, 3]

    def test_standard_maxima(self):
        values = [trap_value(u, TRAP4) for u in range(5)]
        assert local_maxima(values) == [0, 4]

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            trap_value(5, TRAP4)
        with pytest.raises(ValueError):
            trap_value(-1, TRAP4)

    def test_rejects_bad_spec(self):
        with pytest.raises(ValueError):
            TrapSpec(1, 1.0, 2.0)
        with pytest.raises(ValueError):
            TrapSpec(4, 5.0, 4.0)
        with pytest.raises(ValueError):
            TrapSpec(4, 0.0, 1.0)
        with pytest.raises(ValueError):
            TrapSpec(4, 1.0, 2.0, shape="wiggly")

    @given(st.integers(2, 8))
    def test_values_nonnegative(self, k):
        for shape in (SHAPE_STANDARD, SHAPE_PEAK_AT_ZEROS, SHAPE_PEAK_AT_ONES):
            spec = TrapSpec(k, float(k), float(k + 1), shape)
            assert all(trap_value(u, spec) >= 0 for u in range(k + 1))


class TestEvaluate:
    def test_switching_all_ones_trap3_phase(self):
        env = make_environment("trap34-switching", length=84, cycle_length=10)
        ones = np.ones(84, dtype=np.uint8)
        # generation 10 is the first order-3 phase; 28 blocks at peak value 5
        assert evaluate(ones, env, 10) == 140.0
        assert current_optimum(env, 10) == 140.0

    def test_switching_all_zeros_trap4_phase(self):
        env = make_environment("trap34-switching", length=84, cycle_length=10)
        zeros = np.zeros(84, dtype=np.uint8)
        # 21 blocks of order 4 at peak value 5
        assert evaluate(zeros, env, 0) == 105.0
        assert current_optimum(env, 0) == 105.0

    def test_modified_trap_all_zeros(self):
        env = make_environment("trap4-modified", blocks=5, cycle_length=10)
        zeros = np.zeros(20, dtype=np.uint8)
        assert evaluate(zeros, env, 0) == 25.0

    def test_rejects_length_mismatch(self):
        env = make_environment("trap4-static", blocks=2)
        with pytest.raises(ValueError):
            evaluate(np.zeros(9, dtype=np.uint8), env, 0)

    def test_population_evaluation_matches_scalar(self):
        env = make_environment("trap34-switching", length=12, cycle_length=5)
        rng = np.random.default_rng(5)
        genes = rng.integers(0, 2, (20, 12), dtype=np.uint8)
        pop = Population(genes)
        for gen in (0, 5):
            env.evaluate_population(pop, gen)
            for i in range(20):
                assert pop.fitness[i] == evaluate(genes[i], env, gen)

    @pytest.mark.parametrize("name,kwargs,length", [
        ("trap4-static", {"blocks": 2}, 8),
        ("trap4-modified", {"blocks": 2}, 8),
        ("trap34-switching", {"length": 12}, 12),
    ])
    def test_exhaustive_optimum_matches_phase_value(self, name, kwargs, length):
        env = make_environment(name, cycle_length=1, **kwargs)
        strings = np.array(list(itertools.product([0, 1], repeat=length)),
                           dtype=np.uint8)
        pop = Population(strings)
        for gen in range(len(env.phases)):
            env.evaluate_population(pop, gen)
            assert pop.fitness.max() == pytest.approx(current_optimum(env, gen))


class TestSchedule:
    def test_cycle_five_phases(self):
        env = make_environment("trap4-modified", blocks=2, cycle_length=5)
        assert [phase_of(env, g) for g in range(11)] == [0] * 5 + [1] * 5 + [0]

    def test_cycle_ten_first_boundary(self):
        env = make_environment("trap4-modified", blocks=2, cycle_length=10)
        assert phase_of(env, 10) == 1

    @given(st.integers(0, 500), st.integers(1, 20))
    def test_periodicity(self, g, cycle):
        env = make_environment("trap4-modified", blocks=2, cycle_length=cycle)
        assert phase_of(env, g) == phase_of(env, g + 2 * cycle)

    def test_changed_examples(self):
        env5 = make_environment("trap4-modified", blocks=2, cycle_length=5)
        assert changed(env5, 5)
        assert not changed(env5, 4)
        env10 = make_environment("trap4-modified", blocks=2, cycle_length=10)
        assert changed(env10, 20)
        assert not changed(env10, 0)

    def test_static_never_changes(self):
        env = make_environment("trap4-static", blocks=2, cycle_length=5)
        assert not any(changed(env, g) for g in range(1, 50))


class TestTheoreticalProportions:
    def test_standard_trap4_exact(self):
        p = theoretical_schema_proportion_exact(TRAP4)
        assert p == [Fraction(12, 83), Fraction(32, 83), Fraction(24, 83),
                     Fraction(0), Fraction(15, 83)]
        assert sum(p) == 1

    def test_float_view(self):
        p = theoretical_schema_proportion(TRAP4)
        np.testing.assert_allclose(
            p, [12 / 83, 32 / 83, 24 / 83, 0.0, 15 / 83], rtol=1e-15)

    def test_point_mass_when_only_peak_nonzero(self):
        # peak-at-ones with k=2 has f = (0, low, high): only u=0 is zero
        spec = TrapSpec(2, 1.0, 2.0, SHAPE_PEAK_AT_ONES)
        p = theoretical_schema_proportion_exact(spec)
        assert p[0] == 0
        assert sum(p) == 1

    @given(st.integers(2, 8))
    def test_sums_to_one_exactly(self, k):
        for shape in (SHAPE_STANDARD, SHAPE_PEAK_AT_ZEROS, SHAPE_PEAK_AT_ONES):
            spec = TrapSpec(k, float(k), float(k + 1), shape)
            assert sum(theoretical_schema_proportion_exact(spec)) == 1


class TestMakeEnvironment:
    def test_unknown_name(self):
        with pytest.raises(ValueError):
            make_environment("trap9-spinning", blocks=2)

    def test_switching_requires_multiple_of_12(self):
        with pytest.raises(ValueError):
            make_environment("trap34-switching", length=20)
        with pytest.raises(ValueError):
            make_environment("trap34-switching", blocks=5)

    def test_trap4_divisibility(self):
        with pytest.raises(ValueError):
            make_environment("trap4-static", length=10)
        with pytest.raises(ValueError):
            make_environment("trap4-static")
        with pytest.raises(ValueError):
            make_environment("trap4-static", blocks=3, length=16)

    def test_blocks_and_length_agree(self):
        a = make_environment("trap4-modified", blocks=3)
        b = make_environment("trap4-modified", length=12)
        assert a.length == b.length == 12

    def test_phases_tile_length(self):
        env = make_environment("trap34-switching", length=24, cycle_length=5)
        for ph in env.phases:
            assert ph.blocks * ph.spec.k == env.length

    def test_rejects_inconsistent_phase(self):
        with pytest.raises(ValueError):
            DynamicEnvironment("x", 12, 5, (PhaseLandscape(TRAP4, 2),))
