from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ringflux.dynamics import (
    EX1,
    EX2,
    RULE1,
    FluxRule,
    NonBinaryState,
    RuleParseError,
    StepBudgetExceeded,
    UnknownRule,
    builtin_rule,
    cycle_of,
    find_cycle,
    flux,
    instantaneous_momentum,
    mean_momentum,
    parse_rule,
    step,
    trajectory,
    transition_table,
)
from ringflux.lattice import RingState, count_pattern, make_state, one_star_zero_count, run_spectrum

from conftest import brent, naive_flow, naive_mean_momentum, naive_step

tables = st.lists(st.sampled_from((-1, 0, 1)), min_size=16, max_size=16).map(tuple)
words = st.integers(5, 16).flatmap(lambda n: st.text("01", min_size=n, max_size=n))


class TestRules:
    def test_rule1_table(self):
        assert RULE1(0, 1, 1, 0) == 1
        assert RULE1(1, 0, 1, 1) == 0
        ones = {format(i, "04b") for i, v in enumerate(RULE1.table) if v == 1}
        assert ones == {"1111", "1110", "1101", "1100", "0110"}
        assert set(RULE1.table) == {0, 1}

    def test_ex1_table(self):
        assert {format(i, "04b") for i, v in enumerate(EX1.table) if v} == {"1110", "1101", "1100", "0110"}
        assert flux(EX1, 1, 1, 1, 1) == 0

    def test_ex2_table(self):
        assert flux(EX2, 0, 0, 1, 1) == -1
        plus = {format(i, "04b") for i, v in enumerate(EX2.table) if v == 1}
        assert plus == {"1110", "1101", "1100", "1010", "1000", "0101", "0100"}
        assert EX2.table.count(-1) == 1

    def test_flux_lookup(self):
        assert flux(RULE1, 1, 1, 0, 0) == 1
        assert flux(RULE1, 0, 0, 0, 0) == 0

    def test_builtin_names(self):
        assert builtin_rule("rule1") is RULE1
        assert builtin_rule("EX2") is EX2
        with pytest.raises(UnknownRule):
            builtin_rule("rule184")

    def test_serialization(self):
        assert RULE1.serialize() == "table:1,1,1,1,0,0,0,0,0,1,0,0,0,0,0,0"
        for rule in (RULE1, EX1, EX2):
            assert parse_rule(rule.serialize()) is rule
            assert parse_rule(rule.name) is rule

    @given(tables)
    def test_user_table_round_trip(self, table):
        rule = FluxRule(table)
        assert parse_rule(rule.serialize()).table == table

    def test_entry_range(self):
        with pytest.raises(RuleParseError):
            FluxRule((2,) + (0,) * 15)
        with pytest.raises(RuleParseError):
            parse_rule("table:1,1,1")
        with pytest.raises(RuleParseError):
            parse_rule("table:1,1,1,1,0,0,0,0,0,1,0,0,0,0,0,x")


class TestStep:
    def test_isolated_particle_stays(self):
        s = make_state("00100000")
        assert step(RULE1, s) == s

    def test_pair_moves(self):
        assert step(RULE1, make_state("01100000")).word == "00110000"

    def test_all_ones(self):
        s = make_state("11111111")
        assert step(RULE1, s) == s

    def test_three_run(self):
        # leftmost 1 of a 3-run stays, the other two advance
        assert step(RULE1, make_state("0111000000")).word == "0101100000"

    def test_runs_example(self):
        assert step(RULE1, make_state("01101110")).word == "00111011"

    def test_non_binary_user_table(self):
        drain = FluxRule(tuple(1 if i == 0b1000 else 0 for i in range(16)))
        with pytest.raises(NonBinaryState) as err:
            step(drain, make_state("10000"))
        assert err.value.sites == (1,)

    @given(tables, words)
    @settings(max_examples=300)
    def test_matches_literal_update(self, table, w):
        rule = FluxRule(table)
        expected = naive_step(table, w)
        if expected is None:
            with pytest.raises(NonBinaryState):
                step(rule, make_state(w))
        else:
            assert step(rule, make_state(w)).word == expected

    @given(tables, words)
    def test_conservation_form(self, table, w):
        s = make_state(w)
        try:
            t = step(FluxRule(table), s)
        except NonBinaryState:
            return
        assert t.ones == s.ones

    @pytest.mark.parametrize("rule", [RULE1, EX1, EX2], ids=lambda r: r.name)
    def test_builtins_binary_and_conservative(self, rule):
        for L in range(5, 15):
            tt = transition_table(rule, L)
            assert not any(tt.invalid)
            for x in range(0, 1 << L, 7):
                assert bin(tt.successor[x]).count("1") == bin(x).count("1")

    def test_transition_table_matches_step(self):
        for rule in (RULE1, EX1, EX2):
            tt = transition_table(rule, 9)
            for x in range(1 << 9):
                s = RingState(9, x)
                assert tt.successor[x] == step(rule, s).bits
                assert tt.flow[x] == naive_flow(rule.table, s.word)


class TestMomentum:
    def test_instantaneous(self):
        assert instantaneous_momentum(RULE1, make_state("00000000")) == 0
        assert instantaneous_momentum(RULE1, make_state("111111")) == 1
        assert instantaneous_momentum(RULE1, make_state("01101110")) == Fraction(4, 8)

    @given(tables, words)
    def test_instantaneous_against_naive(self, table, w):
        s = make_state(w)
        assert instantaneous_momentum(FluxRule(table), s) == Fraction(naive_flow(table, w), len(w))

    def test_mean_examples(self):
        assert mean_momentum(RULE1, make_state("11111111")) == 1
        assert mean_momentum(RULE1, make_state("10101010")) == 0
        assert mean_momentum(RULE1, make_state("01101110")) == Fraction(1, 2)

    @pytest.mark.parametrize("rule", [RULE1, EX1, EX2], ids=lambda r: r.name)
    @pytest.mark.parametrize("w", ["01101110", "0111100000", "110100111010", "0010111000"])
    def test_mean_against_burn_in_oracle(self, rule, w):
        assert mean_momentum(rule, make_state(w)) == naive_mean_momentum(rule.table, w)


class TestCycles:
    def test_fixed_points(self):
        for w in ("00000000", "00100000"):
            c = find_cycle(RULE1, make_state(w))
            assert (c.transient, c.period) == (0, 1)

    def test_pair_translates(self):
        c = find_cycle(RULE1, make_state("01100000"))
        assert (c.transient, c.period) == (0, 8)
        assert c.cycle_states[1].word == "00110000"

    def test_cycle_contract(self):
        s = make_state("011110011000")
        c = find_cycle(RULE1, s)
        assert (c.transient, c.period) == (1, 18)
        assert trajectory(RULE1, s, c.transient)[-1] == c.cycle_states[0]
        assert len(set(c.cycle_states)) == c.period
        for i, cs in enumerate(c.cycle_states):
            assert step(RULE1, cs) == c.cycle_states[(i + 1) % c.period]

    @given(st.sampled_from([RULE1, EX1, EX2]), words)
    def test_agrees_with_brent(self, rule, w):
        s = make_state(w)
        c = find_cycle(rule, s)
        assert (c.transient, c.period) == brent(lambda x: step(rule, x), s)

    def test_table_lookup_same_result(self):
        tt = transition_table(RULE1, 12)
        for x in range(0, 1 << 12, 37):
            s = RingState(12, x)
            assert find_cycle(RULE1, s) == find_cycle(RULE1, s, table=tt)

    def test_budget(self):
        with pytest.raises(StepBudgetExceeded):
            find_cycle(RULE1, make_state("01100000"), budget=5)
        assert find_cycle(RULE1, make_state("01100000"), budget=8).period == 8

    def test_cycle_of_plain_function(self):
        mu, cyc = cycle_of(lambda x: (x * x + 1) % 255, 3, 1000)
        assert (mu, len(cyc)) == brent(lambda x: (x * x + 1) % 255, 3)


class TestTrajectory:
    def test_zero_steps(self):
        s = make_state("01100")
        assert trajectory(EX2, s, 0) == [s]

    def test_one_step(self):
        s = make_state("01100000")
        assert trajectory(RULE1, s, 1) == [s, step(RULE1, s)]

    def test_three_run_leftmost_stays(self):
        rows = [t.word for t in trajectory(RULE1, make_state("0111000000"), 2)]
        assert rows == ["0111000000", "0101100000", "0100110000"]

    def test_negative(self):
        with pytest.raises(ValueError):
            trajectory(RULE1, make_state("00000"), -1)


def test_rule1_conserves_011_exhaustive():
    for L in range(5, 15):
        tt = transition_table(RULE1, L)
        for x in range(1 << L):
            assert count_pattern(RingState(L, tt.successor[x]), "011") == count_pattern(RingState(L, x), "011")


def test_ex1_conserves_odd_runs_exhaustive():
    for L in range(5, 13):
        tt = transition_table(EX1, L)
        for x in range(1 << L):
            assert run_spectrum(RingState(L, tt.successor[x])).odd_runs == run_spectrum(RingState(L, x)).odd_runs


def test_ex2_one_star_zero_constant_on_cycles_exhaustive():
    for L in range(5, 13):
        tt = transition_table(EX2, L)
        for x in range(1 << L):
            _, cyc = cycle_of(tt.next, x, 1 << (L + 1))
            assert len({one_star_zero_count(RingState(L, c)) for c in cyc}) == 1
