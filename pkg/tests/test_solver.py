from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecnim.core import Move, Ruleset, apply_move, dihedral_images
from ecnim.solver import (
    BudgetError,
    CapacityError,
    Outcome,
    build_grundy_table,
    build_outcome_table,
    build_tables,
    default_bound,
    disjunctive_outcome,
    dump_table,
    grundy,
    load_table,
    outcome,
    selective_outcome,
    table_to_csv,
    winning_move,
)

from .oracle import make_oracle

BOX3 = [(5, (1, 2), 2), (4, (1,), 3), (6, (2, 3), 3)]


class TestOutcomeTableAgainstBruteForce:
    @pytest.mark.parametrize("m,steps,k", BOX3 + [(6, (1, 2), 4), (7, (1, 3), 5)])
    def test_matches_independent_oracle(self, m, steps, k):
        bound = 2
        rs = Ruleset.ecn(m, steps, k)
        table = build_outcome_table(rs, bound)
        is_p, _ = make_oracle(m, steps, k)
        for pos in itertools.product(range(bound + 1), repeat=m):
            assert table.is_p(pos) == is_p(pos), pos

    def test_terminal_position_is_p(self):
        table = build_outcome_table(Ruleset.ecn(4, (1,), 2), 3)
        assert table.outcome((0, 0, 0, 0)) == Outcome.P

    def test_bound_zero(self):
        table = build_outcome_table(Ruleset.ecn(5, (1,), 2), 0)
        assert table.is_p((0,) * 5)

    def test_known_values_cn42(self):
        table = build_outcome_table(Ruleset.cn(4, 2), 3)
        assert table.outcome((2, 3, 2, 3)) == Outcome.P
        assert table.outcome((2, 3, 2, 2)) == Outcome.N
        assert table.outcome((1, 0, 1, 0)) == Outcome.P

    def test_out_of_box_query_raises(self):
        table = build_outcome_table(Ruleset.cn(4, 2), 2)
        with pytest.raises(BudgetError):
            table.is_p((3, 0, 0, 0))


class TestGrundyTable:
    @pytest.mark.parametrize("m,steps,k", BOX3)
    def test_matches_independent_oracle(self, m, steps, k):
        bound = 2
        rs = Ruleset.ecn(m, steps, k)
        table = build_grundy_table(rs, bound)
        _, g = make_oracle(m, steps, k)
        for pos in itertools.product(range(bound + 1), repeat=m):
            assert table.value(pos) == g(pos), pos

    def test_single_pile_grundy_is_height(self):
        table = build_grundy_table(Ruleset.nim(1), 9)
        for h in range(10):
            assert table.value((h,)) == h

    def test_whole_circle_grundy_is_total(self):
        # one face covering the board plays like a single pile
        table = build_grundy_table(Ruleset.ecn(4, (1,), 4), 3)
        for pos in itertools.product(range(4), repeat=4):
            assert table.value(pos) == sum(pos)

    def test_moore_pair_rule(self):
        # classic: with up-to-2-pile moves, P iff binary digit counts are 0 mod 3
        table = build_outcome_table(Ruleset.moore(4, 2), 3)
        for pos in itertools.product(range(4), repeat=4):
            counts_ok = all(
                sum((v >> b) & 1 for v in pos) % 3 == 0 for b in range(2)
            )
            assert table.is_p(pos) == counts_ok, pos

    def test_zero_iff_p_across_tables(self):
        for m, steps, k in BOX3:
            rs = Ruleset.ecn(m, steps, k)
            ot, gt = build_tables(rs, 2)
            assert np.array_equal(ot.p_grid, gt.grid == 0)


class TestSingleQuery:
    @pytest.mark.parametrize("m,steps,k", BOX3)
    def test_agrees_with_tables(self, m, steps, k):
        rs = Ruleset.ecn(m, steps, k)
        ot, gt = build_tables(rs, 2)
        for pos in itertools.product(range(3), repeat=m):
            assert outcome(rs, pos) == ot.outcome(pos)
            assert grundy(rs, pos) == gt.value(pos)

    def test_deep_single_query(self):
        # taller than any helper table; canonical memoization keeps it cheap
        rs = Ruleset.cn(4, 2)
        assert outcome(rs, (7, 4, 7, 4)) == Outcome.P
        assert outcome(rs, (7, 4, 7, 5)) == Outcome.N

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(0, 3), min_size=5, max_size=5).map(tuple))
    def test_dihedral_images_share_outcome(self, pos):
        rs = Ruleset.ecn(5, (1, 2), 2)
        base = outcome(rs, pos)
        for img in dihedral_images(pos):
            assert outcome(rs, img) == base


class TestWinningMove:
    def test_p_position_has_none(self):
        rs = Ruleset.cn(4, 2)
        assert winning_move(rs, (1, 0, 1, 0)) is None
        assert winning_move(rs, (0, 0, 0, 0)) is None

    def test_moves_to_p(self):
        rs = Ruleset.cn(4, 2)
        mv = winning_move(rs, (3, 0, 1, 0))
        assert mv is not None
        succ = apply_move((3, 0, 1, 0), mv)
        assert outcome(rs, succ) == Outcome.P

    def test_tie_break_smallest_successor(self):
        # from (1,0,0,0) in plain nim the only P successor is all-zero
        rs = Ruleset.nim(3)
        mv = winning_move(rs, (2, 1, 0))
        assert mv is not None
        succ = apply_move((2, 1, 0), mv)
        candidates = [
            apply_move((2, 1, 0), other)
            for other in [Move.from_mapping({0: 1}), Move.from_mapping({0: 2}), Move.from_mapping({1: 1})]
            if outcome(rs, apply_move((2, 1, 0), other)) == Outcome.P
        ]
        assert succ == min(candidates)

    def test_winning_move_respects_faces(self):
        rs = Ruleset.ecn(6, (3,), 2)
        mv = winning_move(rs, (1, 0, 0, 0, 0, 0))
        assert mv is not None
        assert mv.support <= frozenset({0, 3})


class TestSumRules:
    def test_disjunctive_outcome(self):
        assert disjunctive_outcome([]) == Outcome.P
        assert disjunctive_outcome([1, 1]) == Outcome.P
        assert disjunctive_outcome([2, 1]) == Outcome.N

    def test_selective_outcome(self):
        assert selective_outcome([]) == Outcome.P
        assert selective_outcome([Outcome.P, Outcome.P]) == Outcome.P
        assert selective_outcome([Outcome.P, Outcome.N]) == Outcome.N

    def test_disjoint_components_xor_at_desk_scale(self):
        # ECN(6_{2},2) splits into two independent 3-circles of pairs
        rs = Ruleset.ecn(6, (2,), 2)
        comp = Ruleset.moore(3, 2)
        table = build_outcome_table(rs, 2)
        gt = build_grundy_table(comp, 2)
        for pos in itertools.product(range(3), repeat=6):
            expected = disjunctive_outcome(
                [gt.value((pos[0], pos[2], pos[4])), gt.value((pos[1], pos[3], pos[5]))]
            )
            assert table.outcome(pos) == expected, pos

    def test_selective_components_all_p_at_desk_scale(self):
        # every face of ECN(6_{1,3},2) pairs at most one even with at most
        # one odd pile, so the game is a selective sum of two 3-pile nims
        rs = Ruleset.ecn(6, (1, 3), 2)
        table = build_outcome_table(rs, 2)

        def nim_outcome(piles):
            x = 0
            for v in piles:
                x ^= v
            return Outcome.P if x == 0 else Outcome.N

        def claim(pos):
            return selective_outcome(
                [nim_outcome(pos[0::2]), nim_outcome(pos[1::2])]
            )

        mismatches = [
            pos
            for pos in itertools.product(range(3), repeat=6)
            if table.outcome(pos) != claim(pos)
        ]
        assert mismatches == []


class TestCapacityAndPersistence:
    def test_capacity_error_reports_required_and_available(self):
        with pytest.raises(CapacityError) as err:
            build_outcome_table(Ruleset.ecn(8, (1,), 2), 5, max_entries=1000)
        assert err.value.required == 6 ** 8
        assert err.value.available == 1000

    def test_default_bounds(self):
        assert default_bound(6) == 5
        assert default_bound(7) == 4
        assert default_bound(8) == 3

    def test_outcome_table_round_trip(self):
        rs = Ruleset.ecn(5, (1, 2), 2)
        table = build_outcome_table(rs, 2)
        loaded = load_table(dump_table(table))
        assert loaded.ruleset == rs
        assert loaded.bound == 2
        assert np.array_equal(loaded.p_grid, table.p_grid)

    def test_grundy_table_round_trip(self):
        rs = Ruleset.cn(4, 2)
        table = build_grundy_table(rs, 2)
        loaded = load_table(dump_table(table))
        assert np.array_equal(loaded.grid, table.grid)

    def test_load_rejects_noise(self):
        with pytest.raises(ValueError):
            load_table(b"not a table")

    def test_csv_export(self):
        table = build_outcome_table(Ruleset.cn(2, 1), 1)
        text = table_to_csv(table)
        lines = text.strip().splitlines()
        assert lines[0] == "position,outcome"
        assert len(lines) == 5
        assert lines[1] == '"0,0",P'
        assert lines[2] == '"0,1",N'
