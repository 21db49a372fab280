import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecnim import (
    Ruleset,
    apply_move,
    build_maximal_faces,
    dihedral_images,
    format_ruleset,
    legal_moves,
    parse_ruleset,
)
from ecnim.formulas import Witness
from ecnim.reductions import (
    ByPredicate,
    DisjointSum,
    Evaluation,
    IsomorphicTo,
    PileMerge,
    Unsolved,
    apply_vertex_map,
    best_move,
    classify,
    evaluate,
    find_isomorphism,
    resolve_outcome,
    ruleset_catalog,
)
from ecnim.solver import CapacityError, Outcome, build_grundy_table

from .oracle import make_oracle


def rs_of(text):
    return parse_ruleset(text)


# --- catalog shape -------------------------------------------------------

def test_catalog_covers_every_tabulated_ruleset():
    seen = {(e.m, e.steps, e.k) for e in ruleset_catalog()}
    want = set()
    for m in range(4, 9):
        for r in range(1, m // 2 + 1):
            for steps in itertools.combinations(range(1, m // 2 + 1), r):
                for k in range(2, m - 1):
                    want.add((m, steps, k))
    assert seen == want
    assert len(ruleset_catalog()) == 133


def test_catalog_kind_counts():
    counts = {}
    for e in ruleset_catalog():
        counts[e.kind] = counts.get(e.kind, 0) + 1
    assert counts == {
        "predicate": 18,
        "moore": 7,
        "merge": 17,
        "disjoint": 5,
        "iso": 53,
        "unsolved": 33,
    }


def test_catalog_notation_round_trips():
    for e in ruleset_catalog():
        rs = parse_ruleset(e.notation)
        assert (rs.m, rs.steps, rs.k) == (e.m, e.steps, e.k)
        assert e.summary


def test_catalog_solved_flags():
    by_key = {(e.m, e.steps, e.k): e for e in ruleset_catalog()}
    assert by_key[(6, (1, 2), 3)].solved
    assert by_key[(6, (3,), 2)].solved
    assert not by_key[(8, (1, 2), 3)].solved
    # iso rows inherit from the end of their chain
    assert not by_key[(8, (2, 3), 3)].solved
    assert not by_key[(8, (2, 3, 4), 4)].solved
    assert by_key[(5, (2,), 3)].solved
    assert not by_key[(8, (2, 3, 4), 2)].solved


# --- classification rules ------------------------------------------------

def test_single_token_runs_are_plain_nim():
    assert classify(rs_of("ECN(6_{1},1)")) == ByPredicate("NIM_XOR")
    assert classify(rs_of("ECN(9_{2,4},1)")) == ByPredicate("NIM_XOR")
    assert classify(Ruleset.nim(5)) == ByPredicate("NIM_XOR")


def test_near_full_runs_with_coprime_step():
    # a run of m-1 with a step coprime to m reaches every (m-1)-subset
    assert classify(rs_of("ECN(6_{1},5)")) == ByPredicate("MOORE(5)")
    assert classify(rs_of("ECN(10_{3},9)")) == ByPredicate("MOORE(9)")
    # a full run makes the whole circle one face
    assert classify(rs_of("ECN(6_{1},6)")) == PileMerge((tuple(range(6)),))
    assert classify(rs_of("ECN(7_{2},7)")) == PileMerge((tuple(range(7)),))


def test_near_full_runs_without_coprime_step_fall_back():
    res = classify(rs_of("ECN(8_{2,4},7)"))
    assert res == IsomorphicTo(Ruleset.ecn(8, (2, 4), 6), 1, 0)
    # ... and the k=m-2 target is already tabulated
    assert isinstance(classify(res.target), PileMerge)
    res = classify(rs_of("ECN(6_{2},6)"))
    assert res.target == Ruleset.ecn(6, (2,), 4)


def test_tiny_circles_are_fully_classified():
    assert classify(rs_of("ECN(2_{1},2)")) == PileMerge(((0, 1),))
    assert classify(rs_of("ECN(3_{1},2)")) == ByPredicate("MOORE(2)")
    assert classify(rs_of("ECN(3_{1},3)")) == PileMerge(((0, 1, 2),))


def test_simplicial_classification():
    assert classify(Ruleset.moore(6, 3)) == ByPredicate("MOORE(3)")
    irregular = Ruleset.simplicial_from_maximal(3, [{0, 1}, {1, 2}])
    assert isinstance(classify(irregular), Unsolved)


def test_tabulated_rows_spot_checks():
    assert classify(rs_of("ECN(4_{1},2)")) == ByPredicate("CN42")
    assert classify(rs_of("ECN(6_{1,2},4)")) == ByPredicate("ECN6124")
    assert classify(rs_of("ECN(6_{3},3)")) == PileMerge(((0, 3), (1, 4), (2, 5)))
    got = classify(rs_of("ECN(6_{2},2)"))
    assert isinstance(got, DisjointSum)
    assert got.groups == ((0, 2, 4), (1, 3, 5))
    assert build_maximal_faces(got.component) == build_maximal_faces(Ruleset.moore(3, 2))
    got = classify(rs_of("ECN(8_{2,3},4)"))
    assert got == IsomorphicTo(Ruleset.ecn(8, (1, 2), 4), 3, 0)
    assert isinstance(classify(rs_of("ECN(7_{1},3)")), Unsolved)


def test_large_circle_rules():
    res = classify(rs_of("ECN(12_{2,4},3)"))
    assert isinstance(res, DisjointSum)
    assert res.component == Ruleset.ecn(6, (1, 2), 3)
    assert classify(rs_of("ECN(10_{5},3)")) == PileMerge(
        ((0, 5), (1, 6), (2, 7), (3, 8), (4, 9))
    )
    assert classify(rs_of("ECN(9_{1,2,3,4},2)")) == ByPredicate("MOORE(2)")
    assert classify(rs_of("ECN(11_{1,2,3,4},9)")) == ByPredicate("GEN_ODD_PRIME(5)")
    assert isinstance(classify(rs_of("ECN(9_{1,2},3)")), Unsolved)


# --- structural claims re-derived from the face families ------------------

def test_merge_rows_faces_equal_their_groups():
    for e in ruleset_catalog():
        if e.kind != "merge":
            continue
        res = classify(Ruleset.ecn(e.m, e.steps, e.k))
        fam = set(build_maximal_faces(Ruleset.ecn(e.m, e.steps, e.k)))
        assert fam == {frozenset(g) for g in res.groups}


def test_moore_rows_have_every_k_subset():
    for e in ruleset_catalog():
        if e.kind != "moore":
            continue
        fam = build_maximal_faces(Ruleset.ecn(e.m, e.steps, e.k))
        assert len(fam) == math.comb(e.m, e.k)
        assert all(len(f) == e.k for f in fam)


def test_disjoint_rows_induce_their_component():
    for e in ruleset_catalog():
        if e.kind != "disjoint":
            continue
        res = classify(Ruleset.ecn(e.m, e.steps, e.k))
        fam = build_maximal_faces(Ruleset.ecn(e.m, e.steps, e.k))
        comp_fam = set(build_maximal_faces(res.component))
        for group in res.groups:
            idx = {v: j for j, v in enumerate(group)}
            inside = {
                frozenset(idx[v] for v in f) for f in fam if set(f) <= set(group)
            }
            assert inside == comp_fam
        covered = {v for g in res.groups for v in g}
        assert covered == set(range(e.m))


def test_iso_rows_carry_faces_onto_target():
    for e in ruleset_catalog():
        if e.kind != "iso":
            continue
        src = Ruleset.ecn(e.m, e.steps, e.k)
        res = classify(src)
        image = {
            frozenset((res.c * v + res.d) % e.m for v in f)
            for f in build_maximal_faces(src)
        }
        assert image == set(build_maximal_faces(res.target))


def test_find_isomorphism_examples():
    a, b = rs_of("ECN(7_{2},3)"), rs_of("ECN(7_{1},3)")
    fwd = find_isomorphism(a, b)
    back = find_isomorphism(b, a)
    assert fwd is not None and back is not None
    # composing the two maps is an automorphism of the source family
    c1, d1 = fwd
    c2, d2 = back
    comp = (c2 * c1 % 7, (c2 * d1 + d2) % 7)
    fam = set(build_maximal_faces(a))
    assert {
        frozenset((comp[0] * v + comp[1]) % 7 for v in f) for f in fam
    } == fam
    assert find_isomorphism(rs_of("ECN(6_{1},2)"), rs_of("ECN(6_{1,2},2)")) is None
    assert find_isomorphism(rs_of("ECN(6_{1},2)"), rs_of("ECN(8_{1},2)")) is None


def test_apply_vertex_map_examples():
    assert apply_vertex_map((5, 0, 0, 0), 1, 1) == (0, 5, 0, 0)
    # v -> 3v on 8 vertices sends pile 1 to slot 3, pile 2 to slot 6, ...
    pos = (0, 1, 2, 3, 4, 5, 6, 7)
    mapped = apply_vertex_map(pos, 3, 0)
    assert mapped[3] == 1 and mapped[6] == 2 and mapped[1] == 3


# --- evaluation ----------------------------------------------------------

EVAL_CASES = [
    "ECN(6_{1,2},3)",    # predicate
    "ECN(4_{1,2},2)",    # moore
    "ECN(6_{3},2)",      # merge
    "ECN(6_{2},2)",      # disjoint
    "ECN(6_{2,3},4)",    # iso onto a predicate row
    "ECN(8_{2,3,4},3)",  # iso chain ending in search
]


@pytest.mark.parametrize("text", EVAL_CASES)
def test_evaluate_matches_brute_force(text):
    rs = parse_ruleset(text)
    is_p, _ = make_oracle(rs.m, rs.steps, rs.k)
    for pos in itertools.product(range(3), repeat=rs.m):
        want = Outcome.P if is_p(pos) else Outcome.N
        assert evaluate(rs, pos).outcome is want, pos


def test_evaluate_method_chains():
    assert evaluate(rs_of("ECN(6_{1,2},3)"), (0,) * 6).method == ("predicate:ECN6123",)
    assert evaluate(rs_of("ECN(6_{3},2)"), (0,) * 6).method == ("merge:0,3|1,4|2,5",)
    ev = evaluate(rs_of("ECN(8_{2,3,4},3)"), (0,) * 8)
    assert ev.method == (
        "iso:ECN(8_{1,2,4},3):v->3v+0",
        "iso:ECN(8_{1,2},3):v->1v+0",
        "search",
    )
    assert ev.resolved_ruleset == Ruleset.ecn(8, (1, 2), 3)


def test_evaluate_transports_position_along_the_chain():
    rs = rs_of("ECN(8_{2,3},4)")
    pos = (1, 2, 0, 0, 1, 0, 0, 2)
    ev = evaluate(rs, pos)
    res = classify(rs)
    assert ev.resolved_position == apply_vertex_map(pos, res.c, res.d)
    assert sorted(ev.resolved_position) == sorted(pos)


def test_merge_grundy_is_xor_of_group_sums():
    rs = rs_of("ECN(6_{3},2)")
    table = build_grundy_table(rs, bound=2)
    for pos in table.positions():
        ev = evaluate(rs, pos)
        want = (pos[0] + pos[3]) ^ (pos[1] + pos[4]) ^ (pos[2] + pos[5])
        assert ev.grundy == want
        assert table.value(pos) == want


def test_disjoint_grundy_matches_full_table():
    rs = rs_of("ECN(6_{2},2)")
    table = build_grundy_table(rs, bound=2)
    for pos in table.positions():
        assert evaluate(rs, pos).grundy == table.value(pos)


def test_evaluate_closed_forms_ignore_pile_height():
    big = 10**12
    ev = evaluate(rs_of("ECN(6_{1,2},3)"), (big, big, big, big, big, big))
    assert ev.outcome in (Outcome.P, Outcome.N)
    ev = evaluate(rs_of("ECN(6_{3},2)"), (big, 0, 0, 0, big, 0))
    assert ev.outcome is Outcome.P and ev.grundy == 0
    ev = evaluate(rs_of("ECN(6_{3},2)"), (big, 0, 0, big, 0, 0))
    assert ev.outcome is Outcome.N and ev.grundy == 2 * big


def test_evaluate_search_guard():
    rs = rs_of("ECN(8_{1,2},3)")
    with pytest.raises(CapacityError) as exc:
        evaluate(rs, (9,) * 8)
    assert exc.value.required == 10**8
    with pytest.raises(CapacityError):
        evaluate(rs, (2,) * 8, max_entries=100)
    # explicit None lifts the guard
    assert evaluate(rs, (1, 0, 0, 0, 0, 0, 0, 0), max_entries=None).outcome is Outcome.N


def test_evaluate_witness_comes_from_the_predicate():
    # frozen example: CN(5,3) holds at (3,0,3,2,1) in the frame starting at 1
    ev = evaluate(rs_of("CN(5,3)"), (3, 0, 3, 2, 1))
    assert ev.outcome is Outcome.P
    assert ev.witness == Witness(False, 1)


def test_nim_resolution_grundy():
    ev = evaluate(Ruleset.nim(4), (1, 2, 4, 6))
    assert ev.grundy == 1
    assert ev.outcome is Outcome.N
    assert evaluate(Ruleset.nim(4), (1, 2, 4, 7)).outcome is Outcome.P


@given(st.lists(st.integers(0, 31), min_size=4, max_size=4))
def test_nim_resolution_matches_xor_rule(piles):
    pos = tuple(piles)
    want = Outcome.P if (pos[0] ^ pos[1] ^ pos[2] ^ pos[3]) == 0 else Outcome.N
    assert resolve_outcome(Ruleset.nim(4), pos) is want


@settings(max_examples=40)
@given(st.lists(st.integers(0, 3), min_size=6, max_size=6))
def test_merge_outcome_is_rotation_invariant(piles):
    rs = rs_of("ECN(6_{3},2)")
    base = resolve_outcome(rs, tuple(piles))
    for img in dihedral_images(tuple(piles)):
        assert resolve_outcome(rs, img) is base


# --- best_move -----------------------------------------------------------

def test_best_move_none_on_p_positions():
    assert best_move(rs_of("ECN(6_{1,2},3)"), (0,) * 6) is None
    assert best_move(Ruleset.nim(3), (1, 2, 3)) is None


def test_best_move_wins_and_is_first_in_move_order():
    rs = rs_of("ECN(6_{1,2},3)")
    pos = (2, 1, 0, 2, 0, 1)
    assert resolve_outcome(rs, pos) is Outcome.N
    mv = best_move(rs, pos)
    assert resolve_outcome(rs, apply_move(pos, mv)) is Outcome.P
    for cand in legal_moves(rs, pos):
        succ = apply_move(pos, cand)
        if resolve_outcome(rs, succ) is Outcome.P:
            assert cand == mv
            break


def test_best_move_on_tall_closed_form_position():
    rs = rs_of("ECN(6_{3},2)")
    pos = (50, 0, 0, 49, 0, 0)  # merged pile sums 99,0,0 -> N
    mv = best_move(rs, pos)
    assert mv is not None
    assert resolve_outcome(rs, apply_move(pos, mv)) is Outcome.P


def test_best_move_search_fallback():
    rs = rs_of("ECN(8_{1,2},3)")
    is_p, _ = make_oracle(rs.m, rs.steps, rs.k)
    pos = (1, 1, 0, 0, 1, 0, 0, 0)
    mv = best_move(rs, pos)
    if mv is None:
        assert is_p(pos)
    else:
        assert is_p(apply_move(pos, mv))
