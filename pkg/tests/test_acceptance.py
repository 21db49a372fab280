"""Acceptance suite: one test per criterion, bounds pinned in-line.

Each test emits a single PASS/FAIL line before asserting; the lines are
replayed in the terminal summary so a plain `pytest -v` ends with the
checklist.
"""
import random

import numpy as np
import pytest
from fastapi.testclient import TestClient

from ecnim.api import create_app
from ecnim.core import Ruleset, dihedral_images
from ecnim.formulas import holds, predicate
from ecnim.notation import parse_ruleset
from ecnim.reductions import ruleset_catalog
from ecnim.solver import (
    Outcome,
    build_grundy_table,
    build_outcome_table,
    build_tables,
    disjunctive_outcome,
    selective_outcome,
)
from ecnim.verify import verify_mutation_kill, verify_predicate, verify_resolution

from . import conftest


def _line(tag: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    text = f"ACCEPTANCE {tag}: {status}{'  (' + detail + ')' if detail else ''}"
    print("\n" + text)
    conftest.record_acceptance(text)


M6_PREDICATES = ("CN42", "CN52", "CN53", "CN63", "CN64",
                 "ECN6122", "ECN6123", "ECN6124", "ECN6132", "ECN6233")
M7_PREDICATES = ("CN74", "ECN7124", "ECN7125")
M8_PREDICATES = ("CN86", "ECN8132", "ECN8134", "ECN8136", "ECN81236")


def _sweep_rows(pred_ids, bound, row_budget):
    bad = []
    for pid in pred_ids:
        rep = verify_predicate(pid, bound=bound)
        if rep.status != "PASS" or rep.wall_time >= row_budget:
            bad.append((pid, rep.status, rep.mismatch_count, round(rep.wall_time, 1)))
    return bad


def test_a1_theorems_m_le_6_exhaustive_at_b5():
    bad = _sweep_rows(M6_PREDICATES, bound=5, row_budget=60.0)
    _line("A1 m<=6 theorem sweeps, B=5, <60s/row", not bad, f"{len(M6_PREDICATES)} rows")
    assert not bad, bad


def test_a2_theorems_m7_exhaustive_at_b4():
    bad = _sweep_rows(M7_PREDICATES, bound=4, row_budget=300.0)
    _line("A2 m=7 theorem sweeps, B=4, <5min/row", not bad, f"{len(M7_PREDICATES)} rows")
    assert not bad, bad


def test_a3_theorems_m8_exhaustive_at_b3():
    bad = _sweep_rows(M8_PREDICATES, bound=3, row_budget=300.0)
    _line("A3 m=8 theorem sweeps, B=3, <5min/row", not bad, f"{len(M8_PREDICATES)} rows")
    assert not bad, bad


GENERALIZATION_PAIRS = (
    ("GEN_ODD_PRIME(2)", "CN53"),
    ("GEN_EVEN_K2(2)", "CN42"),
    ("GEN_EVEN_K2(3)", "ECN6132"),
    ("GEN_EVEN_K2(4)", "ECN8132"),
    ("GEN_POW2(2)", "CN42"),
    ("GEN_POW2(3)", "ECN8136"),
)


def test_a4_generalizations_equal_named_theorems_heights_le_3():
    mismatches = []
    for gen_id, named_id in GENERALIZATION_PAIRS:
        gen, named = predicate(gen_id), predicate(named_id)
        assert gen.arity == named.arity
        for pos in np.ndindex((4,) * gen.arity):
            if holds(gen, pos) != holds(named, pos):
                mismatches.append((gen_id, named_id, pos))
                break
    _line("A4 generalized families match named theorems, heights<=3",
          not mismatches, f"{len(GENERALIZATION_PAIRS)} set equalities")
    assert not mismatches, mismatches


def test_a5_reduction_rows_agree_with_oracle():
    rows = [e for e in ruleset_catalog()
            if e.kind in ("iso", "merge", "disjoint", "moore")]
    assert len(rows) == 82
    bad = []
    for entry in rows:
        rs = Ruleset.ecn(entry.m, entry.steps, entry.k)
        rep = verify_resolution(rs, bound=3 if entry.m <= 6 else 2)
        if rep.status != "PASS":
            bad.append((entry.notation, rep.status, rep.mismatch_count))
    _line("A5 reduction audits (iso/merge/disjoint/moore), B=3 or 2",
          not bad, f"{len(rows)} rows")
    assert not bad, bad


def _evens_odds(pos):
    return pos[0::2], pos[1::2]


@pytest.mark.parametrize("k", [2, 3])
def test_a6_disjunctive_sum_law(k):
    # ECN(8_{2},k) splits into independent games on the two parity classes,
    # each a k-run game on a 4-cycle
    full = build_outcome_table(parse_ruleset(f"ECN(8_{{2}},{k})"), 3)
    comp = build_grundy_table(Ruleset.cn(4, k), 3)
    bad = 0
    for pos in full.positions():
        evens, odds = _evens_odds(pos)
        want = disjunctive_outcome((comp.value(evens), comp.value(odds)))
        if want is not full.outcome(pos):
            bad += 1
    _line(f"A6 disjunctive sum law, ECN(8_{{2}},{k}) at B=3", bad == 0,
          f"{4**8} positions")
    assert bad == 0


@pytest.mark.parametrize(
    "ruleset, component",
    [("ECN(6_{1,3},2)", Ruleset.nim(3)), ("ECN(8_{1,3},4)", Ruleset.cn(4, 2))],
)
def test_a6_selective_sum_law(ruleset, component):
    # steps {1,3} connect the parity classes: every face hits each class in
    # a face of the component game, so play composes selectively
    full = build_outcome_table(parse_ruleset(ruleset), 3)
    comp = build_outcome_table(component, 3)
    bad = 0
    for pos in full.positions():
        evens, odds = _evens_odds(pos)
        want = selective_outcome((comp.outcome(evens), comp.outcome(odds)))
        if want is not full.outcome(pos):
            bad += 1
    _line(f"A6 selective sum law, {ruleset} at B=3", bad == 0,
          f"{(full.bound + 1) ** len(pos)} positions")
    assert bad == 0


CONSISTENCY_TABLE_SPECS = (
    ("ECN(4_{1},2)", 4),
    ("ECN(5_{1},3)", 4),
    ("ECN(6_{1,2},3)", 3),
    ("ECN(6_{2,3},3)", 3),
    ("ECN(7_{1,2},5)", 2),
    ("ECN(8_{1,3},4)", 2),
    ("MN(4,2)", 4),
    ("NIM(4)", 5),
    ("ECN(9_{1,2},3)", 2),
)


def test_a7_solver_self_consistency():
    rng = random.Random(20260815)
    grundy_violations = []
    dihedral_violations = []
    for text, bound in CONSISTENCY_TABLE_SPECS:
        rs = parse_ruleset(text)
        outcomes, grundies = build_tables(rs, bound)
        p_mask = outcomes.p_grid
        zero_mask = grundies.grid == 0
        if not np.array_equal(p_mask, zero_mask):
            grundy_violations.append(text)
        for _ in range(10_000):
            pos = tuple(rng.randint(0, bound) for _ in range(rs.m))
            base = outcomes.is_p(pos)
            if any(outcomes.is_p(img) != base for img in dihedral_images(pos)):
                dihedral_violations.append((text, pos))
                break
    ok = not grundy_violations and not dihedral_violations
    _line("A7 grundy=0 iff P on every table; dihedral outcome equality, "
          "10000 samples/ruleset", ok, f"{len(CONSISTENCY_TABLE_SPECS)} rulesets")
    assert ok, (grundy_violations, dihedral_violations)


def test_a8_mutation_kill_rate_100_percent():
    reports = verify_mutation_kill()
    survivors = [r.subject for r in reports if r.status != "PASS"]
    _line("A8 mutation kill 100% (each mutant at its declared bound)",
          not survivors, f"{len(reports)} mutants")
    assert not survivors, survivors


# --- secondary: engine invincibility through the service --------------------


def _random_n_position(client, ruleset, m, rng):
    while True:
        pos = ",".join(str(rng.randint(0, 3)) for _ in range(m))
        if pos.count("0") == m:
            continue
        ev = client.post("/evaluate", json={"ruleset": ruleset, "position": pos})
        if ev.json()["outcome"] == "N":
            return pos


@pytest.mark.parametrize("ruleset, m", [("ECN(6_{1,2},3)", 6), ("ECN(7_{1,2},5)", 7)])
def test_s1_engine_invincibility_100_games(ruleset, m):
    rng = random.Random(hash(ruleset) & 0xFFFF)
    wins = 0
    with TestClient(create_app()) as client:
        for _ in range(100):
            start = _random_n_position(client, ruleset, m, rng)
            sid = client.post("/sessions", json={
                "ruleset": ruleset, "position": start,
            }).json()["id"]
            while True:
                reply = client.post(f"/sessions/{sid}/engine-move").json()
                assert reply["engine"]["played"] == "winning"
                assert reply["evaluation"]["outcome"] in ("P", "N")
                if reply["over"]:
                    wins += 1
                    break
                # position is P now; a random human reply cannot end the game
                moves = client.post("/moves", json={
                    "ruleset": ruleset, "position": reply["position"],
                }).json()["moves"]
                pick = moves[rng.randrange(len(moves))]
                r = client.post(f"/sessions/{sid}/move", json={
                    "removals": {k: v for k, v in pick["removals"].items()},
                })
                assert r.status_code == 200
    _line(f"S1 engine invincibility via service, {ruleset}", wins == 100,
          f"{wins}/100 games")
    assert wins == 100
