"""Structural classification of rulesets and outcome resolution.

Every ruleset classifies to a resolution describing the cheapest known
route to its outcome: a closed-form predicate, an affine relabeling onto
another ruleset, a merge of pile groups into plain nim, an independent
sum of smaller games, or a search fallback when nothing better is known.

The middle range (4 <= m <= 8, 2 <= k <= m-2) is table-driven from
``data/classification.json``; edge values of k and larger circles are
classified by rule.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from importlib import resources
from operator import xor
from typing import ClassVar

from . import solver
from .core import (
    Move,
    Position,
    Ruleset,
    apply_move,
    build_maximal_faces,
    check_position,
    iter_legal_moves,
)
from .formulas import Witness, eval_predicate, predicate_for
from .notation import format_ruleset, parse_ruleset
from .solver import CapacityError, Outcome


class ClassificationError(ValueError):
    """Ruleset outside the range this module knows how to classify."""


@dataclass(frozen=True)
class ByPredicate:
    kind: ClassVar[str] = "predicate"
    predicate_id: str


@dataclass(frozen=True)
class IsomorphicTo:
    """Vertex relabeling v -> c*v + d (mod m) carries faces onto the target's."""

    kind: ClassVar[str] = "iso"
    target: Ruleset
    c: int
    d: int


@dataclass(frozen=True)
class PileMerge:
    """Faces are disjoint full simplices: nim on the group sums."""

    kind: ClassVar[str] = "merge"
    groups: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class DisjointSum:
    """Moves never cross groups; grundy values of the components xor."""

    kind: ClassVar[str] = "disjoint"
    groups: tuple[tuple[int, ...], ...]
    component: Ruleset


@dataclass(frozen=True)
class Unsolved:
    kind: ClassVar[str] = "unsolved"
    reason: str = "no known closed form"


Resolution = ByPredicate | IsomorphicTo | PileMerge | DisjointSum | Unsolved


def resolution_doc(res: Resolution) -> dict:
    """JSON-friendly record, same shape as the classification fixture rows."""
    if isinstance(res, ByPredicate):
        return {"kind": "predicate", "predicate": res.predicate_id}
    if isinstance(res, IsomorphicTo):
        return {
            "kind": "iso",
            "target": format_ruleset(res.target),
            "c": res.c,
            "d": res.d,
        }
    if isinstance(res, PileMerge):
        return {"kind": "merge", "groups": [list(g) for g in res.groups]}
    if isinstance(res, DisjointSum):
        return {
            "kind": "disjoint",
            "groups": [list(g) for g in res.groups],
            "component": format_ruleset(res.component),
        }
    return {"kind": "unsolved", "reason": res.reason}


def _row_resolution(row: dict) -> Resolution:
    kind = row["kind"]
    if kind == "predicate":
        return ByPredicate(row["predicate"])
    if kind == "moore":
        return ByPredicate(f"MOORE({row['k']})")
    if kind == "merge":
        return PileMerge(tuple(tuple(g) for g in row["groups"]))
    if kind == "disjoint":
        return DisjointSum(
            tuple(tuple(g) for g in row["groups"]),
            parse_ruleset(row["component"]),
        )
    if kind == "iso":
        return IsomorphicTo(parse_ruleset(row["target"]), row["c"], row["d"])
    if kind == "unsolved":
        return Unsolved()
    raise ClassificationError(f"unknown classification kind {kind!r}")


@lru_cache(maxsize=1)
def _classification_rows() -> dict[tuple[int, tuple[int, ...], int], dict]:
    text = resources.files("ecnim").joinpath("data/classification.json").read_text()
    doc = json.loads(text)
    return {
        (row["m"], tuple(row["steps"]), row["k"]): row for row in doc["rows"]
    }


def _is_moore_family(faces: tuple, m: int) -> int | None:
    """Face size when the family is every k-subset, else None."""
    sizes = {len(f) for f in faces}
    if len(sizes) != 1:
        return None
    (k,) = sizes
    if len(faces) == math.comb(m, k):
        return k
    return None


@lru_cache(maxsize=None)
def classify(rs: Ruleset) -> Resolution:
    """Resolution for a ruleset; raises ClassificationError when out of range."""
    faces = build_maximal_faces(rs)
    if rs.kind == "SIMPLICIAL":
        if all(len(f) == 1 for f in faces):
            return ByPredicate("NIM_XOR")
        mk = _is_moore_family(faces, rs.m)
        if mk is not None:
            return ByPredicate(f"MOORE({mk})")
        return Unsolved("irregular move family")

    m, steps, k = rs.m, rs.steps, rs.k
    if k == 1:
        return ByPredicate("NIM_XOR")
    if k >= m - 1:
        if any(math.gcd(s, m) == 1 for s in steps):
            if k == m - 1:
                return ByPredicate(f"MOORE({m - 1})")
            return PileMerge((tuple(range(m)),))
        # every step shares a factor with m, so runs close up into
        # cosets of size <= m/2 and the family stabilized by k = m-2
        return IsomorphicTo(Ruleset.ecn(m, steps, m - 2), 1, 0)
    if 4 <= m <= 8:
        return _row_resolution(_classification_rows()[(m, steps, k)])

    pid = predicate_for(rs)
    if pid is not None:
        return ByPredicate(pid)
    if _is_moore_family(faces, m) == k:
        return ByPredicate(f"MOORE({k})")
    if all(a.isdisjoint(b) for a in faces for b in faces if a is not b):
        groups = tuple(tuple(sorted(f)) for f in sorted(faces, key=min))
        if sum(len(g) for g in groups) == m:
            return PileMerge(groups)
    g = math.gcd(m, *steps)
    if g > 1:
        groups = tuple(tuple(range(r, m, g)) for r in range(g))
        comp = Ruleset.ecn(m // g, tuple(s // g for s in steps), min(k, m // g))
        return DisjointSum(groups, comp)
    return Unsolved()


def find_isomorphism(a: Ruleset, b: Ruleset) -> tuple[int, int] | None:
    """Affine map (c, d) with v -> c*v+d carrying a's faces onto b's, if any."""
    if a.m != b.m:
        return None
    m = a.m
    fam_a, fam_b = set(build_maximal_faces(a)), set(build_maximal_faces(b))
    if len(fam_a) != len(fam_b):
        return None
    for c in range(1, m):
        if math.gcd(c, m) != 1:
            continue
        for d in range(m):
            image = {frozenset((c * v + d) % m for v in f) for f in fam_a}
            if image == fam_b:
                return c, d
    return None


def apply_vertex_map(pos: Position, c: int, d: int) -> Position:
    m = len(pos)
    out = [0] * m
    for i, h in enumerate(pos):
        out[(c * i + d) % m] = h
    return tuple(out)


@dataclass(frozen=True)
class Evaluation:
    """Outcome of a position together with the route that produced it."""

    ruleset: Ruleset
    position: Position
    outcome: Outcome
    method: tuple[str, ...]
    resolution: Resolution
    resolved_ruleset: Ruleset
    resolved_position: Position
    witness: Witness | None = None
    grundy: int | None = None


def _guard_search(pos: Position, max_entries: int | None) -> None:
    if max_entries is None:
        return
    required = math.prod(h + 1 for h in pos)
    if required > max_entries:
        raise CapacityError(required, max_entries)


def evaluate(
    rs: Ruleset,
    pos: Position,
    *,
    max_entries: int | None = solver.DEFAULT_MAX_ENTRIES,
) -> Evaluation:
    """Resolve a position's outcome along the ruleset's classification.

    `max_entries` bounds the memo growth of the search fallback on
    unsolved rulesets; closed-form routes ignore it.
    """
    check_position(rs, pos)
    root = classify(rs)
    tags: list[str] = []
    cur_rs, cur_pos, res = rs, pos, root
    seen = {rs}
    while isinstance(res, IsomorphicTo):
        tags.append(
            f"iso:{format_ruleset(res.target)}:v->{res.c}v+{res.d}"
        )
        cur_pos = apply_vertex_map(cur_pos, res.c, res.d)
        cur_rs = res.target
        if cur_rs in seen:
            raise ClassificationError(f"isomorphism cycle at {format_ruleset(cur_rs)}")
        seen.add(cur_rs)
        res = classify(cur_rs)

    witness: Witness | None = None
    grundy: int | None = None
    if isinstance(res, ByPredicate):
        tags.append(f"predicate:{res.predicate_id}")
        pr = eval_predicate(res.predicate_id, cur_pos)
        out = Outcome.P if pr.is_p else Outcome.N
        witness = pr.witness
        if res.predicate_id == "NIM_XOR":
            grundy = reduce(xor, cur_pos, 0)
    elif isinstance(res, PileMerge):
        tags.append(
            "merge:" + "|".join(",".join(map(str, g)) for g in res.groups)
        )
        grundy = reduce(xor, (sum(cur_pos[v] for v in g) for g in res.groups), 0)
        out = Outcome.P if grundy == 0 else Outcome.N
    elif isinstance(res, DisjointSum):
        tags.append(
            f"disjoint:{format_ruleset(res.component)}x{len(res.groups)}"
        )
        grundy = 0
        for g in res.groups:
            sub = tuple(cur_pos[v] for v in g)
            _guard_search(sub, max_entries)
            grundy ^= solver.grundy(res.component, sub)
        out = Outcome.P if grundy == 0 else Outcome.N
    else:
        tags.append("search")
        _guard_search(cur_pos, max_entries)
        out = solver.outcome(cur_rs, cur_pos)
    return Evaluation(
        ruleset=rs,
        position=pos,
        outcome=out,
        method=tuple(tags),
        resolution=root,
        resolved_ruleset=cur_rs,
        resolved_position=cur_pos,
        witness=witness,
        grundy=grundy,
    )


def resolve_outcome(
    rs: Ruleset,
    pos: Position,
    *,
    max_entries: int | None = solver.DEFAULT_MAX_ENTRIES,
) -> Outcome:
    return evaluate(rs, pos, max_entries=max_entries).outcome


def best_move(
    rs: Ruleset,
    pos: Position,
    *,
    max_entries: int | None = solver.DEFAULT_MAX_ENTRIES,
) -> Move | None:
    """First winning move in canonical move order, or None on a P position.

    Unlike `solver.winning_move` this follows the classification, so it
    stays cheap on rulesets with closed forms regardless of pile height.
    """
    if evaluate(rs, pos, max_entries=max_entries).outcome is Outcome.P:
        return None
    for mv in iter_legal_moves(rs, pos):
        succ = apply_move(pos, mv)
        ev = evaluate(rs, succ, max_entries=max_entries)
        if ev.outcome is Outcome.P:
            return mv
    raise AssertionError("N-position must have a move to P")


@dataclass(frozen=True)
class CatalogEntry:
    notation: str
    m: int
    steps: tuple[int, ...]
    k: int
    kind: str
    summary: str
    solved: bool


def _chain_solved(rs: Ruleset) -> bool:
    res = classify(rs)
    while isinstance(res, IsomorphicTo):
        res = classify(res.target)
    return not isinstance(res, Unsolved)


def _summary(res: Resolution) -> str:
    if isinstance(res, ByPredicate):
        if res.predicate_id.startswith("MOORE("):
            k = res.predicate_id[6:-1]
            return f"every {k}-subset is a face (Moore's game)"
        return f"closed form {res.predicate_id}"
    if isinstance(res, PileMerge):
        piles = "".join("(" + ",".join(map(str, g)) + ")" for g in res.groups)
        return f"nim on merged piles {piles}"
    if isinstance(res, DisjointSum):
        piles = " and ".join("(" + ",".join(map(str, g)) + ")" for g in res.groups)
        return f"independent {format_ruleset(res.component)} games on {piles}"
    if isinstance(res, IsomorphicTo):
        return (
            f"relabels onto {format_ruleset(res.target)} via v->{res.c}v+{res.d}"
        )
    return "no known closed form; resolved by search"


@lru_cache(maxsize=1)
def ruleset_catalog() -> tuple[CatalogEntry, ...]:
    """All classified rulesets in the tabulated range, in table order."""
    entries = []
    for (m, steps, k), row in _classification_rows().items():
        rs = Ruleset.ecn(m, steps, k)
        res = _row_resolution(row)
        entries.append(
            CatalogEntry(
                notation=row["ruleset"],
                m=m,
                steps=steps,
                k=k,
                kind=row["kind"],
                summary=_summary(res),
                solved=_chain_solved(rs),
            )
        )
    return tuple(entries)
