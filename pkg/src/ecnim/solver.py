"""Outcome and Grundy computation under normal play.

Bulk analysis builds dense tables over the height box ``{0..B}^m``.  The
outcome table is computed by a retrograde sweep over token totals: a running
prefix-OR of the settled P-grid along a face's axes marks every position
that can reach a P-position through that face, so each level is settled with
a handful of whole-array operations instead of per-position option scans.

Single-position queries go through a memoized depth-first search keyed by
the dihedral canonical form, which is sound because face families are
rotation and reflection invariant.
"""

from __future__ import annotations

import csv
import io
import itertools
import struct
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator

import numpy as np

from .core import (
    Move,
    Position,
    Ruleset,
    _sorted_faces,
    apply_move,
    canonical,
    check_position,
    iter_legal_moves,
    iter_successors,
)
from .notation import format_ruleset, parse_ruleset

DEFAULT_MAX_ENTRIES = 20_000_000


class Outcome(str, Enum):
    P = "P"
    N = "N"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class CapacityError(RuntimeError):
    """Requested table exceeds the entry budget."""

    def __init__(self, required: int, available: int) -> None:
        super().__init__(
            f"table needs {required:,} entries but the budget is {available:,}"
        )
        self.required = required
        self.available = available


class BudgetError(RuntimeError):
    """Position outside the height budget of an oracle-backed evaluation."""


def default_bound(m: int) -> int:
    """Default table height bound by pile count; keeps builds desk scale."""
    if m <= 6:
        return 5
    if m == 7:
        return 4
    if m == 8:
        return 3
    return 2 if m <= 10 else 1


def _check_capacity(m: int, bound: int, max_entries: int | None) -> int:
    if bound < 0:
        raise ValueError(f"bound must be nonnegative, got {bound}")
    budget = DEFAULT_MAX_ENTRIES if max_entries is None else max_entries
    required = (bound + 1) ** m
    if required > budget:
        raise CapacityError(required, budget)
    return required


def _total_grid(m: int, bound: int) -> np.ndarray:
    total = np.zeros((bound + 1,) * m, dtype=np.int32)
    ar = np.arange(bound + 1, dtype=np.int32)
    for ax in range(m):
        shape = [1] * m
        shape[ax] = bound + 1
        total += ar.reshape(shape)
    return total


@dataclass(frozen=True, eq=False)
class OutcomeTable:
    """Dense P/N map over the box {0..bound}^m; True in the grid means P."""

    ruleset: Ruleset
    bound: int
    p_grid: np.ndarray

    def covers(self, pos: Position) -> bool:
        return len(pos) == self.ruleset.m and all(0 <= v <= self.bound for v in pos)

    def is_p(self, pos: Position) -> bool:
        if not self.covers(pos):
            raise BudgetError(
                f"position {pos} outside table bound {self.bound}"
            )
        return bool(self.p_grid[pos])

    def outcome(self, pos: Position) -> Outcome:
        return Outcome.P if self.is_p(pos) else Outcome.N

    def positions(self) -> Iterator[Position]:
        return iter(np.ndindex(self.p_grid.shape))

    def canonical_entries(self) -> dict[Position, Outcome]:
        out: dict[Position, Outcome] = {}
        for pos in self.positions():
            if pos == canonical(pos):
                out[pos] = self.outcome(pos)
        return out


@dataclass(frozen=True, eq=False)
class GrundyTable:
    """Dense Grundy map over the box {0..bound}^m."""

    ruleset: Ruleset
    bound: int
    grid: np.ndarray

    def covers(self, pos: Position) -> bool:
        return len(pos) == self.ruleset.m and all(0 <= v <= self.bound for v in pos)

    def value(self, pos: Position) -> int:
        if not self.covers(pos):
            raise BudgetError(
                f"position {pos} outside table bound {self.bound}"
            )
        return int(self.grid[pos])

    def positions(self) -> Iterator[Position]:
        return iter(np.ndindex(self.grid.shape))

    def canonical_entries(self) -> dict[Position, int]:
        out: dict[Position, int] = {}
        for pos in self.positions():
            if pos == canonical(pos):
                out[pos] = self.value(pos)
        return out


def build_outcome_table(
    rs: Ruleset, bound: int, max_entries: int | None = None
) -> OutcomeTable:
    """Retrograde sweep by token total with per-face prefix-OR reachability."""
    m = rs.m
    _check_capacity(m, bound, max_entries)
    shape = (bound + 1,) * m
    faces = _sorted_faces(rs)
    p = np.zeros(shape, dtype=bool)
    total = _total_grid(m, bound)
    for t in range(m * bound + 1):
        n_mask = np.zeros(shape, dtype=bool)
        for axes in faces:
            reach = p.copy()
            for ax in axes:
                np.logical_or.accumulate(reach, axis=ax, out=reach)
            # a position is N via this face when some single-axis decrement
            # lands on or above (face-wise) a settled P-position
            for ax in axes:
                src = [slice(None)] * m
                dst = [slice(None)] * m
                src[ax] = slice(0, bound)
                dst[ax] = slice(1, bound + 1)
                np.logical_or(
                    n_mask[tuple(dst)], reach[tuple(src)], out=n_mask[tuple(dst)]
                )
        p |= (total == t) & ~n_mask
    return OutcomeTable(rs, bound, p)


def build_grundy_table(
    rs: Ruleset, bound: int, max_entries: int | None = None
) -> GrundyTable:
    """Plain mex retrograde over the box; meant for small component games."""
    m = rs.m
    _check_capacity(m, bound, max_entries)
    shape = (bound + 1,) * m
    faces = _sorted_faces(rs)
    strides = [1] * m
    for i in range(m - 2, -1, -1):
        strides[i] = strides[i + 1] * (bound + 1)
    flat: list[int] = [0] * ((bound + 1) ** m)
    order = sorted(np.ndindex(shape), key=sum)
    for pos in order:
        if not any(pos):
            continue
        base = sum(v * s for v, s in zip(pos, strides))
        seen: set[int] = set()
        for axes in faces:
            axis_strides = [strides[a] for a in axes]
            for amounts in itertools.product(*(range(pos[a] + 1) for a in axes)):
                if not any(amounts):
                    continue
                seen.add(flat[base - sum(a * s for a, s in zip(amounts, axis_strides))])
        g = 0
        while g in seen:
            g += 1
        flat[base] = g
    grid = np.array(flat, dtype=np.int32).reshape(shape)
    return GrundyTable(rs, bound, grid)


def build_tables(
    rs: Ruleset, bound: int, max_entries: int | None = None
) -> tuple[OutcomeTable, GrundyTable]:
    """Outcome and Grundy tables over the same box; cross-checked by tests."""
    return build_outcome_table(rs, bound, max_entries), build_grundy_table(
        rs, bound, max_entries
    )


# memoized single-query search, keyed by canonical form per ruleset
_P_MEMO: dict[Ruleset, dict[Position, bool]] = {}
_G_MEMO: dict[Ruleset, dict[Position, int]] = {}


def clear_caches() -> None:
    _P_MEMO.clear()
    _G_MEMO.clear()


class _Frame:
    __slots__ = ("key", "it", "pending", "values")

    def __init__(self, key: Position, it: Iterator[Position]) -> None:
        self.key = key
        self.it = it
        self.pending: Position | None = None
        self.values: set[int] = set()


def _is_p(rs: Ruleset, pos: Position) -> bool:
    memo = _P_MEMO.setdefault(rs, {})
    start = canonical(pos)
    if start in memo:
        return memo[start]
    stack = [_Frame(start, iter_successors(rs, start))]
    while stack:
        fr = stack[-1]
        if fr.key in memo:
            stack.pop()
            continue
        if fr.pending is not None:
            if memo[fr.pending]:
                memo[fr.key] = False
                stack.pop()
                continue
            fr.pending = None
        settled = False
        for nxt in fr.it:
            key = canonical(nxt)
            val = memo.get(key)
            if val is None:
                fr.pending = key
                stack.append(_Frame(key, iter_successors(rs, key)))
                settled = True
                break
            if val:
                memo[fr.key] = False
                stack.pop()
                settled = True
                break
        if not settled:
            memo[fr.key] = True  # every option is N
            stack.pop()
    return memo[start]


def _grundy(rs: Ruleset, pos: Position) -> int:
    memo = _G_MEMO.setdefault(rs, {})
    start = canonical(pos)
    if start in memo:
        return memo[start]
    stack = [_Frame(start, iter_successors(rs, start))]
    while stack:
        fr = stack[-1]
        if fr.key in memo:
            stack.pop()
            continue
        if fr.pending is not None:
            fr.values.add(memo[fr.pending])
            fr.pending = None
        descended = False
        for nxt in fr.it:
            key = canonical(nxt)
            val = memo.get(key)
            if val is None:
                fr.pending = key
                stack.append(_Frame(key, iter_successors(rs, key)))
                descended = True
                break
            fr.values.add(val)
        if not descended:
            g = 0
            while g in fr.values:
                g += 1
            memo[fr.key] = g
            stack.pop()
    return memo[start]


def outcome(rs: Ruleset, pos: Position) -> Outcome:
    """P/N for a single position via the memoized search."""
    check_position(rs, pos)
    return Outcome.P if _is_p(rs, pos) else Outcome.N


def grundy(rs: Ruleset, pos: Position) -> int:
    """Grundy value for a single position via the memoized search."""
    check_position(rs, pos)
    return _grundy(rs, pos)


def best_move_to_p(
    rs: Ruleset, pos: Position, is_p: Callable[[Position], bool]
) -> Move | None:
    """Move whose successor is P under `is_p`, tie-broken by smallest successor."""
    best: Move | None = None
    best_succ: Position | None = None
    for mv in iter_legal_moves(rs, pos):
        succ = apply_move(pos, mv)
        if (best_succ is None or succ < best_succ) and is_p(succ):
            best, best_succ = mv, succ
    return best


def winning_move(rs: Ruleset, pos: Position) -> Move | None:
    """A winning move from an N-position, or None when the position is P.

    Among winning moves the one with the lexicographically smallest
    successor position is returned.
    """
    check_position(rs, pos)
    if _is_p(rs, pos):
        return None
    mv = best_move_to_p(rs, pos, lambda q: _is_p(rs, q))
    assert mv is not None, "N-position must have a move to P"
    return mv


def disjunctive_outcome(grundies: Iterable[int]) -> Outcome:
    """Sum of independent components: P exactly when the XOR vanishes."""
    x = 0
    for g in grundies:
        x ^= g
    return Outcome.P if x == 0 else Outcome.N


def selective_outcome(outcomes: Iterable[Outcome]) -> Outcome:
    """Move in any nonempty subset of components: P exactly when all are P."""
    return (
        Outcome.P if all(o == Outcome.P for o in outcomes) else Outcome.N
    )


# --- persistence -----------------------------------------------------------

_MAGIC = b"ECNTBL01"
_OUTCOME_CODE = 0
_GRUNDY_CODE = 1


def dump_table(table: OutcomeTable | GrundyTable) -> bytes:
    """Binary dump: magic, type code, ruleset string, bound, entry count, body."""
    if isinstance(table, OutcomeTable):
        code, body = _OUTCOME_CODE, table.p_grid.astype(np.uint8).tobytes()
    else:
        code, body = _GRUNDY_CODE, table.grid.astype(np.int32).tobytes()
    rs_text = format_ruleset(table.ruleset).encode()
    entries = (table.bound + 1) ** table.ruleset.m
    header = _MAGIC + struct.pack(
        "<BH", code, len(rs_text)
    ) + rs_text + struct.pack("<IQ", table.bound, entries)
    return header + body


def load_table(blob: bytes) -> OutcomeTable | GrundyTable:
    if blob[: len(_MAGIC)] != _MAGIC:
        raise ValueError("not a table dump")
    off = len(_MAGIC)
    code, rs_len = struct.unpack_from("<BH", blob, off)
    off += struct.calcsize("<BH")
    rs = parse_ruleset(blob[off : off + rs_len].decode())
    off += rs_len
    bound, entries = struct.unpack_from("<IQ", blob, off)
    off += struct.calcsize("<IQ")
    shape = (bound + 1,) * rs.m
    if entries != (bound + 1) ** rs.m:
        raise ValueError("entry count does not match ruleset and bound")
    if code == _OUTCOME_CODE:
        grid = np.frombuffer(blob, dtype=np.uint8, count=entries, offset=off)
        return OutcomeTable(rs, bound, grid.astype(bool).reshape(shape))
    grid = np.frombuffer(blob, dtype=np.int32, count=entries, offset=off)
    return GrundyTable(rs, bound, grid.reshape(shape).copy())


def table_to_csv(table: OutcomeTable | GrundyTable) -> str:
    """CSV dump: one row per position in C order."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    if isinstance(table, OutcomeTable):
        writer.writerow(["position", "outcome"])
        for pos in table.positions():
            writer.writerow([",".join(map(str, pos)), table.outcome(pos).value])
    else:
        writer.writerow(["position", "grundy"])
        for pos in table.positions():
            writer.writerow([",".join(map(str, pos)), table.value(pos)])
    return buf.getvalue()
