"""Pile games played on the faces of a simplicial complex.

A ruleset places ``m`` piles on the vertices of a complex and a move picks a
face, then removes at least one token in total, at most the full height from
each pile of the face.  Two families are supported:

* ``ECN`` rulesets: piles sit on a circle and the faces are generated by
  arithmetic runs ``{i, i+s, ..., i+(k-1)s} mod m`` for every start ``i`` and
  every step ``s`` in the step set, closed downward.
* ``SIMPLICIAL`` rulesets: an explicit downward-closed face family.

Positions are plain tuples of pile heights.  Since faces are closed downward,
a move is equivalently "pick a removal vector whose support is a face".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

Position = tuple[int, ...]
Face = frozenset[int]

ECN = "ECN"
SIMPLICIAL = "SIMPLICIAL"


class RulesetError(ValueError):
    """Invalid ruleset parameters."""


class PositionError(ValueError):
    """Position incompatible with a ruleset."""


class IllegalMoveError(ValueError):
    """Move violating face or pile-height constraints."""


@dataclass(frozen=True)
class Ruleset:
    """Immutable game description; build via the classmethod factories."""

    kind: str
    m: int
    steps: tuple[int, ...] = ()
    k: int = 0
    faces: tuple[Face, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == ECN:
            self._validate_ecn()
        elif self.kind == SIMPLICIAL:
            self._validate_simplicial()
        else:
            raise RulesetError(f"unknown ruleset kind {self.kind!r}")

    def _validate_ecn(self) -> None:
        if self.m < 2:
            raise RulesetError(f"need at least 2 piles, got m={self.m}")
        steps = tuple(sorted(set(self.steps)))
        if not steps:
            raise RulesetError("step set must be nonempty")
        for s in steps:
            if not 1 <= s <= self.m // 2:
                raise RulesetError(
                    f"step {s} out of range 1..{self.m // 2} for m={self.m}"
                )
        if not 1 <= self.k <= self.m:
            raise RulesetError(f"run length {self.k} out of range 1..{self.m}")
        object.__setattr__(self, "steps", steps)
        if self.faces:
            raise RulesetError("ECN rulesets derive faces from steps")

    def _validate_simplicial(self) -> None:
        if self.m < 1:
            raise RulesetError(f"need at least 1 pile, got m={self.m}")
        if self.steps or self.k:
            raise RulesetError("SIMPLICIAL rulesets carry no steps or run length")
        if not self.faces:
            raise RulesetError("face family must be nonempty")
        for f in self.faces:
            if not f or not all(0 <= v < self.m for v in f):
                raise RulesetError(f"face {set(f)} outside vertex range 0..{self.m - 1}")
        object.__setattr__(self, "faces", _prune_to_maximal(self.faces))

    @classmethod
    def ecn(cls, m: int, steps: Iterable[int], k: int) -> "Ruleset":
        """Circular ruleset with the given step set and run length cap."""
        return cls(ECN, m, tuple(steps), k)

    @classmethod
    def cn(cls, m: int, k: int) -> "Ruleset":
        """Classic circular ruleset: consecutive runs of up to k piles."""
        return cls.ecn(m, (1,), k)

    @classmethod
    def moore(cls, m: int, k: int) -> "Ruleset":
        """Subtraction from up to k piles of m, any combination."""
        if not 1 <= k <= m:
            raise RulesetError(f"run length {k} out of range 1..{m}")
        faces = [frozenset(c) for c in itertools.combinations(range(m), k)]
        return cls(SIMPLICIAL, m, faces=tuple(faces))

    @classmethod
    def nim(cls, m: int) -> "Ruleset":
        """Plain nim: one pile per move."""
        return cls.moore(m, 1)

    @classmethod
    def simplicial(cls, m: int, family: Iterable[Iterable[int]]) -> "Ruleset":
        """Explicit face family; must be downward closed and contain all singletons."""
        faces = [frozenset(f) for f in family]
        face_set = set(faces)
        for i in range(m):
            if frozenset({i}) not in face_set:
                raise RulesetError(f"face family is missing the singleton {{{i}}}")
        for f in faces:
            for v in f:
                if f - {v} and f - {v} not in face_set:
                    raise RulesetError(
                        f"face family is not downward closed: {set(f - {v})} missing"
                    )
        return cls(SIMPLICIAL, m, faces=tuple(faces))

    @classmethod
    def simplicial_from_maximal(
        cls, m: int, maximal: Iterable[Iterable[int]]
    ) -> "Ruleset":
        """Simplicial ruleset generated by the downward closure of `maximal`."""
        family: set[Face] = {frozenset({i}) for i in range(m)}
        for f in maximal:
            fs = tuple(f)
            for r in range(1, len(fs) + 1):
                family.update(frozenset(c) for c in itertools.combinations(fs, r))
        return cls.simplicial(m, family)


def _prune_to_maximal(faces: Iterable[Face]) -> tuple[Face, ...]:
    uniq = list(dict.fromkeys(faces))
    maximal = [f for f in uniq if not any(f < g for g in uniq)]
    return tuple(sorted(maximal, key=sorted))


@lru_cache(maxsize=4096)
def build_maximal_faces(ruleset: Ruleset) -> tuple[Face, ...]:
    """Maximal faces in a deterministic order (sorted by vertex list)."""
    if ruleset.kind == SIMPLICIAL:
        return ruleset.faces
    faces: list[Face] = []
    seen: set[Face] = set()
    for s in ruleset.steps:
        for i in range(ruleset.m):
            f = frozenset((i + j * s) % ruleset.m for j in range(ruleset.k))
            if f not in seen:
                seen.add(f)
                faces.append(f)
    return _prune_to_maximal(faces)


@lru_cache(maxsize=4096)
def _sorted_faces(ruleset: Ruleset) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(sorted(f)) for f in build_maximal_faces(ruleset))


def is_face(ruleset: Ruleset, indices: Iterable[int]) -> bool:
    """True when the nonempty index set lies inside some maximal face."""
    s = frozenset(indices)
    if not s:
        return False
    return any(s <= f for f in build_maximal_faces(ruleset))


def check_position(ruleset: Ruleset, pos: Position) -> None:
    if len(pos) != ruleset.m:
        raise PositionError(f"expected {ruleset.m} piles, got {len(pos)}")
    for v in pos:
        if not isinstance(v, int) or v < 0:
            raise PositionError(f"pile heights must be nonnegative integers, got {v!r}")


@dataclass(frozen=True, order=True)
class Move:
    """Removal vector: sorted (pile, amount) pairs, every amount >= 1."""

    removals: tuple[tuple[int, int], ...]

    @classmethod
    def from_mapping(cls, removals: Mapping[int, int]) -> "Move":
        pairs = tuple(sorted((int(p), int(a)) for p, a in removals.items() if a))
        if not pairs:
            raise IllegalMoveError("a move must remove at least one token")
        for _, a in pairs:
            if a < 1:
                raise IllegalMoveError("removal amounts must be positive")
        return cls(pairs)

    @property
    def support(self) -> Face:
        return frozenset(p for p, _ in self.removals)

    @property
    def total(self) -> int:
        return sum(a for _, a in self.removals)

    def as_dict(self) -> dict[int, int]:
        return dict(self.removals)


def apply_move(pos: Position, move: Move) -> Position:
    """Successor position; raises when a removal exceeds its pile height."""
    nxt = list(pos)
    for p, a in move.removals:
        if not 0 <= p < len(pos):
            raise IllegalMoveError(f"pile {p} out of range 0..{len(pos) - 1}")
        if a < 1:
            raise IllegalMoveError(f"removal from pile {p} must be positive")
        if a > pos[p]:
            raise IllegalMoveError(
                f"cannot remove {a} from pile {p} of height {pos[p]}"
            )
        nxt[p] -= a
    return tuple(nxt)


def check_move(ruleset: Ruleset, pos: Position, move: Move) -> None:
    """Full legality: removal bounds plus the support being a face."""
    check_position(ruleset, pos)
    apply_move(pos, move)
    if not is_face(ruleset, move.support):
        raise IllegalMoveError(
            f"selection {sorted(move.support)} is not a face of this ruleset"
        )


def iter_legal_moves(ruleset: Ruleset, pos: Position) -> Iterator[Move]:
    """All legal moves, each exactly once, in a deterministic order.

    Moves are generated face by face; a move is emitted only from the first
    maximal face containing its support, which dedups overlapping faces
    without materializing the whole move set.
    """
    check_position(ruleset, pos)
    faces = _sorted_faces(ruleset)
    face_sets = build_maximal_faces(ruleset)
    for fi, axes in enumerate(faces):
        for amounts in itertools.product(*(range(pos[a] + 1) for a in axes)):
            pairs = tuple((a, amt) for a, amt in zip(axes, amounts) if amt)
            if not pairs:
                continue
            support = frozenset(p for p, _ in pairs)
            if any(support <= face_sets[j] for j in range(fi)):
                continue
            yield Move(pairs)


def legal_moves(ruleset: Ruleset, pos: Position) -> list[Move]:
    return list(iter_legal_moves(ruleset, pos))


def iter_successors(ruleset: Ruleset, pos: Position) -> Iterator[Position]:
    """Successor positions; may repeat when faces overlap."""
    for axes in _sorted_faces(ruleset):
        for amounts in itertools.product(*(range(pos[a] + 1) for a in axes)):
            if not any(amounts):
                continue
            nxt = list(pos)
            for a, amt in zip(axes, amounts):
                nxt[a] -= amt
            yield tuple(nxt)


def dihedral_images(pos: Position) -> list[Position]:
    """The 2m rotations and reflected rotations, duplicates included.

    Order: forward rotations starting at i = 0..m-1, then the reversed
    readings starting at i = 0..m-1.
    """
    m = len(pos)
    images = [tuple(pos[(i + t) % m] for t in range(m)) for i in range(m)]
    images += [tuple(pos[(i - t) % m] for t in range(m)) for i in range(m)]
    return images


def canonical(pos: Position) -> Position:
    """Lexicographically smallest dihedral image; class representative."""
    m = len(pos)
    best = pos
    for i in range(m):
        img = tuple(pos[(i + t) % m] for t in range(m))
        if img < best:
            best = img
        img = tuple(pos[(i - t) % m] for t in range(m))
        if img < best:
            best = img
    return best
