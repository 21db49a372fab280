"""Shared text syntax for rulesets and positions.

Rulesets: ``ECN(6_{1,2},3)``, with ``CN(6,3)``, ``MN(3,2)``, ``NIM(4)`` and
``SIMPLICIAL(3;0,1|2)`` (maximal faces separated by ``|``) accepted as
aliases.  Positions: comma-separated heights, ``0,4,4,1,3,4,4``.  Parsing is
whitespace tolerant; emission is strict and round-trips.
"""

from __future__ import annotations

import re
from math import comb

from .core import Position, PositionError, Ruleset, RulesetError, build_maximal_faces

_ECN_RE = re.compile(r"^ECN\((\d+)_\{(\d+(?:,\d+)*)\},(\d+)\)$")
_CN_RE = re.compile(r"^(CN|MN)\((\d+),(\d+)\)$")
_NIM_RE = re.compile(r"^NIM\((\d+)\)$")
_SIMP_RE = re.compile(r"^SIMPLICIAL\((\d+);(\d+(?:,\d+)*(?:\|\d+(?:,\d+)*)*)\)$")


def parse_ruleset(text: str) -> Ruleset:
    """Parse any accepted ruleset spelling; raises RulesetError otherwise."""
    compact = re.sub(r"\s+", "", text)
    m = _ECN_RE.match(compact)
    if m:
        size, steps, k = m.groups()
        return Ruleset.ecn(int(size), (int(s) for s in steps.split(",")), int(k))
    m = _CN_RE.match(compact)
    if m:
        name, size, k = m.groups()
        if name == "CN":
            return Ruleset.cn(int(size), int(k))
        return Ruleset.moore(int(size), int(k))
    m = _NIM_RE.match(compact)
    if m:
        return Ruleset.nim(int(m.group(1)))
    m = _SIMP_RE.match(compact)
    if m:
        size = int(m.group(1))
        faces = [
            [int(v) for v in part.split(",")] for part in m.group(2).split("|")
        ]
        return Ruleset.simplicial_from_maximal(size, faces)
    raise RulesetError(f"cannot parse ruleset {text!r}")


def format_ruleset(rs: Ruleset) -> str:
    """Canonical spelling; MN/NIM recognized for simplicial specials."""
    if rs.kind == "ECN":
        steps = ",".join(str(s) for s in rs.steps)
        return f"ECN({rs.m}_{{{steps}}},{rs.k})"
    faces = build_maximal_faces(rs)
    sizes = {len(f) for f in faces}
    if len(sizes) == 1:
        k = sizes.pop()
        if k == 1 and len(faces) == rs.m:
            return f"NIM({rs.m})"
        if len(faces) == comb(rs.m, k):
            return f"MN({rs.m},{k})"
    body = "|".join(",".join(str(v) for v in sorted(f)) for f in faces)
    return f"SIMPLICIAL({rs.m};{body})"


def parse_position(text: str) -> Position:
    parts = [p.strip() for p in text.strip().split(",")]
    if parts == [""]:
        raise PositionError("empty position")
    try:
        pos = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise PositionError(f"cannot parse position {text!r}") from exc
    if any(v < 0 for v in pos):
        raise PositionError(f"pile heights must be nonnegative: {text!r}")
    return pos


def format_position(pos: Position) -> str:
    return ",".join(str(v) for v in pos)
