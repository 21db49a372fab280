"""Closed-form P-position predicates and the cyclic membership operator.

Each predicate carries a base set-membership test; cyclic predicates accept
a position when any rotation or reflected rotation of it lies in the base
set, and report which image matched.  Plain predicates test the position as
given.  All tests are pure integer arithmetic with no height cap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .core import Position, Ruleset

BasePredicate = Callable[[Position], bool]


class PredicateError(ValueError):
    """Unknown predicate id or invalid parameter."""


class ArityError(ValueError):
    """Position length does not match the predicate's pile count."""


@dataclass(frozen=True)
class Witness:
    """Which dihedral image matched: start index, forward or reversed."""

    reflected: bool
    start: int


@dataclass(frozen=True)
class PredicateResult:
    is_p: bool
    witness: Witness | None = None


@dataclass(frozen=True, eq=False)
class Predicate:
    id: str
    arity: int | None  # None accepts any length
    cyclic: bool
    base: BasePredicate
    solves: Ruleset | None = None


def rotation(pos: Position, start: int, reflected: bool = False) -> Position:
    m = len(pos)
    if reflected:
        return tuple(pos[(start - t) % m] for t in range(m))
    return tuple(pos[(start + t) % m] for t in range(m))


def apply_witness(pos: Position, w: Witness) -> Position:
    return rotation(pos, w.start, w.reflected)


def cyclic_closure(base: BasePredicate, pos: Position) -> PredicateResult:
    """Scan forward rotations then reversed readings, first match wins."""
    m = len(pos)
    for i in range(m):
        if base(rotation(pos, i)):
            return PredicateResult(True, Witness(False, i))
    for i in range(m):
        if base(rotation(pos, i, reflected=True)):
            return PredicateResult(True, Witness(True, i))
    return PredicateResult(False, None)


def holds(pred: Predicate, pos: Position) -> bool:
    """Membership only, skipping witness bookkeeping; used by sweeps."""
    if pred.cyclic:
        m = len(pos)
        base = pred.base
        for i in range(m):
            if base(tuple(pos[(i + t) % m] for t in range(m))):
                return True
        for i in range(m):
            if base(tuple(pos[(i - t) % m] for t in range(m))):
                return True
        return False
    return bool(pred.base(pos))


def eval_predicate(pred: Predicate | str, pos: Position) -> PredicateResult:
    if isinstance(pred, str):
        pred = predicate(pred)
    if pred.arity is not None and len(pos) != pred.arity:
        raise ArityError(
            f"{pred.id} expects {pred.arity} piles, got {len(pos)}"
        )
    if pred.cyclic:
        return cyclic_closure(pred.base, pos)
    return PredicateResult(bool(pred.base(pos)))


# --- base sets --------------------------------------------------------------


def _xor(vals) -> int:
    x = 0
    for v in vals:
        x ^= v
    return x


def _nim_xor(p: Position) -> bool:
    return _xor(p) == 0


def _moore_base(k: int) -> BasePredicate:
    def base(p: Position) -> bool:
        top = max(p, default=0)
        b = 0
        while (1 << b) <= top:
            if sum((v >> b) & 1 for v in p) % (k + 1):
                return False
            b += 1
        return True

    return base


def _cn42(p: Position) -> bool:
    return p[0] == p[2] and p[1] == p[3]


def _cn52(p: Position) -> bool:
    return p[0] == max(p) and p[0] + p[1] == p[2] + p[3] and p[1] == p[4]


def _cn53(p: Position) -> bool:
    return p[0] == 0 and p[1] == p[2] + p[3] and p[1] == p[4]


def _cn63(p: Position) -> bool:
    return p[0] + p[1] == p[3] + p[4] and p[1] + p[2] == p[4] + p[5]


def _cn64(p: Position) -> bool:
    return (
        p[0] == min(p)
        and p[0] + p[1] == p[3] + p[4]
        and p[1] + p[2] == p[4] + p[5]
        and p[0] ^ p[2] ^ p[4] == 0
    )


def _cn74(p: Position) -> bool:
    n0, n1, n2, n3, n4, n5, n6 = p
    lo = min(p)
    if n0 == 0 and n1 == 0 and n2 == n6 and n2 == n3 + n4 + n5 and n2 > 0:
        return True
    if n0 == n1 == n2 == n3 == n4 == n5 == n6:
        return True
    if (
        n0 == n1
        and n2 == n6
        and n3 == n5
        and n0 + n2 == n3 + n4
        and 0 < n0 < n4
        and n0 == lo
    ):
        return True
    if (
        n0 == n5
        and n1 + n2 == n3 + n4 == n6 + n0
        and n0 == lo
        and n0 < min(n1, n4)
        and n0 < max(n2, n3)
    ):
        return True
    return False


def _cn86(p: Position) -> bool:
    n0, n1, n2, n3, n4, n5, n6, n7 = p
    return (
        n0 == 0
        and n1 == n2 + n3
        and n1 == n5 + n6
        and n1 == n7
        and n4 == min(n1, n2 + n6)
    )


def _ecn6122(p: Position) -> bool:
    return p[0] ^ p[3] == p[1] ^ p[4] == p[2] ^ p[5]


def _ecn6123(p: Position) -> bool:
    return p[0] == p[3] and p[1] == p[4] and p[2] == p[5]


def _dihedral_sets(pattern: frozenset[int], m: int) -> set[frozenset[int]]:
    out: set[frozenset[int]] = set()
    for r in range(m):
        out.add(frozenset((v + r) % m for v in pattern))
        out.add(frozenset((r - v) % m for v in pattern))
    return out


# each binary place may align its pattern independently, so the base set is
# the dihedral closure of the two allowed index patterns, taken per digit
_ECN6124_PATTERNS = frozenset(
    _dihedral_sets(frozenset({0, 1, 3, 4}), 6)
    | _dihedral_sets(frozenset({0, 1, 2, 4}), 6)
)


def _ecn6124(p: Position) -> bool:
    # digit by digit: each binary place carries four or no 1s, and any
    # four-1 place matches an allowed index pattern up to rotation/reflection
    top = max(p)
    b = 0
    while (1 << b) <= top:
        ones = frozenset(i for i, v in enumerate(p) if (v >> b) & 1)
        if ones and ones not in _ECN6124_PATTERNS:
            return False
        b += 1
    return True


def _parity_xor(p: Position) -> bool:
    return _xor(p[0::2]) == 0 and _xor(p[1::2]) == 0


def _parity_equal(p: Position) -> bool:
    evens, odds = p[0::2], p[1::2]
    return all(v == evens[0] for v in evens) and all(v == odds[0] for v in odds)


def _ecn6233(p: Position) -> bool:
    return (
        p[0] + p[2] + p[4] == p[1] + p[3] + p[5]
        and p[0] ^ p[1] ^ p[2] == 0
        and p[0] <= p[3]
        and p[1] <= p[4]
        and p[2] <= p[5]
    )


def _ecn7124(p: Position) -> bool:
    return (
        p[0] == p[1] == p[4]
        and p[2] == p[6]
        and p[3] + p[5] == p[0] + p[2]
        and p[0] == min(p)
    )


def _ecn7125(p: Position) -> bool:
    return (
        p[0] == 0
        and p[1] == p[2] == p[5] == p[6]
        and p[3] + p[4] == p[1]
    )


def _ecn8134(p: Position) -> bool:
    return p[0] == p[4] and p[1] == p[5] and p[2] == p[6] and p[3] == p[7]


def _ecn81236(p: Position) -> bool:
    if not any(p):
        return True
    evens, odds = p[0::2], p[1::2]
    if any(v != evens[0] for v in evens):
        return False
    if evens[0] != sum(odds):
        return False
    return any(v != odds[0] for v in odds)


def _gen_odd_prime_base(q: int) -> BasePredicate:
    # 2q+1 piles: a zero, then all of p1..p_{q-1}, p_q + p_{q+1} (as one
    # value) and p_{q+2}..p_{2q} equal
    def base(p: Position) -> bool:
        if p[0] != 0:
            return False
        vals = list(p[1:q]) + [p[q] + p[q + 1]] + list(p[q + 2 :])
        return all(v == vals[0] for v in vals)

    return base


def is_prime(n: int) -> bool:
    """Deterministic trial division; ample for pile-count scales."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# --- registry ---------------------------------------------------------------

_FIXED: dict[str, Predicate] = {}


def _register(
    id_: str,
    arity: int | None,
    cyclic: bool,
    base: BasePredicate,
    solves: Ruleset | None,
) -> None:
    _FIXED[id_] = Predicate(id_, arity, cyclic, base, solves)


_register("NIM_XOR", None, False, _nim_xor, None)
_register("CN42", 4, True, _cn42, Ruleset.cn(4, 2))
_register("CN52", 5, True, _cn52, Ruleset.cn(5, 2))
_register("CN53", 5, True, _cn53, Ruleset.cn(5, 3))
_register("CN63", 6, True, _cn63, Ruleset.cn(6, 3))
_register("CN64", 6, True, _cn64, Ruleset.cn(6, 4))
_register("CN74", 7, True, _cn74, Ruleset.cn(7, 4))
_register("CN86", 8, True, _cn86, Ruleset.cn(8, 6))
_register("ECN6122", 6, False, _ecn6122, Ruleset.ecn(6, (1, 2), 2))
_register("ECN6123", 6, False, _ecn6123, Ruleset.ecn(6, (1, 2), 3))
_register("ECN6124", 6, True, _ecn6124, Ruleset.ecn(6, (1, 2), 4))
_register("ECN6132", 6, False, _parity_xor, Ruleset.ecn(6, (1, 3), 2))
_register("ECN6233", 6, True, _ecn6233, Ruleset.ecn(6, (2, 3), 3))
_register("ECN7124", 7, True, _ecn7124, Ruleset.ecn(7, (1, 2), 4))
_register("ECN7125", 7, True, _ecn7125, Ruleset.ecn(7, (1, 2), 5))
_register("ECN8132", 8, False, _parity_xor, Ruleset.ecn(8, (1, 3), 2))
_register("ECN8134", 8, False, _ecn8134, Ruleset.ecn(8, (1, 3), 4))
_register("ECN8136", 8, False, _parity_equal, Ruleset.ecn(8, (1, 3), 6))
_register("ECN81236", 8, True, _ecn81236, Ruleset.ecn(8, (1, 2, 3), 6))

_PARAM_RE = re.compile(r"^([A-Z_0-9]+)\((\d+)\)$")


def _odd_steps_up_to(h: int) -> tuple[int, ...]:
    return tuple(range(1, h + 1, 2))


def gen_odd_prime_ruleset(q: int) -> Ruleset:
    """2q+1 piles with every step below q and runs up to 2q-1."""
    if q < 2:
        raise PredicateError(f"GEN_ODD_PRIME needs q >= 2, got {q}")
    if not is_prime(2 * q + 1):
        raise PredicateError(f"GEN_ODD_PRIME(q={q}): {2 * q + 1} is not prime")
    return Ruleset.ecn(2 * q + 1, range(1, max(q, 2)), 2 * q - 1)


def gen_even_k2_ruleset(q: int) -> Ruleset:
    """2q piles, odd steps, pairs only."""
    if q < 2:
        raise PredicateError(f"GEN_EVEN_K2 needs q >= 2, got {q}")
    h = q if q % 2 else q - 1
    return Ruleset.ecn(2 * q, _odd_steps_up_to(h), 2)


def gen_pow2_ruleset(q: int) -> Ruleset:
    """2^q piles, odd steps below half, runs up to 2^q - 2."""
    if q < 2:
        raise PredicateError(f"GEN_POW2 needs q >= 2, got {q}")
    m = 2**q
    return Ruleset.ecn(m, _odd_steps_up_to(2 ** (q - 1) - 1), m - 2)


def predicate(id_: str) -> Predicate:
    """Look up a predicate by its stable id, e.g. "ECN7125" or "MOORE(3)"."""
    if id_ in _FIXED:
        return _FIXED[id_]
    m = _PARAM_RE.match(id_)
    if m:
        name, arg = m.group(1), int(m.group(2))
        if name == "MOORE":
            if arg < 1:
                raise PredicateError(f"MOORE needs k >= 1, got {arg}")
            return Predicate(id_, None, False, _moore_base(arg))
        if name == "GEN_ODD_PRIME":
            rs = gen_odd_prime_ruleset(arg)
            return Predicate(id_, rs.m, True, _gen_odd_prime_base(arg), rs)
        if name == "GEN_EVEN_K2":
            rs = gen_even_k2_ruleset(arg)
            return Predicate(id_, rs.m, True, _parity_xor, rs)
        if name == "GEN_POW2":
            rs = gen_pow2_ruleset(arg)
            return Predicate(id_, rs.m, True, _parity_equal, rs)
    raise PredicateError(f"unknown predicate id {id_!r}")


_DIRECT: dict[tuple[int, tuple[int, ...], int], str] = {
    (4, (1,), 2): "CN42",
    (5, (1,), 2): "CN52",
    (5, (1,), 3): "CN53",
    (6, (1,), 3): "CN63",
    (6, (1,), 4): "CN64",
    (6, (1, 2), 2): "ECN6122",
    (6, (1, 2), 3): "ECN6123",
    (6, (1, 2), 4): "ECN6124",
    (6, (1, 3), 2): "ECN6132",
    (6, (2, 3), 3): "ECN6233",
    (7, (1,), 4): "CN74",
    (7, (1, 2), 4): "ECN7124",
    (7, (1, 2), 5): "ECN7125",
    (8, (1,), 6): "CN86",
    (8, (1, 3), 2): "ECN8132",
    (8, (1, 3), 4): "ECN8134",
    (8, (1, 3), 6): "ECN8136",
    (8, (1, 2, 3), 6): "ECN81236",
}


def predicate_for(rs: Ruleset) -> str | None:
    """Id of the predicate solving this exact ruleset directly, if any."""
    if rs.kind != "ECN":
        return None
    key = (rs.m, rs.steps, rs.k)
    if key in _DIRECT:
        return _DIRECT[key]
    m, steps, k = key
    if m >= 9:
        if (
            m % 2 == 1
            and is_prime(m)
            and k == m - 2
            and steps == tuple(range(1, (m - 1) // 2))
        ):
            return f"GEN_ODD_PRIME({(m - 1) // 2})"
        if m % 2 == 0 and k == 2:
            q = m // 2
            if steps == _odd_steps_up_to(q if q % 2 else q - 1):
                return f"GEN_EVEN_K2({q})"
        if m & (m - 1) == 0 and k == m - 2:
            q = m.bit_length() - 1
            if steps == _odd_steps_up_to(2 ** (q - 1) - 1):
                return f"GEN_POW2({q})"
    return None
