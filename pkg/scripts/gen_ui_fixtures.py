#!/usr/bin/env python3
"""Freeze service responses into fixtures for the web UI contract tests.

Writes frontend/test/fixtures/: the ruleset catalog, 50 positions with the
complete move support sets /moves reports, and a bag of evaluations for
the badge rendering test.  Deterministic, so reruns leave the files alone
unless behavior actually changed.
"""
import json
import random
from pathlib import Path

from fastapi.testclient import TestClient

from ecnim.api import create_app
from ecnim.core import build_maximal_faces
from ecnim.notation import parse_ruleset

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures"

RULESETS = ("ECN(6_{1,2},3)", "ECN(6_{1,3},2)", "ECN(7_{1,2},5)", "ECN(8_{1,3},4)")
POSITIONS_PER_RULESET = 13  # 52 total, the contract test samples 50


def all_moves(client, ruleset: str, position: str) -> list[dict]:
    moves, offset = [], 0
    while True:
        doc = client.post(
            "/moves", json={"ruleset": ruleset, "position": position, "offset": offset}
        ).json()
        moves.extend(doc["moves"])
        if doc["next"] is None:
            return moves
        offset = doc["next"]


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    rng = random.Random(401)
    with TestClient(create_app()) as client:
        catalog = client.get("/rulesets").json()
        (FIXTURE_DIR / "catalog.json").write_text(json.dumps(catalog, indent=1))

        contract = []
        evaluations = []
        for ruleset in RULESETS:
            rs = parse_ruleset(ruleset)
            faces = sorted(sorted(f) for f in build_maximal_faces(rs))
            for _ in range(POSITIONS_PER_RULESET):
                pos = [rng.randint(0, 3) for _ in range(rs.m)]
                if not any(pos):
                    pos[rng.randrange(rs.m)] = 1
                position = ",".join(map(str, pos))
                moves = all_moves(client, ruleset, position)
                supports = sorted({tuple(mv["support"]) for mv in moves})
                contract.append(
                    {
                        "ruleset": ruleset,
                        "m": rs.m,
                        "steps": list(rs.steps),
                        "k": rs.k,
                        "maximal_faces": faces,
                        "position": position,
                        "supports": [list(s) for s in supports],
                    }
                )
                evaluations.append(
                    {
                        "ruleset": ruleset,
                        "position": position,
                        "response": client.post(
                            "/evaluate",
                            json={"ruleset": ruleset, "position": position},
                        ).json(),
                    }
                )
        (FIXTURE_DIR / "moves_contract.json").write_text(json.dumps(contract, indent=1))
        (FIXTURE_DIR / "evaluations.json").write_text(json.dumps(evaluations, indent=1))
    print(f"wrote fixtures for {len(contract)} positions to {FIXTURE_DIR}")


if __name__ == "__main__":
    main()
