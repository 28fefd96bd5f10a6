from __future__ import annotations

import sys
from pathlib import Path

import pytest

from planlab.agent import EpisodeLog, StepRecord
from planlab.assets import read_text
from planlab.pddl import parse_domain, parse_problem

sys.path.insert(0, str(Path(__file__).parent))

ASSETS = Path(__file__).resolve().parents[1] / "src" / "planlab" / "assets"
FIXTURES = ASSETS / "fixtures"


def load_pair(domain: str, problem: str):
    d = parse_domain(read_text(domain))
    return d, parse_problem(read_text(problem), d)


def fake_log(steps: int, won: bool, *, strategy="pddl-edit", policy="oracle", kind="coin", seed=0,
             invalid: int = 0, reason: str | None = None) -> EpisodeLog:
    """An episode log with ``steps`` records, the first ``invalid`` of them invalid."""
    records = [
        StepRecord(i + 1, "look around", "invalid(unknown action)" if i < invalid else "ok", "...")
        for i in range(steps)
    ]
    cfg = {"kind": kind, "difficulty": "easy", "seed": seed}
    return EpisodeLog(cfg, strategy, policy, records, won=won,
                      failure_reason=None if won else (reason or "budget-exhausted"))


@pytest.fixture
def pick_lock():
    return load_pair("fixtures/domains/pick-lock.pddl", "fixtures/problems/pick-lock-1.pddl")


@pytest.fixture
def nav():
    return load_pair("fixtures/domains/nav.pddl", "fixtures/problems/nav-2.pddl")
