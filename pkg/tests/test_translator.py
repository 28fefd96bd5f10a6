from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planlab.agent import HistoryEntry, knowledge_from_history, problem_from_history
from planlab.assets import read_text
from planlab.envs import EnvConfig, new_episode, oracle_view, step
from planlab.envs.game import candidate_actions
from planlab.pddl import atom

TRAJECTORY = [l for l in read_text("fixtures/trajectories/cooking-hard.txt").splitlines() if l.strip()]


def _history(cfg, actions):
    w, obs = new_episode(cfg)
    hist = [HistoryEntry(None, obs.text)]
    for a in actions:
        w, obs, out = step(w, a)
        hist.append(HistoryEntry(a, obs.text, str(out)))
    return w, hist


def test_trajectory_knowledge():
    cfg = EnvConfig.preset("cooking", "hard", layout="trajectory")
    w, hist = _history(cfg, TRAJECTORY[:12])
    k = knowledge_from_history("cooking", hist)
    assert k.recipe is not None and len(k.recipe) == 5
    assert {"knife", "red apple", "yellow potato", "block of cheese"} <= k.holding
    assert k.current == "bedroom" and set(k.visited) == {"kitchen", "corridor", "bedroom"}
    assert k.exits[("bedroom", "south")] == "corridor"
    assert k.door[("corridor", "north")] == "open"
    assert k.appliances == {"stove": "kitchen", "oven": "kitchen"}


def test_invalid_steps_are_ignored():
    cfg = EnvConfig.preset("coin", seed=3)
    _, hist = _history(cfg, [])
    before = problem_from_history("coin", hist)
    _, hist2 = _history(cfg, ["move up", "take coin"])
    assert problem_from_history("coin", hist2) == before


def test_closing_a_door_is_tracked():
    for seed in range(50):
        cfg = EnvConfig.preset("coin", seed=seed)
        w, obs = new_episode(cfg)
        d = next((d for d in ("north", "south", "east", "west") if f"open door to {d}" in obs.permitted_actions), None)
        if d:
            break
    _, hist = _history(cfg, [f"open door to {d}", f"move {d}"])
    dest = w.exits[(w.agent, d)]
    here, there = w.agent.replace(" ", "_"), dest.replace(" ", "_")
    opened = problem_from_history("coin", hist)
    assert atom("closed-door", here, there) not in opened.init
    back = {"north": "south", "south": "north", "east": "west", "west": "east"}[d]
    _, hist = _history(cfg, [f"open door to {d}", f"move {d}", f"close door to {back}"])
    closed = problem_from_history("coin", hist)
    assert {atom("closed-door", here, there), atom("closed-door", there, here)} <= closed.init


def test_coin_sighting_and_pickup():
    cfg = EnvConfig.preset("coin", seed=7, num_rooms=2)
    w, obs = new_episode(cfg)
    moves = [a for a in obs.permitted_actions if a.startswith(("open door", "move"))]
    actions = []
    if moves[0].startswith("open"):
        actions.append(moves[0])
        actions.append("move " + moves[0].split()[-1])
    else:
        actions.append(moves[0])
    w, hist = _history(cfg, actions)
    room = w.agent.replace(" ", "_")
    assert atom("coin-in", room) in problem_from_history("coin", hist).init
    w, hist = _history(cfg, actions + ["take coin"])
    p = problem_from_history("coin", hist)
    assert atom("has-coin") in p.init and atom("coin-in", room) not in p.init


@pytest.mark.parametrize("kind, diff", [("coin", "easy"), ("cooking", "easy"), ("cooking", "hard")])
def test_random_walks_stay_sound(kind, diff):
    for seed in range(12):
        rng = random.Random(seed)
        w, obs = new_episode(EnvConfig.preset(kind, diff, seed=seed))
        hist = [HistoryEntry(None, obs.text)]
        for _ in range(40):
            if w.status != "running":
                break
            a = rng.choice(list(obs.permitted_actions) + ["move north", "open fridge"])
            w, obs, out = step(w, a)
            hist.append(HistoryEntry(a, obs.text, str(out)))
            gt = oracle_view(w)
            wrong = [str(x) for x in problem_from_history(kind, hist).init if not gt.holds(x)]
            assert not wrong, (seed, a, wrong)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 2**16))
def test_generated_cooking_walks_stay_sound(seed, rseed):
    rng = random.Random(rseed)
    w, obs = new_episode(EnvConfig.preset("cooking", "hard", seed=seed))
    hist = [HistoryEntry(None, obs.text)]
    for _ in range(25):
        if w.status != "running":
            break
        a = rng.choice(candidate_actions(w))
        w, obs, out = step(w, a)
        hist.append(HistoryEntry(a, obs.text, str(out)))
    gt = oracle_view(w)
    assert all(gt.holds(x) for x in problem_from_history("cooking", hist).init)
