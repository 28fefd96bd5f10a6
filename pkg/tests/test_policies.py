from __future__ import annotations

import random

import pytest

from planlab.agent import HistoryEntry, run_episode
from planlab.envs import EnvConfig
from planlab.policies import (
    MalformedResponse,
    OraclePolicy,
    PromptContext,
    RandomPolicy,
    Strategy,
    extract_block,
    random_action,
    render_messages,
)
from planlab.policies.prompts import DEMONSTRATIONS, FENCE


def _ctx(strategy=Strategy.PDDL_EDIT, n=3, window=8, **kw):
    hist = tuple(HistoryEntry(None if i == 0 else f"move {i}", f"You are in room {i}.",
                              "ok" if i % 2 else "invalid(no exit)") for i in range(n))
    return PromptContext(strategy, "coin", "(define (domain coin-collector))", "(define (problem p))", hist,
                         ("look around", "move west"), window=window, **kw)


def test_random_action_single_choice():
    assert random_action(["look around"], random.Random(5)) == "look around"
    with pytest.raises(ValueError):
        random_action([], random.Random(0))


def test_random_policy_is_reproducible():
    ctx = _ctx(Strategy.ACTION_GEN)
    a = [RandomPolicy(3).propose(ctx).text for _ in range(1)]
    p, q = RandomPolicy(3), RandomPolicy(3)
    assert [p.propose(ctx).text for _ in range(20)] == [q.propose(ctx).text for _ in range(20)]
    assert a[0] in ctx.permitted_actions


def test_random_policy_without_choices():
    with pytest.raises(MalformedResponse):
        RandomPolicy(0).propose(PromptContext(Strategy.ACTION_GEN, "coin"))


def test_prompts_are_deterministic():
    assert render_messages(_ctx()) == render_messages(_ctx())
    for s in Strategy:
        msgs = render_messages(_ctx(s))
        assert [m["role"] for m in msgs] == ["system", "user"]
        assert f"```{FENCE[s.output_kind]}" in msgs[1]["content"]


def test_action_gen_prompt_has_no_pddl():
    user = render_messages(_ctx(Strategy.ACTION_GEN))[1]["content"]
    assert "Domain file" not in user and "problem file" not in user
    assert "Permitted actions: look around, move west" in user


def test_history_window_and_outcomes():
    user = render_messages(_ctx(n=10, window=3))[1]["content"]
    assert "room 9" in user and "room 7" in user and "room 6" not in user
    assert "[invalid(no exit)]" in user


def test_custom_demonstration_replaces_default():
    user = render_messages(_ctx(demonstration="DEMO TEXT"))[1]["content"]
    assert "DEMO TEXT" in user
    assert DEMONSTRATIONS[Strategy.PDDL_EDIT][1] not in user


@pytest.mark.parametrize("text, kind, want", [
    ("Sure.\n```edits\nadd (at a)\n```\n", "edits", "add (at a)"),
    ("```\nmove west\n```", "action", "move west"),
    ("```pddl\n(define (problem p))\n```\n```action\nlook around\n```", "action", "look around"),
    ("```PDDL \n(define (problem p))\n```", "problem", "(define (problem p))"),
])
def test_extract_block(text, kind, want):
    assert extract_block(text, kind) == want


@pytest.mark.parametrize("text", [
    "I would move west.",
    "```pddl\n(define)\n```",
    "```\na\n```\n```\nb\n```",
    "```action move west```",
])
def test_extract_block_rejects(text):
    with pytest.raises(MalformedResponse):
        extract_block(text, "action")


def test_oracle_action_gen_wins_the_reference_kitchen():
    log = run_episode(EnvConfig.preset("cooking", "hard", layout="trajectory"), "action-gen", OraclePolicy())
    assert log.won and log.invalid_steps == 0
    actions = [s.action for s in log.steps]
    assert "cook yellow potato in barbeque" in actions and actions[-2:] == ["prepare meal", "eat meal"]


def test_oracle_outputs_match_strategy():
    cfg = EnvConfig.preset("coin", seed=0)
    for s in Strategy:
        log = run_episode(cfg, s, OraclePolicy())
        assert log.won, s
