"""Chat messages for each strategy. Rendering is a pure function of the context."""

from __future__ import annotations

import re
from typing import TYPE_CHECKING

from .base import MalformedResponse, PromptContext, Strategy

if TYPE_CHECKING:
    from ..agent.translator import HistoryEntry

FENCE = {"action": "action", "problem": "pddl", "edits": "edits"}

SYSTEM = (
    "You are playing a text game by keeping a PDDL model of the world. "
    "Answer with exactly one fenced code block and nothing else inside it."
)

TASK = {
    Strategy.ACTION_GEN: "Choose the next action. It must be one of the permitted actions.",
    Strategy.PDDL_GEN: (
        "Rewrite the whole problem file so it describes everything observed so far. "
        "Use only predicates and types declared in the domain file. Keep the goal unchanged."
    ),
    Strategy.PDDL_EDIT: (
        "Write the edits that bring the problem file up to date with the latest observation. "
        "One edit per line, using: add-object NAME - TYPE, delete-object NAME, add (FACT), "
        "delete (FACT), replace (OLD) with (NEW), set-goal (and ...). "
        "If nothing changed, return an empty block."
    ),
}

_DEMO_OBS = (
    "You are in the hallway. To the North you see a closed wooden door. "
    "To the East you see the corridor."
)

DEMONSTRATIONS = {
    Strategy.ACTION_GEN: (_DEMO_OBS, "open door to north"),
    Strategy.PDDL_GEN: (
        _DEMO_OBS,
        "(define (problem demo)\n  (:domain coin-collector)\n  (:objects\n    east - direction\n"
        "    hallway - room\n    north - direction\n    unk-hallway-east - room\n"
        "    unk-hallway-north - room\n  )\n  (:init\n    (at hallway)\n"
        "    (closed-door hallway unk-hallway-north)\n    (connected hallway unk-hallway-east east)\n"
        "    (connected hallway unk-hallway-north north)\n    (visited hallway)\n  )\n"
        "  (:goal (and\n    (has-coin)\n  ))\n)",
    ),
    Strategy.PDDL_EDIT: (
        _DEMO_OBS,
        "add-object hallway - room\nadd-object north - direction\nadd-object east - direction\n"
        "add-object unk-hallway-north - room\nadd-object unk-hallway-east - room\n"
        "add (at hallway)\nadd (visited hallway)\nadd (connected hallway unk-hallway-north north)\n"
        "add (closed-door hallway unk-hallway-north)\nadd (connected hallway unk-hallway-east east)",
    ),
}

def fenced(kind: str, body: str) -> str:
    return f"```{FENCE[kind]}\n{body}\n```"


def _history_lines(history: tuple[HistoryEntry, ...], window: int) -> list[str]:
    lines = []
    for h in history[-window:] if window > 0 else ():
        if h.action is not None:
            lines.append(f"> {h.action}")
            if h.outcome != "ok":
                lines.append(f"[{h.outcome}]")
        lines.append(h.observation)
    return lines


def demonstration(ctx: PromptContext) -> str:
    if ctx.demonstration:
        return ctx.demonstration
    obs, answer = DEMONSTRATIONS[ctx.strategy]
    return f"Observation:\n{obs}\n\nAnswer:\n{fenced(ctx.strategy.output_kind, answer)}"


def render_messages(ctx: PromptContext) -> list[dict[str, str]]:
    """System plus one user message; identical contexts give identical bytes."""
    parts = [TASK[ctx.strategy], "", "Example:", demonstration(ctx), ""]
    if ctx.strategy is not Strategy.ACTION_GEN:
        parts += ["Domain file:", ctx.domain_text.strip(), ""]
        parts += ["Current problem file:", (ctx.pf_text or "(none yet)").strip(), ""]
    parts += ["Recent observations:", *_history_lines(ctx.history, ctx.window), ""]
    if ctx.permitted_actions:
        parts += ["Permitted actions: " + ", ".join(ctx.permitted_actions), ""]
    parts.append(f"Answer inside a ```{FENCE[ctx.strategy.output_kind]} block.")
    return [{"role": "system", "content": SYSTEM}, {"role": "user", "content": "\n".join(parts)}]


_BLOCK = re.compile(r"```([A-Za-z0-9_-]*)[ \t]*\n(.*?)```", re.S)


def extract_block(text: str, kind: str) -> str:
    """Body of the first fenced block tagged for ``kind``, or of the only untagged one."""
    blocks = _BLOCK.findall(text)
    if not blocks:
        raise MalformedResponse("response has no fenced block")
    tag = FENCE[kind]
    tagged = [body for lang, body in blocks if lang.lower() == tag]
    if tagged:
        return tagged[0].strip()
    untagged = [body for lang, body in blocks if not lang]
    if len(untagged) == 1:
        return untagged[0].strip()
    raise MalformedResponse(f"no ```{tag} block in response")
