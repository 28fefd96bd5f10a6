"""Uniform random choice over the permitted actions."""

from __future__ import annotations

import random

from .base import MalformedResponse, PolicyOutput, PromptContext


def random_action(permitted: tuple[str, ...] | list[str], rng: random.Random) -> str:
    if not permitted:
        raise ValueError("no permitted actions to choose from")
    return rng.choice(list(permitted))


class RandomPolicy:
    """Action-gen only. Holds its own seeded generator, so give each episode its own instance."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)

    def propose(self, ctx: PromptContext) -> PolicyOutput:
        if not ctx.permitted_actions:
            raise MalformedResponse("no permitted actions")
        return PolicyOutput("action", random_action(ctx.permitted_actions, self.rng))
