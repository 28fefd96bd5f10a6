"""Ground-truth stand-in: a perfect translator of what has been observed so far."""

from __future__ import annotations

from functools import lru_cache

from ..agent.edits import diff, format_edits
from ..agent.subgoals import action_map, hierarchy_for, select_goal, to_env_action
from ..agent.translator import empty_problem, problem_from_history
from ..envs.truth import domain_text
from ..pddl import Domain, parse_domain, parse_problem, render_problem
from ..planner import SearchLimits
from .base import PolicyOutput, PromptContext, Strategy


@lru_cache(maxsize=None)
def bundled_domain(kind: str) -> Domain:
    return parse_domain(domain_text(kind))


class OraclePolicy:
    """Reads the observation history exactly, never the hidden world.

    PDDL-gen gets the full problem file, PDDL-edit the minimal edit script
    from the current file, and Action-gen the first step of a plan for the
    best sub-goal.
    """

    name = "oracle"

    def __init__(self, limits: SearchLimits = SearchLimits()):
        self.limits = limits

    def propose(self, ctx: PromptContext) -> PolicyOutput:
        target = problem_from_history(ctx.kind, ctx.history)
        if ctx.strategy is Strategy.PDDL_GEN:
            return PolicyOutput("problem", render_problem(target))
        if ctx.strategy is Strategy.PDDL_EDIT:
            domain = bundled_domain(ctx.kind)
            current = parse_problem(ctx.pf_text, domain) if ctx.pf_text else empty_problem(ctx.kind)
            return PolicyOutput("edits", format_edits(diff(current, target)))
        domain = bundled_domain(ctx.kind)
        choice = select_goal(target, hierarchy_for(ctx.kind), domain, self.limits)
        return PolicyOutput("action", to_env_action(choice.plan[0], domain, action_map(ctx.kind)))
