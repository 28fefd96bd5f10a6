"""The observe, update, plan, act loop."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Callable

from ..envs import EnvConfig, Observation, StepOutcome, new_episode, step
from ..envs.truth import domain_text, placeholder
from ..pddl import Domain, PddlError, Problem, parse_domain, parse_problem, render_problem
from ..planner import GroundAction, SearchLimits, UnknownAction, UnknownObject, resolve_step
from ..policies.base import PolicyError, PolicyOutput, PromptContext, Strategy
from .edits import EditError, apply_edits, parse_edits
from .subgoals import Stuck, action_map, hierarchy_for, select_goal, to_env_action
from .translator import HistoryEntry, empty_problem

log = logging.getLogger(__name__)

PLACEHOLDER = placeholder("", "")[:4]  # "unk-"


class PolicyFault(RuntimeError):
    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


@dataclass
class AgentState:
    kind: str
    pf: Problem | None
    history: list[HistoryEntry] = field(default_factory=list)
    budget: int = 0
    faults: list[str] = field(default_factory=list)

    @property
    def visited(self) -> set[str]:
        if self.pf is None:
            return set()
        return {a.args[0] for a in self.pf.init if a.predicate == "visited"}

    @property
    def frontier(self) -> list[str]:
        """Placeholder rooms standing for exits not yet explored."""
        if self.pf is None:
            return []
        return [o for o in self.pf.objects_of("room") if o.startswith(PLACEHOLDER)]

    def known_rooms(self) -> set[str]:
        if self.pf is None:
            return set()
        return {o for o in self.pf.objects_of("room") if not o.startswith(PLACEHOLDER)}


@dataclass
class StepRecord:
    step: int
    action: str
    outcome: str
    observation: str
    pf_hash: str | None = None
    plan: list[str] | None = None
    goal: str | None = None
    pf: str | None = None


@dataclass
class EpisodeLog:
    config: dict
    strategy: str
    policy: str
    steps: list[StepRecord] = field(default_factory=list)
    initial_observation: str = ""
    initial_pf: str | None = None
    won: bool = False
    failure_reason: str | None = None
    faults: list[str] = field(default_factory=list)

    @property
    def num_steps(self) -> int:
        return len(self.steps)

    @property
    def invalid_steps(self) -> int:
        return sum(1 for s in self.steps if s.outcome.startswith("invalid"))

    def header(self) -> dict:
        return {
            "type": "header",
            "config": self.config,
            "strategy": self.strategy,
            "policy": self.policy,
            "observation": self.initial_observation,
            "pf": self.initial_pf,
        }

    def result(self) -> dict:
        return {
            "type": "result",
            "won": self.won,
            "steps": self.num_steps,
            "invalid_steps": self.invalid_steps,
            "failure_reason": self.failure_reason,
            "faults": self.faults,
        }

    def to_jsonl(self) -> str:
        lines = [self.header()]
        lines += [{"type": "step", **asdict(s)} for s in self.steps]
        lines.append(self.result())
        return "".join(json.dumps(x, sort_keys=True) + "\n" for x in lines)

    @classmethod
    def from_jsonl(cls, text: str) -> "EpisodeLog":
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        head = next(r for r in rows if r["type"] == "header")
        res = next((r for r in rows if r["type"] == "result"), None)
        if res is None:
            raise ValueError("episode log has no result line")
        steps = []
        for r in rows:
            if r["type"] == "step":
                r = dict(r)
                r.pop("type")
                steps.append(StepRecord(**r))
        return cls(
            config=head["config"],
            strategy=head["strategy"],
            policy=head["policy"],
            steps=steps,
            initial_observation=head.get("observation", ""),
            initial_pf=head.get("pf"),
            won=res["won"],
            failure_reason=res["failure_reason"],
            faults=list(res.get("faults", [])),
        )


def pf_hash(p: Problem | None) -> str | None:
    if p is None:
        return None
    return hashlib.sha256(render_problem(p).encode()).hexdigest()[:16]


def _context(state: AgentState, strategy: Strategy, dtext: str, obs: Observation, window: int) -> PromptContext:
    return PromptContext(
        strategy=strategy,
        kind=state.kind,
        domain_text=dtext if strategy is not Strategy.ACTION_GEN else "",
        pf_text=render_problem(state.pf) if state.pf is not None and strategy is not Strategy.ACTION_GEN else None,
        history=tuple(state.history),
        permitted_actions=obs.permitted_actions,
        window=window,
    )


def _interpret(out: PolicyOutput, strategy: Strategy, state: AgentState, domain: Domain) -> Problem:
    if strategy is Strategy.PDDL_GEN:
        return parse_problem(out.text, domain)
    return apply_edits(state.pf, parse_edits(out.text), domain)


def integrate_observation(
    state: AgentState,
    obs: Observation,
    strategy: Strategy,
    policy,
    domain: Domain,
    dtext: str,
    window: int = 8,
) -> AgentState:
    """Ask the policy for the updated problem file; retry once, then keep the old one."""
    if strategy is Strategy.ACTION_GEN:
        raise ValueError("Action-gen keeps no problem file")
    ctx = _context(state, strategy, dtext, obs, window)
    errors = []
    for _attempt in range(2):
        try:
            out = policy.propose(ctx)
            state.pf = _interpret(out, strategy, state, domain)
            return state
        except (PolicyError, PddlError, EditError) as exc:
            errors.append(f"{type(exc).__name__}: {exc}")
    detail = "; ".join(errors)
    log.warning("policy fault after retry: %s", detail)
    state.faults.append(detail)
    return state


def _plan_still_usable(plan: list[GroundAction], pf: Problem, domain: Domain) -> bool:
    try:
        for a in plan:
            resolve_step(domain, pf, a)
    except (UnknownAction, UnknownObject, PddlError):
        return False
    return True


def run_episode(
    cfg: EnvConfig,
    strategy: Strategy | str,
    policy,
    domain: Domain | None = None,
    *,
    replan: str = "early",
    limits: SearchLimits = SearchLimits(),
    window: int = 8,
    keep_pf: bool = False,
    on_step: Callable[[StepRecord], None] | None = None,
) -> EpisodeLog:
    """Play one episode. Failures end up in the log's ``failure_reason``; nothing is raised."""
    strategy = Strategy(strategy)
    if replan not in ("early", "on-completion"):
        raise ValueError("replan must be 'early' or 'on-completion'")
    dtext = domain_text(cfg.kind)
    domain = domain or parse_domain(dtext)
    mapping = action_map(cfg.kind)
    hierarchy = hierarchy_for(cfg.kind)

    w, obs = new_episode(cfg)
    log_ = EpisodeLog(cfg.to_dict(), strategy.value, getattr(policy, "name", type(policy).__name__))
    log_.initial_observation = obs.text
    pdl = strategy is not Strategy.ACTION_GEN
    state = AgentState(cfg.kind, empty_problem(cfg.kind) if pdl else None, budget=cfg.max_steps)
    state.history.append(HistoryEntry(None, obs.text, "ok"))
    if pdl:
        integrate_observation(state, obs, strategy, policy, domain, dtext, window)
        log_.initial_pf = render_problem(state.pf) if keep_pf else None

    plan: list[GroundAction] = []
    goal_text: str | None = None

    def finish(reason: str | None) -> EpisodeLog:
        log_.failure_reason = reason
        log_.won = reason is None
        log_.faults = list(state.faults)
        return log_

    while True:
        if state.budget <= 0:
            return finish("budget-exhausted")
        if pdl:
            if not plan:
                try:
                    choice = select_goal(state.pf, hierarchy, domain, limits)
                except Stuck:
                    return finish("policy-fault" if state.faults else "stuck")
                plan = list(choice.plan)
                goal_text = choice.goal_text()
            current = plan.pop(0)
            action = to_env_action(current, domain, mapping)
        else:
            ctx = _context(state, strategy, dtext, obs, window)
            action = None
            errors = []
            for _attempt in range(2):
                try:
                    out = policy.propose(ctx)
                    action = out.text.strip()
                    break
                except Stuck:
                    return finish("stuck")
                except PolicyError as exc:
                    errors.append(f"{type(exc).__name__}: {exc}")
            if action is None:
                state.faults.append("; ".join(errors))
                return finish("policy-fault")

        rooms_before = state.known_rooms()
        w, obs, outcome = step(w, action)
        state.budget -= 1
        state.history.append(HistoryEntry(action, obs.text, str(outcome)))
        if pdl:
            integrate_observation(state, obs, strategy, policy, domain, dtext, window)
        rec = StepRecord(
            step=w.steps,
            action=action,
            outcome=str(outcome),
            observation=obs.text,
            pf_hash=pf_hash(state.pf),
            plan=[str(a) for a in plan] if pdl else None,
            goal=goal_text,
            pf=render_problem(state.pf) if keep_pf and state.pf is not None else None,
        )
        log_.steps.append(rec)
        if on_step is not None:
            on_step(rec)
        if outcome.kind == "won":
            return finish(None)
        if outcome.kind == "lost":
            return finish(f"lost: {outcome.reason}")
        if pdl and plan:
            new_room = state.known_rooms() - rooms_before
            if outcome.kind == "invalid" or not _plan_still_usable(plan, state.pf, domain):
                plan = []
            elif replan == "early" and new_room:
                plan = []


__all__ = [
    "AgentState",
    "EpisodeLog",
    "PolicyFault",
    "StepOutcome",
    "StepRecord",
    "integrate_observation",
    "pf_hash",
    "run_episode",
]
