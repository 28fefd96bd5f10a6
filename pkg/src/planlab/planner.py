"""Grounding, breadth-first forward search and plan validation."""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .pddl import (
    ROOT_TYPE,
    ActionSchema,
    ArityError,
    Atom,
    Domain,
    Literal,
    PddlError,
    Problem,
    TypeMismatch,
    link,
)
from .pddl.sexpr import SList, read_all

State = frozenset  # of Atom; closed world, absent means false


class NotApplicable(Exception):
    def __init__(self, action: "GroundAction", literal: Literal):
        self.action = action
        self.literal = literal
        super().__init__(f"{action} is not applicable: {literal} does not hold")


class UnknownAction(PddlError):
    pass


class UnknownObject(PddlError):
    pass


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: tuple[str, ...]
    pre_pos: frozenset[Atom] = field(default=frozenset(), compare=False)
    pre_neg: frozenset[Atom] = field(default=frozenset(), compare=False)
    add: frozenset[Atom] = field(default=frozenset(), compare=False)
    delete: frozenset[Atom] = field(default=frozenset(), compare=False)

    def __str__(self) -> str:
        return "(" + " ".join((self.name, *self.args)) + ")"

    @property
    def precondition(self) -> frozenset[Literal]:
        return frozenset([Literal(a, True) for a in self.pre_pos] + [Literal(a, False) for a in self.pre_neg])

    @property
    def effect(self) -> frozenset[Literal]:
        return frozenset([Literal(a, True) for a in self.add] + [Literal(a, False) for a in self.delete])

    def applicable(self, state: frozenset) -> bool:
        return self.pre_pos <= state and not (self.pre_neg & state)


def instantiate(schema: ActionSchema, args: Sequence[str]) -> GroundAction:
    binding = dict(zip(schema.param_names, args))

    def sub(lit: Literal) -> Atom:
        return Atom(lit.atom.predicate, tuple(binding[v] for v in lit.atom.args))

    return GroundAction(
        name=schema.name,
        args=tuple(args),
        pre_pos=frozenset(sub(l) for l in schema.precondition if l.positive),
        pre_neg=frozenset(sub(l) for l in schema.precondition if not l.positive),
        add=frozenset(sub(l) for l in schema.effect if l.positive),
        delete=frozenset(sub(l) for l in schema.effect if not l.positive),
    )


def _candidates(problem: Problem, type_name: str) -> list[str]:
    return sorted(problem.objects_of(type_name))


def ground(domain: Domain, problem: Problem) -> tuple[GroundAction, ...]:
    """Every type-consistent instantiation of every schema, sorted by rendered name."""
    link(domain, problem)
    out: list[GroundAction] = []
    for schema in domain.actions:
        pools = [_candidates(problem, t) for t in schema.param_types]
        for combo in itertools.product(*pools):
            out.append(instantiate(schema, combo))
    out.sort(key=str)
    return tuple(out)


def apply(state: frozenset, action: GroundAction) -> frozenset:
    """Successor state; raises NotApplicable naming the first violated literal."""
    for lit in sorted(action.precondition, key=str):
        if (lit.atom in state) != lit.positive:
            raise NotApplicable(action, lit)
    return (state - action.delete) | action.add


def goal_satisfied(state: frozenset, goal: Iterable[Literal]) -> bool:
    return all((lit.atom in state) == lit.positive for lit in goal)


class SolveStatus(str, Enum):
    PLAN = "plan"
    NO_SOLUTION = "no-solution"
    TIMEOUT = "timeout"
    FORMAT_ERROR = "format-error"


@dataclass(frozen=True)
class SearchLimits:
    wall_clock_cap: float = 30.0
    max_expanded_states: int = 1_000_000

    def __post_init__(self) -> None:
        if self.wall_clock_cap <= 0 or self.max_expanded_states <= 0:
            raise ValueError("search limits must be positive")


@dataclass(frozen=True)
class PlanResult:
    status: SolveStatus
    plan: tuple[GroundAction, ...] | None = None
    detail: str = ""
    expanded: int = 0

    @property
    def solved(self) -> bool:
        return self.status is SolveStatus.PLAN

    def plan_text(self) -> list[str]:
        return [str(a) for a in self.plan or ()]


def _static_predicates(domain: Domain) -> set[str]:
    dynamic = {lit.atom.predicate for a in domain.actions for lit in a.effect}
    return {p.name for p in domain.predicates} - dynamic


def _relevant(actions: list[GroundAction], goal: frozenset[Literal]) -> list[GroundAction]:
    """Drop actions that cannot help reach the goal.

    ``want_true`` collects atoms some kept action or the goal needs to hold,
    ``want_false`` those needed absent. An action that neither adds a
    ``want_true`` atom nor deletes a ``want_false`` atom can be cut from any
    plan without invalidating it, so shortest plans never contain one.
    """
    want_true = {lit.atom for lit in goal if lit.positive}
    want_false = {lit.atom for lit in goal if not lit.positive}
    keep: set[int] = set()
    changed = True
    while changed:
        changed = False
        for i, a in enumerate(actions):
            if i in keep:
                continue
            if (a.add & want_true) or (a.delete & want_false):
                keep.add(i)
                want_true |= a.pre_pos
                want_false |= a.pre_neg
                changed = True
    return [a for i, a in enumerate(actions) if i in keep]


def prepare_actions(domain: Domain, problem: Problem) -> list[GroundAction]:
    """Ground actions that can possibly matter for ``problem``'s goal, in canonical order."""
    static = _static_predicates(domain)
    init = problem.init
    usable = []
    for a in ground(domain, problem):
        if any(x.predicate in static and x not in init for x in a.pre_pos):
            continue
        if any(x.predicate in static and x in init for x in a.pre_neg):
            continue
        usable.append(a)
    return _relevant(usable, problem.goal)


def solve(domain: Domain, problem: Problem, limits: SearchLimits = SearchLimits()) -> PlanResult:
    """Breadth-first search for a shortest plan.

    Successors are generated in lexicographic order of the rendered ground
    action, so the plan returned is the lexicographically first among the
    shortest ones and never depends on timing.
    """
    start_time = time.monotonic()
    try:
        actions = prepare_actions(domain, problem)
    except PddlError as exc:
        return PlanResult(SolveStatus.FORMAT_ERROR, detail=str(exc))

    goal_pos = frozenset(l.atom for l in problem.goal if l.positive)
    goal_neg = frozenset(l.atom for l in problem.goal if not l.positive)

    def is_goal(s: frozenset) -> bool:
        return goal_pos <= s and not (goal_neg & s)

    init = frozenset(problem.init)
    if is_goal(init):
        return PlanResult(SolveStatus.PLAN, plan=())

    # Index actions by one positive precondition so each expansion only
    # inspects plausible candidates; rank keeps the canonical order.
    by_atom: dict[Atom, list[int]] = {}
    always: list[int] = []
    for rank, a in enumerate(actions):
        if a.pre_pos:
            by_atom.setdefault(min(a.pre_pos), []).append(rank)
        else:
            always.append(rank)

    parents: dict[frozenset, tuple[frozenset, int] | None] = {init: None}
    frontier = deque([init])
    expanded = 0
    while frontier:
        if expanded >= limits.max_expanded_states:
            return PlanResult(SolveStatus.TIMEOUT, detail="expanded-state limit reached", expanded=expanded)
        if expanded % 64 == 0 and time.monotonic() - start_time > limits.wall_clock_cap:
            return PlanResult(SolveStatus.TIMEOUT, detail="wall-clock cap reached", expanded=expanded)
        state = frontier.popleft()
        expanded += 1
        ranks = list(always)
        for x in state:
            hit = by_atom.get(x)
            if hit:
                ranks.extend(hit)
        ranks.sort()
        for rank in ranks:
            a = actions[rank]
            if not a.applicable(state):
                continue
            nxt = (state - a.delete) | a.add
            if nxt in parents:
                continue
            parents[nxt] = (state, rank)
            if is_goal(nxt):
                return PlanResult(SolveStatus.PLAN, plan=_backtrack(parents, nxt, actions), expanded=expanded)
            frontier.append(nxt)
    return PlanResult(SolveStatus.NO_SOLUTION, detail="state space exhausted", expanded=expanded)


def _backtrack(parents, state, actions) -> tuple[GroundAction, ...]:
    steps = []
    while parents[state] is not None:
        prev, rank = parents[state]
        steps.append(actions[rank])
        state = prev
    return tuple(reversed(steps))


def solve_text(domain_text: str, problem_text: str, limits: SearchLimits = SearchLimits()) -> PlanResult:
    """Parse then solve; any parse or type error becomes a FORMAT_ERROR result."""
    from .pddl import parse_domain, parse_problem

    try:
        domain = parse_domain(domain_text)
        problem = parse_problem(problem_text, domain)
    except PddlError as exc:
        return PlanResult(SolveStatus.FORMAT_ERROR, detail=str(exc))
    return solve(domain, problem, limits)


@dataclass(frozen=True)
class ValidationReport:
    accepted: bool
    failed_step: int | None = None  # 1-based; None when the plan ran but missed the goal
    failed_literal: Literal | None = None
    message: str = ""
    final_state: frozenset = frozenset()


def parse_plan(text: str) -> list[tuple[str, tuple[str, ...]]]:
    """Read a plan: one ``(action arg ...)`` per line; ``;`` comments are ignored."""
    steps = []
    for expr in read_all(text):
        if not isinstance(expr, SList) or not expr or isinstance(expr[0], SList):
            raise UnknownAction(f"malformed plan step {expr!r}")
        steps.append((str(expr[0]), tuple(str(x) for x in expr[1:])))
    return steps


def resolve_step(domain: Domain, problem: Problem, step) -> GroundAction:
    if isinstance(step, GroundAction):
        name, args = step.name, step.args
    elif isinstance(step, str):
        parsed = parse_plan(step if step.strip().startswith("(") else f"({step})")
        if len(parsed) != 1:
            raise UnknownAction(f"expected one action, got {step!r}")
        name, args = parsed[0]
    else:
        name, args = step
    schema = domain.action(name)
    if schema is None:
        raise UnknownAction(f"unknown action {name}")
    if len(args) != len(schema.parameters):
        raise ArityError(f"{name} takes {len(schema.parameters)} arguments, got {len(args)}")
    types = problem.object_types
    for arg, (var, want) in zip(args, schema.parameters):
        if arg not in types:
            raise UnknownObject(f"unknown object {arg} in ({name} {' '.join(args)})")
        if want != ROOT_TYPE and types[arg] != want:
            raise TypeMismatch(f"{arg} is a {types[arg]}, {name} expects {want} for {var}")
    return instantiate(schema, args)


def validate_plan(domain: Domain, problem: Problem, plan: Sequence) -> ValidationReport:
    """Replay ``plan`` from the initial state and check the goal."""
    actions = [resolve_step(domain, problem, s) for s in plan]
    state = frozenset(problem.init)
    for i, a in enumerate(actions, start=1):
        try:
            state = apply(state, a)
        except NotApplicable as exc:
            return ValidationReport(False, i, exc.literal, f"step {i} {a}: {exc.literal} does not hold", state)
    for lit in sorted(problem.goal, key=str):
        if (lit.atom in state) != lit.positive:
            return ValidationReport(False, None, lit, f"goal {lit} not satisfied after the plan", state)
    return ValidationReport(True, final_state=state, message="plan valid")
