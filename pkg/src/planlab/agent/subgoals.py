"""Goal fallback: try the final goal, otherwise the nearest useful sub-goal."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable

from ..envs.truth import display
from ..envs.world import PAST
from ..pddl import Atom, Domain, Literal, Problem
from ..planner import GroundAction, SearchLimits, goal_satisfied, solve

Goal = frozenset  # of Literal
Generator = Callable[[Problem], list[Goal]]


class Stuck(RuntimeError):
    """No generator produced a goal the planner could reach."""


@dataclass(frozen=True)
class SubgoalHierarchy:
    kind: str
    generators: tuple[tuple[str, Generator], ...]


@dataclass(frozen=True)
class GoalChoice:
    generator: str
    goal: Goal
    plan: tuple[GroundAction, ...]

    def goal_text(self) -> str:
        return " ".join(str(l) for l in sorted(self.goal, key=str))


def _lit(pred: str, *args: str, positive: bool = True) -> Literal:
    return Literal(Atom(pred, tuple(args)), positive)


def _facts(p: Problem, pred: str) -> list[tuple[str, ...]]:
    return sorted(a.args for a in p.init if a.predicate == pred)


def unvisited_rooms(p: Problem) -> list[str]:
    seen = {args[0] for args in _facts(p, "visited")}
    return [o for o in p.objects_of("room") if o not in seen]


def explore_rooms(p: Problem) -> list[Goal]:
    return [frozenset({_lit("at", r)}) for r in unvisited_rooms(p)]


def take_coin(p: Problem) -> list[Goal]:
    return [p.goal] if _facts(p, "coin-in") else []


def recipe_items(p: Problem) -> list[str]:
    return [args[0] for args in _facts(p, "in-recipe")]


def full_meal(p: Problem) -> list[Goal]:
    if Atom("recipe-read", ()) not in p.init:
        return []
    if Atom("meal-ready", ()) in p.init:
        return [p.goal]
    items = recipe_items(p)
    if not items or any(Atom("holding", (i,)) not in p.init for i in items):
        return []
    goal = set(p.goal) | {_lit("holding", i) for i in items}
    for a in p.init:
        if a.predicate.startswith("recipe-") and a.args:
            goal.add(_lit(PAST[a.predicate[len("recipe-"):]], a.args[0]))
    return [frozenset(goal)]


def read_cookbook(p: Problem) -> list[Goal]:
    if Atom("recipe-read", ()) in p.init or not p.objects_of("cookbook"):
        return []
    return [frozenset({_lit("recipe-read")})]


def gather(p: Problem) -> list[Goal]:
    if Atom("meal-ready", ()) in p.init or Atom("meal-eaten", ()) in p.init:
        return []
    located = {args[0] for args in _facts(p, "in")} | {args[0] for args in _facts(p, "inside")}
    return [frozenset({_lit("holding", i)}) for i in recipe_items(p) if i in located]


def explore_kitchen_world(p: Problem) -> list[Goal]:
    goals = explore_rooms(p)
    goals += [frozenset({_lit("closed", c, positive=False)}) for (c,) in _facts(p, "closed")]
    return goals


COIN_HIERARCHY = SubgoalHierarchy("coin", (("take-coin", take_coin), ("explore", explore_rooms)))
COOKING_HIERARCHY = SubgoalHierarchy(
    "cooking",
    (
        ("prepare-meal", full_meal),
        ("read-cookbook", read_cookbook),
        ("gather", gather),
        ("explore", explore_kitchen_world),
    ),
)


def hierarchy_for(kind: str) -> SubgoalHierarchy:
    return COIN_HIERARCHY if kind == "coin" else COOKING_HIERARCHY


def select_goal(p: Problem, h: SubgoalHierarchy, d: Domain, limits: SearchLimits = SearchLimits()) -> GoalChoice:
    """First generator with a reachable candidate wins; among its candidates the
    shortest plan wins, ties broken by the rendered plan then the goal."""
    for label, gen in h.generators:
        best = None
        for goal in gen(p):
            if goal_satisfied(p.init, goal):
                continue
            result = solve(d, p.with_goal(goal), limits)
            if not result.solved:
                continue
            key = (len(result.plan), result.plan_text(), sorted(map(str, goal)))
            if best is None or key < best[0]:
                best = (key, GoalChoice(label, goal, result.plan))
        if best is not None:
            return best[1]
    raise Stuck("no sub-goal is reachable from the current problem file")


# -- PDDL action -> game command ------------------------------------------------


@lru_cache(maxsize=None)
def action_map(kind: str) -> dict[str, str]:
    text = resources.files("planlab.assets.domains").joinpath(f"{kind}.actions.json").read_text()
    return json.loads(text)


def to_env_action(a: GroundAction, d: Domain, mapping: dict[str, str]) -> str:
    schema = d.action(a.name)
    binding = {var.lstrip("?"): display(arg) for var, arg in zip(schema.param_names, a.args)}
    return mapping[a.name].format(**binding)
