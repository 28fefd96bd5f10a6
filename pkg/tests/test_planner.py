from __future__ import annotations

import pytest
from conftest import load_pair
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import brute_force_min_length, naive_ground, replay

from planlab.assets import manifest, read_text
from planlab.envs import EnvConfig, export_pddl, new_episode
from planlab.pddl import Atom, atom, parse_domain, parse_problem, pos
from planlab.planner import (
    GroundAction,
    NotApplicable,
    SearchLimits,
    SolveStatus,
    UnknownAction,
    apply,
    ground,
    parse_plan,
    solve,
    solve_text,
    validate_plan,
)

EMPTY_EFFECT = """
(define (domain idle)
  (:predicates (p))
  (:action wait :parameters () :precondition (and) :effect (and)))
"""


def test_pick_lock_grounds_four_ways():
    d, p = load_pair("fixtures/domains/pick-lock-typed.pddl", "fixtures/problems/pick-lock-typed-1.pddl")
    picks = [a for a in ground(d, p) if a.name == "pick-lock"]
    assert len(picks) == 4
    assert {a.args[2:] for a in picks} == {(x, y) for x in ("cell", "hall") for y in ("cell", "hall")}


def test_untyped_grounding_matches_naive_product(pick_lock):
    d, p = pick_lock
    assert len(ground(d, p)) == len(naive_ground(d, p)) == 4**4


def test_zero_parameter_action_grounds_once():
    d = parse_domain(EMPTY_EFFECT)
    p = parse_problem("(define (problem x) (:domain idle) (:objects) (:init) (:goal (p)))", d)
    assert [str(a) for a in ground(d, p)] == ["(wait)"]


def test_missing_type_gives_no_instantiations(nav):
    d, _ = nav
    p = parse_problem("(define (problem x) (:domain nav) (:objects a b - room) (:init (at a)) (:goal (at b)))", d)
    assert [a for a in ground(d, p) if a.name == "get"] == []


def test_apply_pick_lock(pick_lock):
    d, p = pick_lock
    a = next(a for a in ground(d, p) if a.args == ("lock1", "door1", "cell", "hall"))
    after = apply(p.init, a)
    assert atom("locked", "door1") not in after
    assert {atom("picked", "lock1"), atom("accessible", "cell", "hall")} <= after


def test_empty_effect_is_identity():
    d = parse_domain(EMPTY_EFFECT)
    p = parse_problem("(define (problem x) (:domain idle) (:objects) (:init (p)) (:goal (p)))", d)
    (wait,) = ground(d, p)
    assert apply(p.init, wait) == p.init


def test_apply_names_missing_precondition(nav):
    d, p = nav
    get = next(a for a in ground(d, p) if str(a) == "(get coin c)")
    with pytest.raises(NotApplicable) as info:
        apply(p.init, get)
    assert info.value.literal == pos("at", "c")


def test_goal_already_true_gives_empty_plan(nav):
    d, p = nav
    r = solve(d, p.with_goal([pos("at", "a")]))
    assert r.solved and r.plan == ()


@pytest.mark.parametrize("entry", [m for m in manifest() if m["expect"] == "plan"], ids=lambda m: m["problem"])
def test_gold_plans_reproduced(entry):
    d, p = load_pair(entry["domain"], entry["problem"])
    r = solve(d, p)
    assert r.solved
    assert r.plan_text() == [f"({n} {' '.join(a)})".replace(" )", ")") for n, a in parse_plan(read_text(entry["plan"]))]
    assert validate_plan(d, p, r.plan).accepted
    assert replay(d, p, [(a.name, a.args) for a in r.plan])


def test_co_location_matters():
    d, p = load_pair("fixtures/domains/nav.pddl", "fixtures/problems/nav-1.pddl")
    honest = solve(d, p).plan_text()
    cheat = parse_domain(read_text("fixtures/domains/nav-cheat.pddl"))
    shortcut = solve(cheat, parse_problem(read_text("fixtures/problems/nav-1.pddl"), cheat)).plan_text()
    assert [s.split()[0] for s in honest].count("(go") >= 1
    assert not any(s.startswith("(go") for s in shortcut)
    assert shortcut[-1].startswith("(get")


def test_failure_statuses():
    d, p = load_pair("fixtures/domains/nav.pddl", "fixtures/problems/nav-unreachable.pddl")
    assert solve(d, p).status is SolveStatus.NO_SOLUTION
    d, p = load_pair("fixtures/domains/blocksworld.pddl", "fixtures/problems/blocksworld-large.pddl")
    r = solve(d, p, SearchLimits(wall_clock_cap=0.1, max_expanded_states=500))
    assert r.status is SolveStatus.TIMEOUT
    bad = solve_text(read_text("fixtures/domains/nav.pddl"), read_text("fixtures/invalid/nav-undeclared-predicate.pddl"))
    assert bad.status is SolveStatus.FORMAT_ERROR and "glowing" in bad.detail
    assert solve_text("(define (domain", "").status is SolveStatus.FORMAT_ERROR


def test_timeout_is_not_misreported_as_no_solution():
    d, p = load_pair("fixtures/domains/blocksworld.pddl", "fixtures/problems/blocksworld-large.pddl")
    assert solve(d, p, SearchLimits(max_expanded_states=50)).detail == "expanded-state limit reached"


def test_larger_cap_returns_same_plan():
    d, p = load_pair("fixtures/domains/blocksworld.pddl", "fixtures/problems/blocksworld-2.pddl")
    small = solve(d, p, SearchLimits(wall_clock_cap=5))
    big = solve(d, p, SearchLimits(wall_clock_cap=60, max_expanded_states=10**7))
    assert small.solved and small.plan == big.plan


def test_solve_is_deterministic():
    d, p = load_pair("fixtures/domains/purify-water.pddl", "fixtures/problems/purify-water-1.pddl")
    assert solve(d, p).plan_text() == solve(d, p).plan_text()


def test_search_limits_must_be_positive():
    with pytest.raises(ValueError):
        SearchLimits(wall_clock_cap=0)
    with pytest.raises(ValueError):
        SearchLimits(max_expanded_states=-1)


def test_validate_accepts_gold_and_rejects_swapped(nav):
    d, p = nav
    plan = parse_plan(read_text("fixtures/plans/nav-2.plan"))
    assert validate_plan(d, p, plan).accepted
    swapped = [plan[1], plan[0], *plan[2:]]
    report = validate_plan(d, p, swapped)
    assert not report.accepted and report.failed_step == 1
    assert report.failed_literal == pos("at", "d")


def test_validate_empty_plan_reports_goal(nav):
    d, p = nav
    report = validate_plan(d, p, [])
    assert not report.accepted and report.failed_step is None
    assert report.failed_literal in p.goal and "goal" in report.message


def test_validate_unknown_action_and_object(nav):
    d, p = nav
    with pytest.raises(UnknownAction):
        validate_plan(d, p, ["(fly a b)"])
    with pytest.raises(Exception, match="unknown object"):
        validate_plan(d, p, ["(go a z)"])


def test_negative_goal_literals():
    d = parse_domain(read_text("domains/coin.pddl"))
    p = parse_problem(read_text("fixtures/problems/coin-easy-s1.pddl"), d)
    r = solve(d, p.with_goal([pos("visited", "supermarket")]))
    assert r.solved
    stay = solve(d, p.with_goal([pos("at", "laundry_room"), pos("visited", "supermarket")]))
    assert stay.solved and len(stay.plan) == len(r.plan) + 1


def _small_instances(n: int):
    out = []
    for rooms in (2, 3, 4):
        for seed in range(n):
            w, _ = new_episode(EnvConfig.preset("coin", seed=seed, num_rooms=rooms))
            dt, pt = export_pddl(w)
            d = parse_domain(dt)
            out.append((f"coin-{rooms}-{seed}", d, parse_problem(pt, d)))
    return out


@pytest.mark.parametrize("name, d, p", _small_instances(4), ids=lambda x: x if isinstance(x, str) else "")
def test_bfs_matches_brute_force(name, d, p):
    r = solve(d, p)
    want = brute_force_min_length(d, p, 8)
    assert want is not None and r.solved and len(r.plan) == want


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 4))
def test_plans_are_sound(seed, rooms):
    w, _ = new_episode(EnvConfig.preset("coin", seed=seed, num_rooms=rooms))
    dt, pt = export_pddl(w)
    d = parse_domain(dt)
    p = parse_problem(pt, d)
    r = solve(d, p)
    assert r.solved
    assert validate_plan(d, p, r.plan).accepted
    assert replay(d, p, [(a.name, a.args) for a in r.plan])


def test_ground_action_text_round_trips(nav):
    d, p = nav
    for a in ground(d, p)[:5]:
        assert isinstance(a, GroundAction)
        ((name, args),) = parse_plan(str(a))
        assert (name, args) == (a.name, a.args)
        assert all(isinstance(x, Atom) for x in a.add | a.delete)
