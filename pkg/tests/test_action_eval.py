from __future__ import annotations

import itertools
import random
import re

import pytest
from conftest import load_pair
from hypothesis import given, settings
from hypothesis import strategies as st

from planlab.action_eval import (
    actions_equivalent,
    canonical_form,
    evaluate_texts,
    extrinsic_score,
    intrinsic_score,
)
from planlab.assets import read_text
from planlab.pddl import ActionSchema, Atom, Literal, parse_domain, parse_problem, render_domain

PICK_LOCK = read_text("fixtures/domains/pick-lock.pddl")


def _domain(rel):
    return parse_domain(read_text(rel))


def _only(domain):
    (a,) = domain.actions
    return a


def test_renamed_and_shuffled_is_equivalent():
    text = PICK_LOCK
    for old, new in (("?lock", "?l"), ("?door", "?d"), ("?room1", "?from"), ("?room2", "?to")):
        text = text.replace(old, new)
    text = text.replace(
        "(not (picked ?l))\n          (locked ?d)", "(locked ?d)\n          (not (picked ?l))")
    gold, pred = _only(parse_domain(PICK_LOCK)), _only(parse_domain(text))
    assert pred.param_names != gold.param_names
    assert actions_equivalent(pred, gold)
    assert canonical_form(pred) == canonical_form(gold)


def test_missing_effect_is_not_equivalent():
    text = PICK_LOCK.replace("(not (locked ?door))\n", "")
    pred, gold = _only(parse_domain(text)), _only(parse_domain(PICK_LOCK))
    assert not actions_equivalent(pred, gold)
    score = intrinsic_score(parse_domain(text), parse_domain(PICK_LOCK)).actions[0]
    assert (score.parameters, score.preconditions, score.effects) == (True, True, False)


def test_swapped_arguments_are_not_a_renaming():
    text = PICK_LOCK.replace("(accessible ?room1 ?room2)\n      )", "(accessible ?room2 ?room1)\n      )")
    assert not actions_equivalent(_only(parse_domain(text)), _only(parse_domain(PICK_LOCK)))


def test_emptied_preconditions():
    text = re.sub(r":precondition \(and.*?\)\n      \)", ":precondition (and)", PICK_LOCK, flags=re.S)
    pred = parse_domain(text)
    assert _only(pred).precondition == frozenset()
    s = intrinsic_score(pred, parse_domain(PICK_LOCK))
    assert (s.parameters, s.preconditions, s.effects, s.action_accuracy) == (1.0, 0.0, 1.0, 0.0)


def test_toy_pair():
    s = intrinsic_score(_domain("fixtures/domains/toy-pred.pddl"), _domain("fixtures/domains/toy-gold.pddl"))
    by_name = {a.name: a for a in s.actions}
    assert by_name["wash"].equivalent and by_name["cook"].equivalent
    assert not by_name["slice"].equivalent and by_name["slice"].preconditions and not by_name["slice"].effects
    assert s.action_accuracy == pytest.approx(2 / 3)
    assert [a.category for a in s.actions] == ["good-action", "bad-action", "good-action"]


def test_missing_and_extra_actions():
    gold = _domain("fixtures/domains/toy-gold.pddl")
    pred = gold.__class__(gold.name, gold.requirements, gold.types, gold.predicates,
                          (gold.actions[0], ActionSchema("dance")))
    s = intrinsic_score(pred, gold)
    assert s.action_accuracy == pytest.approx(1 / 3) and s.extra_actions == ("dance",)
    assert not s.actions[1].predicted and s.actions[1].parameters is False


def test_renamed_action_does_not_count():
    a = _only(parse_domain(PICK_LOCK))
    b = ActionSchema("open-lock", a.parameters, a.precondition, a.effect)
    assert not actions_equivalent(a, b)


# -- generated schemas against a brute-force oracle ----------------------------------

PREDS = {"p": 1, "q": 2, "r": 2, "s": 0}


@st.composite
def schemas(draw, n_params=None):
    n = draw(st.integers(1, 4)) if n_params is None else n_params
    params = tuple((f"?v{i}", draw(st.sampled_from(["item", "place"]))) for i in range(n))
    names = [v for v, _ in params]

    def lits():
        out = set()
        for _ in range(draw(st.integers(0, 4))):
            pred = draw(st.sampled_from(sorted(PREDS)))
            args = tuple(draw(st.sampled_from(names)) for _ in range(PREDS[pred]))
            out.add(Literal(Atom(pred, args), draw(st.booleans())))
        return frozenset(out)

    return ActionSchema("act", params, lits(), lits())


def _brute_equivalent(a: ActionSchema, b: ActionSchema) -> bool:
    """Try every ordering of b's parameters; keep the ones that line up types."""
    if a.name != b.name or len(a.parameters) != len(b.parameters):
        return False
    for perm in itertools.permutations(b.parameters):
        if any(ta != tb for (_, ta), (_, tb) in zip(a.parameters, perm)):
            continue
        m = {va: vb for (va, _), (vb, _) in zip(a.parameters, perm)}

        def ren(ls):
            return {(l.atom.predicate, tuple(m[x] for x in l.atom.args), l.positive) for l in ls}

        if ren(a.precondition) == {(l.atom.predicate, l.atom.args, l.positive) for l in b.precondition} and \
                ren(a.effect) == {(l.atom.predicate, l.atom.args, l.positive) for l in b.effect}:
            return True
    return False


def _scramble(a: ActionSchema, rng: random.Random) -> ActionSchema:
    """Fresh parameter names, shuffled parameter order."""
    fresh = [f"?w{i}" for i in range(len(a.parameters))]
    rng.shuffle(fresh)
    m = dict(zip(a.param_names, fresh))
    params = [(m[v], t) for v, t in a.parameters]
    rng.shuffle(params)

    def ren(ls):
        return frozenset(Literal(Atom(l.atom.predicate, tuple(m[x] for x in l.atom.args)), l.positive) for l in ls)

    return ActionSchema(a.name, tuple(params), ren(a.precondition), ren(a.effect))


@settings(max_examples=150, deadline=None)
@given(schemas(), st.integers(0, 2**16))
def test_renaming_never_changes_the_verdict(a, rseed):
    b = _scramble(a, random.Random(rseed))
    assert actions_equivalent(a, b) and actions_equivalent(b, a)
    assert canonical_form(a) == canonical_form(b)


@settings(max_examples=150, deadline=None)
@given(schemas(), st.data())
def test_one_literal_changed_is_detected(a, data):
    parts = [p for p in ("precondition", "effect") if getattr(a, p)]
    if not parts:
        return
    part = data.draw(st.sampled_from(parts))
    lits = sorted(getattr(a, part), key=str)
    victim = data.draw(st.sampled_from(lits))
    changed = (getattr(a, part) - {victim}) | {victim.negate()}
    if changed == getattr(a, part):
        return
    b = ActionSchema(a.name, a.parameters, *((changed, a.effect) if part == "precondition" else (a.precondition, changed)))
    assert actions_equivalent(a, b) == _brute_equivalent(a, b)
    dropped = ActionSchema(a.name, a.parameters,
                           *((a.precondition - {victim}, a.effect) if part == "precondition"
                             else (a.precondition, a.effect - {victim})))
    assert not actions_equivalent(a, dropped)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(schemas(n), schemas(n))))
def test_agrees_with_brute_force(pair):
    a, b = pair
    want = _brute_equivalent(a, b)
    assert actions_equivalent(a, b) == want
    assert (canonical_form(a) == canonical_form(b)) == want


# -- extrinsic ---------------------------------------------------------------------

NAV_PROBLEMS = ["fixtures/problems/nav-1.pddl", "fixtures/problems/nav-2.pddl", "fixtures/problems/nav-3.pddl"]
NAV_PLANS = ["fixtures/plans/nav-1.plan", "fixtures/plans/nav-2.plan", "fixtures/plans/nav-3.plan"]


def _nav_problems(domain):
    return [parse_problem(read_text(p), domain) for p in NAV_PROBLEMS]


def test_gold_domain_reproduces_gold_plans():
    gold = _domain("fixtures/domains/nav.pddl")
    report = extrinsic_score(gold, _nav_problems(gold), [read_text(p) for p in NAV_PLANS], gold)
    assert (report.solve_rate, report.exact_plan_rate, report.valid_plan_rate) == (1.0, 1.0, 1.0)
    assert {o.category for o in report.outcomes} == {"exact-plan"}


def test_missing_colocation_takes_shortcuts():
    gold = _domain("fixtures/domains/nav.pddl")
    cheat = _domain("fixtures/domains/nav-cheat.pddl")
    report = extrinsic_score(cheat, _nav_problems(gold), [read_text(p) for p in NAV_PLANS], gold)
    assert report.solve_rate == 1.0
    for o in report.outcomes:
        assert not any(step.startswith("(go ") for step in o.plan)
    assert report.valid_plan_rate < 1.0
    assert "bad-plan-candidate" in {o.category for o in report.outcomes}


def test_broken_movement_finds_no_plan():
    gold = _domain("fixtures/domains/nav.pddl")
    broken = _domain("fixtures/domains/nav-broken.pddl")
    report = extrinsic_score(broken, _nav_problems(gold), gold=gold)
    needs_moving = [o for o in report.outcomes if not o.solved]
    assert needs_moving and {o.cause for o in needs_moving} == {"no-plan"}


def test_domain_name_check():
    gold, problem = load_pair("fixtures/domains/nav.pddl", "fixtures/problems/nav-1.pddl")
    renamed = gold.__class__("elsewhere", gold.requirements, gold.types, gold.predicates, gold.actions)
    (o,) = extrinsic_score(renamed, [problem]).outcomes
    assert not o.solved and o.cause == "solver-error" and "elsewhere" in o.detail
    (o,) = extrinsic_score(renamed, [problem], check_domain_name=False).outcomes
    assert o.solved and o.exact_match is None and o.category == "plan-review"


def test_unparseable_prediction_is_a_syntax_error():
    gold = read_text("fixtures/domains/nav.pddl")
    problems = _nav_problems(parse_domain(gold))
    report = evaluate_texts("(define (domain nav) (:action", gold, problems)
    assert report.syntax_error and report.intrinsic is None
    assert {o.cause for o in report.extrinsic.outcomes} == {"solver-error"}
    assert report.to_dict()["syntax_error"]


def test_full_report_round_trip():
    gold = read_text("fixtures/domains/nav.pddl")
    problems = _nav_problems(parse_domain(gold))
    report = evaluate_texts(render_domain(parse_domain(gold)), gold, problems, [read_text(p) for p in NAV_PLANS])
    d = report.to_dict()
    assert d["intrinsic"]["action_accuracy"] == 1.0
    assert d["extrinsic"]["exact_plan_rate"] == 1.0
    assert all(p["category"] == "exact-plan" for p in d["extrinsic"]["problems"])
