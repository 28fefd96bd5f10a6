from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planlab.assets import pddl_corpus, read_text
from planlab.pddl import (
    ROOT_TYPE,
    ActionSchema,
    ArityError,
    ContradictoryEffect,
    Domain,
    DuplicateName,
    PddlSyntaxError,
    Predicate,
    Problem,
    TypeMismatch,
    UndeclaredObject,
    UnknownParameter,
    UnknownPredicate,
    UnknownType,
    UnsupportedFeature,
    atom,
    neg,
    parse_domain,
    parse_problem,
    pos,
    render,
    render_domain,
    render_problem,
)

TINY_DOMAIN = """
(define (domain walk)
  (:requirements :strips :typing)
  (:types agent room)
  (:predicates (at ?a - agent ?r - room) (door ?x - room ?y - room))
  (:action step
    :parameters (?a - agent ?x - room ?y - room)
    :precondition (and (at ?a ?x) (door ?x ?y))
    :effect (and (not (at ?a ?x)) (at ?a ?y))))
"""


def _is_problem(path: str) -> bool:
    return "/problems/" in path


def _parse_any(path: str):
    text = read_text(path)
    return parse_problem(text) if _is_problem(path) else parse_domain(text)


def test_pick_lock_listing_shape(pick_lock):
    domain, _ = pick_lock
    a = domain.action("pick-lock")
    assert a.param_names == ("?lock", "?door", "?room1", "?room2")
    assert len(a.precondition) == 3 and neg("picked", "?lock") in a.precondition
    assert a.effect == {pos("picked", "?lock"), neg("locked", "?door"), pos("accessible", "?room1", "?room2")}


def test_untyped_parameters_default_to_object(pick_lock):
    domain, _ = pick_lock
    assert set(domain.action("pick-lock").param_types) == {ROOT_TYPE}


def test_empty_domain():
    d = parse_domain("(define (domain nothing))")
    assert d.actions == () and d.predicates == () and d.types == ()
    text = render_domain(d)
    assert ":action" not in text and "(domain nothing)" in text
    assert parse_domain(text) == d


def test_minimal_problem():
    d = parse_domain(TINY_DOMAIN)
    p = parse_problem(
        "(define (problem go) (:domain walk) (:objects agent - agent kitchen pantry - room)"
        " (:init (at agent kitchen)) (:goal (at agent pantry)))", d)
    assert p.init == {atom("at", "agent", "kitchen")}
    assert p.goal == {pos("at", "agent", "pantry")}


def test_coin_problem_fixture_has_rooms_and_connectivity():
    p = parse_problem(read_text("fixtures/problems/coin-easy-s1.pddl"))
    assert len(p.objects) >= 3
    assert any(a.predicate == "connected" for a in p.init)


def test_identifiers_are_lowercased_and_comments_stripped():
    d = parse_domain("(DEFINE (DOMAIN Loud) ; a comment\n (:PREDICATES (On ?X)))")
    assert d.name == "loud" and d.predicates[0].name == "on"


def test_corpus_size():
    assert len(pddl_corpus()) >= 20


@pytest.mark.parametrize("path", pddl_corpus())
def test_round_trip(path):
    value = _parse_any(path)
    assert _parse_any_text(render(value), path) == value
    # rendering is a fixed point after one pass
    assert render(_parse_any_text(render(value), path)) == render(value)


def _parse_any_text(text: str, path: str):
    return parse_problem(text) if _is_problem(path) else parse_domain(text)


def test_render_ignores_source_order():
    text = read_text("fixtures/problems/nav-2.pddl")
    p = parse_problem(text)
    lines = text.splitlines()
    init_start = next(i for i, l in enumerate(lines) if "(:init" in l)
    init_end = next(i for i, l in enumerate(lines) if "(:goal" in l) - 1
    body = lines[init_start + 1:init_end]
    for seed in range(5):
        shuffled = body[:]
        random.Random(seed).shuffle(shuffled)
        permuted = "\n".join(lines[:init_start + 1] + shuffled + lines[init_end:])
        assert render_problem(parse_problem(permuted)) == render_problem(p)


def test_render_ignores_conjunct_order():
    a = parse_domain(TINY_DOMAIN)
    b = parse_domain(TINY_DOMAIN.replace("(and (at ?a ?x) (door ?x ?y))", "(and (door ?x ?y) (at ?a ?x))"))
    assert render_domain(a) == render_domain(b)


@pytest.mark.parametrize("snippet, feature", [
    ("(or (at ?a ?x) (door ?x ?y))", "disjunctive"),
    ("(exists (?z - room) (door ?x ?z))", "existential"),
    ("(forall (?z - room) (door ?x ?z))", "universal"),
    ("(= ?x ?y)", "equality"),
    ("(imply (at ?a ?x) (door ?x ?y))", "implications"),
])
def test_unsupported_preconditions_are_rejected(snippet, feature):
    text = TINY_DOMAIN.replace("(and (at ?a ?x) (door ?x ?y))", snippet)
    with pytest.raises(UnsupportedFeature, match=feature):
        parse_domain(text)


@pytest.mark.parametrize("text", [
    "(define (domain d) (:requirements :adl))",
    "(define (domain d) (:requirements :conditional-effects))",
    "(define (domain d) (:functions (cost)))",
    "(define (domain d) (:constants a b))",
    "(define (domain d) (:types car - vehicle vehicle))",
    "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :precondition (p ?x)"
    " :effect (when (p ?x) (not (p ?x)))))",
    "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :precondition (p ?x)"
    " :effect (increase (cost) 1)))",
])
def test_unsupported_domain_features(text):
    with pytest.raises(UnsupportedFeature):
        parse_domain(text)


def test_negative_initial_facts_are_unsupported():
    with pytest.raises(UnsupportedFeature):
        parse_problem("(define (problem p) (:domain d) (:objects a) (:init (not (p a))) (:goal (p a)))")


def test_metric_is_unsupported():
    with pytest.raises(UnsupportedFeature):
        parse_problem("(define (problem p) (:domain d) (:objects a) (:init) (:goal (p a)) (:metric minimize (t)))")


@pytest.mark.parametrize("text, err", [
    ("(define (domain d) (:predicates (p ?x))", PddlSyntaxError),
    ("(define (domain d) (:predicates (p ?x)))) extra", PddlSyntaxError),
    ("(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :precondition (q ?x) :effect (p ?x)))",
     UnknownPredicate),
    ("(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :precondition (p ?y) :effect (p ?x)))",
     UnknownParameter),
    ("(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :precondition (p ?x ?x) :effect (p ?x)))",
     ArityError),
    ("(define (domain d) (:requirements :typing) (:types room) (:predicates (p ?x - hall)))", UnknownType),
    ("(define (domain d) (:predicates (p ?x) (p ?y)))", DuplicateName),
    ("(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :precondition (p ?x)"
     " :effect (and (p ?x) (not (p ?x)))))", ContradictoryEffect),
])
def test_domain_errors(text, err):
    with pytest.raises(err):
        parse_domain(text)


def test_syntax_error_reports_position():
    with pytest.raises(PddlSyntaxError) as info:
        parse_domain("(define (domain d)\n  (:predicates (p ?x))\n  (:action a :parameters (?x)\n")
    assert info.value.line is not None


def test_undeclared_goal_object_is_rejected():
    text = read_text("fixtures/problems/nav-2.pddl").replace("(has coin)", "(has crown)")
    with pytest.raises(UndeclaredObject):
        parse_problem(text)


def test_problem_type_checked_against_domain(nav):
    domain, _ = nav
    text = read_text("fixtures/problems/nav-2.pddl").replace("(in coin c)", "(in c coin)")
    with pytest.raises(TypeMismatch):
        parse_problem(text, domain)
    with pytest.raises(UnknownPredicate):
        parse_problem(read_text("fixtures/invalid/nav-undeclared-predicate.pddl"), domain)


# -- generated values -----------------------------------------------------------

NAMES = st.sampled_from(["a", "b", "c", "d", "e"])
PREDS = {"p": 1, "q": 2, "r": 0}


@st.composite
def problems(draw):
    objs = draw(st.lists(NAMES, min_size=1, max_size=5, unique=True))
    typed = [(o, draw(st.sampled_from(["room", "item"]))) for o in objs]

    def atoms():
        pred = draw(st.sampled_from(sorted(PREDS)))
        return atom(pred, *draw(st.lists(st.sampled_from(objs), min_size=PREDS[pred], max_size=PREDS[pred])))

    init = frozenset(atoms() for _ in range(draw(st.integers(0, 6))))
    goal = frozenset(
        (pos if draw(st.booleans()) else neg)(a.predicate, *a.args)
        for a in (atoms() for _ in range(draw(st.integers(1, 3))))
    )
    return Problem("gen", "gen-domain", tuple(typed), init, goal)


@st.composite
def domains(draw):
    preds = tuple(Predicate(n, tuple((f"?v{i}", ROOT_TYPE) for i in range(k))) for n, k in sorted(PREDS.items()))
    actions = []
    for name in draw(st.lists(st.sampled_from(["move", "grab", "drop"]), unique=True, max_size=3)):
        params = tuple((f"?x{i}", ROOT_TYPE) for i in range(draw(st.integers(0, 3))))
        vars_ = [v for v, _ in params]

        def lit():
            pred = draw(st.sampled_from(sorted(PREDS)))
            if PREDS[pred] and not vars_:
                pred = "r"
            args = draw(st.lists(st.sampled_from(vars_), min_size=PREDS[pred], max_size=PREDS[pred])) if vars_ else []
            return (pos if draw(st.booleans()) else neg)(pred, *args)

        pre = frozenset(lit() for _ in range(draw(st.integers(0, 3))))
        eff: dict = {}
        for _ in range(draw(st.integers(0, 3))):
            l = lit()
            eff.setdefault(l.atom, l)  # one polarity per atom keeps effects consistent
        actions.append(ActionSchema(name, params, pre, frozenset(eff.values())))
    return Domain("gen", frozenset({":strips", ":negative-preconditions"}), (), preds, tuple(actions))


@settings(max_examples=60, deadline=None)
@given(problems())
def test_problem_round_trip_property(p):
    assert parse_problem(render_problem(p)) == p


@settings(max_examples=60, deadline=None)
@given(domains())
def test_domain_round_trip_property(d):
    parsed = parse_domain(render_domain(d))
    assert parsed == d
    for a in parsed.actions:
        declared = set(a.param_names)
        assert all(arg in declared for l in a.precondition | a.effect for arg in l.atom.args)


@settings(max_examples=40, deadline=None)
@given(problems(), st.randoms(use_true_random=False))
def test_render_is_canonical_under_object_order(p, rnd):
    objs = list(p.objects)
    rnd.shuffle(objs)
    assert render_problem(Problem(p.name, p.domain_name, tuple(objs), p.init, p.goal)) == render_problem(p)
