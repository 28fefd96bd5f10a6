"""Parser for the STRIPS + typing + negative-preconditions fragment of PDDL."""

from __future__ import annotations

import re

from .errors import (
    ArityError,
    ContradictoryEffect,
    DuplicateName,
    PddlError,
    PddlSyntaxError,
    TypeMismatch,
    UndeclaredObject,
    UnknownParameter,
    UnknownPredicate,
    UnknownType,
    UnsupportedFeature,
)
from .model import ROOT_TYPE, ActionSchema, Atom, Domain, Literal, Predicate, Problem
from .sexpr import SList, Symbol, read_one, where

SUPPORTED_REQUIREMENTS = frozenset({":strips", ":typing", ":negative-preconditions"})

NAME_RE = re.compile(r"^[a-z][a-z0-9_-]*$")

# Heads that belong to PDDL features this parser deliberately refuses.
_UNSUPPORTED_HEADS = {
    "or": "disjunctive conditions",
    "imply": "implications",
    "exists": "existential quantifiers",
    "forall": "universal quantifiers",
    "when": "conditional effects",
    "=": "equality atoms",
    "increase": "numeric fluents",
    "decrease": "numeric fluents",
    "assign": "numeric fluents",
    "scale-up": "numeric fluents",
    "scale-down": "numeric fluents",
    ">": "numeric comparisons",
    "<": "numeric comparisons",
    ">=": "numeric comparisons",
    "<=": "numeric comparisons",
}

_UNSUPPORTED_DOMAIN_SECTIONS = {
    ":constants": "domain constants",
    ":functions": "numeric fluents",
    ":durative-action": "durative actions",
    ":derived": "derived predicates",
    ":constraints": "trajectory constraints",
}

_UNSUPPORTED_PROBLEM_SECTIONS = {
    ":metric": "plan metrics",
    ":constraints": "trajectory constraints",
    ":length": "length constraints",
}


def _err(cls, message: str, expr) -> PddlError:
    line, col = where(expr)
    return cls(message, line, col)


def _expect_list(expr, what: str) -> SList:
    if not isinstance(expr, SList):
        raise _err(PddlSyntaxError, f"expected a list for {what}, got {expr!r}", expr)
    return expr


def _expect_symbol(expr, what: str) -> Symbol:
    if not isinstance(expr, Symbol):
        raise _err(PddlSyntaxError, f"expected a name for {what}", expr)
    return expr


def _check_name(sym, what: str) -> str:
    name = _expect_symbol(sym, what)
    if not NAME_RE.match(name):
        raise _err(PddlSyntaxError, f"invalid {what} {name!r}", sym)
    return str(name)


def _define_header(top, kind: str) -> tuple[str, list]:
    top = _expect_list(top, "define")
    if len(top) < 2 or top[0] != "define":
        raise _err(PddlSyntaxError, "expected (define ...)", top)
    header = _expect_list(top[1], f"{kind} header")
    if len(header) != 2 or header[0] != kind:
        raise _err(PddlSyntaxError, f"expected ({kind} <name>)", header)
    return _check_name(header[1], f"{kind} name"), list(top[2:])


def parse_typed_list(items, what: str, variables: bool) -> list[tuple[Symbol, str]]:
    """Parse ``a b - t c`` into [(a, t), (b, t), (c, object)]."""
    out: list[tuple[Symbol, str]] = []
    pending: list[Symbol] = []
    i = 0
    while i < len(items):
        tok = items[i]
        if isinstance(tok, SList):
            raise _err(PddlSyntaxError, f"unexpected list in {what}", tok)
        if tok == "-":
            if i + 1 >= len(items):
                raise _err(PddlSyntaxError, f"dangling '-' in {what}", tok)
            typ = items[i + 1]
            if isinstance(typ, SList):
                if typ and typ[0] == "either":
                    raise _err(UnsupportedFeature, "either-types are not supported", typ)
                raise _err(PddlSyntaxError, f"bad type in {what}", typ)
            if not pending:
                raise _err(PddlSyntaxError, f"type without names in {what}", tok)
            out.extend((name, str(typ)) for name in pending)
            pending = []
            i += 2
            continue
        if variables:
            if not tok.startswith("?") or not NAME_RE.match(tok[1:]):
                raise _err(PddlSyntaxError, f"expected a ?variable in {what}, got {tok!r}", tok)
        elif not NAME_RE.match(tok):
            raise _err(PddlSyntaxError, f"invalid name {tok!r} in {what}", tok)
        pending.append(tok)
        i += 1
    out.extend((name, ROOT_TYPE) for name in pending)
    return out


def _parse_requirements(section) -> frozenset[str]:
    reqs = set()
    for r in section[1:]:
        r = _expect_symbol(r, "requirement")
        if r not in SUPPORTED_REQUIREMENTS:
            raise _err(UnsupportedFeature, f"requirement {r} is not supported", r)
        reqs.add(str(r))
    return frozenset(reqs)


def _parse_types(section) -> tuple[str, ...]:
    names: list[str] = []
    for name, parent in parse_typed_list(section[1:], ":types", variables=False):
        if parent != ROOT_TYPE:
            raise _err(UnsupportedFeature, f"type hierarchy ({name} - {parent}) is not supported", name)
        if name == ROOT_TYPE:
            continue
        if name in names:
            raise _err(DuplicateName, f"type {name} declared twice", name)
        names.append(str(name))
    return tuple(names)


def _parse_atomic(expr, variables_ok: bool) -> tuple[Atom, SList]:
    """Parse ``(pred t1 t2 ...)``; nested lists as arguments are syntax errors."""
    expr = _expect_list(expr, "atomic formula")
    if not expr:
        raise _err(PddlSyntaxError, "empty formula", expr)
    head = expr[0]
    if isinstance(head, SList):
        raise _err(PddlSyntaxError, "formula head must be a predicate name", head)
    if head in _UNSUPPORTED_HEADS:
        raise _err(UnsupportedFeature, f"{_UNSUPPORTED_HEADS[head]} are not supported", expr)
    if head.startswith(":") or head.startswith("?"):
        raise _err(PddlSyntaxError, f"invalid predicate name {head!r}", head)
    if not NAME_RE.match(head):
        raise _err(PddlSyntaxError, f"invalid predicate name {head!r}", head)
    args = []
    for arg in expr[1:]:
        if isinstance(arg, SList):
            raise _err(PddlSyntaxError, "predicate arguments must be atomic terms", arg)
        if arg.startswith("?"):
            if not variables_ok:
                raise _err(UnsupportedFeature, f"variable {arg} outside an action schema", arg)
        elif not NAME_RE.match(arg):
            raise _err(PddlSyntaxError, f"invalid term {arg!r}", arg)
        args.append(arg)
    return Atom(str(head), tuple(str(a) for a in args)), expr


def parse_conjunction(expr, variables_ok: bool) -> list[tuple[Literal, object]]:
    """Flatten ``(and l1 l2 ...)`` into literals, refusing anything richer."""
    expr = _expect_list(expr, "condition")
    if not expr:
        return []
    head = expr[0]
    if head == "and":
        out = []
        for child in expr[1:]:
            out.extend(parse_conjunction(child, variables_ok))
        return out
    if head == "not":
        if len(expr) != 2:
            raise _err(PddlSyntaxError, "(not ...) takes exactly one argument", expr)
        inner = _expect_list(expr[1], "negated formula")
        if inner and inner[0] in ("and", "not", "or"):
            raise _err(UnsupportedFeature, "negation of compound formulas is not supported", inner)
        a, src = _parse_atomic(inner, variables_ok)
        return [(Literal(a, False), src)]
    a, src = _parse_atomic(expr, variables_ok)
    return [(Literal(a, True), src)]


def _parse_predicates(section, types: tuple[str, ...]) -> tuple[Predicate, ...]:
    preds: list[Predicate] = []
    seen: set[str] = set()
    for decl in section[1:]:
        decl = _expect_list(decl, "predicate declaration")
        if not decl:
            raise _err(PddlSyntaxError, "empty predicate declaration", decl)
        name = _check_name(decl[0], "predicate name")
        if name in seen:
            raise _err(DuplicateName, f"predicate {name} declared twice", decl)
        seen.add(name)
        params = parse_typed_list(decl[1:], f"predicate {name}", variables=True)
        for var, typ in params:
            if typ != ROOT_TYPE and typ not in types:
                raise _err(UnknownType, f"unknown type {typ} in predicate {name}", var)
        names = [v for v, _ in params]
        if len(set(names)) != len(names):
            raise _err(DuplicateName, f"repeated parameter in predicate {name}", decl)
        preds.append(Predicate(name, tuple((str(v), t) for v, t in params)))
    return tuple(preds)


def _check_schema_literal(lit: Literal, src, preds: dict[str, Predicate], params: dict[str, str], action: str):
    pred = preds.get(lit.atom.predicate)
    if pred is None:
        raise _err(UnknownPredicate, f"unknown predicate {lit.atom.predicate} in action {action}", src)
    if len(lit.atom.args) != pred.arity:
        raise _err(
            ArityError,
            f"{lit.atom.predicate} expects {pred.arity} arguments, got {len(lit.atom.args)} in action {action}",
            src,
        )
    for arg, want in zip(lit.atom.args, pred.param_types):
        if not arg.startswith("?"):
            raise _err(UnsupportedFeature, f"constant {arg} inside action {action} (domain constants)", src)
        if arg not in params:
            raise _err(UnknownParameter, f"{arg} is not a parameter of action {action}", src)
        have = params[arg]
        if want != ROOT_TYPE and have != want:
            raise _err(TypeMismatch, f"{arg} has type {have} but {lit.atom.predicate} expects {want}", src)


def _parse_action(section, preds: dict[str, Predicate], types: tuple[str, ...]) -> ActionSchema:
    if len(section) < 2:
        raise _err(PddlSyntaxError, "action without a name", section)
    name = _check_name(section[1], "action name")
    body = section[2:]
    if len(body) % 2:
        raise _err(PddlSyntaxError, f"action {name}: keywords and values must alternate", section)
    params: list[tuple[Symbol, str]] = []
    pre_src: list = []
    eff_src: list = []
    seen_keys: set[str] = set()
    for key, value in zip(body[0::2], body[1::2]):
        key = _expect_symbol(key, "action keyword")
        if key in seen_keys:
            raise _err(PddlSyntaxError, f"action {name}: {key} given twice", key)
        seen_keys.add(key)
        if key == ":parameters":
            params = parse_typed_list(_expect_list(value, ":parameters"), f"action {name}", variables=True)
        elif key == ":precondition":
            pre_src = parse_conjunction(value, variables_ok=True)
        elif key == ":effect":
            eff_src = parse_conjunction(value, variables_ok=True)
        else:
            raise _err(PddlSyntaxError, f"action {name}: unknown keyword {key}", key)
    names = [str(v) for v, _ in params]
    if len(set(names)) != len(names):
        raise _err(DuplicateName, f"repeated parameter in action {name}", section)
    for var, typ in params:
        if typ != ROOT_TYPE and typ not in types:
            raise _err(UnknownType, f"unknown type {typ} in action {name}", var)
    ptypes = {str(v): t for v, t in params}
    for lit, src in pre_src + eff_src:
        _check_schema_literal(lit, src, preds, ptypes, name)
    effect = frozenset(lit for lit, _ in eff_src)
    for lit, src in eff_src:
        if lit.negate() in effect:
            raise _err(ContradictoryEffect, f"action {name} both adds and deletes {lit.atom}", src)
    return ActionSchema(
        name=name,
        parameters=tuple((str(v), t) for v, t in params),
        precondition=frozenset(lit for lit, _ in pre_src),
        effect=effect,
    )


def parse_domain(text: str) -> Domain:
    name, sections = _define_header(read_one(text), "domain")
    found: dict[str, SList] = {}
    action_sections: list[SList] = []
    for sec in sections:
        sec = _expect_list(sec, "domain section")
        if not sec or not isinstance(sec[0], Symbol):
            raise _err(PddlSyntaxError, "malformed domain section", sec)
        key = sec[0]
        if key in _UNSUPPORTED_DOMAIN_SECTIONS:
            raise _err(UnsupportedFeature, f"{_UNSUPPORTED_DOMAIN_SECTIONS[key]} are not supported", sec)
        if key == ":action":
            action_sections.append(sec)
        elif key in (":requirements", ":types", ":predicates"):
            if key in found:
                raise _err(PddlSyntaxError, f"section {key} given twice", sec)
            found[key] = sec
        else:
            raise _err(PddlSyntaxError, f"unknown domain section {key}", sec)
    requirements = _parse_requirements(found[":requirements"]) if ":requirements" in found else frozenset()
    types = _parse_types(found[":types"]) if ":types" in found else ()
    predicates = _parse_predicates(found[":predicates"], types) if ":predicates" in found else ()
    pred_map = {p.name: p for p in predicates}
    actions: list[ActionSchema] = []
    for sec in action_sections:
        act = _parse_action(sec, pred_map, types)
        if any(a.name == act.name for a in actions):
            raise _err(DuplicateName, f"action {act.name} defined twice", sec)
        actions.append(act)
    return Domain(name, requirements, types, predicates, tuple(actions))


def parse_problem(text: str, domain: Domain | None = None) -> Problem:
    """Parse a problem file; when ``domain`` is given the result is also type-checked."""
    name, sections = _define_header(read_one(text), "problem")
    domain_name = None
    objects: list[tuple[Symbol, str]] = []
    init_src: list = []
    goal_src: list = []
    seen: set[str] = set()
    for sec in sections:
        sec = _expect_list(sec, "problem section")
        if not sec or not isinstance(sec[0], Symbol):
            raise _err(PddlSyntaxError, "malformed problem section", sec)
        key = sec[0]
        if key in _UNSUPPORTED_PROBLEM_SECTIONS:
            raise _err(UnsupportedFeature, f"{_UNSUPPORTED_PROBLEM_SECTIONS[key]} are not supported", sec)
        if key in seen:
            raise _err(PddlSyntaxError, f"section {key} given twice", sec)
        seen.add(key)
        if key == ":domain":
            if len(sec) != 2:
                raise _err(PddlSyntaxError, "expected (:domain <name>)", sec)
            domain_name = _check_name(sec[1], "domain name")
        elif key == ":requirements":
            _parse_requirements(sec)
        elif key == ":objects":
            objects = parse_typed_list(sec[1:], ":objects", variables=False)
        elif key == ":init":
            for fact in sec[1:]:
                fact = _expect_list(fact, "initial fact")
                if fact and fact[0] == "not":
                    raise _err(UnsupportedFeature, "negative initial facts (closed world is assumed)", fact)
                init_src.append(_parse_atomic(fact, variables_ok=False))
        elif key == ":goal":
            if len(sec) != 2:
                raise _err(PddlSyntaxError, "expected (:goal <condition>)", sec)
            goal_src = parse_conjunction(sec[1], variables_ok=False)
        else:
            raise _err(PddlSyntaxError, f"unknown problem section {key}", sec)
    if domain_name is None:
        raise PddlSyntaxError("problem has no (:domain ...) section")
    declared: dict[str, str] = {}
    for obj, typ in objects:
        if obj in declared:
            raise _err(DuplicateName, f"object {obj} declared twice", obj)
        declared[str(obj)] = typ
    for a, src in init_src:
        _check_declared(a, src, declared)
    for lit, src in goal_src:
        _check_declared(lit.atom, src, declared)
    problem = Problem(
        name=name,
        domain_name=domain_name,
        objects=tuple(declared.items()),
        init=frozenset(a for a, _ in init_src),
        goal=frozenset(lit for lit, _ in goal_src),
    )
    if domain is not None:
        link(domain, problem)
    return problem


def _check_declared(a: Atom, src, declared: dict[str, str]) -> None:
    for arg in a.args:
        if arg not in declared:
            raise _err(UndeclaredObject, f"object {arg} in {a} is not declared", src)


def link(domain: Domain, problem: Problem, check_domain_name: bool = False) -> None:
    """Type-check ``problem`` against ``domain``; raises a PddlError on the first problem found."""
    if check_domain_name and problem.domain_name != domain.name:
        raise TypeMismatch(f"problem is for domain {problem.domain_name}, not {domain.name}")
    types = problem.object_types
    for obj, typ in problem.objects:
        if not domain.has_type(typ):
            raise UnknownType(f"object {obj} has unknown type {typ}")
    facts = [(a, "init") for a in problem.init] + [(lit.atom, "goal") for lit in problem.goal]
    for a, where_ in sorted(facts, key=lambda f: (f[1], str(f[0]))):
        pred = domain.predicate(a.predicate)
        if pred is None:
            raise UnknownPredicate(f"unknown predicate {a.predicate} in {where_} fact {a}")
        if len(a.args) != pred.arity:
            raise ArityError(f"{a.predicate} expects {pred.arity} arguments, got {len(a.args)} in {a}")
        for arg, want in zip(a.args, pred.param_types):
            if arg not in types:
                raise UndeclaredObject(f"object {arg} in {a} is not declared")
            if want != ROOT_TYPE and types[arg] != want:
                raise TypeMismatch(f"{arg} has type {types[arg]} but {a.predicate} expects {want}")
