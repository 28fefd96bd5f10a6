"""Canonical printer.

Output depends only on the abstract value: sections come in a fixed order,
conjuncts are sorted, objects are sorted, and each fact sits on its own line
so that line-level edits of a problem file are well defined.
"""

from __future__ import annotations

from functools import singledispatch

from .model import ActionSchema, Domain, Literal, Problem, sort_literals

_INDENT = "  "


def _typed(pairs) -> str:
    return " ".join(f"{name} - {typ}" for name, typ in pairs)


def _conjunction(lits, depth: int) -> list[str]:
    pad = _INDENT * depth
    ordered = sort_literals(lits)
    if not ordered:
        return ["(and)"]
    return ["(and", *[f"{pad}{_INDENT}{lit}" for lit in ordered], f"{pad})"]


def _action(a: ActionSchema) -> list[str]:
    pad = _INDENT * 2
    lines = [f"{_INDENT}(:action {a.name}", f"{pad}:parameters ({_typed(a.parameters)})"]
    pre = _conjunction(a.precondition, 2)
    lines.append(f"{pad}:precondition {pre[0]}")
    lines.extend(pre[1:])
    eff = _conjunction(a.effect, 2)
    lines.append(f"{pad}:effect {eff[0]}")
    lines.extend(eff[1:])
    lines.append(f"{_INDENT})")
    return lines


def render_domain(d: Domain) -> str:
    lines = [f"(define (domain {d.name})"]
    if d.requirements:
        lines.append(f"{_INDENT}(:requirements {' '.join(sorted(d.requirements))})")
    if d.types:
        lines.append(f"{_INDENT}(:types")
        lines.extend(f"{_INDENT * 2}{t}" for t in d.types)
        lines.append(f"{_INDENT})")
    if d.predicates:
        lines.append(f"{_INDENT}(:predicates")
        for p in d.predicates:
            body = " ".join((p.name, _typed(p.params))) if p.params else p.name
            lines.append(f"{_INDENT * 2}({body})")
        lines.append(f"{_INDENT})")
    for a in d.actions:
        lines.extend(_action(a))
    lines.append(")")
    return "\n".join(lines) + "\n"


def render_problem(p: Problem) -> str:
    lines = [f"(define (problem {p.name})", f"{_INDENT}(:domain {p.domain_name})"]
    lines.append(f"{_INDENT}(:objects")
    lines.extend(f"{_INDENT * 2}{name} - {typ}" for name, typ in p.objects)
    lines.append(f"{_INDENT})")
    lines.append(f"{_INDENT}(:init")
    lines.extend(f"{_INDENT * 2}{a}" for a in sorted(p.init, key=str))
    lines.append(f"{_INDENT})")
    goal = _conjunction(p.goal, 1)
    if len(goal) == 1:
        lines.append(f"{_INDENT}(:goal (and))")
    else:
        lines.append(f"{_INDENT}(:goal {goal[0]}")
        lines.extend(goal[1:-1])
        lines.append(f"{_INDENT}))")
    lines.append(")")
    return "\n".join(lines) + "\n"


@singledispatch
def render(value) -> str:
    raise TypeError(f"cannot render {type(value).__name__}")


@render.register
def _(value: Domain) -> str:
    return render_domain(value)


@render.register
def _(value: Problem) -> str:
    return render_problem(value)


@render.register
def _(value: Literal) -> str:
    return str(value)
