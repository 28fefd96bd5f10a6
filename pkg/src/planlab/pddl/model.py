"""Immutable values for domains, problems and their parts."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple

ROOT_TYPE = "object"


class Atom(NamedTuple):
    predicate: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.predicate, *self.args)) + ")"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"(not {self.atom})"

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.positive)


def atom(predicate: str, *args: str) -> Atom:
    return Atom(predicate, tuple(args))


def pos(predicate: str, *args: str) -> Literal:
    return Literal(Atom(predicate, tuple(args)), True)


def neg(predicate: str, *args: str) -> Literal:
    return Literal(Atom(predicate, tuple(args)), False)


def sort_literals(lits: Iterable[Literal]) -> list[Literal]:
    return sorted(lits, key=str)


@dataclass(frozen=True)
class Predicate:
    name: str
    params: tuple[tuple[str, str], ...] = ()

    @property
    def arity(self) -> int:
        return len(self.params)

    @property
    def param_types(self) -> tuple[str, ...]:
        return tuple(t for _, t in self.params)


@dataclass(frozen=True)
class ActionSchema:
    name: str
    parameters: tuple[tuple[str, str], ...] = ()
    precondition: frozenset[Literal] = frozenset()
    effect: frozenset[Literal] = frozenset()

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.parameters)

    @property
    def param_types(self) -> tuple[str, ...]:
        return tuple(t for _, t in self.parameters)


@dataclass(frozen=True)
class Domain:
    name: str
    requirements: frozenset[str] = frozenset()
    types: tuple[str, ...] = ()
    predicates: tuple[Predicate, ...] = ()
    actions: tuple[ActionSchema, ...] = ()

    def predicate(self, name: str) -> Predicate | None:
        for p in self.predicates:
            if p.name == name:
                return p
        return None

    def action(self, name: str) -> ActionSchema | None:
        for a in self.actions:
            if a.name == name:
                return a
        return None

    def has_type(self, name: str) -> bool:
        return name == ROOT_TYPE or name in self.types

    def replace_action(self, schema: ActionSchema) -> "Domain":
        return replace(self, actions=tuple(schema if a.name == schema.name else a for a in self.actions))


@dataclass(frozen=True)
class Problem:
    """A problem instance.

    Objects are kept sorted by name, so two problems that differ only in the
    order of their declarations compare (and render) equal.
    """

    name: str
    domain_name: str
    objects: tuple[tuple[str, str], ...] = ()
    init: frozenset[Atom] = frozenset()
    goal: frozenset[Literal] = frozenset()
    _types: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        objs = tuple(sorted(self.objects))
        object.__setattr__(self, "objects", objs)
        object.__setattr__(self, "init", frozenset(self.init))
        object.__setattr__(self, "goal", frozenset(self.goal))
        object.__setattr__(self, "_types", dict(objs))

    @property
    def object_types(self) -> dict[str, str]:
        return self._types

    def objects_of(self, type_name: str) -> list[str]:
        if type_name == ROOT_TYPE:
            return [o for o, _ in self.objects]
        return [o for o, t in self.objects if t == type_name]

    def with_goal(self, goal: Iterable[Literal]) -> "Problem":
        return replace(self, goal=frozenset(goal))

    def with_init(self, init: Iterable[Atom]) -> "Problem":
        return replace(self, init=frozenset(init))
