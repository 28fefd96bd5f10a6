"""Line-level edit scripts over problem files."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from itertools import zip_longest
from typing import Iterable, Union

from ..pddl import Atom, Domain, Literal, PddlError, Problem, link
from ..pddl.parser import NAME_RE, _parse_atomic, parse_conjunction
from ..pddl.sexpr import read_one


class EditError(ValueError):
    pass


class DanglingReference(EditError):
    """An edit names a fact or object that is not there, or removes one still in use."""


class EditSyntaxError(EditError):
    pass


@dataclass(frozen=True)
class AddFact:
    atom: Atom

    def __str__(self) -> str:
        return f"add {self.atom}"


@dataclass(frozen=True)
class DeleteFact:
    atom: Atom

    def __str__(self) -> str:
        return f"delete {self.atom}"


@dataclass(frozen=True)
class ReplaceFact:
    old: Atom
    new: Atom

    def __str__(self) -> str:
        return f"replace {self.old} with {self.new}"


@dataclass(frozen=True)
class AddObject:
    name: str
    type: str

    def __str__(self) -> str:
        return f"add-object {self.name} - {self.type}"


@dataclass(frozen=True)
class DeleteObject:
    name: str

    def __str__(self) -> str:
        return f"delete-object {self.name}"


@dataclass(frozen=True)
class SetGoal:
    goal: frozenset[Literal]

    def __str__(self) -> str:
        lits = sorted(self.goal, key=str)
        return "set-goal (and" + "".join(f" {l}" for l in lits) + ")"


EditOp = Union[AddFact, DeleteFact, ReplaceFact, AddObject, DeleteObject, SetGoal]
EditScript = tuple  # of EditOp


def format_edits(script: Iterable[EditOp]) -> str:
    return "".join(f"{op}\n" for op in script)


_OBJ_RE = re.compile(r"^add-object\s+(\S+)\s+-\s+(\S+)$")


def _fact(text: str, lineno: int) -> Atom:
    try:
        atom, _ = _parse_atomic(read_one(text), variables_ok=False)
    except PddlError as exc:
        raise EditSyntaxError(f"line {lineno}: {exc}") from None
    return atom


def parse_edits(text: str) -> EditScript:
    """Parse the edit language, one op per line; blank lines and ``;`` comments are skipped."""
    ops: list[EditOp] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip().lower()
        if not line:
            continue
        verb, _, rest = line.partition(" ")
        rest = rest.strip()
        if verb == "add-object":
            m = _OBJ_RE.match(line)
            if not m or not NAME_RE.match(m.group(1)) or not NAME_RE.match(m.group(2)):
                raise EditSyntaxError(f"line {lineno}: expected 'add-object NAME - TYPE'")
            ops.append(AddObject(m.group(1), m.group(2)))
        elif verb == "delete-object":
            if not NAME_RE.match(rest):
                raise EditSyntaxError(f"line {lineno}: expected 'delete-object NAME'")
            ops.append(DeleteObject(rest))
        elif verb == "add":
            ops.append(AddFact(_fact(rest, lineno)))
        elif verb == "delete":
            ops.append(DeleteFact(_fact(rest, lineno)))
        elif verb == "replace":
            old, sep, new = rest.partition(" with ")
            if not sep:
                raise EditSyntaxError(f"line {lineno}: expected 'replace (FACT) with (FACT)'")
            ops.append(ReplaceFact(_fact(old.strip(), lineno), _fact(new.strip(), lineno)))
        elif verb == "set-goal":
            try:
                lits = parse_conjunction(read_one(rest), variables_ok=False)
            except PddlError as exc:
                raise EditSyntaxError(f"line {lineno}: {exc}") from None
            ops.append(SetGoal(frozenset(l for l, _ in lits)))
        else:
            raise EditSyntaxError(f"line {lineno}: unknown edit {verb!r}")
    return tuple(ops)


def _require_declared(atom: Atom, types: dict[str, str], op) -> None:
    for arg in atom.args:
        if arg not in types:
            raise DanglingReference(f"{op}: object {arg} is not declared")


def apply_edits(p: Problem, script: Iterable[EditOp], domain: Domain | None = None) -> Problem:
    """Apply ops in order. Adding something already present is a no-op; removing
    something absent, or an object still referenced, raises DanglingReference."""
    types = dict(p.objects)
    init = set(p.init)
    goal = frozenset(p.goal)
    for op in script:
        if isinstance(op, AddObject):
            have = types.get(op.name)
            if have is not None and have != op.type:
                raise EditError(f"{op}: {op.name} is already declared as {have}")
            types[op.name] = op.type
        elif isinstance(op, DeleteObject):
            if op.name not in types:
                raise DanglingReference(f"{op}: no such object")
            users = [a for a in init if op.name in a.args] + [l.atom for l in goal if op.name in l.atom.args]
            if users:
                first = sorted(map(str, users))[0]
                raise DanglingReference(f"{op}: still referenced by {first}")
            del types[op.name]
        elif isinstance(op, AddFact):
            _require_declared(op.atom, types, op)
            init.add(op.atom)
        elif isinstance(op, DeleteFact):
            if op.atom not in init:
                raise DanglingReference(f"{op}: fact not present")
            init.discard(op.atom)
        elif isinstance(op, ReplaceFact):
            if op.old not in init:
                raise DanglingReference(f"{op}: fact not present")
            _require_declared(op.new, types, op)
            init.discard(op.old)
            init.add(op.new)
        elif isinstance(op, SetGoal):
            for lit in op.goal:
                _require_declared(lit.atom, types, op)
            goal = frozenset(op.goal)
        else:
            raise TypeError(f"not an edit op: {op!r}")
    out = replace(p, objects=tuple(types.items()), init=frozenset(init), goal=goal)
    if domain is not None:
        link(domain, out)
    return out


def _mentions(a: Atom, names: set[str]) -> bool:
    return any(x in names for x in a.args)


def diff(old: Problem, new: Problem) -> EditScript:
    """A script taking ``old`` to ``new`` (up to problem and domain names).

    Removed and added facts of the same predicate are paired into replace ops,
    which keeps agent-location updates to a single line.
    """
    a_types, b_types = dict(old.objects), dict(new.objects)
    retyped = {o for o in a_types.keys() & b_types.keys() if a_types[o] != b_types[o]}
    ops: list[EditOp] = [AddObject(o, b_types[o]) for o in sorted(b_types.keys() - a_types.keys())]

    stale = {a for a in old.init & new.init if _mentions(a, retyped)}
    removed = sorted((old.init - new.init) | stale, key=str)
    added = sorted((new.init - old.init) | stale, key=str)
    by_pred: dict[str, tuple[list, list]] = {}
    for a in removed:
        if not _mentions(a, retyped):
            by_pred.setdefault(a.predicate, ([], []))[0].append(a)
    for a in added:
        if not _mentions(a, retyped):
            by_pred.setdefault(a.predicate, ([], []))[1].append(a)
    paired_old, paired_new = set(), set()
    for pred in sorted(by_pred):
        olds, news = by_pred[pred]
        for o, n in zip_longest(olds, news):
            if o is not None and n is not None:
                ops.append(ReplaceFact(o, n))
                paired_old.add(o)
                paired_new.add(n)
    ops += [DeleteFact(a) for a in removed if a not in paired_old]

    goal_mentions_retyped = any(_mentions(l.atom, retyped) for l in new.goal | old.goal)
    deferred_goal = False
    if old.goal != new.goal or goal_mentions_retyped:
        if goal_mentions_retyped:
            ops.append(SetGoal(frozenset()))
            deferred_goal = True
        else:
            ops.append(SetGoal(new.goal))
    gone = sorted((a_types.keys() - b_types.keys()) | retyped)
    ops += [DeleteObject(o) for o in gone]
    ops += [AddObject(o, b_types[o]) for o in sorted(retyped)]
    ops += [AddFact(a) for a in added if a not in paired_new]
    if deferred_goal:
        ops.append(SetGoal(new.goal))
    return tuple(ops)
