"""Exceptions raised while reading or checking PDDL."""

from __future__ import annotations


class PddlError(Exception):
    """Base class; carries an optional source location."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(f"{message}{where}")


class PddlSyntaxError(PddlError):
    """Malformed s-expression or unknown section."""


class UnsupportedFeature(PddlError):
    """Input uses PDDL outside the STRIPS + typing + negative-preconditions subset."""


class ArityError(PddlError):
    pass


class UnknownType(PddlError):
    pass


class UnknownPredicate(PddlError):
    pass


class UnknownParameter(PddlError):
    """A schema literal references a variable not listed in :parameters."""


class UndeclaredObject(PddlError):
    pass


class TypeMismatch(PddlError):
    pass


class DuplicateName(PddlError):
    pass


class ContradictoryEffect(PddlError):
    """An effect both adds and deletes the same atom."""
