"""PDDL subset: values, parser and canonical printer."""

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
from .model import ROOT_TYPE, ActionSchema, Atom, Domain, Literal, Predicate, Problem, atom, neg, pos
from .parser import link, parse_domain, parse_problem
from .render import render, render_domain, render_problem

__all__ = [
    "ROOT_TYPE",
    "ActionSchema",
    "ArityError",
    "Atom",
    "ContradictoryEffect",
    "Domain",
    "DuplicateName",
    "Literal",
    "PddlError",
    "PddlSyntaxError",
    "Predicate",
    "Problem",
    "TypeMismatch",
    "UndeclaredObject",
    "UnknownParameter",
    "UnknownPredicate",
    "UnknownType",
    "UnsupportedFeature",
    "atom",
    "link",
    "neg",
    "parse_domain",
    "parse_problem",
    "pos",
    "render",
    "render_domain",
    "render_problem",
]
