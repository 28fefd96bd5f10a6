"""Tokenizer and reader for PDDL s-expressions.

Identifiers are lowercased on the way in and ``;`` comments are dropped.
Every symbol and list remembers where it started so parse errors can point
at the offending text.
"""

from __future__ import annotations

from .errors import PddlSyntaxError


class Symbol(str):
    """A lowercased atom that remembers its source position."""

    line: int
    col: int

    def __new__(cls, text: str, line: int = 0, col: int = 0) -> "Symbol":
        obj = super().__new__(cls, text)
        obj.line = line
        obj.col = col
        return obj


class SList(list):
    """A parenthesised list with a source position."""

    def __init__(self, items=(), line: int = 0, col: int = 0):
        super().__init__(items)
        self.line = line
        self.col = col


_DELIMS = set("();")


def tokenize(text: str) -> list[tuple[str, int, int]]:
    tokens: list[tuple[str, int, int]] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            tokens.append((ch, line, col))
            i += 1
            col += 1
            continue
        start = i
        while i < n and not text[i].isspace() and text[i] not in _DELIMS:
            i += 1
        tokens.append((text[start:i].lower(), line, col))
        col += i - start
    return tokens


def read_all(text: str) -> list:
    """Read every top-level expression in ``text``."""
    tokens = tokenize(text)
    stack: list[SList] = []
    top: list = []
    for tok, line, col in tokens:
        if tok == "(":
            stack.append(SList(line=line, col=col))
        elif tok == ")":
            if not stack:
                raise PddlSyntaxError("unbalanced ')'", line, col)
            done = stack.pop()
            (stack[-1] if stack else top).append(done)
        else:
            (stack[-1] if stack else top).append(Symbol(tok, line, col))
    if stack:
        opened = stack[-1]
        raise PddlSyntaxError("unclosed '('", opened.line, opened.col)
    return top


def read_one(text: str):
    exprs = read_all(text)
    if not exprs:
        raise PddlSyntaxError("empty input", 1, 1)
    if len(exprs) > 1:
        extra = exprs[1]
        raise PddlSyntaxError(
            "trailing content after first expression", getattr(extra, "line", None), getattr(extra, "col", None)
        )
    return exprs[0]


def where(expr) -> tuple[int | None, int | None]:
    return getattr(expr, "line", None), getattr(expr, "col", None)
