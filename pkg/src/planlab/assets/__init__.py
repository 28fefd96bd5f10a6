"""Bundled domains, fixture corpus and helpers to read them."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources


def read_text(relpath: str) -> str:
    """Text of a file under the assets directory, e.g. ``fixtures/domains/nav.pddl``."""
    node = resources.files(__name__)
    for part in relpath.split("/"):
        node = node.joinpath(part)
    return node.read_text(encoding="utf-8")


def _walk(node, prefix: str):
    for child in sorted(node.iterdir(), key=lambda c: c.name):
        rel = f"{prefix}{child.name}"
        if child.is_dir():
            yield from _walk(child, rel + "/")
        else:
            yield rel


def pddl_corpus(include_invalid: bool = False) -> list[str]:
    """Relative paths of every bundled PDDL file."""
    paths = [p for p in _walk(resources.files(__name__), "") if p.endswith(".pddl")]
    return [p for p in paths if include_invalid or not p.startswith("fixtures/invalid/")]


@lru_cache(maxsize=None)
def manifest() -> tuple[dict, ...]:
    """Domain/problem pairs with their expected solver outcome and gold plan path."""
    return tuple(json.loads(read_text("fixtures/manifest.json")))
