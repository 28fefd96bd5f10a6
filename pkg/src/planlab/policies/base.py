"""What every policy receives and returns."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Protocol

if TYPE_CHECKING:
    from ..agent.translator import HistoryEntry


class Strategy(str, Enum):
    ACTION_GEN = "action-gen"
    PDDL_GEN = "pddl-gen"
    PDDL_EDIT = "pddl-edit"

    @property
    def output_kind(self) -> str:
        return {"action-gen": "action", "pddl-gen": "problem", "pddl-edit": "edits"}[self.value]


class PolicyError(Exception):
    pass


class MalformedResponse(PolicyError):
    pass


class TransportError(PolicyError):
    pass


class RateLimited(TransportError):
    pass


@dataclass(frozen=True)
class PromptContext:
    strategy: Strategy
    kind: str
    domain_text: str = ""
    pf_text: str | None = None
    history: tuple[HistoryEntry, ...] = ()
    permitted_actions: tuple[str, ...] = ()
    demonstration: str = ""
    window: int = 8

    @property
    def latest(self) -> HistoryEntry | None:
        return self.history[-1] if self.history else None


@dataclass(frozen=True)
class PolicyOutput:
    kind: str  # action | problem | edits
    text: str
    transcript: dict = field(default_factory=dict, compare=False)


class Policy(Protocol):
    name: str

    def propose(self, ctx: PromptContext) -> PolicyOutput: ...
