"""Experiment suites: which worlds, strategies, policies and seeds to run."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from ..envs import EnvConfig
from ..policies import ChatClient, LLMConfig, LLMPolicy, OraclePolicy, RandomPolicy, Strategy, replay_policy


class SuiteError(ValueError):
    pass


PolicyFactory = Callable[[int, dict], Any]  # (seed, [llm] table) -> policy


def _llm(seed: int, llm: dict):
    return LLMPolicy(ChatClient(LLMConfig.resolve(llm)))


POLICIES: dict[str, PolicyFactory] = {
    "oracle": lambda seed, llm: OraclePolicy(),
    "random": lambda seed, llm: RandomPolicy(seed),
    "llm": _llm,
}

ACTION_ONLY = {"random"}


def register_policy(name: str, factory: PolicyFactory) -> None:
    POLICIES[name] = factory


def make_policy(name: str, seed: int = 0, llm: dict | None = None):
    """``replay:<audit.jsonl>`` replays a recorded LLM run; other names come from the registry."""
    if name.startswith("replay:"):
        return replay_policy(name.split(":", 1)[1])
    try:
        factory = POLICIES[name]
    except KeyError:
        raise SuiteError(f"unknown policy {name!r}; known: {sorted(POLICIES)}") from None
    return factory(seed, dict(llm or {}))


@dataclass(frozen=True)
class Cell:
    env: EnvConfig  # seed is filled in per episode
    strategy: Strategy
    policy: str

    @property
    def key(self) -> tuple[str, str, str, str]:
        return (self.env.kind, self.env.difficulty, self.strategy.value, self.policy)

    @property
    def label(self) -> str:
        return "/".join(self.key).replace("replay:", "replay-").replace("\\", "-")


@dataclass
class SuiteConfig:
    envs: list[EnvConfig]
    strategies: list[Strategy]
    policies: list[str]
    seeds: list[int]
    jobs: int = 1
    trials: int = 1  # repeated runs per world seed; policy seed = trial index
    replan: str = "early"
    name: str = "suite"
    llm: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.strategies = [Strategy(s) for s in self.strategies]
        if not self.seeds:
            raise SuiteError("a suite needs at least one seed per cell")
        if not (self.envs and self.strategies and self.policies):
            raise SuiteError("a suite needs at least one env, strategy and policy")
        if self.jobs < 1 or self.trials < 1:
            raise SuiteError("jobs and trials must be positive")
        if not self.cells():
            raise SuiteError("every strategy/policy pairing was excluded; random only plays action-gen")

    def cells(self) -> list[Cell]:
        out = []
        for env, strategy, policy in itertools.product(self.envs, self.strategies, self.policies):
            if policy in ACTION_ONLY and strategy is not Strategy.ACTION_GEN:
                continue
            out.append(Cell(env, strategy, policy))
        return out

    def episodes(self) -> list[tuple[Cell, int, int]]:
        return [(c, s, t) for c in self.cells() for s in self.seeds for t in range(self.trials)]

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteConfig":
        body = dict(data.get("suite", data))
        envs = [EnvConfig(**e) for e in body.pop("env", [])]
        seeds = body.pop("seeds", 1)
        start = body.pop("seed_start", 0)
        if isinstance(seeds, int):
            seeds = list(range(start, start + seeds))
        return cls(envs=envs, seeds=list(seeds), llm=dict(data.get("llm", {})), **body)

    @classmethod
    def from_toml(cls, path: str | Path) -> "SuiteConfig":
        with open(path, "rb") as fh:
            return cls.from_dict(tomllib.load(fh))
