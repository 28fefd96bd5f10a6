"""Episode configuration and presets."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

KINDS = ("coin", "cooking")
DIFFICULTIES = ("easy", "hard")
LAYOUTS = ("random", "trajectory")
COIN_PLACEMENTS = ("farthest", "uniform")

# (num_rooms, num_ingredients, max_steps) per preset; coin ignores ingredients.
# Nine rooms, five ingredients and closed containers take an informed explorer
# 27-57 steps, so the hard preset gets a larger budget than the others.
PRESETS = {
    ("coin", "easy"): (10, 0, 50),
    ("coin", "hard"): (10, 0, 50),
    ("cooking", "easy"): (3, 2, 50),
    ("cooking", "hard"): (9, 5, 100),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class EnvConfig:
    kind: str = "coin"
    difficulty: str = "easy"
    num_rooms: int | None = None
    num_ingredients: int | None = None
    seed: int = 0
    max_steps: int | None = None
    layout: str = "random"
    door_prob: float = 0.5
    extra_edge_prob: float = 0.15
    coin_placement: str = "farthest"  # or "uniform" over non-start rooms

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"unknown kind {self.kind!r}")
        if self.difficulty not in DIFFICULTIES:
            raise ConfigError(f"unknown difficulty {self.difficulty!r}")
        if self.layout not in LAYOUTS:
            raise ConfigError(f"unknown layout {self.layout!r}")
        if self.coin_placement not in COIN_PLACEMENTS:
            raise ConfigError(f"unknown coin placement {self.coin_placement!r}")
        if self.layout == "trajectory" and self.kind != "cooking":
            raise ConfigError("the trajectory layout is a cooking world")
        rooms, ingredients, budget = PRESETS[(self.kind, self.difficulty)]
        if self.max_steps is None:
            object.__setattr__(self, "max_steps", budget)
        if self.num_rooms is None:
            object.__setattr__(self, "num_rooms", rooms)
        if self.num_ingredients is None:
            object.__setattr__(self, "num_ingredients", ingredients)
        if self.num_rooms < 2:
            raise ConfigError("num_rooms must be at least 2")
        if self.kind == "cooking" and self.num_ingredients < 1:
            raise ConfigError("a recipe needs at least one ingredient")
        if self.max_steps < 0:
            raise ConfigError("max_steps must be non-negative")
        if not (0.0 <= self.door_prob <= 1.0 and 0.0 <= self.extra_edge_prob <= 1.0):
            raise ConfigError("probabilities must lie in [0, 1]")

    @classmethod
    def preset(cls, kind: str, difficulty: str = "easy", seed: int = 0, **overrides) -> "EnvConfig":
        return cls(kind=kind, difficulty=difficulty, seed=seed, **overrides)

    def with_seed(self, seed: int) -> "EnvConfig":
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}
