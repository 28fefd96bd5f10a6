"""Seeded text games: coin collector and cooking world."""

from .config import ConfigError, EnvConfig
from .game import (
    EpisodeFinished,
    Observation,
    StepOutcome,
    check,
    describe_room,
    new_episode,
    parse_action,
    permitted_actions,
    step,
)
from .truth import GroundTruth, domain_text, export_pddl, gold_problem, obj, oracle_view, placeholder
from .world import DIRECTIONS, OPPOSITE, WorldState, generate

__all__ = [
    "DIRECTIONS",
    "OPPOSITE",
    "ConfigError",
    "EnvConfig",
    "EpisodeFinished",
    "GroundTruth",
    "Observation",
    "StepOutcome",
    "WorldState",
    "check",
    "describe_room",
    "domain_text",
    "export_pddl",
    "generate",
    "gold_problem",
    "new_episode",
    "obj",
    "oracle_view",
    "parse_action",
    "permitted_actions",
    "placeholder",
    "step",
]
