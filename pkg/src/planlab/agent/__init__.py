from .edits import (
    AddFact,
    AddObject,
    DanglingReference,
    DeleteFact,
    DeleteObject,
    EditError,
    EditScript,
    EditSyntaxError,
    ReplaceFact,
    SetGoal,
    apply_edits,
    diff,
    format_edits,
    parse_edits,
)
from .loop import AgentState, EpisodeLog, StepRecord, integrate_observation, pf_hash, run_episode
from .subgoals import (
    COIN_HIERARCHY,
    COOKING_HIERARCHY,
    GoalChoice,
    Stuck,
    SubgoalHierarchy,
    action_map,
    hierarchy_for,
    select_goal,
    to_env_action,
)
from .translator import HistoryEntry, Knowledge, empty_problem, knowledge_from_history, problem_from_history, to_problem

__all__ = [
    "COIN_HIERARCHY",
    "COOKING_HIERARCHY",
    "AddFact",
    "AddObject",
    "AgentState",
    "DanglingReference",
    "DeleteFact",
    "DeleteObject",
    "EditError",
    "EditScript",
    "EditSyntaxError",
    "EpisodeLog",
    "GoalChoice",
    "HistoryEntry",
    "Knowledge",
    "ReplaceFact",
    "SetGoal",
    "StepRecord",
    "Stuck",
    "SubgoalHierarchy",
    "action_map",
    "apply_edits",
    "diff",
    "empty_problem",
    "format_edits",
    "hierarchy_for",
    "integrate_observation",
    "knowledge_from_history",
    "parse_edits",
    "pf_hash",
    "problem_from_history",
    "run_episode",
    "select_goal",
    "to_env_action",
    "to_problem",
]
