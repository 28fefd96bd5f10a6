"""Aggregate episode logs into success, efficiency and invalid-step figures."""

from __future__ import annotations

import csv
import io
import json
import statistics
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Iterable

from ..agent import EpisodeLog

CSV_COLUMNS = ("kind", "difficulty", "strategy", "policy", "seed", "success", "steps", "invalid_steps", "failure_reason")


class EmptyInput(ValueError):
    pass


def cell_key(ep: EpisodeLog) -> tuple[str, str, str, str]:
    c = ep.config
    return (c["kind"], c.get("difficulty", "easy"), ep.strategy, ep.policy)


def episode_row(ep: EpisodeLog) -> dict:
    kind, difficulty, strategy, policy = cell_key(ep)
    return {
        "kind": kind,
        "difficulty": difficulty,
        "strategy": strategy,
        "policy": policy,
        "seed": ep.config["seed"],
        "success": ep.won,
        "steps": ep.num_steps,
        "invalid_steps": ep.invalid_steps,
        "failure_reason": ep.failure_reason or "",
    }


def _sort_rows(rows: list[dict]) -> list[dict]:
    return sorted(rows, key=lambda r: tuple(str(r[c]) if c != "seed" else f"{r[c]:012d}" for c in CSV_COLUMNS))


@dataclass(frozen=True)
class Metrics:
    episodes: int
    successes: int
    success_rate: float
    mean_steps_to_success: float | None
    sd_steps_to_success: float | None  # sample (n - 1) deviation; needs two successes
    mean_invalid_steps: float  # over every episode
    mean_invalid_steps_success: float | None  # over successful episodes only
    rows: tuple[dict, ...] = field(default=(), repr=False)

    def summary(self) -> dict:
        d = asdict(self)
        d.pop("rows")
        return d


def _mean(xs: list[float]) -> float | None:
    return statistics.fmean(xs) if xs else None


def compute_metrics(logs: Iterable[EpisodeLog]) -> Metrics:
    """Steps are averaged over successes only; invalid steps are reported both ways."""
    logs = list(logs)
    if not logs:
        raise EmptyInput("no episode logs to aggregate")
    wins = [ep for ep in logs if ep.won]
    steps = [ep.num_steps for ep in wins]
    return Metrics(
        episodes=len(logs),
        successes=len(wins),
        success_rate=len(wins) / len(logs),
        mean_steps_to_success=_mean(steps),
        sd_steps_to_success=statistics.stdev(steps) if len(steps) >= 2 else None,
        mean_invalid_steps=statistics.fmean(ep.invalid_steps for ep in logs),
        mean_invalid_steps_success=_mean([ep.invalid_steps for ep in wins]),
        rows=tuple(_sort_rows([episode_row(ep) for ep in logs])),
    )


def metrics_by_cell(logs: Iterable[EpisodeLog]) -> dict[tuple[str, str, str, str], Metrics]:
    groups: dict[tuple, list[EpisodeLog]] = defaultdict(list)
    for ep in logs:
        groups[cell_key(ep)].append(ep)
    if not groups:
        raise EmptyInput("no episode logs to aggregate")
    return {k: compute_metrics(v) for k, v in sorted(groups.items())}


def improvement(baseline_steps: float, candidate_steps: float) -> float:
    """Relative reduction in steps to success, e.g. 13.6 -> 7.8 gives about 0.43."""
    if baseline_steps <= 0:
        raise ValueError("baseline mean must be positive")
    return (baseline_steps - candidate_steps) / baseline_steps


def improvements(
    by_cell: dict[tuple[str, str, str, str], Metrics],
    baseline: str = "action-gen",
    candidate: str = "pddl-edit",
) -> list[dict]:
    """Compare two strategies wherever both succeeded at least once under the same world and policy."""
    out = []
    for (kind, diff, strategy, policy), m in by_cell.items():
        if strategy != baseline:
            continue
        other = by_cell.get((kind, diff, candidate, policy))
        if other is None or m.mean_steps_to_success is None or other.mean_steps_to_success is None:
            continue
        out.append({
            "kind": kind,
            "difficulty": diff,
            "policy": policy,
            "baseline": baseline,
            "candidate": candidate,
            "baseline_steps": m.mean_steps_to_success,
            "candidate_steps": other.mean_steps_to_success,
            "improvement": improvement(m.mean_steps_to_success, other.mean_steps_to_success),
        })
    return out


def per_example(logs: Iterable[EpisodeLog]) -> list[dict]:
    """Mean and sample deviation of steps to success per world seed, across trials (error-bar data)."""
    groups: dict[tuple, list[EpisodeLog]] = defaultdict(list)
    for ep in logs:
        groups[(*cell_key(ep), ep.config["seed"])].append(ep)
    rows = []
    for (kind, diff, strategy, policy, seed), eps in sorted(groups.items()):
        steps = [e.num_steps for e in eps if e.won]
        rows.append({
            "kind": kind, "difficulty": diff, "strategy": strategy, "policy": policy, "seed": seed,
            "trials": len(eps), "successes": len(steps),
            "mean_steps": _mean(steps),
            "sd_steps": statistics.stdev(steps) if len(steps) >= 2 else None,
        })
    return rows


# -- reports ---------------------------------------------------------------------


def _fmt(x, pct: bool = False) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{100 * x:.1f}%" if pct else f"{x:.2f}"
    return str(x)


def episodes_csv(logs: Iterable[EpisodeLog]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(_sort_rows([episode_row(ep) for ep in logs]))
    return buf.getvalue()


def summary_markdown(logs: Iterable[EpisodeLog]) -> str:
    logs = list(logs)
    by_cell = metrics_by_cell(logs)
    lines = [
        "| kind | difficulty | strategy | policy | n | success | steps (mean ± sd) | invalid (all) | invalid (wins) |",
        "|---|---|---|---|---|---|---|---|---|",
    ]
    for (kind, diff, strategy, policy), m in by_cell.items():
        steps = "-" if m.mean_steps_to_success is None else (
            f"{m.mean_steps_to_success:.2f} ± {_fmt(m.sd_steps_to_success)}")
        lines.append(
            f"| {kind} | {diff} | {strategy} | {policy} | {m.episodes} | {_fmt(m.success_rate, True)} "
            f"| {steps} | {_fmt(m.mean_invalid_steps)} | {_fmt(m.mean_invalid_steps_success)} |"
        )
    imp = improvements(by_cell)
    if imp:
        lines += ["", "| kind | difficulty | policy | action-gen steps | pddl-edit steps | improvement |",
                  "|---|---|---|---|---|---|"]
        for r in imp:
            lines.append(
                f"| {r['kind']} | {r['difficulty']} | {r['policy']} | {r['baseline_steps']:.2f} "
                f"| {r['candidate_steps']:.2f} | {_fmt(r['improvement'], True)} |"
            )
    return "\n".join(lines) + "\n"


def summary_json(logs: Iterable[EpisodeLog]) -> str:
    logs = list(logs)
    by_cell = metrics_by_cell(logs)
    data = {
        "cells": [{"cell": list(k), **m.summary()} for k, m in by_cell.items()],
        "improvements": improvements(by_cell),
        "per_example": per_example(logs),
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
