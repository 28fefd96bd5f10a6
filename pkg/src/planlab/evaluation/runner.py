"""Run every (cell, seed, trial) of a suite, one JSONL log per episode."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from ..agent import EpisodeLog, run_episode
from .suite import Cell, SuiteConfig, make_policy

log = logging.getLogger(__name__)


def log_path(out_dir: Path, cell: Cell, seed: int, trial: int = 0) -> Path:
    suffix = f"-t{trial}" if trial else ""
    return Path(out_dir) / cell.label / f"seed-{seed:05d}{suffix}.jsonl"


def load_log(path: Path) -> EpisodeLog | None:
    """A finished log, or None if the file is missing or was cut short."""
    try:
        return EpisodeLog.from_jsonl(path.read_text(encoding="utf-8"))
    except (OSError, ValueError, KeyError, StopIteration):
        return None


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def run_one(suite: SuiteConfig, cell: Cell, seed: int, trial: int = 0) -> EpisodeLog:
    cfg = cell.env.with_seed(seed)
    try:
        policy = make_policy(cell.policy, trial if suite.trials > 1 else seed, suite.llm)
        return run_episode(cfg, cell.strategy, policy, replan=suite.replan)
    except Exception as exc:  # one broken episode must not sink the batch
        log.exception("episode %s seed %d failed", cell.label, seed)
        return EpisodeLog(cfg.to_dict(), cell.strategy.value, cell.policy,
                          failure_reason=f"error: {type(exc).__name__}: {exc}")


def run_batch(suite: SuiteConfig, out_dir: str | Path) -> list[EpisodeLog]:
    """Episodes whose finished log already exists are loaded, not re-run."""
    out_dir = Path(out_dir)
    jobs = suite.episodes()
    results: dict[int, EpisodeLog] = {}
    todo = []
    for i, (cell, seed, trial) in enumerate(jobs):
        done = load_log(log_path(out_dir, cell, seed, trial))
        if done is not None:
            results[i] = done
        else:
            todo.append(i)
    log.info("%d episodes, %d already done", len(jobs), len(results))

    def work(i: int) -> tuple[int, EpisodeLog]:
        cell, seed, trial = jobs[i]
        ep = run_one(suite, cell, seed, trial)
        _write(log_path(out_dir, cell, seed, trial), ep.to_jsonl())
        return i, ep

    with ThreadPoolExecutor(max_workers=suite.jobs) as pool:
        for i, ep in pool.map(work, todo):
            results[i] = ep
    return [results[i] for i in range(len(jobs))]


def load_logs(log_dir: str | Path) -> list[EpisodeLog]:
    out = []
    for path in sorted(Path(log_dir).rglob("*.jsonl")):
        ep = load_log(path)
        if ep is None:
            log.warning("skipping unfinished or foreign file %s", path)
        else:
            out.append(ep)
    return out
