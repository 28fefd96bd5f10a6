"""JSONL episode transcripts: one step per line."""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Iterable


def step_record(step: int, action: str | None, outcome, observation: str, **extra) -> dict:
    rec = {"step": step, "action": action, "outcome": str(outcome), "observation": observation}
    rec.update(extra)
    return rec


def write_jsonl(records: Iterable[dict], out: IO[str] | str | Path) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8") as fh:
            write_jsonl(records, fh)
        return
    for rec in records:
        out.write(json.dumps(rec, sort_keys=True) + "\n")


def read_jsonl(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
