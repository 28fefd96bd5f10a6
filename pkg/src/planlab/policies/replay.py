"""Serve recorded audit-log responses instead of calling the network."""

from __future__ import annotations

import json
from collections import defaultdict, deque
from pathlib import Path

import httpx

from .base import TransportError
from .llm import ChatClient, LLMConfig, LLMPolicy, request_hash


class ReplayMiss(TransportError):
    """The log holds no response for this request."""


class ReplayTransport(httpx.BaseTransport):
    """Answers each request with the next successful response recorded for its hash.

    Identical requests recorded several times are served in recording order.
    """

    def __init__(self, entries: list[dict]):
        self.responses: dict[str, deque[str]] = defaultdict(deque)
        for e in entries:
            if e.get("status") == 200:
                self.responses[e["request_hash"]].append(e["response"])

    @classmethod
    def from_file(cls, path: str | Path) -> "ReplayTransport":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls([json.loads(line) for line in lines if line.strip()])

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        body = json.loads(request.content)
        key = request_hash(body)
        queue = self.responses.get(key)
        if not queue:
            raise ReplayMiss(f"no recorded response for request {key[:12]}")
        text = queue.popleft() if len(queue) > 1 else queue[0]
        return httpx.Response(200, text=text, headers={"content-type": "application/json"})


def recorded_config(path: str | Path) -> LLMConfig:
    """Model and temperature as recorded, so request hashes line up."""
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            req = json.loads(line)["request"]
            return LLMConfig(url="http://replay.invalid/v1/chat/completions", model=req["model"],
                             temperature=req["temperature"], max_retries=0)
    raise ValueError(f"{path} holds no requests")


def replay_policy(path: str | Path, name: str = "replay") -> LLMPolicy:
    client = ChatClient(recorded_config(path), transport=ReplayTransport.from_file(path))
    return LLMPolicy(client, name=name)
