"""Chat-completion client with bounded retries and an append-only audit log."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import httpx

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .base import MalformedResponse, PolicyOutput, PromptContext, RateLimited, TransportError
from .prompts import extract_block, render_messages

log = logging.getLogger(__name__)

ENV_URL = "PLANLAB_LLM_URL"
ENV_KEY = "PLANLAB_LLM_KEY"
ENV_MODEL = "PLANLAB_LLM_MODEL"


@dataclass(frozen=True)
class LLMConfig:
    url: str
    model: str
    api_key: str | None = None
    temperature: float = 0.0
    timeout: float = 60.0
    max_retries: int = 5
    backoff_base: float = 1.0
    backoff_cap: float = 30.0
    retry_ceiling: float = 120.0  # total seconds spent sleeping between attempts
    max_concurrency: int = 4
    audit_log: str | None = None

    def __post_init__(self) -> None:
        if self.max_retries < 0 or self.max_concurrency < 1:
            raise ValueError("max_retries must be >= 0 and max_concurrency >= 1")

    @classmethod
    def resolve(cls, table: dict | None = None, env: dict[str, str] | None = None, **flags) -> "LLMConfig":
        """Flags beat environment variables, which beat the config-file table, which beats defaults."""
        env = os.environ if env is None else env
        merged = dict(table or {})
        for key, var in (("url", ENV_URL), ("model", ENV_MODEL), ("api_key", ENV_KEY)):
            if env.get(var):
                merged[key] = env[var]
        merged.update({k: v for k, v in flags.items() if v is not None})
        if not merged.get("url") or not merged.get("model"):
            raise ValueError(f"LLM endpoint needs a url and a model: set {ENV_URL} and {ENV_MODEL} or an [llm] table")
        return cls(**merged)

    @classmethod
    def from_env(cls, env: dict[str, str] | None = None, **flags) -> "LLMConfig":
        return cls.resolve(None, env, **flags)

    @classmethod
    def from_file(cls, path: str | Path, env: dict[str, str] | None = None, **flags) -> "LLMConfig":
        """The ``[llm]`` table of a TOML file, under environment variables and flags."""
        with open(path, "rb") as fh:
            table = tomllib.load(fh).get("llm", {})
        return cls.resolve(table, env, **flags)

    def with_(self, **kw) -> "LLMConfig":
        return replace(self, **kw)


def request_hash(body: dict) -> str:
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


class AuditLog:
    """One JSON object per line, one line per attempt. Never rewritten."""

    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path else None
        self._lock = threading.Lock()

    def append(self, entry: dict) -> None:
        if self.path is None:
            return
        line = json.dumps(entry, sort_keys=True) + "\n"
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line)


def _retry_after(resp: httpx.Response) -> float | None:
    value = resp.headers.get("retry-after")
    try:
        return float(value) if value is not None else None
    except ValueError:
        return None


@dataclass
class ChatClient:
    config: LLMConfig
    transport: httpx.BaseTransport | None = None
    sleep: Callable[[float], None] = time.sleep
    audit: AuditLog = field(init=False)

    def __post_init__(self) -> None:
        self.audit = AuditLog(self.config.audit_log)
        self._slots = threading.BoundedSemaphore(self.config.max_concurrency)
        headers = {"Content-Type": "application/json"}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"
        self._http = httpx.Client(transport=self.transport, headers=headers, timeout=self.config.timeout)

    def close(self) -> None:
        self._http.close()

    def __enter__(self) -> "ChatClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def body(self, messages: list[dict[str, str]]) -> dict:
        return {"model": self.config.model, "messages": messages, "temperature": self.config.temperature}

    def delay(self, attempt: int) -> float:
        return min(self.config.backoff_cap, self.config.backoff_base * (2**attempt))

    def complete(self, messages: list[dict[str, str]]) -> tuple[str, dict]:
        """Return (assistant text, transcript). Retries timeouts, 429 and 5xx."""
        body = self.body(messages)
        rhash = request_hash(body)
        slept = 0.0
        last: Exception | None = None
        with self._slots:
            for attempt in range(self.config.max_retries + 1):
                entry = {"request_hash": rhash, "attempt": attempt, "time": time.time(), "request": body}
                wait = None
                try:
                    resp = self._http.post(self.config.url, json=body)
                except httpx.TimeoutException as exc:
                    last = TransportError(f"timeout: {exc}")
                    self.audit.append({**entry, "error": "timeout"})
                except httpx.HTTPError as exc:
                    last = TransportError(f"{type(exc).__name__}: {exc}")
                    self.audit.append({**entry, "error": str(last)})
                else:
                    self.audit.append({**entry, "status": resp.status_code, "response": resp.text})
                    if resp.status_code == 200:
                        text = _content(resp)
                        return text, {"request_hash": rhash, "attempts": attempt + 1, "response": text}
                    if resp.status_code == 429:
                        last = RateLimited(f"HTTP 429 after {attempt + 1} attempt(s)")
                        wait = _retry_after(resp)
                    elif resp.status_code >= 500:
                        last = TransportError(f"HTTP {resp.status_code}")
                    else:
                        raise TransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
                if attempt == self.config.max_retries:
                    break
                pause = max(self.delay(attempt), wait or 0.0)
                if slept + pause > self.config.retry_ceiling:
                    log.warning("retry ceiling of %.1fs reached", self.config.retry_ceiling)
                    break
                log.info("attempt %d failed (%s); sleeping %.2fs", attempt + 1, last, pause)
                self.sleep(pause)
                slept += pause
        assert last is not None
        raise last


def _content(resp: httpx.Response) -> str:
    try:
        content = resp.json()["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise MalformedResponse(f"unexpected response shape: {exc}") from exc
    if not isinstance(content, str):
        raise MalformedResponse("message content is not text")
    return content


class LLMPolicy:
    """Prompts a chat model and keeps only the fenced answer."""

    def __init__(self, client: ChatClient, name: str = "llm"):
        self.client = client
        self.name = name

    def propose(self, ctx: PromptContext) -> PolicyOutput:
        messages = render_messages(ctx)
        text, transcript = self.client.complete(messages)
        kind = ctx.strategy.output_kind
        return PolicyOutput(kind, extract_block(text, kind), {"messages": messages, **transcript})
