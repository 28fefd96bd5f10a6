from .base import (
    MalformedResponse,
    Policy,
    PolicyError,
    PolicyOutput,
    PromptContext,
    RateLimited,
    Strategy,
    TransportError,
)
from .baseline import RandomPolicy, random_action
from .llm import AuditLog, ChatClient, LLMConfig, LLMPolicy, request_hash
from .oracle import OraclePolicy, bundled_domain

__all__ = [
    "MalformedResponse",
    "OraclePolicy",
    "Policy",
    "PolicyError",
    "PolicyOutput",
    "PromptContext",
    "RandomPolicy",
    "RateLimited",
    "Strategy",
    "TransportError",
    "bundled_domain",
]
from .prompts import extract_block, render_messages
from .replay import ReplayMiss, ReplayTransport, replay_policy

__all__ += [
    "AuditLog",
    "ChatClient",
    "LLMConfig",
    "LLMPolicy",
    "ReplayMiss",
    "ReplayTransport",
    "extract_block",
    "random_action",
    "render_messages",
    "replay_policy",
    "request_hash",
]
