"""HTTP client for black-box conversational agents.

The wire protocol is deliberately tiny: one ``POST {base_url}/respond``
per exchange with a JSON body ``{"session_id": ..., "utterance": ...}``,
answered by ``{"utterance": ..., "terminate": ...}``. Opening the dialogue
(asking the remote agent to speak first) is signalled by an empty
utterance string.
"""

from __future__ import annotations

from dataclasses import dataclass

import requests

from .connector import DialogueParticipant, Response
from .dialogue import Utterance
from .errors import ProtocolError, TransportError


@dataclass(frozen=True)
class AgentEndpoint:
    """Where and how to reach a remote agent."""

    base_url: str
    timeout: float = 10.0
    retry_count: int = 2

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.retry_count < 0:
            raise ValueError("retry_count must be non-negative")

    @property
    def respond_url(self) -> str:
        return self.base_url.rstrip("/") + "/respond"


def wire_exchange(endpoint: AgentEndpoint, session_id: str,
                  utterance: str) -> tuple[str, bool]:
    """One request/response exchange with the remote agent.

    Transport failures (connection refused, timeouts) are retried up to
    ``endpoint.retry_count`` extra attempts; a malformed reply is a
    protocol error and is not retried.
    """
    attempts = endpoint.retry_count + 1
    last_error: Exception | None = None
    for _ in range(attempts):
        try:
            reply = requests.post(
                endpoint.respond_url,
                json={"session_id": session_id, "utterance": utterance},
                timeout=endpoint.timeout,
            )
        except requests.RequestException as exc:
            last_error = exc
            continue
        if reply.status_code != 200:
            raise ProtocolError(
                f"agent answered HTTP {reply.status_code} at "
                f"{endpoint.respond_url}")
        try:
            body = reply.json()
        except ValueError as exc:
            raise ProtocolError(
                f"agent reply is not valid JSON: {exc}") from exc
        if not isinstance(body, dict) or not isinstance(
                body.get("utterance"), str):
            raise ProtocolError(
                "agent reply is missing a string 'utterance' field")
        return body["utterance"], bool(body.get("terminate", False))
    raise TransportError(
        f"agent unreachable after {attempts} attempts at "
        f"{endpoint.respond_url}: {last_error}")


@dataclass
class WireAgent(DialogueParticipant):
    """Adapter presenting a remote wire-protocol agent as a participant."""

    endpoint: AgentEndpoint
    session_id: str

    def respond(self, incoming: Utterance | None) -> Response:
        text = "" if incoming is None else incoming.text
        reply, terminate = wire_exchange(self.endpoint, self.session_id, text)
        return Response(reply, terminate=terminate)
