"""A deterministic scripted recommender for offline runs and tests.

The mock agent walks a fixed script over the supplied item collection:
greet, elicit a genre, recommend matching items one at a time, answer
"tell me more" questions from item attributes, and say goodbye on accept
or exhaustion. Unrecognized input draws a clarification request, which a
simulated user will typically fail to map to an expected intent — useful
for exercising repeat/sample/patience behavior.

It can run in-process as a :class:`~crssim.connector.DialogueParticipant`
or be served over loopback HTTP speaking the wire protocol.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .connector import DialogueParticipant, Response
from .dialogue import Participant, Utterance
from .domain import Item, ItemCollection
from .nlg import detect_polarity, Polarity

WELCOME_TEXT = "Hello, I am your movie recommendation assistant."
ELICIT_TEXT = "What genre of movie are you in the mood for?"
RECOMMEND_TEXT = "You should watch {name}."
INFORM_TEXT = "It is about {facts}."
ACCEPT_BYE_TEXT = "Great! Enjoy watching. Bye."
EXHAUSTED_BYE_TEXT = "I am afraid I have no more suggestions. Goodbye."
FAREWELL_TEXT = "Goodbye! I hope to see you again."
CLARIFY_TEXT = "I am sorry, I did not understand that. Could you rephrase?"

_GOODBYE_CUES = ("bye", "goodbye", "quit", "stop", "done")
_ACCEPT_CUES = ("yes", "great", "good", "sounds", "thanks", "sure",
                "perfect", "love")
_REJECT_CUES = ("no", "not", "another", "else", "different", "hate",
                "dislike")
_INQUIRE_CUES = ("what", "why", "tell", "about")


def _mentions(text: str, words: tuple[str, ...] | list[str]) -> bool:
    lowered = text.lower()
    return any(re.search(r"\b" + re.escape(w) + r"\b", lowered)
               for w in words)


@dataclass
class MockCRSAgent(DialogueParticipant):
    """One scripted recommender session."""

    items: ItemCollection
    genre_slot: str = "genre"
    detail_slot: str = "keyword"
    elicited: bool = field(init=False, default=False)
    matches: list[Item] = field(init=False, default_factory=list)
    index: int = field(init=False, default=-1)

    @property
    def _current(self) -> Item | None:
        if 0 <= self.index < len(self.matches):
            return self.matches[self.index]
        return None

    def _find_genre(self, text: str) -> str | None:
        for genre in self.items.values_for_slot(self.genre_slot):
            if _mentions(text, [genre]):
                return genre
        return None

    def _recommend_next(self) -> Response:
        self.index += 1
        item = self._current
        if item is None:
            return Response(EXHAUSTED_BYE_TEXT, terminate=True)
        return Response(RECOMMEND_TEXT.format(name=item.name))

    def respond(self, incoming: Utterance | None) -> Response:
        if incoming is None:
            return Response(WELCOME_TEXT)
        text = incoming.text
        negated = detect_polarity(text) is Polarity.NEGATIVE

        if _mentions(text, _GOODBYE_CUES):
            return Response(FAREWELL_TEXT, terminate=True)

        genre = self._find_genre(text)
        if genre is not None and not negated:
            self.elicited = True
            self.matches = self.items.with_attribute(self.genre_slot, genre)
            self.index = -1
            return self._recommend_next()

        if self._current is not None:
            if _mentions(text, _ACCEPT_CUES) and not negated:
                return Response(ACCEPT_BYE_TEXT, terminate=True)
            if negated or _mentions(text, _REJECT_CUES):
                return self._recommend_next()
            if _mentions(text, _INQUIRE_CUES):
                item = self._current
                facts = item.attributes.get(self.detail_slot, ())
                if not facts:
                    facts = item.attributes.get(self.genre_slot, ())
                joined = " and ".join(facts) if facts else "a well-kept secret"
                return Response(INFORM_TEXT.format(facts=joined))

        if not self.elicited:
            self.elicited = True
            return Response(ELICIT_TEXT)
        return Response(CLARIFY_TEXT)


class _MockWireHandler(BaseHTTPRequestHandler):
    """Speaks the two-field wire protocol on top of mock agent sessions."""

    server: "MockAgentServer"

    def do_POST(self) -> None:  # noqa: N802 (http.server naming)
        if self.path.rstrip("/") != "/respond":
            self.send_error(404, "unknown endpoint")
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = json.loads(self.rfile.read(length).decode("utf-8"))
            session_id = str(body["session_id"])
            utterance = str(body["utterance"])
        except (ValueError, KeyError, UnicodeDecodeError):
            self.send_error(400, "malformed request body")
            return
        self.server.request_log.append((session_id, utterance))
        session = self.server.session(session_id)
        incoming = (None if utterance == ""
                    else Utterance(Participant.USER, utterance, 0))
        reply = session.respond(incoming)
        payload = json.dumps({"utterance": reply.text or "",
                              "terminate": reply.terminate},
                             ensure_ascii=False).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, format: str, *args: object) -> None:
        pass  # keep test output quiet


class MockAgentServer(ThreadingHTTPServer):
    """Loopback HTTP server hosting per-session mock agents."""

    daemon_threads = True

    def __init__(self, items: ItemCollection, host: str = "127.0.0.1",
                 port: int = 0) -> None:
        super().__init__((host, port), _MockWireHandler)
        self.items = items
        self.sessions: dict[str, MockCRSAgent] = {}
        self.request_log: list[tuple[str, str]] = []
        self._lock = threading.Lock()
        self._thread: threading.Thread | None = None

    def session(self, session_id: str) -> MockCRSAgent:
        with self._lock:
            if session_id not in self.sessions:
                self.sessions[session_id] = MockCRSAgent(self.items)
            return self.sessions[session_id]

    @property
    def base_url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "MockAgentServer":
        self._thread = threading.Thread(target=self.serve_forever,
                                        daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self.shutdown()
        self.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)


def serve_mock(items: ItemCollection, host: str = "127.0.0.1",
               port: int = 0) -> MockAgentServer:
    """Start a loopback wire-protocol server over mock agent sessions."""
    return MockAgentServer(items, host=host, port=port).start()
