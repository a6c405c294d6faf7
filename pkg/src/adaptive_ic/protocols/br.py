"""Edge-announcement emulation of a noiseless tree over a tree-coded stream.

Each party keeps the edges it has announced and the edges it believes the
other party announced (obtained by tree-decoding everything received so far).
Every round it walks down from the root along those edges.  When the walk
stops at one of its own levels it announces the missing edge; otherwise it
sends ``idle``.  An announcement ``(e, s)`` says "starting at the end of my
transmission number ``e`` (the root when ``e = 0``), follow the bits of
``s``", where ``s`` holds the other party's edge as I saw it followed by my
own edge.

The announcement is spelled out over the 5-letter alphabet below, one letter
per round, and every letter is pushed through a tree-code encoder.  Transport
of the resulting labels is left to the wrapping protocol.
"""

from __future__ import annotations

from ..channel import ABORT, ALICE
from .noiseless import NoiselessProtocolTree, owner
from ..codes.treecode import TreeCode, TreeDecoder, TreeEncoder
from ..errors import ConfigurationError

LT, ZERO, ONE, GT, IDLE = range(5)
GAMMA_SIZE = 5
GAMMA_TEXT = "<01>."


def serialize(e: int, s: str) -> list[int]:
    """'<' + minimal binary of e (empty for 0) + s + '>'."""
    if e < 0 or not 1 <= len(s) <= 2 or set(s) - {"0", "1"}:
        raise ConfigurationError(f"bad announcement ({e}, {s!r})")
    body = (format(e, "b") if e else "") + s
    return [LT] + [ZERO if c == "0" else ONE for c in body] + [GT]


def parse(chars, sender: str) -> list[tuple[int, str]]:
    """Announcements in a decoded character stream.

    ``s`` has a single bit only for Alice's first edge (``e = 0``); every
    other announcement carries two.  Malformed fragments are dropped.
    """
    out, buf = [], None
    for c in chars:
        if c == LT:
            buf = []
        elif c == GT:
            if buf is not None:
                ann = _parse_body("".join(buf), sender)
                if ann is not None:
                    out.append(ann)
            buf = None
        elif c in (ZERO, ONE):
            if buf is not None:
                buf.append("0" if c == ZERO else "1")
        else:
            buf = None
    return out


def _parse_body(body: str, sender: str):
    if sender == ALICE and body in ("0", "1"):
        return 0, body
    if len(body) < 2:
        return None
    head, s = body[:-2], body[-2:]
    if head.startswith("0"):
        return None  # non-minimal e
    return (int(head, 2) if head else 0), s


class BREmulator:
    """Transport-agnostic state of one party.  ``next_label`` / ``receive`` once per round."""

    def __init__(self, role: str, inp, tree: NoiselessProtocolTree, code: TreeCode,
                 horizon: int = 256, max_expansions: int = 200_000):
        code.require_verified()
        if code.arity != GAMMA_SIZE:
            raise ConfigurationError(f"tree code arity must be {GAMMA_SIZE}, got {code.arity}")
        self.role, self.input, self.tree = role, inp, tree
        self.encoder = TreeEncoder(code)
        self.decoder = TreeDecoder(code, horizon, max_expansions)
        self.my_edges: dict[str, str] = {}
        self.my_ends: list[str] = []  # end node of each completed announcement
        self.other_edges: dict[str, str] = {}
        self.pending: list[int] = []
        self.pending_edge = None
        self.sent_chars: list[int] = []
        self.sent_labels: list[int] = []
        self.received_labels: list = []

    def walk(self):
        v, edges = "", (self.my_edges, self.other_edges)
        while len(v) < self.tree.depth:
            mine = owner(len(v)) == self.role
            b = edges[0 if mine else 1].get(v)
            if b is None:
                return v, mine
            v += b
        return v, None

    def _announce(self, v: str) -> list[int]:
        bit = str(self.tree.bit(self.role, self.input, v))
        if v == "":
            e, s = 0, bit
        else:
            u = v[:-1]
            e = self.my_ends.index(u) + 1 if u else 0
            s = v[-1] + bit
        self.pending_edge = (v, bit)
        return serialize(e, s)

    def next_char(self) -> int:
        if not self.pending:
            v, mine = self.walk()
            if mine:
                self.pending = self._announce(v)
        if not self.pending:
            return IDLE
        c = self.pending.pop(0)
        if not self.pending and self.pending_edge is not None:
            v, bit = self.pending_edge
            self.my_edges[v] = bit
            self.my_ends.append(v + bit)
            self.pending_edge = None
        return c

    def next_label(self) -> int:
        c = self.next_char()
        self.sent_chars.append(c)
        label = self.encoder.push(c)
        self.sent_labels.append(label)
        return label

    def receive(self, label, candidates=None) -> None:
        """``label`` is the decoded label, or ``None`` for an erasure.

        An erasure may come with the set of labels it could have been.
        """
        self.received_labels.append(label)
        chars = self.decoder.push(label if label is not None or candidates is None else candidates)
        self._rebuild(chars)

    def _rebuild(self, chars) -> None:
        sender = "B" if self.role == ALICE else ALICE
        edges, ends = {}, []
        for e, s in parse(chars, sender):
            start = "" if e == 0 else (ends[e - 1] if e <= len(ends) else None)
            if start is None:
                ends.append(None)
                continue
            v = start
            for b in s:
                if len(v) >= self.tree.depth:
                    break
                if owner(len(v)) == sender:
                    edges[v] = b
                v += b
            ends.append(v)
        self.other_edges = edges

    def output(self):
        v, _ = self.walk()
        return self.tree.leaf_value(v) if len(v) == self.tree.depth else ABORT
