"""Per-node forwarding with escape-edge headers, and the message wire format."""

from __future__ import annotations

import bisect
import struct
from dataclasses import dataclass, replace
from typing import Callable, Optional

MAGIC = 0x5E
_FIXED = struct.Struct("<BIHB")  # magic, dest, hop_count, flag
_ESCAPE = struct.Struct("<II")
_PAYLOAD_LEN = struct.Struct("<H")

DELIVER = "deliver"
SEND = "send"
DROP = "drop"


class FrameError(ValueError):
    pass


@dataclass(frozen=True)
class Message:
    dest: int
    payload: bytes = b""
    escape: Optional[tuple] = None
    hop_count: int = 0


@dataclass(frozen=True)
class NodeState:
    """What a router knows locally: its tree parent, its escape edge, and the
    DFS intervals of its tree children (enough to steer toward a descendant)."""
    id: int
    parent: Optional[int]
    rho: Optional[tuple]
    children: tuple
    child_disc: tuple
    child_fin: tuple
    disc: tuple  # DFS discovery label of every node, for locating escape endpoints
    ttl: int

    @classmethod
    def from_tree(cls, t, plan, v: int, disc: tuple | None = None) -> NodeState:
        kids = tuple(t.children[v])
        return cls(
            id=v,
            parent=t.parent[v],
            rho=plan.escape[v],
            children=kids,
            child_disc=tuple(t.disc[c] for c in kids),
            child_fin=tuple(t.fin[c] for c in kids),
            disc=tuple(t.disc) if disc is None else disc,
            ttl=4 * len(t.parent),
        )

    def child_toward(self, node: int) -> Optional[int]:
        d = self.disc[node]
        i = bisect.bisect_right(self.child_disc, d) - 1
        if i >= 0 and d <= self.child_fin[i]:
            return self.children[i]
        return None


def node_states(t, plan) -> list:
    disc = tuple(t.disc)
    return [NodeState.from_tree(t, plan, v, disc) for v in range(len(t.parent))]


@dataclass(frozen=True)
class Decision:
    action: str
    next: Optional[int] = None
    message: Optional[Message] = None
    reason: Optional[str] = None


def _send(state: NodeState, msg: Message, nxt: int, escape) -> Decision:
    if msg.hop_count + 1 > state.ttl:
        return Decision(DROP, message=msg, reason="ttl")
    return Decision(SEND, nxt, replace(msg, escape=escape, hop_count=msg.hop_count + 1))


def _detour(state: NodeState, msg: Message, alive: Callable[[int], bool]) -> Decision:
    p, q = msg.escape
    if state.id == p:
        return _send(state, msg, q, None)
    child = state.child_toward(p)
    if child is not None:
        return _send(state, msg, child, msg.escape)
    if state.parent is not None and alive(state.parent):
        return _send(state, msg, state.parent, msg.escape)
    return Decision(DROP, message=msg, reason="no-route")


def forward(state: NodeState, msg: Message, alive: Callable[[int], bool]) -> Decision:
    """Routing decision for ``msg`` sitting at ``state.id``.

    ``alive(v)`` reports whether neighbor ``v`` is currently up.
    """
    if state.id == msg.dest:
        return Decision(DELIVER, message=msg)
    if msg.escape is not None:
        return _detour(state, msg, alive)
    if state.parent is None:
        return Decision(DROP, message=msg, reason="no-route")
    if alive(state.parent):
        return _send(state, msg, state.parent, None)
    if state.rho is None:
        return Decision(DROP, message=msg, reason="no-recovery")
    return _detour(state, replace(msg, escape=state.rho), alive)


def encode_message(msg: Message) -> bytes:
    flag = 0 if msg.escape is None else 1
    try:
        out = _FIXED.pack(MAGIC, msg.dest, msg.hop_count, flag)
        if flag:
            out += _ESCAPE.pack(*msg.escape)
        out += _PAYLOAD_LEN.pack(len(msg.payload))
    except struct.error as exc:
        raise FrameError(f"field out of range: {exc}") from None
    return out + bytes(msg.payload)


def decode_message(data: bytes) -> Message:
    data = bytes(data)
    if len(data) < _FIXED.size:
        raise FrameError("truncated frame header")
    magic, dest, hops, flag = _FIXED.unpack_from(data, 0)
    if magic != MAGIC:
        raise FrameError(f"bad magic 0x{magic:02x}")
    off = _FIXED.size
    escape = None
    if flag == 1:
        if len(data) < off + _ESCAPE.size:
            raise FrameError("truncated escape header")
        escape = _ESCAPE.unpack_from(data, off)
        off += _ESCAPE.size
    elif flag != 0:
        raise FrameError(f"bad flag {flag}")
    if len(data) < off + _PAYLOAD_LEN.size:
        raise FrameError("truncated payload length")
    (plen,) = _PAYLOAD_LEN.unpack_from(data, off)
    off += _PAYLOAD_LEN.size
    if len(data) != off + plen:
        raise FrameError(f"payload length {plen} does not match frame size")
    return Message(dest, data[off:], escape, hops)
