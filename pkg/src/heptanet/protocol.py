"""Message semantics: broadcast, radius-limited erasure, source-routed unicast.

Three kinds of traffic live on the grid:

* ``public`` messages flood outward over the spanning tree the sender sees
  when it takes itself for the central tile.  They move at speed 1/2 (one
  tile every second tick) and each travelling copy accumulates the route
  it took, so any receiver can answer.  The sender holds back a twin
  ``erasing`` message for as many ticks as the broadcast radius, then
  releases it at speed 1 over the same tree; the two fronts meet at the
  radius and annihilate, so no tile beyond it is ever reached.
* ``nonpublic`` messages carry their full route as a stack of gate pairs
  and move one tile per tick, transferring each consumed pair onto the
  return stack.  On delivery the two stacks have exactly swapped roles.

All functions here are pure: they take a tile record plus a message and
return the copies to place, leaving buffering, randomness and statistics
to the engine.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .heptagrid import BLACK, Space, TileCoord, TileRecord, WHITE
from .routing import GatePair, Route, reverse_route, shortest

PUBLIC = "public"
NONPUBLIC = "nonpublic"
ERASING = "erasing"

CENTRE_STATUS = "centre"

# Which relative gates lead to the sons of a relay tile, and the status
# each son takes, following the node rules (black -> black white,
# white -> black white white; middle positions are the preferred sons).
SON_GATES = {
    WHITE: ((3, BLACK), (4, WHITE), (5, WHITE)),
    BLACK: ((4, BLACK), (5, WHITE)),
}


@dataclass
class Message:
    id: int
    kind: str
    subtype: str = ""
    wait: int = 0
    relative_father: int = 0
    relative_status: str = CENTRE_STATUS
    direct: tuple[GatePair, ...] = ()
    wayback: tuple[GatePair, ...] = ()

    def clone(self, **changes) -> "Message":
        return replace(self, **changes)


def fresh_public(msg_id: int, subtype: str = "", radius: int = 0) -> Message:
    """A public message still sitting at its emitter.

    ``radius`` pins the propagation radius; 0 lets the engine draw it when
    the message is first sent.
    """
    return Message(id=msg_id, kind=PUBLIC, subtype=subtype, wait=radius)


def is_fresh(m: Message) -> bool:
    return m.relative_status == CENTRE_STATUS


def relative_exit(entry: int, son: int) -> int:
    """Absolute gate of a relative son.

    The relative numbering of a relay tile is its absolute numbering
    turned so that the side the message came in by counts as side 1.
    """
    return 1 + ((entry - 1) + son - 1) % 7


def emit_public(rec: TileRecord, m: Message, radius: int):
    """First sending of a fresh public message through all seven gates.

    Returns (placements, erasing) where placements are (coord, copy) pairs
    for the neighbours' next-tick stacks and erasing is the delayed twin
    the emitter keeps, counting down from the radius.
    """
    placements = []
    for gate in range(1, 8):
        if rec.outer[gate - 1]:
            continue
        entry = rec.associate[gate - 1]
        copy = m.clone(
            wait=0,
            relative_father=entry,
            relative_status=WHITE,
            wayback=(GatePair(0, gate),),
        )
        placements.append((rec.gate(gate), copy))
    eraser = Message(id=m.id, kind=ERASING, wait=radius)
    return placements, eraser


def relay_public(rec: TileRecord, m: Message) -> list:
    """Copies of a travelling public message for the relative sons of rec.

    Each copy's accumulated route grows by this tile's (entry, exit) pair
    and its relative status follows the node rules.  Copies through outer
    gates are dropped.
    """
    placements = []
    entry = m.relative_father
    for son, son_status in SON_GATES[m.relative_status]:
        exit_gate = relative_exit(entry, son)
        if rec.outer[exit_gate - 1]:
            continue
        son_entry = rec.associate[exit_gate - 1]
        copy = m.clone(
            relative_father=son_entry,
            relative_status=son_status,
            wayback=m.wayback + (GatePair(entry, exit_gate),),
        )
        placements.append((rec.gate(exit_gate), copy))
    return placements


def release_erasing(rec: TileRecord, m: Message) -> list:
    """Flood an erasing message whose delay ran out through all gates."""
    placements = []
    for gate in range(1, 8):
        if rec.outer[gate - 1]:
            continue
        copy = m.clone(
            wait=0,
            relative_father=rec.associate[gate - 1],
            relative_status=WHITE,
        )
        placements.append((rec.gate(gate), copy))
    return placements


def step_erasing(rec: TileRecord, m: Message):
    """One tick in the life of an erasing message.

    Returns ('hold', message) while the delay runs at the emitter,
    ('flood', placements) the tick the delay hits 1, and
    ('relay', placements) for a travelling copy.  Cancellation against a
    same-numbered public message is the caller's affair, since it needs
    to see the whole stack.
    """
    if m.wait > 1:
        return ("hold", m.clone(wait=m.wait - 1))
    if m.wait == 1:
        return ("flood", release_erasing(rec, m))
    return ("relay", relay_erasing(rec, m))


def relay_erasing(rec: TileRecord, m: Message) -> list:
    """Advance a travelling erasing message to the relative sons (speed 1)."""
    placements = []
    entry = m.relative_father
    for son, son_status in SON_GATES[m.relative_status]:
        exit_gate = relative_exit(entry, son)
        if rec.outer[exit_gate - 1]:
            continue
        copy = m.clone(
            relative_father=rec.associate[exit_gate - 1],
            relative_status=son_status,
        )
        placements.append((rec.gate(exit_gate), copy))
    return placements


def accumulated_route(m: Message) -> Route:
    """Full coordinate of the holding tile from the broadcast sender."""
    return Route(m.wayback + (GatePair(m.relative_father, 0),))


def convey_private(rec: TileRecord, m: Message):
    """One step of a nonpublic message.

    Pops the top pair of the direct stack; a non-zero exit forwards the
    message through that gate after pushing the swapped pair onto the
    return stack, exit 0 means this tile is the receiver.  Returns one of
    ('forward', coord, message), ('delivered', message) or
    ('dropped', reason).
    """
    if not m.direct:
        return ("dropped", "empty route")
    en, ex = m.direct[0]
    rest = m.direct[1:]
    moved = m.clone(direct=rest, wayback=(GatePair(ex, en),) + m.wayback)
    if ex == 0:
        return ("delivered", moved)
    if rec.outer[ex - 1]:
        return ("dropped", f"route leaves the space at {rec.coord} side {ex}")
    if rest and rest[0].en != rec.associate[ex - 1]:
        return ("dropped", f"route inconsistent at {rec.coord} side {ex}")
    return ("forward", rec.gate(ex), moved)


def make_answer(m: Message, msg_id: int) -> Message:
    """Swap the stacks of a delivered message into an immediate response."""
    if m.direct:
        raise ValueError("only a delivered message can be answered")
    return Message(
        id=msg_id,
        kind=NONPUBLIC,
        subtype="answer",
        direct=m.wayback,
        wayback=(),
    )


def make_reply(rec: TileRecord, public_m: Message, msg_id: int) -> Message:
    """Answer a public message along the reverse of its accumulated route."""
    back = reverse_route(accumulated_route(public_m)).steps
    return Message(id=msg_id, kind=NONPUBLIC, subtype="reply", direct=back)


def make_write(space: Space, source: TileCoord, target: TileCoord, msg_id: int) -> Message:
    """A directory message: route computed for us by the managing system."""
    if source == target:
        raise ValueError("a tile does not write to itself")
    route = shortest(space, source, target)
    return Message(id=msg_id, kind=NONPUBLIC, subtype="write", direct=route.steps)
