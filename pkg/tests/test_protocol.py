"""Message transformation rules: broadcast relay, erasure, unicast stacks."""

import pytest

from heptanet import protocol as pr
from heptanet.heptagrid import CENTRE, Space, TileCoord
from heptanet.routing import GatePair, reverse_route, route_walk, Route

from conftest import bfs_distance


def test_relative_exit_arithmetic():
    assert pr.relative_exit(1, 4) == 4
    assert pr.relative_exit(5, 5) == 2
    # a white relay entered by side 3 serves its sons through 5, 6, 7
    assert [pr.relative_exit(3, s) for s in (3, 4, 5)] == [5, 6, 7]


def test_son_gate_table():
    assert [s for s, _ in pr.SON_GATES["white"]] == [3, 4, 5]
    assert [s for s, _ in pr.SON_GATES["black"]] == [4, 5]
    assert [st for _, st in pr.SON_GATES["white"]] == ["black", "white", "white"]
    assert [st for _, st in pr.SON_GATES["black"]] == ["black", "white"]


def test_emit_public_from_centre(space3):
    m = pr.fresh_public(9)
    placed, eraser = pr.emit_public(space3.record(CENTRE), m, radius=4)
    assert len(placed) == 7
    dests = [d for d, _ in placed]
    assert dests == [TileCoord(i, 1) for i in range(1, 8)]
    for gate, (dest, copy) in enumerate(placed, start=1):
        assert copy.wayback == (GatePair(0, gate),)
        assert copy.relative_status == "white"
        assert copy.relative_father == 1
        assert copy.id == 9
    assert eraser.kind == "erasing" and eraser.wait == 4 and eraser.id == 9


def test_emit_drops_outer_gates():
    sp = Space(1)
    border = sp.record(TileCoord(1, 3))
    assert any(border.outer)
    placed, _ = pr.emit_public(border, pr.fresh_public(1), radius=2)
    assert len(placed) == 7 - sum(border.outer)


def test_relay_matches_absolute_tree(space3):
    # a copy at the root of sector 1, entered from the centre, must relay
    # exactly to the root's tree sons
    root = space3.record(TileCoord(1, 1))
    copy = pr.Message(
        id=5, kind="public", relative_father=1, relative_status="white",
        wayback=(GatePair(0, 1),),
    )
    placed = pr.relay_public(root, copy)
    dests = [d for d, _ in placed]
    assert dests == [TileCoord(1, 2), TileCoord(1, 3), TileCoord(1, 4)]
    statuses = [c.relative_status for _, c in placed]
    assert statuses == ["black", "white", "white"]
    # accumulated routes stay walkable
    for dest, c in placed:
        walked = route_walk(space3, CENTRE, pr.accumulated_route(c))
        assert walked[-1] == dest


def test_erasing_decrement_and_release(space3):
    rec = space3.record(TileCoord(1, 1))
    held = pr.Message(id=3, kind="erasing", wait=3)
    # the engine replicates with wait - 1; release happens at wait == 1
    placed = pr.release_erasing(rec, held.clone(wait=1))
    assert all(c.wait == 0 for _, c in placed)
    assert len(placed) == 7
    moving = placed[0][1]
    onward = pr.relay_erasing(space3.record(placed[0][0]), moving)
    assert all(c.kind == "erasing" for _, c in onward)


def test_convey_forward_and_deliver(space3):
    a, b = TileCoord(1, 1), TileCoord(1, 3)
    msg = pr.make_write(space3, a, b, 4)
    state, dest, moved = pr.convey_private(space3.record(a), msg)
    assert state == "forward"
    assert moved.wayback[0] == GatePair(msg.direct[0].ex, 0)
    state, final = pr.convey_private(space3.record(dest), moved)
    assert state == "delivered" and dest == b
    assert final.direct == ()
    # the collected wayback is the reversed route
    assert final.wayback == reverse_route(Route(msg.direct)).steps


def test_convey_rejects_corrupt_route(space3):
    a = TileCoord(1, 1)
    msg = pr.make_write(space3, a, TileCoord(1, 3), 4)
    bad = msg.clone(direct=(msg.direct[0].__class__(0, msg.direct[0].ex),)
                    + (GatePair(6, 0),))
    state, reason = pr.convey_private(space3.record(a), bad)
    assert state == "dropped" and "inconsistent" in reason


def test_make_answer_swaps_stacks(space3):
    a, b = TileCoord(2, 2), TileCoord(1, 5)
    msg = pr.make_write(space3, a, b, 7)
    cur, rec = a, space3.record(a)
    while True:
        state, *rest = pr.convey_private(space3.record(cur), msg)
        if state == "delivered":
            msg = rest[0]
            break
        cur, msg = rest
    answer = pr.make_answer(msg, 8)
    assert answer.direct == msg.wayback and answer.wayback == ()
    walked = route_walk(space3, b, Route(answer.direct))
    assert walked[-1] == a
    # answering the answer retraces the original route
    twice = pr.make_answer(
        answer.clone(direct=(), wayback=reverse_route(Route(answer.direct)).steps), 9)
    assert twice.direct == reverse_route(Route(answer.direct)).steps


def test_make_answer_requires_delivery():
    with pytest.raises(ValueError):
        pr.make_answer(pr.Message(id=1, kind="nonpublic",
                                  direct=(GatePair(0, 1), GatePair(1, 0))), 2)


def test_make_reply_routes_back_to_sender(space4):
    # drive a copy two hops by hand and reply from there
    sender = TileCoord(1, 3)
    m = pr.fresh_public(1)
    placed, _ = pr.emit_public(space4.record(sender), m, radius=3)
    dest, copy = placed[3]
    placed2 = pr.relay_public(space4.record(dest), copy)
    dest2, copy2 = placed2[0]
    reply = pr.make_reply(space4.record(dest2), copy2, 2)
    walked = route_walk(space4, dest2, Route(reply.direct))
    assert walked[-1] == sender
    assert len(reply.direct) - 1 == bfs_distance(space4, dest2, sender)


def test_make_write_validates(space3):
    t = TileCoord(1, 5)
    with pytest.raises(ValueError):
        pr.make_write(space3, t, t, 1)
    msg = pr.make_write(space3, TileCoord(1, 1), TileCoord(4, 1), 1)
    assert len(msg.direct) - 1 == 2


def test_step_erasing_dispatch(space3):
    rec = space3.record(TileCoord(1, 1))
    held = pr.Message(id=3, kind="erasing", wait=3)
    state, kept = pr.step_erasing(rec, held)
    assert state == "hold" and kept.wait == 2
    state, placed = pr.step_erasing(rec, held.clone(wait=1))
    assert state == "flood" and len(placed) == 7
    travelling = placed[0][1]
    state, onward = pr.step_erasing(space3.record(placed[0][0]), travelling)
    assert state == "relay"
