"""Source routes on the heptagrid and the linear shortest-path computation.

A route is a sequence of (entry, exit) gate pairs, one per tile on the
path; entry 0 marks the source, exit 0 the target.  Walking a route means
leaving each tile by its exit gate and entering the next by the announced
entry gate, which must agree with the associate table of the side crossed.

Shortest paths are found without search.  From the central tile every tile
at tree level n is at graph distance n+1, and the shortest paths to it form
a small DAG: a white node is reached only through its father, a black node
through its father or through the neighbour behind its side 2 (the tile
just left of the father, possibly in the sector clockwise from here).  The
father chain is therefore the rightmost shortest path from the centre and
the greedy up-walk (side 2 while black, side 1 while white) the leftmost.

Between two arbitrary tiles: order them left to right as seen from the
centre, take the rightmost central path of the left tile and the leftmost
central path of the right tile, and advance along both while the running
tile distance (maintained by a three-state automaton) stays at most 1.
Where the paths separate the route closes with a short local bridge.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .heptagrid import BLACK, CENTRE, WHITE, Space, TileCoord


class GatePair(NamedTuple):
    en: int
    ex: int

    def __str__(self) -> str:
        return f"({self.en},{self.ex})"


@dataclass(frozen=True)
class Route:
    """Gate pairs in travel order; the anchor tile is implicit."""

    steps: tuple[GatePair, ...]

    def __post_init__(self):
        if not self.steps:
            raise ValueError("a route has at least one step")
        if self.steps[0].en != 0 or self.steps[-1].ex != 0:
            raise ValueError("a route starts with entry 0 and ends with exit 0")

    @property
    def moves(self) -> int:
        """Number of inter-tile moves."""
        return len(self.steps) - 1

    def __str__(self) -> str:
        return "".join(str(p) for p in self.steps)


class RouteError(ValueError):
    pass


def reverse_route(r: Route) -> Route:
    """The same walk read backwards: reverse the pairs and swap each one."""
    return Route(tuple(GatePair(ex, en) for en, ex in reversed(r.steps)))


def route_walk(space: Space, anchor: TileCoord, r: Route) -> list[TileCoord]:
    """Tiles visited by a route; raises RouteError on any inconsistency."""
    tiles = [anchor]
    cur = anchor
    for i, (en, ex) in enumerate(r.steps):
        if i > 0 and en == 0:
            raise RouteError(f"entry 0 after the first step in {r}")
        if ex == 0:
            if i != len(r.steps) - 1:
                raise RouteError(f"exit 0 before the last step in {r}")
            break
        rec = space.record(cur)
        if rec.outer[ex - 1]:
            raise RouteError(f"route leaves the space at {cur} side {ex}")
        if r.steps[i + 1].en != rec.associate[ex - 1]:
            raise RouteError(
                f"entry {r.steps[i + 1].en} does not match side {ex} of {cur}"
            )
        cur = rec.gate(ex)
        tiles.append(cur)
    return tiles


def pathroot(t: TileCoord) -> Route:
    """Route from the central tile to t, scanned off the digits of its word.

    The word is consumed two digits per tree level, low end first; each
    digit pair fixes the gate by which the father reaches the node.  When
    the upper digit of a pair is set, the next higher digit is forced on,
    a carry that keeps the remaining prefix equal to the father's word.
    Time is linear in the word length.
    """
    if t.is_central:
        raise ValueError("the central tile needs no route to itself")
    rep = [0] + list(t.word.bits)  # rep[j] = digit of weight fib(j)
    last = len(rep) - 1
    pairs = [GatePair(1, 0)]
    cursor = 1
    while cursor < last:
        if cursor + 1 > last:
            out = 4 + rep[cursor]
        else:
            out = 4 - rep[cursor + 1] + rep[cursor]
            if rep[cursor + 1] == 1 and cursor + 2 <= last:
                rep[cursor + 2] = 1
        pairs.append(GatePair(1, out))
        cursor += 2
    pairs.append(GatePair(0, t.sector))
    pairs.reverse()
    return Route(tuple(pairs))


class PathStep(NamedTuple):
    tile: TileCoord
    en: int
    ex: int
    status: str


def _enrich(space: Space, anchor: TileCoord, r: Route) -> list[PathStep]:
    tiles = route_walk(space, anchor, r)
    return [
        PathStep(tile, pair.en, pair.ex, space.record(tile).status)
        for tile, pair in zip(tiles, r.steps)
    ]


def _gate_between(space: Space, a: TileCoord, b: TileCoord) -> int | None:
    rec = space.record(a)
    for i in range(1, 8):
        if not rec.outer[i - 1] and rec.gate(i) == b:
            return i
    return None


def _route_from_tiles(space: Space, tiles: list[TileCoord]) -> Route:
    """Assemble the gate pairs of a concrete tile walk."""
    pairs = []
    entry = 0
    for cur, nxt in zip(tiles, tiles[1:]):
        g = _gate_between(space, cur, nxt)
        if g is None:
            raise RouteError(f"{cur} and {nxt} are not neighbours")
        pairs.append(GatePair(entry, g))
        entry = space.record(cur).associate[g - 1]
    pairs.append(GatePair(entry, 0))
    return Route(tuple(pairs))


def _up_chain(space: Space, t: TileCoord) -> list[int]:
    """Node numbers from t up to the sector root along fathers."""
    chain = [t.num]
    while chain[-1] != 1:
        chain.append(space.father(chain[-1]))
    return chain


def _root_gates(space: Space, num: int) -> list[int]:
    """Son gates taken from the root down to the node along the father chain."""
    chain = _up_chain(space, TileCoord(1, num))
    gates = []
    for child, fa in zip(chain, chain[1:]):
        gates.append(4 + child - space.sigma(fa))
    gates.reverse()
    return gates


def theleftmost(space: Space, t1: TileCoord, t2: TileCoord) -> TileCoord:
    """The one of two distinct tiles lying further left as seen from the centre.

    Across sectors the cyclic order decides (the sector clockwise from
    another is left of it); within a sector the father chains are compared
    from the root down, lower son gate first.  If one tile is an ancestor
    of the other, the ancestor counts as leftmost.
    """
    if t1 == t2:
        raise ValueError("tiles must differ")
    if t1.is_central or t2.is_central:
        raise ValueError("the central tile is not ordered")
    if t1.sector != t2.sector:
        return t1 if (t2.sector - t1.sector) % 7 <= 3 else t2
    g1, g2 = _root_gates(space, t1.num), _root_gates(space, t2.num)
    for a, b in zip(g1, g2):
        if a != b:
            return t1 if a < b else t2
    return t1 if len(g1) <= len(g2) else t2


def _leftmost_gate(a: int, b: int) -> int:
    return a if (b - a) % 7 <= 3 else b


def leftmost(space: Space, r: Route) -> Route:
    """The leftmost shortest path from the centre to the target of r.

    Rebuilt by the greedy up-walk from the target: a black tile is entered
    from above through its side 2, a white tile through its side 1, until
    the walk reaches the central tile.  Every up-step is forced, so the
    result is unique and costs one pass up plus one pass down.
    """
    tiles = route_walk(space, CENTRE, r)
    target = tiles[-1]
    if target.is_central:
        return r
    up = [target]
    while not up[-1].is_central:
        rec = space.record(up[-1])
        up.append(rec.gate(2) if rec.status == BLACK else rec.gate(1))
    up.reverse()
    out = _route_from_tiles(space, up)
    if out.moves != r.moves:
        raise RouteError(f"leftmost changed the length of {r}")
    return out


def measure(
    side: str, distance: int, lmark: PathStep, rmark: PathStep
) -> tuple[int, str]:
    """Distance between the tiles one step ahead of two central paths.

    The automaton state records how the paths currently sit: ``equal`` on
    the same tile, ``normal`` at distance 1 with the L path on the left,
    ``opposite`` at distance 1 with the L path on the right.  On the same
    tile the next tiles hang on a fan below it and the gate difference is
    their distance; the first step (entry 0, at the centre) uses cyclic
    gate arithmetic instead.  At distance 1 the next tiles sit either side
    of the shared wall: count gates from each exit to that wall, plus one
    when the rightmost of the two tiles is white (its fan is one wider).
    A vanished exit gate (a path already at its target) keeps the previous
    distance alive.
    """
    lg, rg = lmark.ex, rmark.ex
    if side == "equal":
        if lmark.en == 0:
            hi, lo = max(lg, rg), min(lg, rg)
            distance = min(hi - lo, lo + 7 - hi)
        elif lg != 0 and rg != 0:
            distance = max(lg, rg) - min(lg, rg)
        if lg != 0 and rg != 0 and lg != rg:
            side = "normal" if _leftmost_gate(lg, rg) == lg else "opposite"
    elif side == "normal":
        if lg != 0 and rg != 0:
            distance = 5 - lg + rg - 3
            if rmark.status == WHITE:
                distance += 1
            if distance == 0:
                side = "equal"
    else:  # opposite: the roles of the two paths are mirrored
        if lg != 0 and rg != 0:
            distance = 5 - rg + lg - 3
            if lmark.status == WHITE:
                distance += 1
            if distance == 0:
                side = "equal"
    return distance, side


def _local_distance(space: Space, a: TileCoord, b: TileCoord):
    """(distance, middle tile) for tiles at most 2 apart, else None."""
    if a == b:
        return 0, None
    if _gate_between(space, a, b) is not None:
        return 1, None
    ra, rb = space.record(a), space.record(b)
    mids = set(n for n, o in zip(ra.neighbour, ra.outer) if not o) & set(
        n for n, o in zip(rb.neighbour, rb.outer) if not o
    )
    if mids:
        return 2, min(mids)
    return None


def _chain_route(space: Space, upper: TileCoord, lower: TileCoord) -> Route:
    """Route down the father chain from an ancestor to a descendant."""
    full = pathroot(lower)
    idx = space.level(upper.num) + 1
    first = GatePair(0, full.steps[idx].ex)
    return Route((first,) + full.steps[idx + 1 :])


def _ancestor(space: Space, t1: TileCoord, t2: TileCoord) -> Route | None:
    if t1.sector != t2.sector:
        return None
    l1, l2 = space.level(t1.num), space.level(t2.num)
    if l1 == l2:
        return None
    upper, lower = (t1, t2) if l1 < l2 else (t2, t1)
    num = lower.num
    for _ in range(abs(l2 - l1)):
        num = space.father(num)
    if num != upper.num:
        return None
    down = _chain_route(space, upper, lower)
    return down if upper == t1 else reverse_route(down)


def shortest(space: Space, t1: TileCoord, t2: TileCoord) -> Route:
    """A route from t1 to t2 whose length is the graph distance.

    The two central paths are walked in step while the measured distance
    ahead stays at most 1.  The final route reverses the tail of the left
    path, bridges the gap (0, 1 or 2 lateral moves) and follows the tail
    of the right path; the bridge one step beyond the stop point is also
    tried, since a 2-move bridge there can save one move overall.
    """
    if t1 == t2:
        raise ValueError("tiles must differ")
    if not (space.contains(t1) and space.contains(t2)):
        raise ValueError("both tiles must lie in the space")
    if t1.is_central:
        return pathroot(t2)
    if t2.is_central:
        return reverse_route(pathroot(t1))
    chain = _ancestor(space, t1, t2)
    if chain is not None:
        return chain

    ltile = theleftmost(space, t1, t2)
    rtile = t2 if ltile == t1 else t1
    lpath = _enrich(space, CENTRE, pathroot(ltile))
    rpath = _enrich(space, CENTRE, leftmost(space, pathroot(rtile)))

    side, distance = "equal", 0
    p = 0
    while True:
        distance, side = measure(side, distance, lpath[p], rpath[p])
        if p + 1 >= len(lpath) or p + 1 >= len(rpath) or distance > 1:
            break
        p += 1

    best = None
    for j in (p, p + 1):
        if j >= len(lpath) or j >= len(rpath):
            continue
        local = _local_distance(space, lpath[j].tile, rpath[j].tile)
        if local is None:
            continue
        d, mid = local
        cost = (len(lpath) - 1 - j) + d + (len(rpath) - 1 - j)
        if best is None or cost < best[0]:
            best = (cost, j, d, mid)
    if best is None:
        raise RouteError(f"paths to {t1} and {t2} lost each other")
    _, j, d, mid = best

    tiles = [step.tile for step in reversed(lpath[j:])]
    if mid is not None:
        tiles.append(mid)
    rtail = [step.tile for step in rpath[j:]]
    tiles.extend(rtail if d > 0 else rtail[1:])
    out = _route_from_tiles(space, tiles)
    return out if ltile == t1 else reverse_route(out)
