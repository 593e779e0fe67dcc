"""The simulation space: seven Fibonacci trees around a central heptagon.

The {7,3} tessellation splits into a central tile and seven sectors, each
spanned by a tree generated by the node rules

    black -> black white        white -> black white white

with the root white.  Numbering the nodes of a sector level by level and
left to right from 1, the node count of level n is fib(2n+1) and a node's
word (its greedy Fibonacci numeral) determines everything local: status,
father, preferred son, and the numbers of all seven neighbours.

Sides of every tile are numbered 1..7 counter-clockwise with side 1 facing
the father (the central tile for roots; a fixed side for the central tile).
A shared side therefore carries two numbers, one per tile; the ``associate``
table of a record gives, for each side i, its number inside neighbour i.
Only a dozen number pairs ever occur on a side; they are listed in
``SIDE_PAIRS``.

Sector k+1 lies counter-clockwise from sector k.  The leftmost branch of a
sector is glued to the rightmost branch of the sector clockwise from it,
which is where the cross-sector rows of the neighbour patterns point.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import fibcode
from .fibcode import FibWord, decode, encode, fib

WHITE = "white"
BLACK = "black"
CENTRAL = "central"

# (number in this tile, number in the neighbour) for every side that occurs.
SIDE_PAIRS = frozenset(
    {(1, 3), (1, 4), (1, 5), (2, 6), (2, 7), (3, 7), (3, 1),
     (4, 1), (5, 1), (6, 2), (7, 2), (7, 3)}
)


@dataclass(frozen=True, order=True)
class TileCoord:
    """Sector 0..7 plus node number; sector 0 is the central tile (num fixed to 1)."""

    sector: int
    num: int

    def __post_init__(self):
        if not 0 <= self.sector <= 7:
            raise ValueError(f"sector out of range: {self.sector}")
        if self.sector == 0 and self.num != 1:
            raise ValueError("the central tile is written 0:1")
        if self.num < 1:
            raise ValueError(f"node numbers start at 1, got {self.num}")

    @property
    def is_central(self) -> bool:
        return self.sector == 0

    @property
    def word(self) -> FibWord:
        return encode(self.num)

    def __str__(self) -> str:
        return f"{self.sector}:{encode(self.num)}"

    @classmethod
    def parse(cls, text: str) -> "TileCoord":
        sector_text, _, num_text = text.partition(":")
        if not num_text:
            raise ValueError(f"coordinate must look like sector:word, got {text!r}")
        return cls(int(sector_text), decode(fibcode.parse(num_text)))


CENTRE = TileCoord(0, 1)


def sector_ccw(s: int) -> int:
    """The next sector counter-clockwise."""
    return s % 7 + 1


def sector_cw(s: int) -> int:
    """The next sector clockwise (the sector on the left)."""
    return (s - 2) % 7 + 1


@dataclass(frozen=True)
class TileRecord:
    coord: TileCoord
    status: str
    branch: str
    level: int
    neighbour: tuple[TileCoord, ...]   # indexed 0..6 for sides 1..7
    associate: tuple[int, ...]         # number of side i inside neighbour i
    outer: tuple[bool, ...]            # neighbour i lies outside the space
    border: bool

    def gate(self, i: int) -> TileCoord:
        """Neighbour behind side i (1..7)."""
        return self.neighbour[i - 1]

    def dump_line(self) -> str:
        ns = " ".join(str(n) for n in self.neighbour)
        al = " ".join(str(a) for a in self.associate)
        return f"{self.coord} {self.status} {self.branch} {ns} {al}"


def neighbors_of(t: TileCoord) -> tuple[TileCoord, ...]:
    """The seven neighbours of a tile, all number arithmetic done on words.

    Patterns by position of the node (f = father number, s = preferred son
    number, v = own number):

        inside black: f, f-1, v-1, s, s+1, s+2, v+1
        inside white: f, v-1, s-1, s, s+1, s+2, v+1
        left branch:  f, v-1, s-1, s, s+1, s+2, v+1   (sides 2,3 one sector clockwise)
        right branch: f, v-1, s-1, s, s+1, v+1, f+1   (sides 6,7 one sector ccw)
        root:         centre, root cw, 2, 3, 4, 2 ccw, root ccw
        central tile: side i gives the root of sector i
    """
    if t.is_central:
        return tuple(TileCoord(i, 1) for i in range(1, 8))
    w = t.word
    sec, cw, ccw = t.sector, sector_cw(t.sector), sector_ccw(t.sector)
    branch = fibcode.branch_of(w)
    if branch == "root":
        return (
            CENTRE,
            TileCoord(cw, 1),
            TileCoord(sec, 2),
            TileCoord(sec, 3),
            TileCoord(sec, 4),
            TileCoord(ccw, 2),
            TileCoord(ccw, 1),
        )
    fa = fibcode.father(w)
    son = fibcode.preferred_son(w)
    if branch == "left":
        return (
            TileCoord(sec, decode(fa)),
            TileCoord(cw, decode(fibcode.pred(w))),
            TileCoord(cw, decode(fibcode.pred(son))),
            TileCoord(sec, decode(son)),
            TileCoord(sec, decode(fibcode.succ(son))),
            TileCoord(sec, decode(fibcode.succ(fibcode.succ(son)))),
            TileCoord(sec, decode(fibcode.succ(w))),
        )
    if branch == "right":
        return (
            TileCoord(sec, decode(fa)),
            TileCoord(sec, decode(fibcode.pred(w))),
            TileCoord(sec, decode(fibcode.pred(son))),
            TileCoord(sec, decode(son)),
            TileCoord(sec, decode(fibcode.succ(son))),
            TileCoord(ccw, decode(fibcode.succ(w))),
            TileCoord(ccw, decode(fibcode.succ(fa))),
        )
    if fibcode.status_of(w) == BLACK:
        return (
            TileCoord(sec, decode(fa)),
            TileCoord(sec, decode(fibcode.pred(fa))),
            TileCoord(sec, decode(fibcode.pred(w))),
            TileCoord(sec, decode(son)),
            TileCoord(sec, decode(fibcode.succ(son))),
            TileCoord(sec, decode(fibcode.succ(fibcode.succ(son)))),
            TileCoord(sec, decode(fibcode.succ(w))),
        )
    return (
        TileCoord(sec, decode(fa)),
        TileCoord(sec, decode(fibcode.pred(w))),
        TileCoord(sec, decode(fibcode.pred(son))),
        TileCoord(sec, decode(son)),
        TileCoord(sec, decode(fibcode.succ(son))),
        TileCoord(sec, decode(fibcode.succ(fibcode.succ(son)))),
        TileCoord(sec, decode(fibcode.succ(w))),
    )


class Space:
    """All tiles of level <= depth in every sector, plus the central tile.

    One sector's tree is materialized as integer arrays (fathers, preferred
    sons, statuses); the seven sectors share it.  Records are assembled on
    demand and cached.
    """

    MAX_DEPTH = 12

    def __init__(self, depth: int):
        if not 1 <= depth <= self.MAX_DEPTH:
            raise ValueError(f"depth must be in 1..{self.MAX_DEPTH}, got {depth}")
        self.depth = depth
        self.maxsize = fib(2 * depth + 2) - 1
        self.level_start = [1] + [fib(2 * n) for n in range(1, depth + 1)]
        self.level_end = [fib(2 * n + 2) - 1 for n in range(0, depth + 1)]
        self._build_tree()
        self._records: dict[TileCoord, TileRecord] = {}

    def _build_tree(self):
        size = self.maxsize
        status = [""] * (size + 1)
        father = [0] * (size + 1)
        sigma = [0] * (size + 1)
        status[1] = WHITE
        next_son = 2
        for v in range(1, size + 1):
            sons = 2 if status[v] == BLACK else 3
            # the preferred son is the black first son of a black node,
            # the white middle son of a white node
            sigma[v] = next_son if status[v] == BLACK else next_son + 1
            for k in range(sons):
                s = next_son + k
                if s <= size:
                    father[s] = v
                    status[s] = BLACK if k == 0 else WHITE
            next_son += sons
        self._status = status
        self._father = father
        self._sigma = sigma

    # -- basic queries ------------------------------------------------

    @property
    def tile_count(self) -> int:
        return 7 * self.maxsize + 1

    def level_width(self, n: int) -> int:
        """Nodes per sector on level n."""
        return self.level_end[n] - self.level_start[n] + 1

    def contains(self, t: TileCoord) -> bool:
        if t.is_central:
            return True
        return 1 <= t.sector <= 7 and 1 <= t.num <= self.maxsize

    def level(self, num: int) -> int:
        lo, hi = 0, self.depth
        while lo < hi:
            mid = (lo + hi) // 2
            if num > self.level_end[mid]:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def status(self, num: int) -> str:
        return self._status[num]

    def father(self, num: int) -> int:
        return self._father[num]

    def sigma(self, num: int) -> int:
        return self._sigma[num]

    def branch(self, num: int) -> str:
        if num == 1:
            return "root"
        n = self.level(num)
        if num == self.level_start[n]:
            return "left"
        if num == self.level_end[n]:
            return "right"
        return "middle"

    def tiles(self):
        """Canonical enumeration: centre first, then sectors 1..7 node by node."""
        yield CENTRE
        for sector in range(1, 8):
            for num in range(1, self.maxsize + 1):
                yield TileCoord(sector, num)

    # -- records --------------------------------------------------------

    def record(self, t: TileCoord) -> TileRecord:
        rec = self._records.get(t)
        if rec is None:
            rec = self._make_record(t)
            self._records[t] = rec
        return rec

    def associate_of(self, t: TileCoord, side: int) -> int:
        """Number of side ``side`` of t inside the neighbour behind it."""
        if not 1 <= side <= 7:
            raise ValueError(f"sides are numbered 1..7, got {side}")
        return self.record(t).associate[side - 1]

    def _make_record(self, t: TileCoord) -> TileRecord:
        if t.is_central:
            rec = TileRecord(
                coord=t,
                status=CENTRAL,
                branch="centre",
                level=0,
                neighbour=tuple(TileCoord(i, 1) for i in range(1, 8)),
                associate=(1,) * 7,
                outer=(False,) * 7,
                border=False,
            )
            return rec
        if not self.contains(t):
            raise ValueError(f"{t} lies outside the built space")
        v = t.num
        sec, cw, ccw = t.sector, sector_cw(t.sector), sector_ccw(t.sector)
        branch = self.branch(v)
        level = self.level(v)
        fa, sg = self._father[v], self._sigma[v]
        if branch == "root":
            neigh = (CENTRE, TileCoord(cw, 1), TileCoord(sec, 2), TileCoord(sec, 3),
                     TileCoord(sec, 4), TileCoord(ccw, 2), TileCoord(ccw, 1))
            assoc = (sec, 7, 1, 1, 1, 2, 2)
        elif branch == "left":
            neigh = (TileCoord(sec, fa), TileCoord(cw, v - 1), TileCoord(cw, sg - 1),
                     TileCoord(sec, sg), TileCoord(sec, sg + 1), TileCoord(sec, sg + 2),
                     TileCoord(sec, v + 1))
            assoc = (4 + v - self._sigma[fa], 6, 7, 1, 1, 2, 2)
        elif branch == "right":
            neigh = (TileCoord(sec, fa), TileCoord(sec, v - 1), TileCoord(sec, sg - 1),
                     TileCoord(sec, sg), TileCoord(sec, sg + 1), TileCoord(ccw, v + 1),
                     TileCoord(ccw, fa + 1))
            assoc = (5, 7, 1, 1, 1, 2, 3)
        elif self._status[v] == BLACK:
            neigh = (TileCoord(sec, fa), TileCoord(sec, fa - 1), TileCoord(sec, v - 1),
                     TileCoord(sec, sg), TileCoord(sec, sg + 1), TileCoord(sec, sg + 2),
                     TileCoord(sec, v + 1))
            assoc = (4 + v - self._sigma[fa], 6, 7, 1, 1, 2, 2)
        else:
            # v+1 shares the same level here, so its status is always on file
            gate7 = 3 if self._status[v + 1] == BLACK else 2
            neigh = (TileCoord(sec, fa), TileCoord(sec, v - 1), TileCoord(sec, sg - 1),
                     TileCoord(sec, sg), TileCoord(sec, sg + 1), TileCoord(sec, sg + 2),
                     TileCoord(sec, v + 1))
            assoc = (4 + v - self._sigma[fa], 7, 1, 1, 1, 2, gate7)
        outer = tuple(n.num > self.maxsize for n in neigh)
        return TileRecord(
            coord=t,
            status=self._status[v],
            branch=branch,
            level=level,
            neighbour=neigh,
            associate=assoc,
            outer=outer,
            border=(level == self.depth),
        )

    def dump(self):
        """One diagnostic line per tile, in canonical order."""
        for t in self.tiles():
            yield self.record(t).dump_line()


def build_space(depth: int) -> Space:
    return Space(depth)
