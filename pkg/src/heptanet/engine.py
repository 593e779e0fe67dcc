"""Deterministic discrete-time simulation driver.

Every tile owns two message stacks: the one being read (time t) and the
one being written (time t+1).  A transition scans each tile's current
stack, lets each message act, and appends the results to the target
stacks only; the new state is therefore a pure function of the old and
the order in which tiles are processed cannot matter.  Randomness comes
from counter-based streams keyed by (purpose, tile, tick, extra), so any
schedule, serial or sharded, draws identical values.

Message identifiers are also schedule-independent: messages born during a
transition are numbered only after the whole transition, in the order of
their (tile, purpose) birth keys.

Traffic follows the protocol module: public broadcasts are drawn at even
ticks and first sent at the following odd tick, travelling at speed 1/2
with a delayed erasing twin; nonpublic messages move every tick and every
delivery immediately turns around as an answer, so a conversation never
ends.  Only freshly decided emissions (public, reply, write) and erasing
releases are counted as emitted; answers just keep flowing.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from hashlib import blake2b

from . import protocol
from .heptagrid import Space, TileCoord
from .protocol import ERASING, Message, NONPUBLIC, PUBLIC

# stream purposes
_RADIUS, _REPLY, _WRITE, _PUBLIC, _BORDER, _TARGET = range(1, 7)

# birth-key purposes, in the order ids are handed out within one tile
_BORN_PUBLIC, _BORN_BORDER, _BORN_WRITE, _BORN_REPLY, _BORN_ANSWER = range(5)


class RngStream:
    """A lazily extended stream of uniforms under one key.

    Each 64-byte digest of (seed, key, block counter) yields eight
    uniforms; equal keys give equal streams no matter who asks first.
    """

    def __init__(self, seed_bytes: bytes, key: tuple[int, ...]):
        h = blake2b(digest_size=16)
        h.update(seed_bytes)
        h.update(struct.pack(f">{len(key)}q", *key))
        self._prefix = h.digest()
        self._block = 0
        self._buf: list[float] = []

    def uniform(self) -> float:
        if not self._buf:
            digest = blake2b(
                self._prefix + self._block.to_bytes(8, "big"), digest_size=64
            ).digest()
            self._block += 1
            self._buf = [
                int.from_bytes(digest[i : i + 8], "big") / 2**64
                for i in range(56, -8, -8)
            ]
        return self._buf.pop()

    def poisson(self, lam: float) -> int:
        return poisson_draw(self, lam)

    def randint(self, lo: int, hi: int) -> int:
        return lo + int(self.uniform() * (hi - lo + 1))


def poisson_draw(stream: RngStream, lam: float) -> int:
    """Poisson sample by the multiplicative uniform loop.

    Uniforms are multiplied until the product drops below exp(-lam); the
    number of survived rounds is the sample.  lam = 0 is an immediate 0
    and consumes nothing (streams are never shared between purposes, so
    skipping the draw shifts no other sequence).
    """
    if lam <= 0:
        return 0
    threshold = math.exp(-lam)
    count = 0
    product = 1.0
    while True:
        product *= stream.uniform()
        if product < threshold:
            return count
        count += 1


class KeyedRng:
    def __init__(self, seed: int):
        self._seed = seed.to_bytes(8, "big", signed=False)

    def stream(self, *key: int) -> RngStream:
        return RngStream(self._seed, key)


@dataclass(frozen=True)
class SimConfig:
    depth: int = 5
    iterations: int = 168
    lambda_public: float = 0.005
    lambda_border: float = 0.0025
    lambda_reply: float = 0.0025
    lambda_write: float = 0.001
    lambda_radius: float = 5.0
    seed: int = 0
    trace: bool = False

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        for name in ("lambda_public", "lambda_border", "lambda_reply",
                     "lambda_write", "lambda_radius"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass
class Snapshot:
    """State and traffic figures right after one transition."""

    t: int
    emitted_public: int
    emitted_reply: int
    emitted_write: int
    emitted_erase: int
    cum_public: int
    cum_reply: int
    cum_write: int
    cum_erase: int
    in_flight_public: int
    in_flight_nonpublic: int
    in_flight_erasing: int
    max_per_tile: int
    argmax: TileCoord
    # per message kind: (stack share of that kind at its busiest tile, the tile)
    argmax_by_kind: dict = field(default_factory=dict)

    @property
    def in_flight_total(self) -> int:
        return self.in_flight_public + self.in_flight_nonpublic + self.in_flight_erasing

    @property
    def cum_emitted(self) -> int:
        return self.cum_public + self.cum_reply + self.cum_write

    def csv_row(self) -> str:
        return (
            f"{self.t},{self.emitted_public},{self.emitted_reply},"
            f"{self.emitted_write},{self.emitted_erase},{self.in_flight_total},"
            f"{self.max_per_tile},{self.argmax}"
        )


CSV_HEADER = "t,public,reply,write,erase,in_flight,max_per_tile,argmax"


@dataclass
class Report:
    config: SimConfig
    tile_count: int
    snapshots: list[Snapshot] = field(default_factory=list)

    @property
    def final(self) -> Snapshot:
        return self.snapshots[-1]

    @property
    def total_emitted(self) -> int:
        return self.final.cum_emitted

    @property
    def mean_emitted_per_tick(self) -> float:
        """Average over t of (messages emitted up to t) / t."""
        tail = self.snapshots[1:]
        if not tail:
            return 0.0
        return sum(s.cum_emitted / s.t for s in tail) / len(tail)

    @property
    def max_per_tile(self) -> tuple[int, int, TileCoord]:
        best = max(self.snapshots, key=lambda s: (s.max_per_tile, -s.t))
        return best.max_per_tile, best.t, best.argmax

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        lines.extend(s.csv_row() for s in self.snapshots)
        return "\n".join(lines) + "\n"

    def summary_text(self) -> str:
        f = self.final
        total = self.total_emitted
        mx, mx_t, mx_at = self.max_per_tile

        def ratio(n):
            return f"{n / total:.3f}" if total else "-"

        lines = [
            f"depth    {self.config.depth}",
            f"tiles    {self.tile_count}",
            f"time     {self.config.iterations}",
            f"sent     {total}",
            f"mean     {self.mean_emitted_per_tick:.5f}",
            f"public   {f.cum_public}  ratio {ratio(f.cum_public)}",
            f"reply    {f.cum_reply}  ratio {ratio(f.cum_reply)}",
            f"write    {f.cum_write}  ratio {ratio(f.cum_write)}",
            f"erase    {f.cum_erase}",
            f"max      {mx}  at {mx_at}  t {mx_t}",
            f"seed     {self.config.seed}",
        ]
        return "\n".join(lines) + "\n"


class Engine:
    """Owns the stacks, the clock, the RNG and the statistics of one run."""

    def __init__(self, space: Space, config: SimConfig, on_event=None):
        if space.depth != config.depth:
            raise ValueError("space depth and config depth disagree")
        self.space = space
        self.config = config
        self.rng = KeyedRng(config.seed)
        self.stacks: dict[TileCoord, list[Message]] = {}
        self.tick = 0
        self.on_event = on_event
        self._next_id = 1
        self._cum = {"public": 0, "reply": 0, "write": 0, "erase": 0}

    # -- helpers ---------------------------------------------------------

    def _event(self, action: str, msg: Message, coord: TileCoord, tick: int):
        if self.on_event is not None:
            self.on_event(action, tick, msg, coord)

    def trace_line(self, action, tick, msg, coord) -> str:
        return f"t={tick} kind={msg.kind} id={msg.id} at={coord} action={action}"

    def inject(self, coord: TileCoord, msg: Message):
        """Place a message into the current state (testing and tooling)."""
        if msg.id < 0:
            msg.id = self._next_id
            self._next_id += 1
        self.stacks.setdefault(coord, []).append(msg)

    # -- the per-tile action --------------------------------------------

    def _action_in(self, coord: TileCoord, out, born):
        t = self.tick
        cfg = self.config
        even = t % 2 == 0
        stack = self.stacks.get(coord)
        rec = None
        if stack:
            rec = self.space.record(coord)
            public_ids = {m.id for m in stack if m.kind == PUBLIC}
            erasing_ids = {m.id for m in stack if m.kind == ERASING}
            sec, num = coord.sector, coord.num
            for m in stack:
                if m.kind == PUBLIC:
                    if not even:
                        if protocol.is_fresh(m):
                            radius = m.wait
                            if radius <= 0:
                                radius = max(
                                    1,
                                    self.rng.stream(_RADIUS, sec, num, t).poisson(
                                        cfg.lambda_radius
                                    ),
                                )
                            placed, eraser = protocol.emit_public(rec, m, radius)
                            for dest, copy in placed:
                                out.setdefault(dest, []).append(copy)
                            out.setdefault(coord, []).append(eraser)
                            self._event("relay", m, coord, t)
                        elif m.id in erasing_ids:
                            self._event("cancel", m, coord, t)
                        else:
                            for dest, copy in protocol.relay_public(rec, m):
                                out.setdefault(dest, []).append(copy)
                            self._event("relay", m, coord, t)
                    else:
                        out.setdefault(coord, []).append(m)
                        if not protocol.is_fresh(m) and cfg.lambda_reply > 0:
                            draw = self.rng.stream(
                                _REPLY, sec, num, t, m.id
                            ).poisson(cfg.lambda_reply)
                            if draw > 0:
                                reply = protocol.make_reply(rec, m, -1)
                                out.setdefault(coord, []).append(reply)
                                born.append(((sec, num, _BORN_REPLY, m.id), reply, coord))
                elif m.kind == NONPUBLIC:
                    self._convey(rec, coord, m, out, born)
                else:  # erasing
                    if m.wait == 0 and m.id in public_ids:
                        self._event("cancel", m, coord, t)
                        continue
                    state, result = protocol.step_erasing(rec, m)
                    if state == "hold":
                        out.setdefault(coord, []).append(result)
                    else:
                        for dest, copy in result:
                            out.setdefault(dest, []).append(copy)
                        if state == "flood":
                            self._cum["erase"] += 1
                            self._tick_emitted["erase"] += 1
                            self._event("erase", m, coord, t)
                        else:
                            self._event("convey", m, coord, t)

        # spontaneous emissions
        sec, num = coord.sector, coord.num
        if cfg.lambda_write > 0:
            if self.rng.stream(_WRITE, sec, num, t).poisson(cfg.lambda_write) > 0:
                target = self._draw_target(coord, t)
                msg = protocol.make_write(self.space, coord, target, -1)
                out.setdefault(coord, []).append(msg)
                born.append(((sec, num, _BORN_WRITE, 0), msg, coord))
        if even:
            if cfg.lambda_public > 0:
                if self.rng.stream(_PUBLIC, sec, num, t).poisson(cfg.lambda_public) > 0:
                    msg = protocol.fresh_public(-1)
                    out.setdefault(coord, []).append(msg)
                    born.append(((sec, num, _BORN_PUBLIC, 0), msg, coord))
            if cfg.lambda_border > 0 and not coord.is_central:
                if rec is None:
                    rec = self.space.record(coord)
                if rec.border:
                    draw = self.rng.stream(_BORDER, sec, num, t).poisson(
                        cfg.lambda_border
                    )
                    if draw > 0:
                        msg = protocol.fresh_public(-1)
                        out.setdefault(coord, []).append(msg)
                        born.append(((sec, num, _BORN_BORDER, 0), msg, coord))

    def _convey(self, rec, coord, m, out, born):
        t = self.tick
        action = protocol.convey_private(rec, m)
        if action[0] == "forward":
            _, dest, moved = action
            out.setdefault(dest, []).append(moved)
            self._event("convey", m, coord, t)
        elif action[0] == "delivered":
            delivered = action[1]
            self._event("deliver", delivered, coord, t)
            answer = protocol.make_answer(delivered, -1)
            born.append(((coord.sector, coord.num, _BORN_ANSWER, m.id), answer, coord))
            # the turnaround is immediate: the answer leaves this very tick
            first = protocol.convey_private(rec, answer)
            if first[0] == "forward":
                _, dest, moved = first
                answer.direct = moved.direct
                answer.wayback = moved.wayback
                out.setdefault(dest, []).append(answer)
        else:
            self._event("drop", m, coord, t)

    def _draw_target(self, source: TileCoord, t: int) -> TileCoord:
        stream = self.rng.stream(_TARGET, source.sector, source.num, t)
        while True:
            target = TileCoord(
                stream.randint(1, 7), stream.randint(1, self.space.maxsize)
            )
            if target != source:
                return target

    # -- the global transition -------------------------------------------

    def _schedule(self):
        cfg = self.config
        draws = cfg.lambda_write > 0 or (
            self.tick % 2 == 0 and (cfg.lambda_public > 0 or cfg.lambda_border > 0)
        )
        if draws:
            return self.space.tiles()
        return sorted(self.stacks.keys())

    def transition(self, shard_order: list[int] | None = None):
        """Advance the state one tick.

        With ``shard_order`` the tiles are processed per-sector in the
        given permuted order, the way independent workers would; results
        are identical because contributions only ever land on next-tick
        stacks and all randomness is keyed.
        """
        self._tick_emitted = {"public": 0, "reply": 0, "write": 0, "erase": 0}
        born: list = []
        out: dict[TileCoord, list[Message]] = {}
        if shard_order is None:
            for coord in self._schedule():
                self._action_in(coord, out, born)
        else:
            shards = {s: [] for s in range(8)}
            for coord in self._schedule():
                shards[coord.sector].append(coord)
            for s in shard_order:
                for coord in shards[s]:
                    self._action_in(coord, out, born)
        born.sort(key=lambda b: b[0])
        for key, msg, coord in born:
            msg.id = self._next_id
            self._next_id += 1
            purpose = key[2]
            if purpose in (_BORN_PUBLIC, _BORN_BORDER):
                self._count("public")
                self._event("emit", msg, coord, self.tick)
            elif purpose == _BORN_WRITE:
                self._count("write")
                self._event("emit", msg, coord, self.tick)
            elif purpose == _BORN_REPLY:
                self._count("reply")
                self._event("emit", msg, coord, self.tick)
            else:
                # answers are visible but do not count as emissions
                self._event("emit", msg, coord, self.tick)
        for stack in out.values():
            stack.sort(key=_stack_key)
        self.stacks = {k: v for k, v in sorted(out.items()) if v}
        self.tick += 1

    def _count(self, kind: str):
        self._cum[kind] += 1
        self._tick_emitted[kind] += 1

    # -- statistics -------------------------------------------------------

    def collect(self) -> Snapshot:
        counts = {"public": 0, "nonpublic": 0, "erasing": 0}
        max_per_tile, argmax = 0, TileCoord(0, 1)
        by_kind = {k: (0, TileCoord(0, 1)) for k in counts}
        for coord in sorted(self.stacks.keys()):
            stack = self.stacks[coord]
            here = {"public": 0, "nonpublic": 0, "erasing": 0}
            for m in stack:
                counts[m.kind] += 1
                here[m.kind] += 1
            if len(stack) > max_per_tile:
                max_per_tile, argmax = len(stack), coord
            for kind, n in here.items():
                if n > by_kind[kind][0]:
                    by_kind[kind] = (n, coord)
        emitted = getattr(self, "_tick_emitted", None) or {
            "public": 0, "reply": 0, "write": 0, "erase": 0
        }
        return Snapshot(
            t=self.tick,
            emitted_public=emitted["public"],
            emitted_reply=emitted["reply"],
            emitted_write=emitted["write"],
            emitted_erase=emitted["erase"],
            cum_public=self._cum["public"],
            cum_reply=self._cum["reply"],
            cum_write=self._cum["write"],
            cum_erase=self._cum["erase"],
            in_flight_public=counts["public"],
            in_flight_nonpublic=counts["nonpublic"],
            in_flight_erasing=counts["erasing"],
            max_per_tile=max_per_tile,
            argmax=argmax,
            argmax_by_kind=by_kind,
        )

    def run(self, parallel: bool = False) -> Report:
        report = Report(self.config, self.space.tile_count)
        report.snapshots.append(self.collect())
        order_rng = self.rng.stream(0, 0, 0, 0)
        for _ in range(self.config.iterations):
            if parallel:
                order = list(range(8))
                # permute the shard schedule; the result must not notice
                for i in range(7, 0, -1):
                    j = order_rng.randint(0, i)
                    order[i], order[j] = order[j], order[i]
                self.transition(shard_order=order)
            else:
                self.transition()
            report.snapshots.append(self.collect())
        return report


def _stack_key(m: Message):
    kind_rank = {PUBLIC: 0, NONPUBLIC: 1, ERASING: 2}[m.kind]
    return (m.id, kind_rank, m.wait, m.relative_father, len(m.wayback), len(m.direct))


def execute(config: SimConfig, on_event=None, parallel: bool = False) -> Report:
    """Build the space, run the clock, return the collected report."""
    space = Space(config.depth)
    return Engine(space, config, on_event=on_event).run(parallel=parallel)
