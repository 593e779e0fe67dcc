"""End-to-end acceptance: one test per criterion, one printed line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the PASS lines.
"""

import math
import random
import time
from collections import defaultdict
from contextlib import contextmanager

from heptanet import protocol as pr
from heptanet.engine import Engine, KeyedRng, SimConfig, execute, poisson_draw
from heptanet.fibcode import fib
from heptanet.heptagrid import CENTRE, SIDE_PAIRS, Space, TileCoord
from heptanet.routing import leftmost, pathroot, route_walk, shortest

from conftest import adjacency, all_shortest_paths, bfs_distances

ZERO = dict(lambda_public=0, lambda_border=0, lambda_reply=0, lambda_write=0)


@contextmanager
def criterion(number, budget_s, text):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"FAIL {number:>2}  {text}")
        raise
    elapsed = time.perf_counter() - start
    print(f"PASS {number:>2}  {text}  [{elapsed:.1f}s / {budget_s}s]")
    assert elapsed < budget_s, f"criterion {number} over budget: {elapsed:.1f}s"


def test_01_tile_counts_exact():
    expected = {5: 1625, 6: 4264, 7: 11173, 8: 29261, 9: 76616, 10: 200593}
    with criterion(1, 5, "tile counts for depths 5..10"):
        for depth, count in expected.items():
            assert Space(depth).tile_count == count, depth


def test_02_growth_ratio():
    with criterion(2, 1, "tile growth ratio tends to 2.618034"):
        ratio = Space(10).tile_count / Space(9).tile_count
        assert abs(ratio - 2.618034) < 1e-3, ratio


def test_03_level_widths():
    with criterion(3, 5, "level n holds fib(2n+1) tiles per sector"):
        sp = Space(10)
        for n in range(0, 11):
            assert sp.level_width(n) == fib(2 * n + 1), n


def test_04_symmetry_and_pair_table_depth7():
    with criterion(4, 10, "neighbour symmetry and side pairs at depth 7"):
        sp = Space(7)
        violations = 0
        for t in sp.tiles():
            rec = sp.record(t)
            for i in range(1, 8):
                j = rec.associate[i - 1]
                neighbour = rec.neighbour[i - 1]
                if not t.is_central and not neighbour.is_central:
                    if (i, j) not in SIDE_PAIRS:
                        violations += 1
                if rec.outer[i - 1]:
                    continue
                back = sp.record(neighbour)
                if back.gate(j) != t or back.associate[j - 1] != i:
                    violations += 1
        assert violations == 0


def test_05_shortest_path_oracle():
    with criterion(5, 60, "shortest equals BFS (depth 3 all pairs, depth 6 random)"):
        sp = Space(3)
        graph = adjacency(sp)
        tiles = list(sp.tiles())
        for a in tiles:
            dist = bfs_distances(graph, a)
            for b in tiles:
                if a == b:
                    continue
                route = shortest(sp, a, b)
                assert route_walk(sp, a, route)[-1] == b
                assert route.moves == dist[b], (a, b)
        sp6 = Space(6)
        graph6 = adjacency(sp6)
        rng = random.Random(2024)
        all6 = list(graph6)
        sources = {}
        for _ in range(1000):
            a, b = rng.sample(all6, 2)
            if a not in sources:
                sources[a] = bfs_distances(graph6, a)
            route = shortest(sp6, a, b)
            assert route_walk(sp6, a, route)[-1] == b
            assert route.moves == sources[a][b], (a, b)


def test_06_leftmost_property():
    with criterion(6, 60, "leftmost path minimal among all shortest paths, depth 4"):
        sp = Space(4)
        graph = adjacency(sp)
        dist = bfs_distances(graph, CENTRE)

        def gates(tiles):
            return [sp.record(c).neighbour.index(n) + 1
                    for c, n in zip(tiles, tiles[1:])]

        def strictly_left(g1, g2):
            for a, b in zip(g1, g2):
                if a != b:
                    return (b - a) % 7 <= 3
            return False

        for t in sp.tiles():
            if t.is_central:
                continue
            base = pathroot(t)
            lm = leftmost(sp, base)
            assert lm.moves == base.moves == dist[t]
            lm_gates = gates(route_walk(sp, CENTRE, lm))
            enumerated = all_shortest_paths(graph, dist, t, CENTRE)
            assert any(gates(p) == lm_gates for p in enumerated), t
            for p in enumerated:
                assert not strictly_left(gates(p), lm_gates), t


def test_07_broadcast_exactly_once():
    with criterion(7, 60, "broadcast coverage exactly once within the radius"):
        sp = Space(7)
        graph = adjacency(sp)
        rng = random.Random(99)
        tiles = list(graph)
        senders = [CENTRE] + rng.sample(tiles, 19)
        for sender in senders:
            dist = bfs_distances(graph, sender)
            for radius in range(1, 7):
                cfg = SimConfig(depth=7, iterations=0, seed=1, **ZERO)
                eng = Engine(sp, cfg)
                eng.inject(sender, pr.fresh_public(-1, radius=radius))
                pid = eng.stacks[sender][0].id
                held = defaultdict(list)
                for _ in range(2 * radius + 2):
                    eng.transition()
                    for coord, stack in eng.stacks.items():
                        copies = sum(
                            1 for m in stack
                            if m.kind == "public" and m.id == pid)
                        assert copies <= 1, (sender, radius, coord)
                        if copies:
                            held[coord].append(eng.tick)
                assert not eng.stacks, (sender, radius)
                want = {t for t, d in dist.items() if 1 <= d <= radius}
                got = set(held) - {sender}
                assert got == want, (sender, radius, len(got), len(want))
                for ticks in held.values():
                    assert ticks == list(range(ticks[0], ticks[0] + len(ticks)))


def test_08_private_round_trip():
    with criterion(8, 30, "write delivers at n ticks, answer returns at 2n"):
        sp = Space(6)
        rng = random.Random(7)
        tiles = [TileCoord(rng.randint(1, 7), rng.randint(1, sp.maxsize))
                 for _ in range(220)]
        pairs, seen = [], set()
        for a, b in zip(tiles[::2], tiles[1::2]):
            if a != b and (a, b) not in seen:
                seen.add((a, b))
                pairs.append((a, b))
        assert len(pairs) >= 100
        for a, b in pairs[:100]:
            eng = Engine(sp, SimConfig(depth=6, iterations=0, seed=1, **ZERO))
            deliveries = []
            eng.on_event = lambda act, t, m, c: (
                deliveries.append((t, c)) if act == "deliver" else None)
            msg = pr.make_write(sp, a, b, -1)
            n = len(msg.direct) - 1
            eng.inject(a, msg)
            for _ in range(2 * n + 1):
                eng.transition()
            assert deliveries[0] == (n, b), (a, b, n, deliveries[:2])
            assert deliveries[1] == (2 * n, a), (a, b, n, deliveries[:2])


def test_09_poisson_generator():
    with criterion(9, 30, "Poisson sample means at 1e6 draws"):
        n = 1_000_000
        for lam in (0.005, 0.0025, 5.0, 10.0):
            stream = KeyedRng(123).stream(99, int(lam * 10_000))
            total = sum(poisson_draw(stream, lam) for _ in range(n))
            mean = total / n
            assert abs(mean - lam) <= 3 * math.sqrt(lam / n), (lam, mean)


def test_10_statistical_reproduction():
    with criterion(10, 300, "traffic statistics at the reference scale"):
        report = execute(SimConfig(depth=5, iterations=168, lambda_radius=5, seed=0))
        total = report.total_emitted
        assert 0.5 * 1101 <= total <= 1.5 * 1101, total
        fraction = report.final.cum_public / total
        assert 0.43 <= fraction <= 0.67, fraction
        at24 = {}
        for depth in (5, 6, 7, 8):
            at24[depth] = execute(
                SimConfig(depth=depth, iterations=24, lambda_radius=5, seed=0)
            ).total_emitted
        for depth in (5, 6, 7):
            ratio = at24[depth + 1] / at24[depth]
            assert 2.2 <= ratio <= 3.1, (depth, ratio, at24)


def test_11_determinism():
    with criterion(11, 120, "byte-identical CSV; permuted schedule agrees"):
        cfg = SimConfig(depth=5, iterations=168, seed=0)
        first = execute(cfg).to_csv()
        second = execute(cfg).to_csv()
        assert first == second
        permuted = execute(cfg, parallel=True).to_csv()
        assert first == permuted
