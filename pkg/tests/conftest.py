"""Shared fixtures and the independent graph oracles used across the suite."""

from collections import deque

import pytest

from heptanet.heptagrid import Space


@pytest.fixture(scope="session")
def space3():
    return Space(3)


@pytest.fixture(scope="session")
def space4():
    return Space(4)


@pytest.fixture(scope="session")
def space5():
    return Space(5)


@pytest.fixture(scope="session")
def space6():
    return Space(6)


def neighbours_in_space(space, tile):
    rec = space.record(tile)
    return [n for n, o in zip(rec.neighbour, rec.outer) if not o]


def adjacency(space):
    return {t: neighbours_in_space(space, t) for t in space.tiles()}


def bfs_distances(graph, source):
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in graph[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def bfs_distance(space, a, b):
    """Distance without prebuilding the full graph (fine for small spaces)."""
    dist = {a: 0}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        if u == b:
            return dist[u]
        for v in neighbours_in_space(space, u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    raise AssertionError(f"{b} not reachable from {a}")


def all_shortest_paths(graph, dist_from_source, target, source):
    """Every shortest path source -> target, walking the BFS DAG backwards."""
    paths = []

    def climb(node, acc):
        if node == source:
            paths.append([source] + acc)
            return
        for up in graph[node]:
            if dist_from_source.get(up) == dist_from_source[node] - 1:
                climb(up, [node] + acc)

    climb(target, [])
    return paths
