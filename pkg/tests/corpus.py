"""Fat graphs shared by the scalloped, cli and acceptance tests."""
from __future__ import annotations

import random

from bifoliate.scalloped import FatGraph, random_fat_graph, with_admissible_partition

FIGURE_EIGHT = {
    "vertices": [["a+", "b+", "a-", "b-"]],
    "edges": [
        {"name": "a", "ends": ["a+", "a-"], "twisted": True},
        {"name": "b", "ends": ["b+", "b-"], "twisted": True},
    ],
    "incoming": [[0, 0]],
    "outgoing": [[0, 1]],
}


def figure_eight() -> FatGraph:
    return FatGraph.from_dict(FIGURE_EIGHT)


def untwisted(order) -> FatGraph:
    """One-vertex figure-8 with no twists and the given cyclic order."""
    return FatGraph.from_dict(
        {
            "vertices": [list(order)],
            "edges": [{"name": "a", "ends": ["a+", "a-"]}, {"name": "b", "ends": ["b+", "b-"]}],
            "incoming": [[0, 0]],
            "outgoing": [[0, 1]],
        }
    )


def admissible_corpus(n: int = 12, seed: int = 7) -> list[FatGraph]:
    """The figure-8 plus random connected admissible graphs with 1 to 3 vertices."""
    rng = random.Random(seed)
    out = [figure_eight()]
    while len(out) < n:
        g = with_admissible_partition(random_fat_graph(rng, rng.randint(1, 3)))
        if g is not None and is_connected(g):
            out.append(g)
    return out


def is_connected(g: FatGraph) -> bool:
    slots = g.slot()
    adj = {v: set() for v in range(len(g.vertices))}
    for e in g.edges:
        a, b = slots[e.ends[0]][0], slots[e.ends[1]][0]
        adj[a].add(b)
        adj[b].add(a)
    seen, todo = {0}, [0]
    while todo:
        for y in adj[todo.pop()]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen) == len(g.vertices)
