"""Connected graphs up to isomorphism, from the networkx graph atlas (n <= 7)."""

from __future__ import annotations

import functools

from .graph import Graph, is_connected


@functools.lru_cache(maxsize=1)
def _atlas() -> tuple[Graph, ...]:
    import networkx as nx

    out = []
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() == 0:
            continue
        g = Graph.from_networkx(h)
        if is_connected(g):
            out.append(g)
    return tuple(out)


def connected_graphs(max_n: int = 7, min_n: int = 1, max_m: int | None = None) -> list[Graph]:
    """All connected graphs with ``min_n <= n <= max_n``, one per isomorphism class."""
    if max_n > 7:
        raise ValueError("the atlas only covers graphs with at most 7 vertices")
    return [g for g in _atlas() if min_n <= g.n <= max_n and (max_m is None or g.m <= max_m)]
