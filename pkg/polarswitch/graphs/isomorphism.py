"""Isomorphism invariants beyond triangles and cliques, and a small exhaustive oracle.

The oracle runs individualization-refinement on both graphs at once: vertices of G are
individualized in a fixed order, each candidate image in H is tried, and joint colour
refinement prunes branches whose colour class sizes disagree.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from ..config import EXHAUSTIVE_MAX_VERTICES
from .core import Graph, iter_bits

logger = logging.getLogger(__name__)


class IsomorphismLimitError(ValueError):
    pass


def pair_profiles(graph: Graph) -> Counter:
    rows = graph.rows
    out: Counter = Counter()
    for u in range(graph.n):
        ru = rows[u]
        for v in range(u + 1, graph.n):
            common = ru & rows[v]
            edges = sum((rows[w] & common).bit_count() for w in iter_bits(common)) // 2
            out[(int((ru >> v) & 1), common.bit_count(), edges)] += 1
    return out


def four_cliques(graph: Graph) -> Iterator[Tuple[int, int, int, int, int]]:
    rows = graph.rows
    for u in range(graph.n):
        ru = rows[u]
        for v in iter_bits(ru >> (u + 1)):
            v += u + 1
            ruv = ru & rows[v]
            for w in iter_bits(ruv >> (v + 1)):
                w += v + 1
                ruvw = ruv & rows[w]
                for x in iter_bits(ruvw >> (w + 1)):
                    x += w + 1
                    yield u, v, w, x, (ruvw & rows[x]).bit_count()


def four_clique_distribution(graph: Graph) -> Counter:
    return Counter(value for *_, value in four_cliques(graph))


def four_cliques_per_vertex(graph: Graph) -> Counter:
    per_vertex = [0] * graph.n
    for u, v, w, x, _ in four_cliques(graph):
        for y in (u, v, w, x):
            per_vertex[y] += 1
    return Counter(per_vertex)


@dataclass
class SearchResult:
    mapping: Optional[List[int]]
    nodes: int


def _refine(graphs: Tuple[Graph, Graph], colours: Tuple[List[int], List[int]]) -> Optional[Tuple[List[int], List[int]]]:
    """Joint colour refinement; None when the two colourings stop matching."""
    while True:
        count = max(max(colours[0], default=-1), max(colours[1], default=-1)) + 1
        signatures = []
        for graph, colour in zip(graphs, colours):
            masks = [0] * count
            for v, c in enumerate(colour):
                masks[c] |= 1 << v
            signatures.append(
                [
                    (colour[v], tuple((row & m).bit_count() for m in masks))
                    for v, row in enumerate(graph.rows)
                ]
            )
        if Counter(signatures[0]) != Counter(signatures[1]):
            return None
        names = {sig: i for i, sig in enumerate(sorted(set(signatures[0])))}
        new = ([names[s] for s in signatures[0]], [names[s] for s in signatures[1]])
        if len(names) == count:
            return new
        colours = new


def _search(g: Graph, h: Graph, colours: Tuple[List[int], List[int]], result: SearchResult) -> Optional[List[int]]:
    result.nodes += 1
    refined = _refine((g, h), colours)
    if refined is None:
        return None
    cg, ch = refined
    sizes = Counter(cg)
    if all(s == 1 for s in sizes.values()):
        inverse = {c: w for w, c in enumerate(ch)}
        mapping = [inverse[c] for c in cg]
        for u in range(g.n):
            image = 0
            for w in iter_bits(g.rows[u]):
                image |= 1 << mapping[w]
            if image != h.rows[mapping[u]]:
                return None
        return mapping
    target = min((c for c, s in sizes.items() if s > 1), key=lambda c: (sizes[c], c))
    v = cg.index(target)
    fresh = len(sizes)
    for w in (i for i, c in enumerate(ch) if c == target):
        next_g = list(cg)
        next_h = list(ch)
        next_g[v] = fresh
        next_h[w] = fresh
        found = _search(g, h, (next_g, next_h), result)
        if found is not None:
            return found
    return None


def find_isomorphism(g: Graph, h: Graph, limit: Optional[int] = None) -> SearchResult:
    """Explicit vertex map g -> h, or mapping None after exhausting the search tree."""
    cap = EXHAUSTIVE_MAX_VERTICES if limit is None else limit
    if max(g.n, h.n) > cap:
        raise IsomorphismLimitError(f"exhaustive search is capped at {cap} vertices, got {max(g.n, h.n)}")
    result = SearchResult(mapping=None, nodes=0)
    if g.n != h.n or sorted(g.degrees()) != sorted(h.degrees()):
        return result
    result.mapping = _search(g, h, ([0] * g.n, [0] * h.n), result)
    logger.debug("isomorphism_search %s", {"n": g.n, "nodes": result.nodes, "found": result.mapping is not None})
    return result


def is_isomorphism(g: Graph, h: Graph, mapping: List[int]) -> bool:
    if g.n != h.n or sorted(mapping) != list(range(g.n)):
        return False
    return all(
        h.has_edge(mapping[u], mapping[v]) == g.has_edge(u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
    )
