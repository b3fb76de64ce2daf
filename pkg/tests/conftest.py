import itertools
import random
from typing import List, Tuple

import networkx as nx
import pytest

from polarswitch.graphs.core import Graph
from polarswitch.models import SwitchingSetPair


def graph_from_nx(nx_graph: nx.Graph) -> Graph:
    relabelled = nx.convert_node_labels_to_integers(nx_graph, ordering="sorted")
    return Graph.from_edges(relabelled.number_of_nodes(), relabelled.edges())


def graph_to_nx(graph: Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(range(graph.n))
    out.add_edges_from(graph.edges())
    return out


def shrikhande_graph() -> Graph:
    shifts = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)]
    edges = set()
    for i, j in itertools.product(range(4), repeat=2):
        for di, dj in shifts:
            u, v = 4 * i + j, 4 * ((i + di) % 4) + (j + dj) % 4
            edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(16, edges)


def rook_graph() -> Graph:
    return graph_from_nx(nx.cartesian_product(nx.complete_graph(4), nx.complete_graph(4)))


def _random_edges(rng: random.Random, vertices: List[int], density: float = 0.5) -> List[Tuple[int, int]]:
    return [(u, v) for u, v in itertools.combinations(vertices, 2) if rng.random() < density]


def plant_wqh(rng: random.Random, max_vertices: int = 40) -> Tuple[Graph, SwitchingSetPair]:
    """Random graph with a valid WQH switching set planted on random cells."""
    n = rng.randint(8, max_vertices)
    m = rng.randint(1, min(4, (n - 2) // 2))
    order = list(range(n))
    rng.shuffle(order)
    c1, c2, outside = sorted(order[:m]), sorted(order[m : 2 * m]), order[2 * m :]

    edges = set(_random_edges(rng, outside))
    shape = rng.choice(("empty", "cliques", "bipartite", "matching"))
    if shape in ("cliques", "matching"):
        for cell in (c1, c2):
            edges.update(itertools.combinations(cell, 2))
    if shape == "bipartite":
        edges.update(itertools.product(c1, c2))
    if shape == "matching":
        edges.update(zip(c1, c2))

    for x in outside:
        if rng.random() < 0.3:
            seen = list(rng.choice((c1, c2)))
        else:
            j = rng.randint(0, m)
            seen = rng.sample(c1, j) + rng.sample(c2, j)
        edges.update((x, c) for c in seen)
    return Graph.from_edges(n, edges), SwitchingSetPair(c1=c1, c2=c2)


def plant_gm(rng: random.Random, max_vertices: int = 40) -> Tuple[Graph, List[int]]:
    """Random graph with a single 4-vertex GM cell planted."""
    n = rng.randint(8, max_vertices)
    order = list(range(n))
    rng.shuffle(order)
    cell, outside = order[:4], order[4:]

    edges = set(_random_edges(rng, outside))
    shape = rng.choice(("empty", "matching", "cycle", "complete"))
    if shape == "matching":
        edges.update([(cell[0], cell[1]), (cell[2], cell[3])])
    elif shape == "cycle":
        edges.update((cell[i], cell[(i + 1) % 4]) for i in range(4))
    elif shape == "complete":
        edges.update(itertools.combinations(cell, 2))

    for x in outside:
        size = rng.choice((0, 2, 4))
        edges.update((x, c) for c in rng.sample(cell, size))
    return Graph.from_edges(n, edges), sorted(cell)


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture
def petersen():
    return graph_from_nx(nx.petersen_graph())


@pytest.fixture
def pentagon():
    return Graph.cycle(5)


@pytest.fixture
def shrikhande():
    return shrikhande_graph()


@pytest.fixture
def rook():
    return rook_graph()
