from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..models import SrgCheck, SrgParams

logger = logging.getLogger(__name__)

# Row blocks for the numpy common-neighbour products; 1024 x 8000 float32 is ~32 MB.
_CHUNK_ROWS = 1024


class GraphError(ValueError):
    pass


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class Graph:
    n: int
    rows: Tuple[int, ...] = dc_field(repr=False)
    labels: Optional[Tuple[str, ...]] = dc_field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.rows) != self.n:
            raise GraphError(f"expected {self.n} rows, got {len(self.rows)}")
        if self.labels is not None and len(self.labels) != self.n:
            raise GraphError(f"expected {self.n} labels, got {len(self.labels)}")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full or (row >> v) & 1:
                raise GraphError(f"row {v} has a loop or an out-of-range bit")
            for w in iter_bits(row & (full ^ ((1 << (v + 1)) - 1))):
                if not (self.rows[w] >> v) & 1:
                    raise GraphError(f"adjacency is not symmetric at ({v}, {w})")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Tuple[int, int]],
        labels: Optional[Sequence[str]] = None,
    ) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n=n, rows=tuple(rows), labels=tuple(labels) if labels is not None else None)

    @classmethod
    def trusted(cls, n: int, rows: Sequence[int], labels: Optional[Sequence[str]] = None) -> "Graph":
        """Build without the symmetry scan; callers guarantee the row invariants."""
        if labels is not None and len(labels) != n:
            raise GraphError(f"expected {n} labels, got {len(labels)}")
        graph = object.__new__(cls)
        object.__setattr__(graph, "n", n)
        object.__setattr__(graph, "rows", tuple(rows))
        object.__setattr__(graph, "labels", tuple(labels) if labels is not None else None)
        return graph

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, labels: Optional[Sequence[str]] = None) -> "Graph":
        mat = np.asarray(matrix, dtype=bool)
        n = mat.shape[0]
        if mat.shape != (n, n):
            raise GraphError(f"adjacency matrix must be square, got {mat.shape}")
        if n and (mat.diagonal().any() or not np.array_equal(mat, mat.T)):
            raise GraphError("adjacency matrix must be symmetric with zero diagonal")
        packed = np.packbits(mat, axis=1, bitorder="little")
        rows = [int.from_bytes(packed[i].tobytes(), "little") for i in range(n)]
        return cls.trusted(n, rows, labels)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n=n, rows=(0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n=n, rows=tuple(full ^ (1 << v) for v in range(n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    def with_labels(self, labels: Optional[Sequence[str]]) -> "Graph":
        return Graph.trusted(self.n, self.rows, labels)

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def neighbors(self, v: int) -> List[int]:
        return list(iter_bits(self.rows[v]))

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> List[int]:
        return [row.bit_count() for row in self.rows]

    def edges(self) -> Iterator[Tuple[int, int]]:
        for u, row in enumerate(self.rows):
            for v in iter_bits(row >> (u + 1)):
                yield u, u + 1 + v

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        edges = [
            (index[u], index[w])
            for u in vertices
            for w in iter_bits(self.rows[u] & bits_to_mask(vertices))
            if u < w
        ]
        labels = [self.labels[v] for v in vertices] if self.labels is not None else None
        return Graph.from_edges(len(vertices), edges, labels)

    def permuted(self, perm: Sequence[int]) -> "Graph":
        if sorted(perm) != list(range(self.n)):
            raise GraphError("not a permutation of the vertex set")
        rows = [0] * self.n
        for v, row in enumerate(self.rows):
            rows[perm[v]] = bits_to_mask(perm[w] for w in iter_bits(row))
        labels = None
        if self.labels is not None:
            relabelled = [""] * self.n
            for v, label in enumerate(self.labels):
                relabelled[perm[v]] = label
            labels = tuple(relabelled)
        return Graph(n=self.n, rows=tuple(rows), labels=labels)

    def adjacency_matrix(self, dtype=np.uint8) -> np.ndarray:
        if self.n == 0:
            return np.zeros((0, 0), dtype=dtype)
        nbytes = (self.n + 7) // 8
        raw = b"".join(row.to_bytes(nbytes, "little") for row in self.rows)
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8).reshape(self.n, nbytes), axis=1, bitorder="little")
        return bits[:, : self.n].astype(dtype)

    def same_edges(self, other: "Graph") -> bool:
        return self.n == other.n and self.rows == other.rows


def complement(graph: Graph) -> Graph:
    full = (1 << graph.n) - 1
    rows = tuple(full ^ row ^ (1 << v) for v, row in enumerate(graph.rows))
    return Graph.trusted(graph.n, rows, graph.labels)


def common_neighbour_blocks(graph: Graph) -> Iterator[Tuple[int, np.ndarray, np.ndarray]]:
    a = graph.adjacency_matrix(np.float32)
    for start in range(0, graph.n, _CHUNK_ROWS):
        block = a[start : start + _CHUNK_ROWS]
        yield start, block, block @ a


def srg_check(graph: Graph, *, degrees_only: bool = False) -> SrgCheck:
    """Strong-regularity scan; on failure the witness names the offending vertex or pair."""
    n = graph.n
    degrees = graph.degrees()
    if n == 0:
        return SrgCheck(params=SrgParams(v=0, k=0, lam=0, mu=0))
    k = degrees[0]
    for v, d in enumerate(degrees):
        if d != k:
            return SrgCheck(witness=[0, v], reason=f"degree {d} at vertex {v} differs from {k}")
    if degrees_only:
        return SrgCheck(reason="only regularity was checked")

    lam: Optional[int] = None
    mu: Optional[int] = None
    for start, block, counts in common_neighbour_blocks(graph):
        counts = np.rint(counts).astype(np.int64)
        rows = np.arange(block.shape[0])
        off_diag = np.ones_like(block, dtype=bool)
        off_diag[rows, rows + start] = False
        adjacent = block.astype(bool)
        for name, mask in (("lambda", adjacent), ("mu", off_diag & ~adjacent)):
            values = counts[mask]
            if not values.size:
                continue
            lo, hi = int(values.min()), int(values.max())
            current = lam if name == "lambda" else mu
            if lo != hi or (current is not None and current != lo):
                target = current if current is not None else lo
                r, c = np.argwhere(mask & (counts != target))[0]
                return SrgCheck(
                    witness=[int(r) + start, int(c)],
                    reason=f"{name} is not constant: pair has {int(counts[r, c])} common neighbours, expected {target}",
                )
            if name == "lambda":
                lam = lo
            else:
                mu = lo
    params = SrgParams(v=n, k=k, lam=lam or 0, mu=mu or 0)
    logger.debug("srg_scan %s", {"n": n, "params": params.as_tuple()})
    return SrgCheck(params=params)


def srg_params(graph: Graph) -> Optional[SrgParams]:
    return srg_check(graph).params


def triangles(graph: Graph) -> Iterator[Tuple[int, int, int, int]]:
    rows = graph.rows
    for u in range(graph.n):
        ru = rows[u]
        for v in iter_bits(ru >> (u + 1)):
            v += u + 1
            ruv = ru & rows[v]
            for w in iter_bits(ruv >> (v + 1)):
                w += v + 1
                yield u, v, w, (ruv & rows[w]).bit_count()


def triple_intersection_distribution(graph: Graph) -> Counter:
    return Counter(value for *_, value in triangles(graph))


def maximal_cliques(graph: Graph, size_floor: int = 1) -> Iterator[Tuple[int, ...]]:
    """Bron–Kerbosch with Tomita pivoting over bitsets; cliques below size_floor are pruned."""
    rows = graph.rows
    stack: List[Tuple[Tuple[int, ...], int, int]] = [((), (1 << graph.n) - 1, 0)]
    while stack:
        clique, cand, excl = stack.pop()
        if not cand:
            if not excl and len(clique) >= size_floor:
                yield clique
            continue
        if len(clique) + cand.bit_count() < size_floor:
            continue
        pivot = max(iter_bits(cand | excl), key=lambda u: (cand & rows[u]).bit_count())
        for v in iter_bits(cand & ~rows[pivot]):
            stack.append((clique + (v,), cand & rows[v], excl & rows[v]))
            cand &= ~(1 << v)
            excl |= 1 << v


def maximal_clique_sizes(graph: Graph, size_floor: int = 1) -> Counter:
    return Counter(len(c) for c in maximal_cliques(graph, size_floor))


def histogram_dict(counter: Counter) -> Dict[str, int]:
    return {str(k): counter[k] for k in sorted(counter)}
