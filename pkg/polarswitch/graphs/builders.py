from __future__ import annotations

import logging
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from ..geometry.linalg import ProjectivePoint, point_label
from ..geometry.points import PointFilter, enumerate_points, evaluate_many, points_array
from ..geometry.polar import FormKind, GeometryError, PolarSpace
from .core import Graph

logger = logging.getLogger(__name__)

_CHUNK_ROWS = 512


def _gram_images(space: PolarSpace, coords: np.ndarray) -> np.ndarray:
    """Rows x -> x G, so that B(x, y) = sum_j (xG)_j conj(y_j)."""
    field = space.field
    add, mul = field.add_array, field.mul_array
    gram = np.asarray(space.gram, dtype=np.int64)
    out = np.zeros_like(coords)
    for j in range(space.n):
        acc = np.zeros(coords.shape[0], dtype=np.int64)
        for i in range(space.n):
            g = gram[i, j]
            if g:
                acc = add[acc, mul[coords[:, i], g]]
        out[:, j] = acc
    return out


def form_blocks(
    space: PolarSpace, coords: np.ndarray
) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield (start, B(x, y) for a block of rows x against every y)."""
    field = space.field
    images = _gram_images(space, coords)
    right = field.conj_array[coords] if space.kind is FormKind.HERMITIAN else coords
    n_pts = coords.shape[0]
    if field.k == 1:
        p = field.p
        right_t = right.T.copy()
        for start in range(0, n_pts, _CHUNK_ROWS):
            yield start, (images[start : start + _CHUNK_ROWS] @ right_t) % p
        return
    add, mul = field.add_array, field.mul_array
    for start in range(0, n_pts, _CHUNK_ROWS):
        block = images[start : start + _CHUNK_ROWS]
        acc = np.zeros((block.shape[0], n_pts), dtype=np.int64)
        for j in range(space.n):
            acc = add[acc, mul[block[:, j][:, None], right[:, j][None, :]]]
        yield start, acc


def orthogonality_matrix(space: PolarSpace, points: Sequence[ProjectivePoint]) -> np.ndarray:
    coords = points_array(points, space.n)
    adj = np.zeros((len(points), len(points)), dtype=bool)
    for start, values in form_blocks(space, coords):
        adj[start : start + values.shape[0]] = values == 0
    np.fill_diagonal(adj, False)
    return adj


def orthogonality_graph(space: PolarSpace, points: Sequence[ProjectivePoint]) -> Graph:
    labels = [point_label(pt) for pt in points]
    return Graph.from_matrix(orthogonality_matrix(space, points), labels)


def collinearity_graph(space: PolarSpace) -> Graph:
    points = enumerate_points(space, PointFilter.ISOTROPIC)
    graph = orthogonality_graph(space, points)
    logger.info("graph_built %s", {"space": space.name, "graph": "collinearity", "n": graph.n})
    return graph


def polarity_graph(space: PolarSpace, point_type: PointFilter | str | None = None) -> Graph:
    point_filter = PointFilter.parse(point_type) if point_type is not None else PointFilter.NONISOTROPIC
    if point_filter in (PointFilter.ALL, PointFilter.ISOTROPIC):
        raise GeometryError(f"polarity graphs live on non-isotropic points, got {point_filter.value}")
    if space.kind.quadratic and point_filter is PointFilter.NONISOTROPIC:
        raise GeometryError(f"{space.name}: choose the plus or minus points")
    points = enumerate_points(space, point_filter)
    graph = orthogonality_graph(space, points)
    logger.info(
        "graph_built %s",
        {"space": space.name, "graph": "polarity", "points": point_filter.value, "n": graph.n},
    )
    return graph


def degenerate_span_graph(space: PolarSpace, point_type: PointFilter | str | None = None) -> Graph:
    point_filter = PointFilter.parse(point_type) if point_type is not None else PointFilter.NONISOTROPIC
    points = enumerate_points(space, point_filter)
    field = space.field
    add, mul, neg = field.add_array, field.mul_array, np.asarray(field.neg, dtype=np.int64)
    coords = points_array(points, space.n)
    norms = evaluate_many(space, coords)
    if space.kind.quadratic:
        # B(x, x) = 2 s(x) for the polar form of s
        norms = add[norms, norms]
    conj = field.conj_array if space.kind is FormKind.HERMITIAN else np.arange(field.q)
    adj = np.zeros((len(points), len(points)), dtype=bool)
    for start, values in form_blocks(space, coords):
        rows = slice(start, start + values.shape[0])
        diag = mul[norms[rows][:, None], norms[None, :]]
        cross = mul[values, conj[values]]
        adj[rows] = add[diag, neg[cross]] == 0
    np.fill_diagonal(adj, False)
    graph = Graph.from_matrix(adj, [point_label(pt) for pt in points])
    logger.info("graph_built %s", {"space": space.name, "graph": "degenerate_span", "n": graph.n})
    return graph


def vertex_points(space: PolarSpace, graph_kind: str, point_type: Optional[str] = None) -> list:
    if graph_kind == "collinearity":
        return enumerate_points(space, PointFilter.ISOTROPIC)
    if point_type is None:
        return enumerate_points(space, PointFilter.NONISOTROPIC)
    return enumerate_points(space, point_type)
