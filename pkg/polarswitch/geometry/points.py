from __future__ import annotations

import itertools
import logging
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..field import FieldTables
from .linalg import ProjectivePoint, Subspace, nullspace
from .polar import (
    FormKind,
    GeometryError,
    PolarSpace,
    form,
    is_isotropic,
    is_totally_isotropic,
    perp,
    radical,
)

logger = logging.getLogger(__name__)


class PointFilter(str, Enum):
    ALL = "all"
    ISOTROPIC = "isotropic"
    NONISOTROPIC = "nonisotropic"
    PLUS = "plus"
    MINUS = "minus"

    @classmethod
    def parse(cls, value: "PointFilter | str | int | None") -> "PointFilter":
        if isinstance(value, PointFilter):
            return value
        if value is None:
            return cls.ALL
        if value in (1, "+", "+1"):
            return cls.PLUS
        if value in (-1, "-", "-1"):
            return cls.MINUS
        try:
            return cls(str(value).strip().lower())
        except ValueError as exc:
            raise GeometryError(f"unknown point filter: {value!r}") from exc


def all_points(n: int, field: FieldTables) -> Iterator[ProjectivePoint]:
    for lead in range(n - 1, -1, -1):
        prefix = (0,) * lead + (1,)
        for tail in itertools.product(range(field.q), repeat=n - 1 - lead):
            yield prefix + tail


def points_array(points: Sequence[Sequence[int]], n: int) -> np.ndarray:
    if not points:
        return np.zeros((0, n), dtype=np.int64)
    return np.asarray(points, dtype=np.int64)


def evaluate_many(space: PolarSpace, coords: np.ndarray) -> np.ndarray:
    field = space.field
    add, mul = field.add_array, field.mul_array
    out = np.zeros(coords.shape[0], dtype=np.int64)
    if space.kind is FormKind.SYMPLECTIC:
        return out
    if space.kind is FormKind.HERMITIAN:
        conj = field.conj_array
        for i in range(space.n):
            out = add[out, mul[coords[:, i], conj[coords[:, i]]]]
        return out
    for i, row in enumerate(space.quad):
        for j in range(i, space.n):
            c = row[j]
            if c:
                out = add[out, mul[c, mul[coords[:, i], coords[:, j]]]]
    return out


def _square_mask(values: np.ndarray, field: FieldTables) -> np.ndarray:
    squares = np.zeros(field.q, dtype=bool)
    squares[list(field.squares)] = True
    return squares[values]


@lru_cache(maxsize=64)
def _cached_points(space: PolarSpace, point_filter: PointFilter) -> Tuple[ProjectivePoint, ...]:
    points = list(all_points(space.n, space.field))
    if point_filter is PointFilter.ALL:
        return tuple(points)
    values = evaluate_many(space, points_array(points, space.n))
    if point_filter is PointFilter.ISOTROPIC:
        mask = values == 0
    elif point_filter is PointFilter.NONISOTROPIC:
        mask = values != 0
    else:
        if not space.kind.quadratic:
            raise GeometryError(f"{space.name} has no square classes of points")
        plus = _square_mask(values, space.field)
        mask = (values != 0) & (plus if point_filter is PointFilter.PLUS else ~plus)
    selected = tuple(pt for pt, keep in zip(points, mask.tolist()) if keep)
    logger.debug(
        "points_enumerated %s",
        {"space": space.name, "filter": point_filter.value, "count": len(selected)},
    )
    return selected


def enumerate_points(space: PolarSpace, point_filter: PointFilter | str | int | None = None) -> List[ProjectivePoint]:
    return list(_cached_points(space, PointFilter.parse(point_filter)))


def grassmannian(n: int, k: int, field: FieldTables) -> Iterator[Subspace]:
    """All k-subspaces of F_q^n, generated directly in reduced row echelon form."""
    if not 0 <= k <= n:
        raise GeometryError(f"subspace dimension {k} out of range for n={n}")
    if k == 0:
        yield Subspace.zero(n, field)
        return
    for pivots in itertools.combinations(range(n), k):
        free = [
            (r, c)
            for r, pc in enumerate(pivots)
            for c in range(pc + 1, n)
            if c not in pivots
        ]
        for values in itertools.product(range(field.q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), v in zip(free, values):
                rows[r][c] = v
            yield Subspace(n=n, basis=tuple(tuple(r) for r in rows), field=field)


def enumerate_subspaces(
    space: PolarSpace,
    dim: int,
    *,
    through: Optional[Subspace] = None,
    within: Optional[Subspace] = None,
    totally_isotropic: bool = False,
    radical_equals: Optional[Subspace] = None,
    predicate: Optional[Callable[[Subspace], bool]] = None,
) -> List[Subspace]:
    """Subspaces of the given dimension matching every requested condition, sorted canonically.

    Without ``through``/``within``/``totally_isotropic`` the whole Grassmannian is scanned;
    otherwise subspaces are grown one point at a time from ``through`` and deduplicated by
    their echelon form.
    """
    n, field = space.n, space.field
    if not 0 <= dim <= n:
        raise GeometryError(f"subspace dimension {dim} out of range for n={n}")

    def keep(s: Subspace) -> bool:
        if totally_isotropic and not is_totally_isotropic(space, s):
            return False
        if radical_equals is not None and radical(space, s) != radical_equals:
            return False
        return predicate is None or predicate(s)

    if through is None and within is None and not totally_isotropic:
        found = [s for s in grassmannian(n, dim, field) if keep(s)]
        return sorted(found, key=lambda s: s.basis)

    start = through if through is not None else Subspace.zero(n, field)
    if start.dim > dim:
        return []
    if within is not None and not within.contains_subspace(start):
        return []
    if totally_isotropic and not is_totally_isotropic(space, start):
        return []

    candidates = within.points() if within is not None else list(all_points(n, field))
    if totally_isotropic:
        candidates = [pt for pt in candidates if is_isotropic(space, pt)]

    level = {start}
    for _ in range(dim - start.dim):
        grown = set()
        for s in level:
            for pt in candidates:
                if s.contains(pt):
                    continue
                if totally_isotropic and any(form(space, row, pt) for row in s.basis):
                    continue
                grown.add(s.join([pt]))
        level = grown
    found = [s for s in level if keep(s)]
    return sorted(found, key=lambda s: s.basis)


def lines_through(space: PolarSpace, p: Subspace, within: Optional[Subspace] = None) -> List[Subspace]:
    """Lines through the point p, inside ``within`` when given, in canonical order."""
    if p.dim != 1:
        raise GeometryError(f"expected a point, got dimension {p.dim}")
    ambient = within.points() if within is not None else all_points(space.n, space.field)
    found = set()
    for pt in ambient:
        if not p.contains(pt):
            found.add(p.join([pt]))
    return sorted(found, key=lambda s: s.basis)


def tangent_lines_through(space: PolarSpace, p: Subspace) -> List[Subspace]:
    """Lines with radical exactly the isotropic point p."""
    if not is_isotropic(space, p.basis[0]):
        raise GeometryError(f"point {p.label} is not isotropic")
    return [
        line
        for line in lines_through(space, p, within=perp(space, p))
        if not is_totally_isotropic(space, line)
    ]


def maximals_through(space: PolarSpace, s: Subspace) -> int:
    """Number of maximal totally isotropic subspaces containing s."""
    if not is_totally_isotropic(space, s):
        raise GeometryError(f"{s.label} is not totally isotropic")
    return len(enumerate_subspaces(space, space.d, through=s, within=perp(space, s), totally_isotropic=True))


def isotropic_point_count(space: PolarSpace) -> int:
    return len(_cached_points(space, PointFilter.ISOTROPIC))


def hyperplanes_of(s: Subspace) -> List[Subspace]:
    """All codimension-one subspaces of s."""
    if s.dim == 0:
        return []
    found = set()
    for coeffs in all_points(s.dim, s.field):
        kernel = nullspace([coeffs], s.dim, s.field)
        rows = []
        for k_row in kernel:
            vec = [0] * s.n
            for c, b in zip(k_row, s.basis):
                if c:
                    for j, x in enumerate(b):
                        if x:
                            vec[j] = s.field.add[vec[j]][s.field.mul[c][x]]
            rows.append(vec)
        found.add(Subspace.span(rows, s.field, s.n) if rows else Subspace.zero(s.n, s.field))
    return sorted(found, key=lambda h: h.basis)


__all__ = [
    "PointFilter",
    "all_points",
    "points_array",
    "evaluate_many",
    "enumerate_points",
    "grassmannian",
    "enumerate_subspaces",
    "lines_through",
    "tangent_lines_through",
    "maximals_through",
    "isotropic_point_count",
    "hyperplanes_of",
]
