"""WQH and GM switching, and the geometric switching-set constructions.

WQH switching takes two equal-size cells C1, C2 whose induced subgraphs are regular of
the same degree and whose union induces a regular graph. Every outside vertex must be
balanced (as many neighbours in C1 as in C2) or see exactly one full cell and nothing of
the other; switching swaps the full cell of the latter vertices.

GM switching takes an equitable family of cells; an outside vertex sees none, half or all
of each cell, and switching complements its half-adjacencies.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence

from .designs import Design, DesignError, SubdesignEmbedding, subdesign_from_subspace, switch_cells
from .field import field_of_order
from .geometry.linalg import ProjectivePoint, Subspace, point_label
from .geometry.points import PointFilter, enumerate_points, grassmannian, hyperplanes_of, tangent_lines_through
from .geometry.polar import (
    FormKind,
    GeometryError,
    LineClass,
    PointClass,
    PolarSpace,
    classify_line,
    classify_point,
    form,
    is_isotropic,
    is_totally_isotropic,
    radical,
)
from .graphs.core import Graph, bits_to_mask, iter_bits
from .models import GMPartition, GmVerdict, SwitchingSetPair, WqhVerdict

logger = logging.getLogger(__name__)


class SwitchingError(ValueError):
    def __init__(self, message: str, verdict: Optional[WqhVerdict | GmVerdict] = None):
        super().__init__(message)
        self.verdict = verdict


class ConfigurationNotFound(LookupError):
    pass


# -- WQH ---------------------------------------------------------------------------------


def _union_shape(graph: Graph, c1: Sequence[int], c2: Sequence[int], cell_degree: int, union_degree: int) -> str:
    m = len(c1)
    if union_degree == 0:
        return "empty"
    if union_degree == 2 * m - 1:
        return "complete"
    if cell_degree == 0 and union_degree == m:
        mask2 = bits_to_mask(c2)
        if all(graph.rows[v] & mask2 == mask2 for v in c1):
            return "complete_bipartite"
    return "other"


def validate_wqh(graph: Graph, pair: SwitchingSetPair) -> WqhVerdict:
    """First failing WQH condition with a witness vertex, or ok with the shape of C1 ∪ C2."""
    n = graph.n
    for v in pair.c1 + pair.c2:
        if v >= n:
            return WqhVerdict(ok=False, condition="pair_range", witness=v, detail=f"vertex {v} outside 0..{n - 1}")

    rows = graph.rows
    mask1, mask2 = bits_to_mask(pair.c1), bits_to_mask(pair.c2)
    union = mask1 | mask2

    degrees = []
    for condition, cell, mask in (("c1_regular", pair.c1, mask1), ("c2_regular", pair.c2, mask2)):
        first = (rows[cell[0]] & mask).bit_count()
        for v in cell:
            got = (rows[v] & mask).bit_count()
            if got != first:
                return WqhVerdict(
                    ok=False,
                    condition=condition,
                    witness=v,
                    detail=f"vertex {v} has {got} neighbours in its cell, vertex {cell[0]} has {first}",
                )
        degrees.append(first)
    if degrees[0] != degrees[1]:
        return WqhVerdict(
            ok=False,
            condition="equal_degree",
            witness=pair.c2[0],
            detail=f"C1 is {degrees[0]}-regular but C2 is {degrees[1]}-regular",
        )

    cells = pair.c1 + pair.c2
    union_degree = (rows[cells[0]] & union).bit_count()
    for v in cells:
        got = (rows[v] & union).bit_count()
        if got != union_degree:
            return WqhVerdict(
                ok=False,
                condition="union_regular",
                witness=v,
                cell_degree=degrees[0],
                detail=f"vertex {v} has {got} neighbours in C1 ∪ C2, expected {union_degree}",
            )

    balanced = swapped = 0
    for x in iter_bits(((1 << n) - 1) & ~union):
        a, b = rows[x] & mask1, rows[x] & mask2
        if a.bit_count() == b.bit_count():
            balanced += 1
        elif (a == mask1 and not b) or (b == mask2 and not a):
            swapped += 1
        else:
            return WqhVerdict(
                ok=False,
                condition="outside_vertex",
                witness=x,
                cell_degree=degrees[0],
                union_degree=union_degree,
                detail=f"vertex {x} has {a.bit_count()} neighbours in C1 and {b.bit_count()} in C2",
            )
    return WqhVerdict(
        ok=True,
        cell_degree=degrees[0],
        union_degree=union_degree,
        union_shape=_union_shape(graph, pair.c1, pair.c2, degrees[0], union_degree),
        balanced=balanced,
        swapped=swapped,
    )


def apply_wqh(graph: Graph, pair: SwitchingSetPair, *, validate: bool = True) -> Graph:
    if validate:
        verdict = validate_wqh(graph, pair)
        if not verdict.ok:
            raise SwitchingError(f"not a switching set: {verdict.condition} at vertex {verdict.witness}", verdict)
    rows = list(graph.rows)
    mask1, mask2 = bits_to_mask(pair.c1), bits_to_mask(pair.c2)
    union = mask1 | mask2
    toggled = 0
    for x in iter_bits(((1 << graph.n) - 1) & ~union):
        seen = rows[x] & union
        if seen == mask1 or seen == mask2:
            rows[x] ^= union
            toggled |= 1 << x
    for c in pair.c1 + pair.c2:
        rows[c] ^= toggled
    logger.info(
        "switching_applied %s",
        {"method": "wqh", "n": graph.n, "cell_size": len(pair.c1), "swapped": toggled.bit_count()},
    )
    return Graph.trusted(graph.n, rows, graph.labels)


# -- GM ----------------------------------------------------------------------------------


def validate_gm(graph: Graph, partition: GMPartition) -> GmVerdict:
    n = graph.n
    rows = graph.rows
    for v in (v for cell in partition.cells for v in cell):
        if v >= n:
            return GmVerdict(ok=False, condition="partition_range", witness=v, detail=f"vertex {v} outside 0..{n - 1}")
    masks = [bits_to_mask(cell) for cell in partition.cells]
    for i, cell in enumerate(partition.cells):
        for j, mask in enumerate(masks):
            first = (rows[cell[0]] & mask).bit_count()
            for v in cell:
                got = (rows[v] & mask).bit_count()
                if got != first:
                    return GmVerdict(
                        ok=False,
                        condition="equitable",
                        witness=v,
                        cell=j,
                        detail=f"vertex {v} of cell {i} has {got} neighbours in cell {j}, vertex {cell[0]} has {first}",
                    )
    inside = 0
    for mask in masks:
        inside |= mask
    swapped = 0
    for x in iter_bits(((1 << n) - 1) & ~inside):
        half_somewhere = False
        for j, (cell, mask) in enumerate(zip(partition.cells, masks)):
            got = (rows[x] & mask).bit_count()
            if 2 * got == len(cell):
                half_somewhere = True
            elif got not in (0, len(cell)):
                return GmVerdict(
                    ok=False,
                    condition="outside_vertex",
                    witness=x,
                    cell=j,
                    detail=f"vertex {x} has {got} of {len(cell)} neighbours in cell {j}",
                )
        swapped += half_somewhere
    return GmVerdict(ok=True, swapped=swapped)


def apply_gm(graph: Graph, partition: GMPartition, *, validate: bool = True) -> Graph:
    if validate:
        verdict = validate_gm(graph, partition)
        if not verdict.ok:
            raise SwitchingError(f"not a GM partition: {verdict.condition} at vertex {verdict.witness}", verdict)
    rows = list(graph.rows)
    masks = [bits_to_mask(cell) for cell in partition.cells]
    inside = 0
    for mask in masks:
        inside |= mask
    outside = ((1 << graph.n) - 1) & ~inside
    for cell, mask in zip(partition.cells, masks):
        toggled = 0
        for x in iter_bits(outside):
            if 2 * (graph.rows[x] & mask).bit_count() == len(cell):
                rows[x] ^= mask
                toggled |= 1 << x
        for c in cell:
            rows[c] ^= toggled
    logger.info("switching_applied %s", {"method": "gm", "n": graph.n, "cells": len(partition.cells)})
    return Graph.trusted(graph.n, rows, graph.labels)


def gm_cell_to_wqh_pair(graph: Graph, cell: Sequence[int]) -> SwitchingSetPair:
    """Split a 4-vertex GM cell into C1 = {a1, a2}, C2 = {b1, b2}.

    The halves have equal induced degree and (a1 a2)(b1 b2) is an automorphism of the
    induced subgraph, so GM switching on the cell followed by that involution equals WQH
    switching on the pair.
    """
    if len(set(cell)) != 4:
        raise SwitchingError(f"expected a 4-vertex cell, got {list(cell)}")
    c = sorted(cell)
    mask = bits_to_mask(c)
    degrees = {(graph.rows[v] & mask).bit_count() for v in c}
    if len(degrees) != 1:
        raise SwitchingError(f"cell {c} does not induce a regular graph")
    degree = degrees.pop()
    first = c[0]
    if degree == 1:
        partner = next(iter_bits(graph.rows[first] & mask))
    elif degree == 2:
        partner = next(v for v in c[1:] if not graph.has_edge(first, v))
    else:
        partner = c[1]
    c1 = [first, partner]
    return SwitchingSetPair(c1=c1, c2=[v for v in c if v not in c1])


def pair_involution(n: int, pair: SwitchingSetPair) -> List[int]:
    if len(pair.c1) != 2:
        raise SwitchingError("the cell involution needs |C1| = |C2| = 2")
    perm = list(range(n))
    for a, b in (pair.c1, pair.c2):
        perm[a], perm[b] = b, a
    return perm


# -- geometric constructions -------------------------------------------------------------


def _index(points: Sequence[ProjectivePoint]) -> Dict[ProjectivePoint, int]:
    return {pt: i for i, pt in enumerate(points)}


def polarity_vertices(space: PolarSpace, point_type: PointFilter | str | None = None) -> List[ProjectivePoint]:
    if space.kind.quadratic:
        point_filter = PointFilter.parse(point_type)
        if point_filter not in (PointFilter.PLUS, PointFilter.MINUS):
            raise GeometryError(f"{space.name}: choose the plus or minus points")
        return enumerate_points(space, point_filter)
    return enumerate_points(space, PointFilter.NONISOTROPIC)


def _cell(index: Dict[ProjectivePoint, int], points: Sequence[ProjectivePoint]) -> List[int]:
    try:
        return sorted(index[pt] for pt in points)
    except KeyError as exc:
        raise GeometryError(f"point {point_label(exc.args[0])} is not a vertex of the graph") from exc


def _check_rank(space: PolarSpace, m: int, low: int = 3) -> None:
    if not low <= m <= space.d:
        logger.warning(
            "rank_bound_outside %s",
            {"space": space.name, "m": m, "rank": space.d, "low": low},
        )


def collinearity_switch_set(space: PolarSpace, P: Subspace, L1: Subspace, L2: Subspace) -> SwitchingSetPair:
    m = P.dim
    if m < 2:
        raise GeometryError(f"P needs dimension >= 2, got {m}")
    if not is_totally_isotropic(space, P):
        raise GeometryError(f"{P.label} is not totally isotropic")
    for name, L in (("L1", L1), ("L2", L2)):
        if L.dim != m - 1 or not P.contains_subspace(L):
            raise GeometryError(f"{name} = {L.label} is not a hyperplane of P")
    if L1 == L2:
        raise GeometryError("L1 and L2 must differ")
    _check_rank(space, m, low=2)
    index = _index(enumerate_points(space, PointFilter.ISOTROPIC))
    c1 = _cell(index, [pt for pt in L1.points() if not L2.contains(pt)])
    c2 = _cell(index, [pt for pt in L2.points() if not L1.contains(pt)])
    pair = SwitchingSetPair(c1=c1, c2=c2)
    logger.info("switching_set_built %s", {"construction": "collinearity", "space": space.name, "m": m, "size": len(c1)})
    return pair


def radical_switch_set(
    space: PolarSpace,
    L1: Subspace,
    L2: Subspace,
    point_type: PointFilter | str | None = None,
) -> SwitchingSetPair:
    if L1.dim != L2.dim or L1.dim < 2:
        raise GeometryError(f"L1 and L2 need equal dimension >= 2, got {L1.dim} and {L2.dim}")
    common = L1.meet(L2)
    if common.dim != L1.dim - 1:
        raise GeometryError(f"L1 ∩ L2 has dimension {common.dim}, expected {L1.dim - 1}")
    for name, L in (("L1", L1), ("L2", L2)):
        if radical(space, L) != common:
            raise GeometryError(f"L1 ∩ L2 = {common.label} is not the radical of {name} = {L.label}")
    _check_rank(space, L1.dim + 1)

    vertices = polarity_vertices(space, point_type)
    wanted: Optional[PointClass] = None
    if space.kind.quadratic:
        wanted = PointClass.PLUS if PointFilter.parse(point_type) is PointFilter.PLUS else PointClass.MINUS
    cells = []
    for L, other in ((L1, L2), (L2, L1)):
        chosen = []
        for pt in L.points():
            if other.contains(pt) or is_isotropic(space, pt):
                continue
            if wanted is not None and classify_point(space, pt) is not wanted:
                raise GeometryError(f"point {point_label(pt)} is not of type {wanted.value}")
            chosen.append(pt)
        cells.append(chosen)
    index = _index(vertices)
    pair = SwitchingSetPair(c1=_cell(index, cells[0]), c2=_cell(index, cells[1]))
    logger.info(
        "switching_set_built %s",
        {"construction": "radical", "space": space.name, "m": L1.dim + 1, "size": len(pair.c1)},
    )
    return pair


def tangent_line_switch_set(
    space: PolarSpace,
    p: Subspace,
    L1: Subspace,
    L2: Subspace,
    point_type: PointFilter | str | None = None,
) -> SwitchingSetPair:
    """The m = 3 radical construction: two tangent lines with radical p spanning a plane with radical p."""
    if p.dim != 1:
        raise GeometryError(f"p must be a point, got dimension {p.dim}")
    for name, L in (("L1", L1), ("L2", L2)):
        if L.dim != 2 or not L.contains_subspace(p):
            raise GeometryError(f"{name} = {L.label} is not a line through {p.label}")
    if L1 == L2:
        raise GeometryError("L1 and L2 must differ")
    if radical(space, L1.join(L2)) != p:
        raise GeometryError(f"{p.label} is not the radical of <L1, L2>")
    return radical_switch_set(space, L1, L2, point_type)


def design_switch_set(design: Design, emb: SubdesignEmbedding, p1: int, p2: int) -> SwitchingSetPair:
    if design.lam != 1:
        raise DesignError(f"needs lambda = 1, got {design.lam}")
    c1, c2 = switch_cells(emb, p1, p2)
    pair = SwitchingSetPair(c1=c1, c2=c2)
    logger.info("switching_set_built %s", {"construction": "design", "v": design.v, "size": len(c1)})
    return pair


# -- configuration search ----------------------------------------------------------------


class QuotientTarget(str, Enum):
    HERMITIAN = "u2"
    HYPERBOLIC = "o+2"
    ELLIPTIC = "o-2"
    ANY = "any"

    @classmethod
    def parse(cls, value: "QuotientTarget | LineClass | str") -> "QuotientTarget":
        if isinstance(value, QuotientTarget):
            return value
        by_line = {
            LineClass.HERMITIAN_NONDEG: cls.HERMITIAN,
            LineClass.HYPERBOLIC: cls.HYPERBOLIC,
            LineClass.ELLIPTIC: cls.ELLIPTIC,
        }
        if isinstance(value, LineClass):
            return by_line[value]
        key = str(value).strip().lower()
        for line_class, target in by_line.items():
            if key == line_class.value:
                return target
        try:
            return cls(key)
        except ValueError as exc:
            raise GeometryError(f"unknown quotient target: {value!r}") from exc

    def matches(self, line_class: LineClass) -> bool:
        if line_class not in _NONDEGENERATE:
            return False
        return self is QuotientTarget.ANY or QuotientTarget.parse(line_class) is self


_NONDEGENERATE = (LineClass.HERMITIAN_NONDEG, LineClass.HYPERBOLIC, LineClass.ELLIPTIC)


def non_isomorphy_quotient(space: PolarSpace) -> QuotientTarget:
    if space.kind is FormKind.HERMITIAN:
        return QuotientTarget.HERMITIAN
    if space.kind.quadratic:
        return QuotientTarget.ELLIPTIC if space.q % 4 == 3 else QuotientTarget.HYPERBOLIC
    raise GeometryError(f"{space.name} has no non-isotropic points")


@dataclass(frozen=True)
class CollinearityConfiguration:
    P: Subspace
    L1: Subspace
    L2: Subspace

    def witness(self) -> Dict[str, str]:
        return {"P": self.P.label, "L1": self.L1.label, "L2": self.L2.label}


@dataclass(frozen=True)
class TangentConfiguration:
    p: Subspace
    L1: Subspace
    L2: Subspace
    quotient: LineClass
    point_type: Optional[str] = None

    @property
    def P(self) -> Subspace:
        return self.L1.join(self.L2)

    def witness(self) -> Dict[str, str]:
        out = {"p": self.p.label, "L1": self.L1.label, "L2": self.L2.label, "quotient": self.quotient.value}
        if self.point_type is not None:
            out["point_type"] = self.point_type
        return out


@dataclass(frozen=True)
class DesignConfiguration:
    S: Subspace
    embedding: SubdesignEmbedding
    p1: int
    p2: int

    def witness(self) -> Dict[str, str]:
        points = self.embedding.parent.points
        return {"S": self.S.label, "p1": points[self.p1], "p2": points[self.p2]}


def find_collinearity_configuration(space: PolarSpace, m: int) -> Optional[CollinearityConfiguration]:
    """First totally isotropic m-space built greedily in point order, with its first two hyperplanes."""
    if m < 2:
        raise GeometryError(f"m must be >= 2, got {m}")
    basis: List[ProjectivePoint] = []
    current = Subspace.zero(space.n, space.field)
    for pt in enumerate_points(space, PointFilter.ISOTROPIC):
        if len(basis) == m:
            break
        if current.contains(pt) or any(form(space, b, pt) for b in basis):
            continue
        basis.append(pt)
        current = current.join([pt])
    if len(basis) < m:
        logger.info("configuration_missing %s", {"construction": "collinearity", "space": space.name, "m": m})
        return None
    first, second = hyperplanes_of(current)[:2]
    config = CollinearityConfiguration(P=current, L1=first, L2=second)
    logger.info("configuration_found %s", {"construction": "collinearity", "space": space.name, **config.witness()})
    return config


def find_tangent_configuration(
    space: PolarSpace,
    quotient_target: QuotientTarget | LineClass | str = QuotientTarget.ANY,
    point_type: PointFilter | str | None = None,
) -> Optional[TangentConfiguration]:
    """First (p, L1, L2) in canonical order, or None after an exhaustive scan.

    On a tangent line through p every non-isotropic point a + tp has the value of a, so a
    line has a single type; P/p is represented by the line through the two representatives.
    """
    target = QuotientTarget.parse(quotient_target)
    if space.kind is FormKind.SYMPLECTIC:
        raise GeometryError(f"{space.name} has no non-isotropic points")
    wanted: Optional[PointClass] = None
    type_name: Optional[str] = None
    if space.kind.quadratic:
        point_filter = PointFilter.parse(point_type)
        if point_filter not in (PointFilter.PLUS, PointFilter.MINUS):
            raise GeometryError(f"{space.name}: choose the plus or minus points")
        wanted = PointClass.PLUS if point_filter is PointFilter.PLUS else PointClass.MINUS
        type_name = point_filter.value

    scanned = 0
    for pt in enumerate_points(space, PointFilter.ISOTROPIC):
        p = Subspace.span([pt], space.field)
        lines = []
        for line in tangent_lines_through(space, p):
            rep = next(x for x in line.points() if not is_isotropic(space, x))
            if wanted is None or classify_point(space, rep) is wanted:
                lines.append((line, rep))
        for i, (L1, a) in enumerate(lines):
            for L2, b in lines[i + 1 :]:
                scanned += 1
                quotient = classify_line(space, Subspace.span([a, b], space.field))
                if quotient in _NONDEGENERATE and target.matches(quotient):
                    config = TangentConfiguration(p=p, L1=L1, L2=L2, quotient=quotient, point_type=type_name)
                    logger.info(
                        "configuration_found %s",
                        {"construction": "tangent", "space": space.name, "scanned": scanned, **config.witness()},
                    )
                    return config
    logger.info(
        "configuration_missing %s",
        {"construction": "tangent", "space": space.name, "quotient": target.value, "scanned": scanned},
    )
    return None


def find_design_configuration(design: Design, subspace_dim: int = 3) -> DesignConfiguration:
    if not design.projective or design.coords is None or design.q is None:
        raise DesignError("design switching sets need a Grassmann design")
    n = len(design.coords[0])
    field = field_of_order(design.q)
    S = next(grassmannian(n, subspace_dim, field))
    emb = subdesign_from_subspace(design, S)
    p1, p2 = emb.point_subset[:2]
    return DesignConfiguration(S=S, embedding=emb, p1=p1, p2=p2)


def collinearity_switch_from(space: PolarSpace, config: CollinearityConfiguration) -> SwitchingSetPair:
    return collinearity_switch_set(space, config.P, config.L1, config.L2)


def tangent_switch_from(space: PolarSpace, config: TangentConfiguration) -> SwitchingSetPair:
    return tangent_line_switch_set(space, config.p, config.L1, config.L2, config.point_type)


__all__ = [
    "CollinearityConfiguration",
    "ConfigurationNotFound",
    "DesignConfiguration",
    "QuotientTarget",
    "SwitchingError",
    "TangentConfiguration",
    "apply_gm",
    "apply_wqh",
    "collinearity_switch_from",
    "collinearity_switch_set",
    "design_switch_set",
    "find_collinearity_configuration",
    "find_design_configuration",
    "find_tangent_configuration",
    "gm_cell_to_wqh_pair",
    "non_isomorphy_quotient",
    "pair_involution",
    "polarity_vertices",
    "radical_switch_set",
    "tangent_line_switch_set",
    "tangent_switch_from",
    "validate_gm",
    "validate_wqh",
]
