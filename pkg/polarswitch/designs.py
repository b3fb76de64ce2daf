from __future__ import annotations

import hashlib
import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .config import DESIGN_FORMAT_VERSION
from .field import field_of_order
from .geometry.linalg import ProjectivePoint, Subspace, point_label
from .geometry.points import all_points, grassmannian
from .graphs.core import Graph
from .models import DesignVerdict

logger = logging.getLogger(__name__)

Block = Tuple[int, ...]


class DesignError(ValueError):
    pass


@dataclass(frozen=True)
class Design:
    points: Tuple[str, ...]
    blocks: Tuple[Block, ...]
    block_size: int
    lam: int = 1
    coords: Optional[Tuple[ProjectivePoint, ...]] = dc_field(default=None, repr=False, compare=False)
    q: Optional[int] = dc_field(default=None, compare=False)
    projective: bool = dc_field(default=False, compare=False)

    @property
    def v(self) -> int:
        return len(self.points)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def block_label(self, index: int) -> str:
        return "+".join(self.points[p] for p in self.blocks[index])

    def point_index(self) -> Dict[ProjectivePoint, int]:
        if self.coords is None:
            raise DesignError("design has no point coordinates")
        return {pt: i for i, pt in enumerate(self.coords)}

    def replace_blocks(self, blocks: Sequence[Block]) -> "Design":
        return Design(
            points=self.points,
            blocks=tuple(tuple(sorted(b)) for b in blocks),
            block_size=self.block_size,
            lam=self.lam,
            coords=self.coords,
            q=self.q,
            projective=self.projective,
        )


@dataclass(frozen=True)
class SubdesignEmbedding:
    parent: Design = dc_field(repr=False)
    point_subset: Tuple[int, ...]
    block_subset: Tuple[int, ...]

    def restriction(self) -> Design:
        index = {p: i for i, p in enumerate(self.point_subset)}
        return Design(
            points=tuple(self.parent.points[p] for p in self.point_subset),
            blocks=tuple(tuple(index[p] for p in self.parent.blocks[b]) for b in self.block_subset),
            block_size=self.parent.block_size,
            lam=self.parent.lam,
        )


def grassmann_design(n: int, q: int) -> Design:
    if n < 3:
        raise DesignError(f"grassmann designs need n >= 3, got {n}")
    field = field_of_order(q)
    coords = tuple(all_points(n, field))
    index = {pt: i for i, pt in enumerate(coords)}
    blocks = sorted(tuple(sorted(index[pt] for pt in line.points())) for line in grassmannian(n, 2, field))
    design = Design(
        points=tuple(point_label(pt) for pt in coords),
        blocks=tuple(blocks),
        block_size=q + 1,
        lam=1,
        coords=coords,
        q=q,
        projective=True,
    )
    logger.info("design_built %s", {"design": "grassmann", "n": n, "q": q, "v": design.v, "blocks": design.num_blocks})
    return design


def ag_design(n: int = 3, q: int = 3) -> Design:
    field = field_of_order(q)
    coords = tuple(itertools.product(range(q), repeat=n))
    index = {pt: i for i, pt in enumerate(coords)}
    add, mul = field.add, field.mul
    blocks = set()
    for direction in all_points(n, field):
        for base in coords:
            line = tuple(
                sorted(
                    index[tuple(add[b][mul[t][d]] for b, d in zip(base, direction))]
                    for t in range(q)
                )
            )
            blocks.add(line)
    design = Design(
        points=tuple(point_label(pt) for pt in coords),
        blocks=tuple(sorted(blocks)),
        block_size=q,
        lam=1,
        coords=coords,
        q=q,
    )
    logger.info("design_built %s", {"design": "ag", "n": n, "q": q, "v": design.v, "blocks": design.num_blocks})
    return design


def subdesign_from_subspace(design: Design, s: Subspace) -> SubdesignEmbedding:
    if not design.projective:
        raise DesignError("subdesigns from subspaces need a Grassmann design")
    n = s.n
    if not 2 < s.dim < n:
        raise DesignError(f"subspace dimension must satisfy 2 < s < {n}, got {s.dim}")
    index = design.point_index()
    inside = tuple(sorted(index[pt] for pt in s.points()))
    members = set(inside)
    blocks = tuple(i for i, block in enumerate(design.blocks) if members.issuperset(block))
    return SubdesignEmbedding(parent=design, point_subset=inside, block_subset=blocks)


def verify_design(design: Design) -> DesignVerdict:
    base = dict(v=design.v, block_size=design.block_size, lam=design.lam, blocks=design.num_blocks)
    for i, block in enumerate(design.blocks):
        if len(set(block)) != design.block_size or any(not 0 <= p < design.v for p in block):
            return DesignVerdict(ok=False, bad_block=i, detail=f"block {i} is not a {design.block_size}-subset", **base)
    counts: Counter = Counter()
    for block in design.blocks:
        counts.update(itertools.combinations(sorted(block), 2))
    for pair in itertools.combinations(range(design.v), 2):
        got = counts.get(pair, 0)
        if got != design.lam:
            return DesignVerdict(
                ok=False,
                witness_pair=list(pair),
                witness_count=got,
                detail=f"points {pair[0]} and {pair[1]} lie in {got} blocks",
                **base,
            )
    return DesignVerdict(ok=True, **base)


def _require_steiner(design: Design) -> None:
    if design.lam != 1:
        raise DesignError(f"needs lambda = 1, got {design.lam}")


def block_graph(design: Design) -> Graph:
    _require_steiner(design)
    through = [0] * design.v
    for i, block in enumerate(design.blocks):
        for p in block:
            through[p] |= 1 << i
    rows = []
    for i, block in enumerate(design.blocks):
        mask = 0
        for p in block:
            mask |= through[p]
        rows.append(mask & ~(1 << i))
    return Graph.trusted(design.num_blocks, rows, [design.block_label(i) for i in range(design.num_blocks)])


def switch_cells(emb: SubdesignEmbedding, p1: int, p2: int) -> Tuple[List[int], List[int]]:
    _require_steiner(emb.parent)
    if p1 == p2:
        raise DesignError("p1 and p2 must differ")
    members = set(emb.point_subset)
    if p1 not in members or p2 not in members:
        raise DesignError("p1 and p2 must be points of the subdesign")
    blocks = emb.parent.blocks
    c1 = [b for b in emb.block_subset if p1 in blocks[b] and p2 not in blocks[b]]
    c2 = [b for b in emb.block_subset if p2 in blocks[b] and p1 not in blocks[b]]
    return c1, c2


def jungnickel_modify(design: Design, emb: SubdesignEmbedding, p1: int, p2: int) -> Design:
    """Swap p1 and p2 inside the subdesign blocks that contain exactly one of them."""
    c1, c2 = switch_cells(emb, p1, p2)
    blocks = list(design.blocks)
    for cell, old, new in ((c1, p1, p2), (c2, p2, p1)):
        for b in cell:
            blocks[b] = tuple(sorted(set(blocks[b]) - {old} | {new}))
    logger.info("design_modified %s", {"v": design.v, "p1": p1, "p2": p2, "replaced": len(c1) + len(c2)})
    return design.replace_blocks(blocks)


def format_design(design: Design) -> str:
    lines = [f"design v{DESIGN_FORMAT_VERSION}", f"{design.v} {design.block_size} {design.lam}"]
    lines.extend(" ".join(str(p) for p in block) for block in design.blocks)
    return "\n".join(lines) + "\n"


def parse_design(text: str) -> Design:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if len(lines) < 2 or lines[0] != f"design v{DESIGN_FORMAT_VERSION}":
        raise DesignError(f"expected header 'design v{DESIGN_FORMAT_VERSION}'")
    try:
        v, block_size, lam = (int(x) for x in lines[1].split())
        blocks = [tuple(sorted(int(x) for x in line.split())) for line in lines[2:]]
    except ValueError as exc:
        raise DesignError(f"malformed design file: {exc}") from exc
    for block in blocks:
        if len(block) != block_size or any(not 0 <= p < v for p in block):
            raise DesignError(f"block {block} does not fit v={v}, block size {block_size}")
    return Design(points=tuple(str(i) for i in range(v)), blocks=tuple(blocks), block_size=block_size, lam=lam)


def design_digest(design: Design) -> str:
    return hashlib.sha256(format_design(design).encode("ascii")).hexdigest()


def write_design(design: Design, path: Path | str) -> str:
    text = format_design(design)
    Path(path).write_text(text, encoding="ascii")
    return hashlib.sha256(text.encode("ascii")).hexdigest()


def read_design(path: Path | str) -> Design:
    return parse_design(Path(path).read_text(encoding="ascii"))


__all__ = [
    "Design",
    "DesignError",
    "SubdesignEmbedding",
    "ag_design",
    "block_graph",
    "design_digest",
    "format_design",
    "grassmann_design",
    "jungnickel_modify",
    "parse_design",
    "read_design",
    "subdesign_from_subspace",
    "switch_cells",
    "verify_design",
    "write_design",
]
