from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from .certify import CHECKS, graph_digest, run_check
from .config import LARGE_VERTICES, PRIME_COUNT, SEED
from .designs import Design, ag_design, block_graph, grassmann_design
from .geometry.polar import FormKind, GeometryError, PolarSpace, standard_space
from .graphs.builders import collinearity_graph, degenerate_span_graph, polarity_graph
from .graphs.core import Graph
from .models import BuildSpec, CertifyReport, CheckResult, SrgParams, SwitchingRecord
from .parameters import (
    affine_block_params,
    grassmann_block_params,
    hermitian_degenerate_span_params,
    polarity_params,
    space_collinearity_params,
)
from .switching import (
    ConfigurationNotFound,
    QuotientTarget,
    apply_wqh,
    collinearity_switch_from,
    design_switch_set,
    find_collinearity_configuration,
    find_design_configuration,
    find_tangent_configuration,
    tangent_switch_from,
)

logger = logging.getLogger(__name__)


class BuildError(ValueError):
    pass


@dataclass(frozen=True)
class BuiltGraph:
    graph: Graph
    spec: BuildSpec
    space: Optional[PolarSpace] = None
    design: Optional[Design] = None


def resolve_space(spec: BuildSpec) -> PolarSpace:
    if spec.space is None:
        raise BuildError("build spec names a design, not a polar space")
    try:
        return standard_space(FormKind.parse(spec.space), spec.n, spec.q)
    except GeometryError as exc:
        raise BuildError(str(exc)) from exc


def expected_vertices(spec: BuildSpec) -> Optional[int]:
    try:
        if spec.design == "grassmann":
            return grassmann_block_params(spec.n, spec.q).v
        if spec.design == "ag":
            return affine_block_params(spec.n, spec.q).v
        space = resolve_space(spec)
        if spec.graph == "collinearity":
            return space_collinearity_params(space).v
        if spec.graph == "degenerate_span" and space.kind is FormKind.HERMITIAN and space.q == 4:
            return hermitian_degenerate_span_params(space.n).v
        return polarity_params(space, spec.point_type).v
    except (GeometryError, ValueError):
        return None


def expected_params(spec: BuildSpec) -> Optional[SrgParams]:
    try:
        if spec.design == "grassmann":
            return grassmann_block_params(spec.n, spec.q)
        if spec.design == "ag":
            return affine_block_params(spec.n, spec.q)
        space = resolve_space(spec)
        if spec.graph == "collinearity":
            return space_collinearity_params(space)
        if spec.graph == "degenerate_span":
            if space.kind is FormKind.HERMITIAN and space.q == 4:
                return hermitian_degenerate_span_params(space.n)
            return None
        return polarity_params(space, spec.point_type)
    except (GeometryError, ValueError):
        return None


def build_graph(spec: BuildSpec, *, allow_large: bool = False) -> BuiltGraph:
    expected = expected_vertices(spec)
    if expected is not None and expected >= LARGE_VERTICES and not allow_large:
        raise BuildError(f"the build has {expected} vertices; pass allow_large to build it")

    if spec.design is not None:
        if spec.design == "grassmann":
            design = grassmann_design(spec.n, spec.q)
        else:
            design = ag_design(spec.n, spec.q)
        return BuiltGraph(graph=block_graph(design), spec=spec, design=design)

    space = resolve_space(spec)
    try:
        if spec.graph == "collinearity":
            graph = collinearity_graph(space)
        elif spec.graph == "polarity":
            graph = polarity_graph(space, spec.point_type)
        else:
            graph = degenerate_span_graph(space, spec.point_type)
    except GeometryError as exc:
        raise BuildError(str(exc)) from exc
    return BuiltGraph(graph=graph, spec=spec, space=space)


def construct_record(
    built: BuiltGraph,
    kind: str,
    digest: str,
    *,
    m: Optional[int] = None,
    quotient: str = "any",
    subspace_dim: Optional[int] = None,
    seed: int = 0,
) -> SwitchingRecord:
    """Search the first configuration of the requested kind and record its switching set.

    Raises ConfigurationNotFound when the exhaustive search is empty.
    """
    spec = built.spec
    if kind == "design":
        if built.design is None:
            raise BuildError("design switching sets need a design block graph")
        try:
            config = find_design_configuration(built.design, subspace_dim or 3)
        except ValueError as exc:
            raise BuildError(str(exc)) from exc
        pair = design_switch_set(built.design, config.embedding, config.p1, config.p2)
        construction = "design"
    elif kind == "collinearity":
        if built.space is None or spec.graph != "collinearity":
            raise BuildError("collinearity switching sets need a collinearity graph")
        rank = m or built.space.d
        found = find_collinearity_configuration(built.space, rank)
        if found is None:
            raise ConfigurationNotFound(f"{built.space.name} has no totally isotropic {rank}-space")
        config = found
        pair = collinearity_switch_from(built.space, found)
        construction = "collinearity"
    elif kind == "tangent":
        if built.space is None or spec.graph not in ("polarity", "degenerate_span"):
            raise BuildError("tangent switching sets need a polarity or degenerate-span graph")
        try:
            target = QuotientTarget.parse(quotient)
            found_t = find_tangent_configuration(built.space, target, spec.point_type)
        except GeometryError as exc:
            raise BuildError(str(exc)) from exc
        if found_t is None:
            raise ConfigurationNotFound(
                f"{built.space.name}: no tangent configuration with quotient {target.value}"
                + (f" on {spec.point_type} points" if spec.point_type else "")
            )
        config = found_t
        pair = tangent_switch_from(built.space, found_t)
        construction = "tangent"
    else:
        raise BuildError(f"unknown switching-set kind {kind!r}")

    record = SwitchingRecord(
        construction=construction,
        graph_digest=digest,
        c1=pair.c1,
        c2=pair.c2,
        witness=config.witness(),
        build=spec,
        seed=seed,
    )
    logger.info(
        "switching_record_built %s",
        {"construction": construction, "digest": digest[:12], "size": len(pair.c1)},
    )
    return record


def apply_record(graph: Graph, record: SwitchingRecord, digest: str) -> Graph:
    if record.graph_digest != digest:
        raise BuildError(f"record belongs to graph {record.graph_digest[:12]}, not {digest[:12]}")
    return apply_wqh(graph, record.pair())


def run_checks(
    g: Graph,
    h: Graph,
    checks: Sequence[str],
    expect: Optional[Sequence[str]] = None,
    *,
    prime_count: int = PRIME_COUNT,
    seed: int = SEED,
) -> CertifyReport:
    """Run named checks on a graph pair; ``ok`` holds when every check meets its expectation.

    Graphs at or above LARGE_VERTICES are compared by degrees only in the ``srg`` check.
    """
    if expect is None:
        expect = ["pass"] * len(checks)
    if len(expect) != len(checks):
        raise BuildError(f"{len(checks)} checks but {len(expect)} expectations")
    names = [name.strip().lower() for name in checks]
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise BuildError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)}")
    if any(wanted not in ("pass", "fail") for wanted in expect):
        raise BuildError(f"expectations must be pass or fail, got {list(expect)}")

    degrees_only = max(g.n, h.n) >= LARGE_VERTICES
    results = []
    for name, wanted in zip(names, expect):
        cert = run_check(name, g, h, prime_count=prime_count, seed=seed, degrees_only=degrees_only)
        results.append(CheckResult(name=name, expected=wanted, certificate=cert))
    report = CertifyReport(
        inputs=[graph_digest(g), graph_digest(h)],
        checks=results,
        ok=all(result.met for result in results),
    )
    logger.info(
        "checks_finished %s",
        {"checks": [r.name for r in results], "met": [r.met for r in results], "ok": report.ok},
    )
    return report
