from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from . import __version__
from .artifacts import (
    ArtifactError,
    file_digest,
    labels_path,
    manifest_path,
    read_graph,
    read_manifest,
    read_record,
    read_report,
    write_graph,
    write_model,
)
from .certify import graph_digest, recheck_certificate
from .config import LARGE_VERTICES, PRIME_COUNT, SEED, configure_logging
from .designs import write_design
from .graphs.core import srg_check
from .models import BuildSpec, RunManifest, canonical_json
from .pipeline import (
    BuildError,
    BuiltGraph,
    apply_record,
    build_graph,
    construct_record,
    expected_params,
    run_checks,
)
from .switching import ConfigurationNotFound, SwitchingError, validate_wqh

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_EXPECTATION = 1
EXIT_BAD_SPEC = 2
EXIT_NO_CONFIGURATION = 3
EXIT_INVALID_SWITCHING = 4

EXIT_CODES_HELP = """exit codes:
  0  ok
  1  a check missed its expectation, or a recheck did not reproduce
  2  bad spec or unreadable input
  3  no configuration of the requested kind
  4  invalid switching set"""


def _split(value: Optional[str]) -> List[str]:
    if not value:
        return []
    return [part.strip() for part in value.split(",") if part.strip()]


def _spec_from_args(args: argparse.Namespace) -> BuildSpec:
    graph = args.graph or ("block" if args.design else None)
    if graph is None:
        raise BuildError("--graph is required for polar-space builds")
    return BuildSpec(
        space=args.space,
        design=args.design,
        n=args.n,
        q=args.q,
        graph=graph,
        point_type=args.point_type,
    )


def _write_manifest(
    output: Path,
    argv: Sequence[str],
    started: float,
    *,
    seed: int = 0,
    build: Optional[BuildSpec] = None,
    inputs: Optional[Dict[str, str]] = None,
    outputs: Sequence[Path] = (),
) -> None:
    manifest = RunManifest(
        command=list(argv),
        tool_version=__version__,
        seed=seed,
        build=build,
        inputs=inputs or {},
        outputs={str(path): file_digest(path) for path in outputs if path.exists()},
        wall_clock_seconds=round(time.perf_counter() - started, 3),
    )
    write_model(manifest, manifest_path(output))


def _load_built(graph_path: Path) -> Tuple[BuiltGraph, str]:
    """Rebuild the geometry behind a graph file from its manifest and check it still matches."""
    sidecar = manifest_path(graph_path)
    if not sidecar.exists():
        raise BuildError(f"{graph_path} has no manifest; switching sets need a graph written by build")
    manifest = read_manifest(sidecar)
    if manifest.build is None:
        raise BuildError(f"{sidecar} records no build spec")
    graph = read_graph(graph_path)
    if graph.labels is None:
        raise BuildError(f"{graph_path} has no label sidecar")
    built = build_graph(manifest.build, allow_large=True)
    digest = graph_digest(graph)
    if graph_digest(built.graph) != digest:
        raise BuildError(f"{graph_path} does not match the graph its manifest builds")
    return built, digest


def cmd_build(args: argparse.Namespace, argv: Sequence[str]) -> int:
    started = time.perf_counter()
    spec = _spec_from_args(args)
    built = build_graph(spec, allow_large=args.allow_large)
    out = Path(args.out)
    digest = write_graph(built.graph, out)
    outputs = [out, labels_path(out)]
    if built.design is not None and args.design_out:
        write_design(built.design, args.design_out)
        outputs.append(Path(args.design_out))
    _write_manifest(out, argv, started, build=spec, outputs=outputs)
    print(json.dumps({"digest": digest, "n": built.graph.n, "edges": built.graph.edge_count}))
    return EXIT_OK


def cmd_switchset(args: argparse.Namespace, argv: Sequence[str]) -> int:
    started = time.perf_counter()
    graph_path = Path(args.graph)
    built, digest = _load_built(graph_path)
    record = construct_record(
        built,
        args.kind,
        digest,
        m=args.m,
        quotient=args.quotient,
        subspace_dim=args.subspace_dim,
        seed=args.seed,
    )
    out = Path(args.out)
    write_model(record, out)
    _write_manifest(
        out,
        argv,
        started,
        seed=args.seed,
        build=built.spec,
        inputs={str(graph_path): file_digest(graph_path)},
        outputs=[out],
    )
    print(json.dumps({"construction": record.construction, "size": len(record.c1), "witness": record.witness}))
    return EXIT_OK


def cmd_switch(args: argparse.Namespace, argv: Sequence[str]) -> int:
    started = time.perf_counter()
    graph_path, record_path = Path(args.graph), Path(args.record)
    graph = read_graph(graph_path)
    record = read_record(record_path)
    verdict = validate_wqh(graph, record.pair())
    sys.stdout.write(canonical_json(verdict))
    if not verdict.ok:
        logger.info("switching_rejected %s", {"condition": verdict.condition, "witness": verdict.witness})
        return EXIT_INVALID_SWITCHING

    switched = apply_record(graph, record, graph_digest(graph))
    out = Path(args.out)
    write_graph(switched, out)
    _write_manifest(
        out,
        argv,
        started,
        seed=record.seed,
        inputs={str(graph_path): file_digest(graph_path), str(record_path): file_digest(record_path)},
        outputs=[out, labels_path(out)],
    )
    return EXIT_OK


def cmd_certify(args: argparse.Namespace, argv: Sequence[str]) -> int:
    started = time.perf_counter()
    paths = [Path(args.graph_a), Path(args.graph_b)]
    g, h = (read_graph(path) for path in paths)
    checks = _split(args.checks)
    expect = _split(args.expect) or None
    report = run_checks(g, h, checks, expect, prime_count=args.prime_count, seed=args.seed)
    text = canonical_json(report)
    if args.report:
        out = Path(args.report)
        out.write_text(text, encoding="utf-8")
        _write_manifest(
            out,
            argv,
            started,
            seed=args.seed,
            inputs={str(path): file_digest(path) for path in paths},
            outputs=[out],
        )
    else:
        sys.stdout.write(text)
    for result in report.checks:
        if not result.met:
            logger.info(
                "expectation_unmet %s",
                {"check": result.name, "expected": result.expected, "verdict": result.certificate.verdict},
            )
    return EXIT_OK if report.ok else EXIT_EXPECTATION


def cmd_params(args: argparse.Namespace, argv: Sequence[str]) -> int:
    spec = _spec_from_args(args)
    expected = expected_params(spec)
    built = build_graph(spec, allow_large=args.allow_large)
    graph = built.graph
    degrees_only = graph.n >= LARGE_VERTICES
    check = srg_check(graph, degrees_only=degrees_only)

    out: Dict[str, object] = {
        "expected": expected.model_dump(by_alias=True) if expected else None,
        "measured": check.params.model_dump(by_alias=True) if check.params else None,
        "degrees_only": degrees_only,
    }
    if check.reason:
        out["reason"] = check.reason
    if degrees_only and check.witness is None:
        k = graph.degree(0) if graph.n else 0
        out["measured"] = {"v": graph.n, "k": k}
        match = expected is None or (expected.v, expected.k) == (graph.n, k)
    else:
        match = expected is None or (check.params is not None and check.params == expected)
    out["match"] = match
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK if match else EXIT_EXPECTATION


def cmd_recheck(args: argparse.Namespace, argv: Sequence[str]) -> int:
    report = read_report(args.report)
    graphs = [read_graph(path) for path in (args.graph_a, args.graph_b)]
    reproduced = [recheck_certificate(result.certificate, *graphs) for result in report.checks]
    for result, ok in zip(report.checks, reproduced):
        print(json.dumps({"check": result.name, "verdict": result.certificate.verdict, "reproduced": ok}))
    return EXIT_OK if all(reproduced) else EXIT_EXPECTATION


def _add_spec_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--space", help="sp, u, o, o+ or o-")
    parser.add_argument("--design", choices=("grassmann", "ag"))
    parser.add_argument("--n", type=int, required=True, help="vector space dimension")
    parser.add_argument("--q", type=int, required=True, help="order of the coordinate field")
    parser.add_argument("--graph", choices=("collinearity", "polarity", "degenerate_span", "block"))
    parser.add_argument("--point-type", choices=("plus", "minus"), dest="point_type")
    parser.add_argument("--allow-large", action="store_true", dest="allow_large")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarswitch",
        description="Build polar-space graphs, switch them and certify the results.",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a graph and write graph6 plus labels")
    _add_spec_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--design-out", dest="design_out", help="also write the design file")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("switchset", help="construct a switching-set record for a built graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--kind", choices=("collinearity", "tangent", "design"), required=True)
    p.add_argument("--m", type=int, default=None, help="rank of the totally isotropic subspace")
    p.add_argument("--quotient", choices=("u2", "o+2", "o-2", "any"), default="any")
    p.add_argument("--subspace-dim", type=int, default=None, dest="subspace_dim")
    p.add_argument("--seed", type=int, default=SEED)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_switchset)

    p = sub.add_parser("switch", help="validate and apply a switching-set record")
    p.add_argument("--graph", required=True)
    p.add_argument("--record", required=True)
    p.add_argument("--method", choices=("wqh",), default="wqh")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_switch)

    p = sub.add_parser("certify", help="run checks on a pair of graphs")
    p.add_argument("graph_a")
    p.add_argument("graph_b")
    p.add_argument("--checks", required=True, help="comma-separated check names")
    p.add_argument("--expect", default=None, help="comma-separated pass/fail, one per check")
    p.add_argument("--report", default=None)
    p.add_argument("--prime-count", type=int, default=PRIME_COUNT, dest="prime_count")
    p.add_argument("--seed", type=int, default=SEED)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("params", help="closed-form against measured SRG parameters")
    _add_spec_args(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("recheck", help="re-verify a certify report against graph files")
    p.add_argument("report")
    p.add_argument("graph_a")
    p.add_argument("graph_b")
    p.set_defaults(func=cmd_recheck)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    configure_logging()
    try:
        return args.func(args, ["polarswitch", *argv])
    except ConfigurationNotFound as exc:
        logger.error("configuration_not_found %s", {"detail": str(exc)})
        return EXIT_NO_CONFIGURATION
    except SwitchingError as exc:
        logger.error("switching_invalid %s", {"detail": str(exc)})
        if exc.verdict is not None:
            sys.stdout.write(canonical_json(exc.verdict))
        return EXIT_INVALID_SWITCHING
    except (ArtifactError, ValidationError, ValueError, OSError) as exc:
        logger.error("bad_input %s", {"command": args.command, "detail": str(exc)})
        return EXIT_BAD_SPEC


if __name__ == "__main__":
    sys.exit(main())
