from __future__ import annotations

import logging
from typing import Any, Dict, List

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from . import __version__
from .certify import graph_digest
from .config import CORS_ORIGINS, LARGE_VERTICES, configure_logging
from .geometry.polar import GeometryError
from .graphs.core import srg_params
from .graphs.graph6 import graph6_encode
from .models import (
    BuildRequest,
    BuildSpec,
    CertifyReport,
    CertifyRequest,
    GraphSummary,
    SwitchingRecord,
    SwitchRequest,
    SwitchSetRequest,
)
from .pipeline import BuildError, BuiltGraph, apply_record, build_graph, construct_record, run_checks
from .store import InMemoryStore
from .switching import ConfigurationNotFound, SwitchingError

configure_logging()
logger = logging.getLogger(__name__)

store = InMemoryStore()

app = FastAPI(title="polarswitch", version=__version__)

app.add_middleware(
    CORSMiddleware,
    allow_origins=CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def _summary(entry: Dict[str, Any], with_graph6: bool = False) -> GraphSummary:
    built: BuiltGraph = entry["built"]
    graph = built.graph
    return GraphSummary(
        digest=entry["digest"],
        n=graph.n,
        edges=graph.edge_count,
        srg=srg_params(graph) if graph.n < LARGE_VERTICES else None,
        build=built.spec,
        graph6=graph6_encode(graph).decode("ascii") if with_graph6 else None,
        parent=entry["parent"],
        created_at=entry["created_at"],
    )


def _require_graph(digest: str) -> Dict[str, Any]:
    entry = store.get_graph(digest)
    if entry is None:
        raise HTTPException(status_code=404, detail=f"Unknown graph {digest[:12]}")
    return entry


def _switching_error_to_http(exc: SwitchingError) -> HTTPException:
    detail: Dict[str, Any] = {"message": str(exc)}
    if exc.verdict is not None:
        detail["verdict"] = exc.verdict.model_dump()
    return HTTPException(status_code=422, detail=detail)


@app.get("/api/health")
def health() -> Dict[str, Any]:
    return {"ok": True, "version": __version__, "graphs": store.graph_count(), "reports": store.report_count()}


@app.post("/api/graphs", response_model=GraphSummary)
def create_graph(req: BuildRequest) -> GraphSummary:
    spec = BuildSpec.model_validate(req.model_dump(exclude={"allow_large"}))
    try:
        built = build_graph(spec, allow_large=req.allow_large)
    except (BuildError, GeometryError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc

    digest = graph_digest(built.graph)
    entry = store.save_graph(digest, built)
    logger.info("graph_built %s", {"digest": digest[:12], "n": built.graph.n, "spec": spec.model_dump()})
    return _summary(entry)


@app.get("/api/graphs/{digest}", response_model=GraphSummary)
def get_graph(digest: str) -> GraphSummary:
    entry = _require_graph(digest)
    return _summary(entry, with_graph6=True)


@app.get("/api/graphs/{digest}/records", response_model=List[SwitchingRecord])
def get_records(digest: str) -> List[SwitchingRecord]:
    _require_graph(digest)
    return store.get_records(digest)


@app.post("/api/switchsets", response_model=SwitchingRecord)
def create_switchset(req: SwitchSetRequest) -> SwitchingRecord:
    entry = _require_graph(req.digest)
    try:
        record = construct_record(
            entry["built"],
            req.kind,
            req.digest,
            m=req.m,
            quotient=req.quotient,
            subspace_dim=req.subspace_dim,
            seed=req.seed,
        )
    except ConfigurationNotFound as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    except SwitchingError as exc:
        raise _switching_error_to_http(exc) from exc
    except (BuildError, GeometryError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return store.save_record(record)


@app.post("/api/switch", response_model=GraphSummary)
def switch_graph(req: SwitchRequest) -> GraphSummary:
    entry = _require_graph(req.digest)
    built: BuiltGraph = entry["built"]
    try:
        switched = apply_record(built.graph, req.record, req.digest)
    except SwitchingError as exc:
        raise _switching_error_to_http(exc) from exc
    except (BuildError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc

    digest = graph_digest(switched)
    result = BuiltGraph(graph=switched, spec=built.spec, space=built.space)
    saved = store.save_graph(digest, result, parent=req.digest)
    logger.info(
        "graph_switched %s",
        {"from": req.digest[:12], "to": digest[:12], "construction": req.record.construction},
    )
    return _summary(saved)


@app.post("/api/certify", response_model=CertifyReport)
def certify(req: CertifyRequest) -> CertifyReport:
    g = _require_graph(req.digest_a)["built"].graph
    h = _require_graph(req.digest_b)["built"].graph
    try:
        report = run_checks(g, h, req.checks, req.expect, prime_count=req.prime_count, seed=req.seed)
    except (BuildError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return store.save_report(report)
