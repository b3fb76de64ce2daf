from __future__ import annotations

import hashlib
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Type, TypeVar

from pydantic import BaseModel, ValidationError

from .graphs.core import Graph
from .graphs.graph6 import Graph6Error, graph6_decode, graph6_encode
from .models import CertifyReport, RunManifest, SwitchingRecord, canonical_json

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


class ArtifactError(ValueError):
    pass


def file_digest(path: Path | str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def labels_path(path: Path | str) -> Path:
    return Path(path).with_suffix(".labels")


def manifest_path(path: Path | str) -> Path:
    return Path(path).with_suffix(".manifest.json")


def write_labels(labels: Sequence[str], path: Path | str) -> None:
    Path(path).write_text("".join(f"{label}\n" for label in labels), encoding="utf-8")


def read_labels(path: Path | str) -> List[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def write_graph(graph: Graph, path: Path | str) -> str:
    path = Path(path)
    data = graph6_encode(graph)
    path.write_bytes(data + b"\n")
    if graph.labels is not None:
        write_labels(graph.labels, labels_path(path))
    digest = hashlib.sha256(data).hexdigest()
    logger.info("graph_written %s", {"path": str(path), "n": graph.n, "digest": digest[:12]})
    return digest


def read_graph(path: Path | str) -> Graph:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ArtifactError(f"cannot read {path}: {exc}") from exc
    lines = [line for line in data.splitlines() if line.strip()]
    if len(lines) != 1:
        raise Graph6Error(f"{path}: expected exactly one graph6 line, found {len(lines)}")
    labels: Optional[List[str]] = None
    sidecar = labels_path(path)
    if sidecar.exists():
        labels = read_labels(sidecar)
    graph = graph6_decode(lines[0])
    if labels is not None:
        if len(labels) != graph.n:
            raise ArtifactError(f"{sidecar}: {len(labels)} labels for {graph.n} vertices")
        graph = graph.with_labels(labels)
    return graph


def write_model(model: BaseModel, path: Path | str) -> str:
    text = canonical_json(model)
    Path(path).write_text(text, encoding="utf-8")
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def read_model(path: Path | str, model: Type[ModelT]) -> ModelT:
    path = Path(path)
    try:
        return model.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ArtifactError(f"cannot read {path}: {exc}") from exc
    except ValidationError as exc:
        raise ArtifactError(f"{path} is not a valid {model.__name__}: {exc}") from exc


def read_record(path: Path | str) -> SwitchingRecord:
    return read_model(path, SwitchingRecord)


def read_manifest(path: Path | str) -> RunManifest:
    return read_model(path, RunManifest)


def read_report(path: Path | str) -> CertifyReport:
    return read_model(path, CertifyReport)
