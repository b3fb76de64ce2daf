from __future__ import annotations

import json
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import RECORD_SCHEMA_VERSION, REPORT_SCHEMA_VERSION


def canonical_json(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json", by_alias=True), sort_keys=True, indent=2) + "\n"


class SrgParams(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    v: int = Field(..., ge=0)
    k: int = Field(..., ge=0)
    lam: int = Field(..., ge=0, alias="lambda")
    mu: int = Field(..., ge=0)

    @model_validator(mode="after")
    def check_feasibility(self) -> "SrgParams":
        if self.k * (self.k - self.lam - 1) != (self.v - self.k - 1) * self.mu:
            raise ValueError(
                f"k(k-lambda-1) != (v-k-1)mu for ({self.v},{self.k},{self.lam},{self.mu})"
            )
        return self

    def as_tuple(self) -> tuple:
        return (self.v, self.k, self.lam, self.mu)

    def complement(self) -> "SrgParams":
        v, k, lam, mu = self.as_tuple()
        return SrgParams(v=v, k=v - k - 1, lam=v - 2 - 2 * k + mu, mu=v - 2 * k + lam)

    def __str__(self) -> str:
        return "SRG(%d,%d,%d,%d)" % self.as_tuple()


class SrgCheck(BaseModel):
    params: Optional[SrgParams] = None
    witness: Optional[List[int]] = None
    reason: Optional[str] = None


def _sorted_unique(values: List[int]) -> List[int]:
    if any(v < 0 for v in values):
        raise ValueError("vertex indices must be non-negative")
    if len(set(values)) != len(values):
        raise ValueError("vertex indices repeat")
    return sorted(values)


class SwitchingSetPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    c1: List[int]
    c2: List[int]

    @field_validator("c1", "c2")
    @classmethod
    def normalize_cell(cls, value: List[int]) -> List[int]:
        return _sorted_unique(value)

    @model_validator(mode="after")
    def check_cells(self) -> "SwitchingSetPair":
        if not self.c1 or len(self.c1) != len(self.c2):
            raise ValueError(f"cells need equal non-zero sizes, got {len(self.c1)} and {len(self.c2)}")
        if set(self.c1) & set(self.c2):
            raise ValueError("cells must be disjoint")
        return self

    def swapped(self) -> "SwitchingSetPair":
        return SwitchingSetPair(c1=self.c2, c2=self.c1)


class GMPartition(BaseModel):
    model_config = ConfigDict(frozen=True)

    cells: List[List[int]] = Field(..., min_length=1)

    @field_validator("cells")
    @classmethod
    def check_cells(cls, cells: List[List[int]]) -> List[List[int]]:
        seen: set[int] = set()
        out = []
        for cell in cells:
            if not cell:
                raise ValueError("cells must be non-empty")
            cell = _sorted_unique(cell)
            if seen & set(cell):
                raise ValueError("cells must be pairwise disjoint")
            seen.update(cell)
            out.append(cell)
        return out


WqhCondition = Literal[
    "pair_range",
    "c1_regular",
    "c2_regular",
    "equal_degree",
    "union_regular",
    "outside_vertex",
]


class WqhVerdict(BaseModel):
    ok: bool
    condition: Optional[WqhCondition] = None
    witness: Optional[int] = None
    detail: str = ""
    cell_degree: Optional[int] = None
    union_degree: Optional[int] = None
    union_shape: Optional[Literal["empty", "complete", "complete_bipartite", "other"]] = None
    balanced: int = 0
    swapped: int = 0


class GmVerdict(BaseModel):
    ok: bool
    condition: Optional[Literal["partition_range", "equitable", "outside_vertex"]] = None
    witness: Optional[int] = None
    cell: Optional[int] = None
    detail: str = ""
    swapped: int = 0


class DesignVerdict(BaseModel):
    ok: bool
    v: int
    block_size: int
    lam: int = Field(..., alias="lambda")
    blocks: int
    witness_pair: Optional[List[int]] = None
    witness_count: Optional[int] = None
    bad_block: Optional[int] = None
    detail: str = ""

    model_config = ConfigDict(populate_by_name=True)


class CospectralVerdict(BaseModel):
    ok: bool
    method: Literal["charpoly", "srg_params", "vertex_count"]
    n: int
    primes: List[int] = Field(default_factory=list)
    mismatch_prime: Optional[int] = None
    error_bound: Optional[float] = None
    detail: str = ""


ClaimKind = Literal[
    "srg_params",
    "cospectral",
    "non_isomorphic",
    "isomorphic",
    "design_valid",
    "switching_valid",
]


class Certificate(BaseModel):
    schema_version: int = REPORT_SCHEMA_VERSION
    claim: ClaimKind
    inputs: List[str]
    evidence: Dict[str, Any] = Field(default_factory=dict)
    verdict: Literal["pass", "fail"]

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


GraphKind = Literal["collinearity", "polarity", "degenerate_span", "block"]


class BuildSpec(BaseModel):
    space: Optional[str] = None
    design: Optional[Literal["grassmann", "ag"]] = None
    n: int = Field(..., ge=1, le=16)
    q: int = Field(..., ge=2, le=256)
    graph: GraphKind
    point_type: Optional[Literal["plus", "minus"]] = None

    @model_validator(mode="after")
    def check_source(self) -> "BuildSpec":
        if (self.space is None) == (self.design is None):
            raise ValueError("exactly one of space and design is required")
        if self.design is not None and self.graph != "block":
            raise ValueError("designs only build block graphs")
        if self.space is not None and self.graph == "block":
            raise ValueError("block graphs need a design")
        return self


class SwitchingRecord(BaseModel):
    schema_version: int = RECORD_SCHEMA_VERSION
    construction: Literal["collinearity", "tangent", "radical", "design", "gm", "explicit"]
    graph_digest: str
    c1: List[int]
    c2: List[int]
    witness: Dict[str, str] = Field(default_factory=dict)
    build: Optional[BuildSpec] = None
    seed: int = 0

    def pair(self) -> SwitchingSetPair:
        return SwitchingSetPair(c1=self.c1, c2=self.c2)


class CheckResult(BaseModel):
    name: str
    expected: Literal["pass", "fail"]
    certificate: Certificate

    @property
    def met(self) -> bool:
        return self.certificate.verdict == self.expected


class CertifyReport(BaseModel):
    schema_version: int = REPORT_SCHEMA_VERSION
    inputs: List[str]
    checks: List[CheckResult]
    ok: bool


class RunManifest(BaseModel):
    schema_version: int = REPORT_SCHEMA_VERSION
    command: List[str]
    tool_version: str
    seed: int = 0
    build: Optional[BuildSpec] = None
    inputs: Dict[str, str] = Field(default_factory=dict)
    outputs: Dict[str, str] = Field(default_factory=dict)
    wall_clock_seconds: float = 0.0


class BuildRequest(BuildSpec):
    allow_large: bool = False


class GraphSummary(BaseModel):
    digest: str
    n: int
    edges: int
    srg: Optional[SrgParams] = None
    build: Optional[BuildSpec] = None
    graph6: Optional[str] = None
    parent: Optional[str] = None
    created_at: Optional[float] = None


class SwitchSetRequest(BaseModel):
    digest: str = Field(..., min_length=64, max_length=64)
    kind: Literal["collinearity", "tangent", "design"]
    m: Optional[int] = Field(default=None, ge=2, le=16)
    quotient: Literal["u2", "o+2", "o-2", "any"] = "any"
    subspace_dim: Optional[int] = Field(default=None, ge=3, le=15)
    seed: int = 0


class SwitchRequest(BaseModel):
    digest: str = Field(..., min_length=64, max_length=64)
    record: SwitchingRecord
    method: Literal["wqh"] = "wqh"


class CertifyRequest(BaseModel):
    digest_a: str = Field(..., min_length=64, max_length=64)
    digest_b: str = Field(..., min_length=64, max_length=64)
    checks: List[str] = Field(..., min_length=1, max_length=8)
    expect: Optional[List[Literal["pass", "fail"]]] = None
    prime_count: int = Field(default=5, ge=1, le=32)
    seed: int = 0

    @model_validator(mode="after")
    def check_expect(self) -> "CertifyRequest":
        if self.expect is not None and len(self.expect) != len(self.checks):
            raise ValueError("expect needs one entry per check")
        return self
