"""Pydantic request and response models for the HTTP service."""

from typing import Literal

from pydantic import BaseModel, Field, model_validator


class StatePayload(BaseModel):
    """A two-qubit state, given exactly one way.

    c: Bloch coefficients of a Bell-diagonal state.
    p: Bell-basis probabilities of a Bell-diagonal state.
    matrix: full 4x4 density matrix, row-major entries as [re, im] pairs.
    """

    c: tuple[float, float, float] | None = None
    p: tuple[float, float, float, float] | None = None
    matrix: list[list[tuple[float, float]]] | None = None

    @model_validator(mode="after")
    def _exactly_one(self):
        given = [x is not None for x in (self.c, self.p, self.matrix)]
        if sum(given) != 1:
            raise ValueError("provide exactly one of c, p or matrix")
        if self.matrix is not None:
            if len(self.matrix) != 4 or any(len(row) != 4 for row in self.matrix):
                raise ValueError("matrix must be 4 rows of 4 [re, im] pairs")
        return self


class OptimizerOptions(BaseModel):
    grid_theta: int = Field(64, ge=16)
    grid_phi: int = Field(128, ge=32)
    refine_iterations: int = Field(200, ge=1)
    tolerance: float = Field(1e-8, gt=0)


class RegionInfo(BaseModel):
    entanglement_region: str
    discord_branch: str
    on_branch_boundary: list[str]


class ReportModel(BaseModel):
    concurrence: float
    eof: float
    discord: float
    mutual_information: float
    classical_correlation: float
    source: str
    branch: str | None = None
    discord_branch_values: tuple[float, float, float] | None = None
    region: RegionInfo | None = None


class ComputeRequest(BaseModel):
    state: StatePayload
    numeric: bool = False
    nu: float = Field(0.0, ge=0.0, le=1.0)
    tol: float = Field(1e-9, ge=0.0)
    optimizer: OptimizerOptions | None = None


class ClassifyRequest(BaseModel):
    state: StatePayload
    tol: float = Field(1e-9, ge=0.0)


class ClassifyResponse(BaseModel):
    c: tuple[float, float, float]
    region: RegionInfo
    octahedron_distance: float
    plane_distances: dict[str, float]
    zero_discord_axis: bool


class LineSpec(BaseModel):
    start: tuple[float, float, float]
    end: tuple[float, float, float]


class PolySpec(BaseModel):
    c1: str
    c2: str
    c3: str
    u_min: float
    u_max: float


class SweepRequest(BaseModel):
    line: LineSpec | None = None
    poly: PolySpec | None = None
    samples: int = Field(64, ge=2, le=100000)
    nu: float = Field(0.0, ge=0.0, le=1.0)
    freeze_tol: float = Field(1e-9, gt=0.0)
    tol: float = Field(1e-9, ge=0.0)

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.line is None) == (self.poly is None):
            raise ValueError("provide exactly one of line or poly")
        return self


class SweepPoint(BaseModel):
    param: float
    c1: float
    c2: float
    c3: float
    concurrence: float
    eof: float
    discord: float
    d1: float
    d2: float
    d3: float
    branch: str
    region: str


class EventModel(BaseModel):
    kind: str
    location: float
    detail: str


class SweepResponse(BaseModel):
    points: list[SweepPoint]
    events: list[EventModel]


class TomographyRequest(BaseModel):
    state: StatePayload
    counts: int = Field(100000, ge=1)
    projector_set: Literal["16", "36"] = "16"
    seeds: int = Field(1, ge=1, le=10000)
    seed: int = 0
    nu: float = Field(0.0, ge=0.0, le=1.0)
    include_report: bool = True


class TomographyRunModel(BaseModel):
    seed: int
    fidelity: float
    report: ReportModel | None = None


class TomographyResponse(BaseModel):
    runs: list[TomographyRunModel]
    mean_fidelity: float
    min_fidelity: float


class RegionsRequest(BaseModel):
    grid: int = Field(21, ge=2, le=201)


class RegionPoint(BaseModel):
    c1: float
    c2: float
    c3: float
    in_tetrahedron: bool
    region: str | None = None
    branch: str | None = None
    concurrence: float | None = None
    eof: float | None = None
    discord: float | None = None


class RegionsResponse(BaseModel):
    points: list[RegionPoint]


class HealthResponse(BaseModel):
    status: str
    service: str
    version: str
