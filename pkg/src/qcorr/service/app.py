"""FastAPI application exposing the correlation toolkit.

Domain validation failures (bad states, trajectories leaving the
tetrahedron, malformed probability vectors) map to HTTP 422 so that
clients can distinguish usage errors from internal numeric failures (500).
"""

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, bell_geometry, channels, correlations, qmat, tomography, trajectories
from ..bell_geometry import BellDiagonalState
from ..errors import (
    BracketInvalidError,
    EntropyDomainError,
    InvalidProbabilitiesError,
    InvalidStateError,
    OutOfTetrahedronError,
)
from . import schemas

_VALIDATION_ERRORS = (
    InvalidStateError,
    InvalidProbabilitiesError,
    OutOfTetrahedronError,
    EntropyDomainError,
    BracketInvalidError,
    ValueError,
)


def _state_from_payload(payload, nu=0.0):
    """Resolve a StatePayload into (bell_state | None, rho).

    Bloch or probability input yields a validated BellDiagonalState plus
    its density matrix; matrix input is checked against the density-matrix
    invariants. White noise nu is applied before anything else.
    """
    if payload.c is not None:
        state = BellDiagonalState(*payload.c)
        if nu > 0.0:
            state = channels.apply_white_noise_bd(state, channels.NoiseSpec(nu))
        return state, bell_geometry.to_density_matrix(state)
    if payload.p is not None:
        state = bell_geometry.from_probabilities(payload.p)
        if nu > 0.0:
            state = channels.apply_white_noise_bd(state, channels.NoiseSpec(nu))
        return state, bell_geometry.to_density_matrix(state)
    rho = np.array(
        [[complex(re, im) for re, im in row] for row in payload.matrix], dtype=complex
    )
    rho = qmat.check_density_matrix(rho)
    if nu > 0.0:
        rho = channels.apply_white_noise(rho, channels.NoiseSpec(nu))
    return None, rho


def _region_info(region):
    return schemas.RegionInfo(
        entanglement_region=region.entanglement_region.value,
        discord_branch=region.discord_branch.value,
        on_branch_boundary=sorted(region.on_branch_boundary),
    )


def _report_model(report):
    return schemas.ReportModel(
        concurrence=report.concurrence,
        eof=report.eof,
        discord=report.discord,
        mutual_information=report.mutual_information,
        classical_correlation=report.classical_correlation,
        source=report.source.value,
        branch=report.branch.value if report.branch is not None else None,
        discord_branch_values=report.discord_branch_values,
        region=_region_info(report.region) if report.region is not None else None,
    )


def _optimizer_config(options):
    if options is None:
        return None
    return correlations.OptimizerConfig(
        grid_theta=options.grid_theta,
        grid_phi=options.grid_phi,
        refine_iterations=options.refine_iterations,
        tolerance=options.tolerance,
    )


def _trajectory_from_request(req):
    noise = channels.NoiseSpec(req.nu) if req.nu > 0.0 else None
    if req.line is not None:
        return trajectories.Trajectory.line(
            req.line.start, req.line.end, samples=req.samples, noise=noise
        )
    return trajectories.Trajectory.from_expressions(
        req.poly.c1,
        req.poly.c2,
        req.poly.c3,
        (req.poly.u_min, req.poly.u_max),
        samples=req.samples,
        noise=noise,
    )


def create_app():
    app = FastAPI(
        title="qcorr",
        description="Two-qubit quantum correlation analysis service",
        version=__version__,
    )

    async def _domain_validation(request: Request, exc: Exception):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    for exc_type in _VALIDATION_ERRORS:
        app.add_exception_handler(exc_type, _domain_validation)

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", service="qcorr", version=__version__)

    @app.post("/compute", response_model=schemas.ReportModel)
    def compute(req: schemas.ComputeRequest):
        state, rho = _state_from_payload(req.state, req.nu)
        cfg = _optimizer_config(req.optimizer)
        if state is not None and not req.numeric:
            report = correlations.report_bell_diagonal(state, region_tol=req.tol)
        else:
            report = correlations.full_report(
                rho, config=cfg, region_tol=req.tol, force_numeric=req.numeric
            )
        return _report_model(report)

    @app.post("/classify", response_model=schemas.ClassifyResponse)
    def classify(req: schemas.ClassifyRequest):
        state, rho = _state_from_payload(req.state)
        if state is None:
            tol = max(req.tol, 1e-9)
            c = correlations.bell_diagonal_coefficients(rho, tol=tol)
            if c is None:
                raise InvalidStateError(
                    "matrix is not Bell-diagonal within tolerance; "
                    "region classification is defined on the Bell-diagonal family"
                )
            state = BellDiagonalState.from_c(c, project_tol=tol)
        region = bell_geometry.classify_region(state, tol=req.tol)
        return schemas.ClassifyResponse(
            c=tuple(state.c),
            region=_region_info(region),
            octahedron_distance=bell_geometry.octahedron_signed_distance(state),
            plane_distances=bell_geometry.branch_plane_distances(state),
            zero_discord_axis=bell_geometry.is_axis_state(state),
        )

    @app.post("/sweep", response_model=schemas.SweepResponse)
    def sweep(req: schemas.SweepRequest):
        traj = _trajectory_from_request(req)
        result = trajectories.sweep(traj, freeze_tol=req.freeze_tol, region_tol=req.tol)
        points = []
        for u, state, report in zip(result.params, result.states, result.reports):
            d1, d2, d3 = report.discord_branch_values
            points.append(
                schemas.SweepPoint(
                    param=u,
                    c1=state.c1,
                    c2=state.c2,
                    c3=state.c3,
                    concurrence=report.concurrence,
                    eof=report.eof,
                    discord=report.discord,
                    d1=d1,
                    d2=d2,
                    d3=d3,
                    branch=report.branch.value,
                    region=report.region.entanglement_region.value,
                )
            )
        events = [
            schemas.EventModel(kind=e.kind.value, location=e.location, detail=e.detail)
            for e in result.events
        ]
        return schemas.SweepResponse(points=points, events=events)

    @app.post("/tomography", response_model=schemas.TomographyResponse)
    def tomo(req: schemas.TomographyRequest):
        _, truth = _state_from_payload(req.state, req.nu)
        pset = tomography.projector_set(req.projector_set)
        runs = []
        for k in range(req.seeds):
            run = tomography.run_tomography(
                truth,
                pset,
                mean_per_projector=req.counts,
                seed=req.seed + k,
                include_report=req.include_report,
            )
            runs.append(
                schemas.TomographyRunModel(
                    seed=run.seed,
                    fidelity=run.fidelity,
                    report=_report_model(run.report) if run.report is not None else None,
                )
            )
        fidelities = [r.fidelity for r in runs]
        return schemas.TomographyResponse(
            runs=runs,
            mean_fidelity=float(np.mean(fidelities)),
            min_fidelity=float(np.min(fidelities)),
        )

    @app.post("/regions", response_model=schemas.RegionsResponse)
    def regions(req: schemas.RegionsRequest):
        values = np.linspace(-1.0, 1.0, req.grid)
        points = []
        for c1 in values:
            for c2 in values:
                for c3 in values:
                    p = bell_geometry.probabilities_from_c((c1, c2, c3))
                    if p.min() < -1e-12:
                        points.append(
                            schemas.RegionPoint(
                                c1=c1, c2=c2, c3=c3, in_tetrahedron=False
                            )
                        )
                        continue
                    state = BellDiagonalState(c1, c2, c3)
                    region = bell_geometry.classify_region(state)
                    points.append(
                        schemas.RegionPoint(
                            c1=c1,
                            c2=c2,
                            c3=c3,
                            in_tetrahedron=True,
                            region=region.entanglement_region.value,
                            branch=region.discord_branch.value,
                            concurrence=bell_geometry.concurrence_bd(state),
                            eof=bell_geometry.eof_bd(state),
                            discord=bell_geometry.discord_bd(state).value,
                        )
                    )
        return schemas.RegionsResponse(points=points)

    return app
