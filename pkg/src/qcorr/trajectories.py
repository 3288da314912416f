"""Parametrized paths through the Bell-diagonal tetrahedron.

A trajectory maps a scalar parameter u to Bloch coefficients via three
polynomials; straight segments are a special case. Sweeps evaluate the
closed-form correlation measures on a uniform parameter grid (optionally
after white noise, which keeps the family closed) and detect qualitative
events: entanglement sudden death and revival, discord branch fractures,
discord freezing intervals, and crossings of the E-D dominance. Event
locations found at sample resolution are sharpened by bisection on an
exact indicator function.
"""

import ast
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from numpy.polynomial import polynomial as npoly

from .bell_geometry import (
    BellDiagonalState,
    discord_bd,
    dominant_branch_index,
    eof_bd,
    probabilities_from_c,
)
from .channels import NoiseSpec
from .correlations import report_bell_diagonal
from .errors import BracketInvalidError, OutOfTetrahedronError


class EventKind(str, Enum):
    SUDDEN_DEATH = "sudden_death"
    REVIVAL = "revival"
    DISCORD_FRACTURE = "discord_fracture"
    FREEZE_START = "freeze_start"
    FREEZE_END = "freeze_end"
    DOMINANCE_CROSSING = "dominance_crossing"


@dataclass(frozen=True)
class TransitionEvent:
    kind: EventKind
    location: float
    detail: str
    bracket: tuple | None = None


@dataclass(frozen=True)
class Trajectory:
    """Three ascending-order coefficient tuples c_i(u), a parameter range,
    a sample count and optional pointwise white noise."""

    coefficients: tuple
    u_range: tuple
    samples: int = 64
    noise: NoiseSpec | None = None

    def __post_init__(self):
        if len(self.coefficients) != 3 or any(len(k) == 0 for k in self.coefficients):
            raise ValueError("coefficients must hold three nonempty tuples")
        object.__setattr__(
            self,
            "coefficients",
            tuple(tuple(float(x) for x in k) for k in self.coefficients),
        )
        u0, u1 = self.u_range
        if not np.isfinite([u0, u1]).all() or u0 == u1:
            raise ValueError(f"invalid parameter range {self.u_range}")
        object.__setattr__(self, "u_range", (float(u0), float(u1)))
        if self.samples < 2:
            raise ValueError("samples must be at least 2")

    @classmethod
    def line(cls, start_c, end_c, samples=64, noise=None):
        """Straight segment; parametrized by c1 itself when c1 moves, else by t in [0,1]."""
        start = np.asarray(start_c, dtype=float)
        end = np.asarray(end_c, dtype=float)
        if start[0] != end[0]:
            slope = (end - start) / (end[0] - start[0])
            intercept = start - slope * start[0]
            coeffs = tuple((intercept[i], slope[i]) for i in range(3))
            return cls(coeffs, (start[0], end[0]), samples, noise)
        coeffs = tuple((start[i], end[i] - start[i]) for i in range(3))
        return cls(coeffs, (0.0, 1.0), samples, noise)

    @classmethod
    def from_polynomials(cls, c1, c2, c3, u_range, samples=64, noise=None):
        return cls((tuple(c1), tuple(c2), tuple(c3)), tuple(u_range), samples, noise)

    @classmethod
    def from_expressions(cls, c1, c2, c3, u_range, samples=64, noise=None):
        """Build from expression strings in u, e.g. ("u", "u-1.7", "0.7")."""
        return cls.from_polynomials(
            polynomial_from_expression(c1),
            polynomial_from_expression(c2),
            polynomial_from_expression(c3),
            u_range,
            samples,
            noise,
        )

    def point(self, u):
        """Bloch coefficients at parameter u, noise included."""
        c = np.array([npoly.polyval(u, k) for k in self.coefficients])
        if self.noise is not None:
            c = (1.0 - self.noise.nu) * c
        return c

    def params(self):
        return np.linspace(self.u_range[0], self.u_range[1], self.samples)


@dataclass(frozen=True)
class SweepResult:
    params: tuple
    states: tuple
    reports: tuple
    events: tuple


@dataclass(frozen=True)
class ExcessStatistics:
    """Largest E - D gap over a sweep, absolute and relative to D."""

    max_excess: float
    max_relative_excess: float
    location: float


def polynomial_from_expression(expr):
    """Ascending polynomial coefficients from an expression in u.

    The language covers the scalar u, numeric literals, +, -, * and
    parentheses; anything else is rejected.
    """
    try:
        node = ast.parse(expr.strip(), mode="eval").body
    except SyntaxError as exc:
        raise ValueError(f"cannot parse trajectory expression {expr!r}: {exc}") from exc
    return tuple(float(x) for x in _poly_from_node(node, expr))


def _poly_from_node(node, expr):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return np.array([node.value], dtype=float)
    if isinstance(node, ast.Name) and node.id == "u":
        return np.array([0.0, 1.0])
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _poly_from_node(node.operand, expr)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult)):
        left = _poly_from_node(node.left, expr)
        right = _poly_from_node(node.right, expr)
        if isinstance(node.op, ast.Add):
            return npoly.polyadd(left, right)
        if isinstance(node.op, ast.Sub):
            return npoly.polysub(left, right)
        return npoly.polymul(left, right)
    raise ValueError(
        f"unsupported syntax in trajectory expression {expr!r}; "
        "only u, numbers, +, -, * and parentheses are allowed"
    )


def _state_at(traj, u):
    c = traj.point(u)
    try:
        return BellDiagonalState.from_c(c, project_tol=1e-9)
    except OutOfTetrahedronError as exc:
        raise OutOfTetrahedronError(
            f"trajectory leaves the state tetrahedron at parameter {u:.12g}: {exc}"
        ) from exc


def sweep(traj, freeze_tol=1e-9, region_tol=1e-9):
    """Evaluate a trajectory on its uniform parameter grid and find events.

    Returns a SweepResult whose events have been refined by bisection.
    Raises OutOfTetrahedronError (naming the parameter value) if any sample
    misses the tetrahedron by more than 1e-9.
    """
    states = []
    reports = []
    us = traj.params()
    for u in us:
        state = _state_at(traj, u)
        states.append(state)
        reports.append(report_bell_diagonal(state, region_tol=region_tol))
    result = SweepResult(
        params=tuple(float(u) for u in us),
        states=tuple(states),
        reports=tuple(reports),
        events=(),
    )
    if traj.samples < 8:
        return result
    refined = []
    for event in detect_events(result, freeze_tol=freeze_tol):
        if event.bracket is not None:
            location = refine_event(traj, event.bracket, event.kind, freeze_tol=freeze_tol)
            event = replace(event, location=location)
        refined.append(event)
    refined.sort(key=lambda e: (e.location, e.kind.value))
    return replace(result, events=tuple(refined))


def _zero_run_length(values, start, step):
    n = 0
    i = start
    while 0 <= i < len(values) and values[i] == 0.0:
        n += 1
        i += step
    return n


def detect_events(result, freeze_tol=1e-9):
    """Sample-resolution events of a sweep (locations not yet refined).

    Death and revival require entanglement to stay exactly zero on at least
    two consecutive samples on the dead side, which separates genuine
    octahedron crossings from tangential contact. Freezing marks maximal
    runs of at least three samples whose discord spread stays within
    freeze_tol.
    """
    n = len(result.params)
    if n < 8:
        raise ValueError("event detection needs at least 8 samples")
    us = result.params
    eof = [r.eof for r in result.reports]
    discord = [r.discord for r in result.reports]
    branch = [r.branch for r in result.reports]

    events = []
    for i in range(n - 1):
        if eof[i] > 0.0 and eof[i + 1] == 0.0 and _zero_run_length(eof, i + 1, +1) >= 2:
            events.append(
                TransitionEvent(
                    EventKind.SUDDEN_DEATH,
                    location=us[i + 1],
                    detail="entanglement reaches zero",
                    bracket=(us[i], us[i + 1]),
                )
            )
        elif eof[i] == 0.0 and eof[i + 1] > 0.0 and _zero_run_length(eof, i, -1) >= 2:
            events.append(
                TransitionEvent(
                    EventKind.REVIVAL,
                    location=us[i],
                    detail="entanglement becomes positive",
                    bracket=(us[i], us[i + 1]),
                )
            )
        if branch[i] != branch[i + 1]:
            events.append(
                TransitionEvent(
                    EventKind.DISCORD_FRACTURE,
                    location=(us[i] + us[i + 1]) / 2.0,
                    detail=f"branch {branch[i].value} -> {branch[i + 1].value}",
                    bracket=(us[i], us[i + 1]),
                )
            )
        gap_i = eof[i] - discord[i]
        gap_j = eof[i + 1] - discord[i + 1]
        if gap_i * gap_j < 0.0:
            before = "E>D" if gap_i > 0 else "E<D"
            after = "E>D" if gap_j > 0 else "E<D"
            events.append(
                TransitionEvent(
                    EventKind.DOMINANCE_CROSSING,
                    location=(us[i] + us[i + 1]) / 2.0,
                    detail=f"{before} -> {after}",
                    bracket=(us[i], us[i + 1]),
                )
            )

    for a, b in _freeze_runs(discord, freeze_tol):
        if b - a + 1 < 3:
            continue
        plateau = float(np.mean(discord[a : b + 1]))
        detail = f"discord plateau {plateau:.9g}"
        events.append(
            TransitionEvent(
                EventKind.FREEZE_START,
                location=us[a],
                detail=detail,
                bracket=(us[a - 1], us[a]) if a > 0 else None,
            )
        )
        events.append(
            TransitionEvent(
                EventKind.FREEZE_END,
                location=us[b],
                detail=detail,
                bracket=(us[b], us[b + 1]) if b < n - 1 else None,
            )
        )
    events.sort(key=lambda e: (e.location, e.kind.value))
    return events


def _freeze_runs(values, tol):
    runs = []
    start = 0
    lo = hi = values[0]
    for i in range(1, len(values)):
        nlo, nhi = min(lo, values[i]), max(hi, values[i])
        if nhi - nlo <= tol:
            lo, hi = nlo, nhi
        else:
            runs.append((start, i - 1))
            start, lo, hi = i, values[i], values[i]
    runs.append((start, len(values) - 1))
    return runs


def _discord_at(traj, u):
    return discord_bd(_state_at(traj, u)).value


def refine_event(traj, bracket, kind, freeze_tol=1e-9, tol=1e-12):
    """Bisection refinement of an event location inside a bracket.

    The indicator depends on the event kind: the octahedron margin
    2 max_i p_i - 1 for death and revival, |c_i| - |c_j| of the two
    branches involved for fractures, E - D for dominance crossings, and
    the freeze_tol band edge around the plateau for freeze endpoints.
    Raises BracketInvalidError when the indicator does not change sign.
    """
    if kind in (EventKind.SUDDEN_DEATH, EventKind.REVIVAL):

        def indicator(u):
            return 2.0 * float(probabilities_from_c(traj.point(u)).max()) - 1.0

    elif kind == EventKind.DISCORD_FRACTURE:
        # same tie-breaking as discord_bd, so the bracket-end branches agree
        # with the report branches the detector saw
        i = dominant_branch_index(traj.point(bracket[0]))
        j = dominant_branch_index(traj.point(bracket[1]))
        if i == j:
            raise BracketInvalidError(
                f"no branch change across bracket {bracket}: both ends on D{i + 1}"
            )

        def indicator(u):
            c = traj.point(u)
            return abs(c[i]) - abs(c[j])

    elif kind == EventKind.DOMINANCE_CROSSING:

        def indicator(u):
            state = _state_at(traj, u)
            return eof_bd(state) - discord_bd(state).value

    elif kind in (EventKind.FREEZE_START, EventKind.FREEZE_END):
        inside = bracket[1] if kind == EventKind.FREEZE_START else bracket[0]
        plateau = _discord_at(traj, inside)

        def indicator(u):
            return abs(_discord_at(traj, u) - plateau) - freeze_tol

    else:
        raise ValueError(f"unknown event kind {kind!r}")

    return _bisect(indicator, bracket, tol)


def _bisect(indicator, bracket, tol):
    lo, hi = sorted(float(x) for x in bracket)
    flo = indicator(lo)
    fhi = indicator(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0.0) == (fhi < 0.0):
        raise BracketInvalidError(
            f"indicator does not change sign over {bracket}: f(lo)={flo:.3e}, f(hi)={fhi:.3e}"
        )
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if mid <= lo or mid >= hi:
            break
        fm = indicator(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2.0


def excess_statistics(result):
    """Largest E - D over the sweep, absolute and relative where D > 1e-9.

    The reported location is that of the maximal relative excess (first
    occurrence); when D never exceeds 1e-9 the relative excess is zero and
    the location falls back to the absolute maximum.
    """
    if not result.params:
        raise ValueError("excess_statistics needs a non-empty sweep")
    gaps = np.array([r.eof - r.discord for r in result.reports])
    discords = np.array([r.discord for r in result.reports])
    params = np.array(result.params)
    max_excess = float(gaps.max())
    valid = discords > 1e-9
    if valid.any():
        rel = np.where(valid, gaps / np.where(valid, discords, 1.0), -np.inf)
        idx = int(rel.argmax())
        return ExcessStatistics(max_excess, float(rel[idx]), float(params[idx]))
    return ExcessStatistics(max_excess, 0.0, float(params[int(gaps.argmax())]))
