"""Experiment description: array geometry, angle sets, mask, similarity, solver knobs.

A scenario file is flat TOML.  Recognized keys:

    m, n, spacing_ratio, grid_step_deg,
    theta_d = [lo, hi], theta_u = [[lo, hi], ...], theta0,
    stopbands = [[u1, u2], ...], gamma (number or "auto"),
    delta, eta, p (integer or "inf"),
    e1, e2, max_iters, solver_feas_tol, termination_mode,
    reference = "chirp" | "notched-chirp" | "random:<seed>" | <csv path>

Absent keys fall back to the default experiment (an 8-element half-wavelength
array transmitting length-64 codes, mainlobe [-55, -35] degrees on a 5 degree
grid, three stopbands, gamma = 0.01 sqrt(N)).
"""

from __future__ import annotations

import math
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, replace

import numpy as np

from . import refwave, spectral

_DEG_EPS = 1e-9

DEFAULTS = {
    "m": 8,
    "n": 64,
    "spacing_ratio": 0.5,
    "grid_step_deg": 5.0,
    "theta_d": [-55.0, -35.0],
    "theta_u": [[-90.0, -60.0], [-30.0, 90.0]],
    "theta0": None,  # center of theta_d when omitted
    "stopbands": [[0.3, 0.35], [0.4, 0.45], [0.7, 0.8]],
    "gamma": "auto",
    "delta": math.sqrt(2.0),
    "eta": 0.1,
    "p": "inf",
    "e1": 1e-5,
    "e2": 1e-4,
    "max_iters": 500,
    "solver_feas_tol": 1e-4,
    "termination_mode": "either",
    "reference": "chirp",
}


class ScenarioError(ValueError):
    """Raised for malformed documents or invariant violations."""


@dataclass(frozen=True)
class ArrayConfig:
    num_tx: int
    code_length: int
    spacing_ratio: float = 0.5


@dataclass(frozen=True)
class AngleSets:
    grid_step_deg: float
    desired_interval: tuple[float, float]
    undesired_intervals: tuple[tuple[float, float], ...]
    peak_angle: float
    desired: tuple[float, ...]
    undesired: tuple[float, ...]


@dataclass(frozen=True)
class SpectralMaskSpec:
    stopbands: tuple[tuple[float, float], ...]
    mask_level: float
    gamma_auto: bool = False
    pnorm_p: int | None = None  # None means the exact per-bin (p -> inf) form


@dataclass(frozen=True, eq=False)
class SimilaritySpec:
    kind: str
    reference: np.ndarray
    delta: float

    def __eq__(self, other):
        if not isinstance(other, SimilaritySpec):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.delta == other.delta
            and np.array_equal(self.reference, other.reference)
        )


@dataclass(frozen=True)
class SolverParams:
    eta: float = 0.1
    e1: float = 1e-5
    e2: float = 1e-4
    max_iters: int = 500
    solver_feas_tol: float = 1e-4
    termination_mode: str = "either"


@dataclass(frozen=True)
class Scenario:
    array: ArrayConfig
    angles: AngleSets
    mask: SpectralMaskSpec
    similarity: SimilaritySpec
    solver: SolverParams

    @property
    def m(self) -> int:
        return self.array.num_tx

    @property
    def n(self) -> int:
        return self.array.code_length

    def with_delta(self, delta: float) -> "Scenario":
        return replace(self, similarity=replace(self.similarity, delta=delta))


def angle_grid(step_deg: float) -> np.ndarray:
    """Uniform grid over [-90, 90] with the given step, endpoints included
    when the step divides 180."""
    count = int(math.floor(180.0 / step_deg + _DEG_EPS)) + 1
    return -90.0 + step_deg * np.arange(count)


def _grid_in_intervals(grid, intervals):
    out = []
    for g in grid:
        for lo, hi in intervals:
            if lo - _DEG_EPS <= g <= hi + _DEG_EPS:
                out.append(float(g))
                break
    return tuple(out)


def _snap_to_grid(theta, grid):
    idx = int(np.argmin(np.abs(grid - theta)))
    return float(grid[idx])


def parse_scenario(text: str) -> Scenario:
    """Parse a TOML scenario document, apply defaults, resolve the reference
    waveform, and check every invariant."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"config parse error: {exc}") from exc

    unknown = set(raw) - set(DEFAULTS)
    if unknown:
        raise ScenarioError(f"unknown config keys: {sorted(unknown)}")
    cfg = dict(DEFAULTS)
    cfg.update(raw)

    m = int(cfg["m"])
    n = int(cfg["n"])
    step = float(cfg["grid_step_deg"])
    if m < 2:
        raise ScenarioError("m: need at least 2 transmit antennas")
    if n < 1:
        raise ScenarioError("n: code length must be positive")
    if step <= 0:
        raise ScenarioError("grid_step_deg must be positive")
    if float(cfg["spacing_ratio"]) <= 0:
        raise ScenarioError("spacing_ratio must be positive")

    grid = angle_grid(step)
    d_lo, d_hi = (float(v) for v in cfg["theta_d"])
    u_intervals = tuple((float(a), float(b)) for a, b in cfg["theta_u"])
    desired = _grid_in_intervals(grid, [(d_lo, d_hi)])
    undesired = _grid_in_intervals(grid, u_intervals)
    theta0 = cfg["theta0"]
    if theta0 is None:
        theta0 = _snap_to_grid((d_lo + d_hi) / 2.0, grid)
    theta0 = float(theta0)

    stopbands = tuple((float(a), float(b)) for a, b in cfg["stopbands"])
    gamma_auto = cfg["gamma"] == "auto"
    gamma = 0.01 * math.sqrt(n) if gamma_auto else float(cfg["gamma"])
    p_raw = cfg["p"]
    pnorm_p = None if p_raw == "inf" else int(p_raw)

    array = ArrayConfig(num_tx=m, code_length=n, spacing_ratio=float(cfg["spacing_ratio"]))
    angles = AngleSets(
        grid_step_deg=step,
        desired_interval=(d_lo, d_hi),
        undesired_intervals=u_intervals,
        peak_angle=theta0,
        desired=desired,
        undesired=undesired,
    )
    mask = SpectralMaskSpec(
        stopbands=stopbands, mask_level=gamma, gamma_auto=gamma_auto, pnorm_p=pnorm_p
    )

    ref_kind = str(cfg["reference"])
    bins = spectral.stopband_bins(n, stopbands)
    s0 = refwave.generate_reference(
        refwave.ReferenceSpec.from_string(ref_kind), m, n, bins=bins.bins, gamma=gamma
    )
    similarity = SimilaritySpec(kind=ref_kind, reference=s0, delta=float(cfg["delta"]))

    solver = SolverParams(
        eta=float(cfg["eta"]),
        e1=float(cfg["e1"]),
        e2=float(cfg["e2"]),
        max_iters=int(cfg["max_iters"]),
        solver_feas_tol=float(cfg["solver_feas_tol"]),
        termination_mode=str(cfg["termination_mode"]),
    )

    scenario = Scenario(array=array, angles=angles, mask=mask, similarity=similarity, solver=solver)
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioError("; ".join(violations))
    return scenario


def validate_scenario(s: Scenario) -> list[str]:
    """Return an empty list when every invariant holds, otherwise one message
    per violated rule."""
    v = []
    if s.array.num_tx < 2:
        v.append("num_tx: M must be >= 2")
    if s.array.code_length < 1:
        v.append("code_length: N must be >= 1")
    if s.array.spacing_ratio <= 0:
        v.append("spacing_ratio must be positive")

    des, und = set(s.angles.desired), set(s.angles.undesired)
    if des & und:
        v.append("angle sets: theta_d and theta_u overlap")
    if not des:
        v.append("angle sets: no desired grid angles")
    if not und:
        v.append("angle sets: no undesired grid angles")
    for th in des | und:
        if not -90.0 - _DEG_EPS <= th <= 90.0 + _DEG_EPS:
            v.append(f"angle sets: {th} outside [-90, 90]")
    if not any(abs(s.angles.peak_angle - th) < _DEG_EPS for th in des):
        v.append("theta0 not among the desired grid angles")

    bands = sorted(s.mask.stopbands)
    for u1, u2 in bands:
        if not (0.0 <= u1 < u2 <= 1.0):
            v.append(f"stopband ({u1}, {u2}) not within 0 <= u1 < u2 <= 1")
    for (a1, a2), (b1, b2) in zip(bands, bands[1:]):
        if b1 < a2:
            v.append(f"stopbands overlap: ({a1},{a2}) and ({b1},{b2})")
    if s.mask.mask_level <= 0:
        v.append("gamma must be positive")
    if s.mask.pnorm_p is not None and s.mask.pnorm_p < 1:
        v.append("p must be a positive integer or \"inf\"")

    if not 0.0 <= s.similarity.delta <= math.sqrt(2.0) + 1e-12:
        v.append(f"delta {s.similarity.delta} exceeds sqrt(2) admissible range")
    s0 = s.similarity.reference
    if s0.shape != (s.m, s.n):
        v.append(f"reference shape {s0.shape} does not match ({s.m}, {s.n})")
    elif np.max(np.abs(np.abs(s0) - 1.0)) > 1e-8:
        v.append("reference entries not unit modulus")

    sp = s.solver
    if min(sp.eta, sp.e1, sp.e2, sp.solver_feas_tol) <= 0:
        v.append("solver parameters eta, e1, e2, solver_feas_tol must be positive")
    if sp.max_iters < 1:
        v.append("max_iters must be >= 1")
    if sp.termination_mode not in ("either", "both"):
        v.append("termination_mode must be 'either' or 'both'")
    return v


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in value) + "]"
    raise TypeError(f"cannot serialize {value!r}")


def serialize_scenario(s: Scenario) -> str:
    """Emit a TOML document that parses back to an identical Scenario."""
    pairs = [
        ("m", s.array.num_tx),
        ("n", s.array.code_length),
        ("spacing_ratio", s.array.spacing_ratio),
        ("grid_step_deg", s.angles.grid_step_deg),
        ("theta_d", list(s.angles.desired_interval)),
        ("theta_u", [list(iv) for iv in s.angles.undesired_intervals]),
        ("theta0", s.angles.peak_angle),
        ("stopbands", [list(b) for b in s.mask.stopbands]),
        ("gamma", "auto" if s.mask.gamma_auto else s.mask.mask_level),
        ("delta", s.similarity.delta),
        ("eta", s.solver.eta),
        ("p", "inf" if s.mask.pnorm_p is None else s.mask.pnorm_p),
        ("e1", s.solver.e1),
        ("e2", s.solver.e2),
        ("max_iters", s.solver.max_iters),
        ("solver_feas_tol", s.solver.solver_feas_tol),
        ("termination_mode", s.solver.termination_mode),
        ("reference", s.similarity.kind),
    ]
    return "\n".join(f"{k} = {_fmt(v)}" for k, v in pairs) + "\n"


def scenario_snapshot(s: Scenario) -> dict:
    """Plain-dict view of a scenario for manifests and metric files."""
    return {
        "m": s.array.num_tx,
        "n": s.array.code_length,
        "spacing_ratio": s.array.spacing_ratio,
        "grid_step_deg": s.angles.grid_step_deg,
        "theta_d": list(s.angles.desired_interval),
        "theta_u": [list(iv) for iv in s.angles.undesired_intervals],
        "theta0": s.angles.peak_angle,
        "desired_grid": list(s.angles.desired),
        "undesired_grid": list(s.angles.undesired),
        "stopbands": [list(b) for b in s.mask.stopbands],
        "gamma": s.mask.mask_level,
        "p": "inf" if s.mask.pnorm_p is None else s.mask.pnorm_p,
        "delta": s.similarity.delta,
        "reference": s.similarity.kind,
        "eta": s.solver.eta,
        "e1": s.solver.e1,
        "e2": s.solver.e2,
        "max_iters": s.solver.max_iters,
        "solver_feas_tol": s.solver.solver_feas_tol,
        "termination_mode": s.solver.termination_mode,
    }
