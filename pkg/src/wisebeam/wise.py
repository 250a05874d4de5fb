"""Iterative rank-one restoration driver.

Each outer iteration solves the lifted conic program, then eigendecomposes
every bordered slice Q_n: the next eigenbasis V_n collects the eigenvectors
of the M smallest eigenvalues, and the next slack bound b_n is the second
largest eigenvalue of Q_n.  Interlacing guarantees the slacks never
increase, and when they reach zero every Q_n is rank one, i.e. X_n equals
s_n s_n^H with unimodular s_n.

Two practical safeguards on top of the plain loop (both recorded in the run
history):

- Slices whose slack has already hit the rank-one floor are released from
  the monotone cap (see sdp.RANK_LOCK_TOL).  Without the release the first
  iteration freezes most column phases at whatever the relaxed solve
  happened to return, and the remaining columns cannot satisfy the spectral
  mask alone.
- When the slack sum decreases by less than 2 percent across an iteration
  while the Frobenius gap is still above e2, the slack weight eta is
  doubled.  The penalized problem only matches the constrained one for a
  sufficiently large weight, and how large depends on how tight the
  similarity ball is.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import lifting, sdp, spatial, spectral
from .metrics import MetricBundle, build_metric_bundle

STALL_FACTOR = 0.98
ETA_GROWTH = 2.0
ETA_CAP = 1e9


class InfeasibleScenario(RuntimeError):
    """Raised when the conic solver proves the scenario infeasible."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or {}


@dataclass(frozen=True)
class IterationRecord:
    index: int
    xi: float
    gap: float
    sum_b: float
    objective: float  # lifted sidelobe objective, sum tr(A_u X_n)
    residual: float  # worst independently re-evaluated constraint excess
    seconds: float


@dataclass
class RunResult:
    waveform: np.ndarray
    converged: bool
    reason: str  # xi | gap | both | max_iters | infeasible
    history: list
    metrics: MetricBundle | None
    projection_delta: float
    b_history: list = field(default_factory=list)
    eta_history: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)


@dataclass
class WiseState:
    scenario: object
    ams: spatial.AngleMatrixSet
    g: np.ndarray
    s: np.ndarray
    xs: list
    slices: list
    v: list
    b: np.ndarray
    eta_current: float
    history: list = field(default_factory=list)
    b_history: list = field(default_factory=list)
    eta_history: list = field(default_factory=list)


def _build_slices(s, xs):
    return [lifting.lift(s[:, j], xs[j]) for j in range(s.shape[1])]


def _eigen_update(slices):
    """V_n from the M smallest eigenvectors of Q_n, b_n from its second
    largest eigenvalue."""
    vs, bs = [], []
    for sl in slices:
        w, vecs = lifting.eig_hermitian(sl.q)
        vs.append(vecs[:, :-1])
        bs.append(max(float(w[-2]), 0.0))
    return vs, np.asarray(bs)


def _record(state, index, sol, diag, seconds):
    residual = sdp.verify_solution(state.scenario, state.ams, state.g, sol)["max"]
    lifted = sum(float(np.real(np.trace(state.ams.a_u @ x))) for x in sol.xs)
    state.history.append(
        IterationRecord(
            index=index,
            xi=diag.xi,
            gap=diag.gap,
            sum_b=float(state.b.sum()),
            objective=lifted,
            residual=residual,
            seconds=seconds,
        )
    )
    state.b_history.append(state.b.copy())
    state.eta_history.append(state.eta_current)


def initialize(scenario) -> WiseState:
    """Relaxed solve (no eigenbasis constraints) followed by the first
    eigen-update."""
    ams = spatial.build_angle_matrices(scenario)
    bins = spectral.stopband_bins(scenario.n, scenario.mask.stopbands)
    g = spectral.build_selector(scenario.n, bins)
    prob = sdp.assemble_iteration(scenario, ams, g)
    sol = sdp.solve(prob)
    if sol.status == "infeasible":
        raise InfeasibleScenario("relaxed problem infeasible")
    if sol.status == "numerical_failure":
        raise InfeasibleScenario("solver failed on the relaxed problem")
    slices = _build_slices(sol.s, sol.xs)
    vs, bs = _eigen_update(slices)
    state = WiseState(
        scenario=scenario,
        ams=ams,
        g=g,
        s=sol.s,
        xs=sol.xs,
        slices=slices,
        v=vs,
        b=bs,
        eta_current=scenario.solver.eta,
    )
    _record(state, 0, sol, lifting.rank_diagnostics(slices), sol.solve_time)
    return state


def iterate(state: WiseState) -> WiseState:
    """One constrained solve plus eigen-update; mutates and returns state."""
    t0 = time.perf_counter()
    prob = sdp.assemble_iteration(
        state.scenario, state.ams, state.g, v_prev=state.v, b_prev=state.b,
        eta=state.eta_current,
    )
    sol = sdp.solve(prob)
    if sol.status == "infeasible":
        raise InfeasibleScenario("iteration subproblem infeasible")
    if sol.status == "numerical_failure":
        raise InfeasibleScenario("solver failed mid-run")
    prev_sum = float(state.b.sum())
    state.s = sol.s
    state.xs = sol.xs
    state.slices = _build_slices(sol.s, sol.xs)
    state.v, state.b = _eigen_update(state.slices)
    diag = lifting.rank_diagnostics(state.slices)
    if float(state.b.sum()) > STALL_FACTOR * prev_sum and diag.gap >= state.scenario.solver.e2:
        state.eta_current = min(state.eta_current * ETA_GROWTH, ETA_CAP)
    _record(state, len(state.history), sol, diag, time.perf_counter() - t0)
    return state


def _terminated(scenario, diag) -> str | None:
    xi_ok = diag.xi < scenario.solver.e1
    gap_ok = diag.gap < scenario.solver.e2
    if scenario.solver.termination_mode == "both":
        if xi_ok and gap_ok:
            return "both"
        return None
    if xi_ok and gap_ok:
        return "both"
    if xi_ok:
        return "xi"
    if gap_ok:
        return "gap"
    return None


def _finalize(state, converged, reason) -> RunResult:
    s = state.s
    mags = np.abs(s)
    proj = np.where(mags > 1e-12, s / np.where(mags > 1e-12, mags, 1.0), 1.0)
    delta = float(np.linalg.norm(s - proj))
    metrics = build_metric_bundle(proj, state.scenario, state.ams, state.g)
    return RunResult(
        waveform=proj,
        converged=converged,
        reason=reason,
        history=list(state.history),
        metrics=metrics,
        projection_delta=delta,
        b_history=list(state.b_history),
        eta_history=list(state.eta_history),
        extras={"pre_projection_cm": float(mags.max() - mags.min())},
    )


def run(scenario) -> RunResult:
    """Full driver: initialize, iterate to termination, project, measure."""
    try:
        state = initialize(scenario)
    except InfeasibleScenario:
        raise
    reason = _terminated(scenario, lifting.rank_diagnostics(state.slices))
    iters = 0
    while reason is None and iters < scenario.solver.max_iters:
        try:
            iterate(state)
        except InfeasibleScenario:
            # keep the best prior iterate rather than losing the run
            return _finalize(state, False, "infeasible")
        iters += 1
        reason = _terminated(scenario, lifting.rank_diagnostics(state.slices))
    if reason is None:
        return _finalize(state, False, "max_iters")
    return _finalize(state, True, reason)


def write_history_csv(result: RunResult, path) -> None:
    with open(path, "w") as fh:
        fh.write("iter,xi,gap,sum_b,objective,residual,seconds\n")
        for rec in result.history:
            fh.write(
                f"{rec.index},{rec.xi!r},{rec.gap!r},{rec.sum_b!r},"
                f"{rec.objective!r},{rec.residual!r},{rec.seconds!r}\n"
            )
