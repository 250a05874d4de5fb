"""Array steering, beampattern evaluation, angle matrices, spatial ISLR."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def steering_vector(theta_deg: float, m: int, ratio: float = 0.5) -> np.ndarray:
    """Uniform-linear-array response at angle theta (degrees).

    Entry k is exp(j 2 pi ratio k sin(theta)) with ratio = d / lambda, so the
    first entry is always 1.
    """
    if not -90.0 <= theta_deg <= 90.0:
        raise ValueError(f"theta {theta_deg} outside [-90, 90] degrees")
    phase = 2.0 * np.pi * ratio * np.arange(m) * np.sin(np.deg2rad(theta_deg))
    return np.exp(1j * phase)


def beampattern(s: np.ndarray, theta_deg: float, ratio: float = 0.5) -> float:
    """Transmit power toward theta: (1/N) sum_n |a(theta)^H s_n|^2.

    Bounded by M^2 for unimodular S, attained when every column phase-aligns
    with the steering vector.
    """
    s = np.atleast_2d(np.asarray(s))
    m, n = s.shape
    a = steering_vector(theta_deg, m, ratio)
    proj = a.conj() @ s
    return float(np.sum(np.abs(proj) ** 2) / n)


@dataclass(frozen=True)
class AngleMatrixSet:
    """Aggregated steering outer products for one scenario.

    a_u and a_d carry the 1/N beampattern normalization.  The per-angle
    matrices used inside beam-width constraints are raw a a^H (the 1/N
    cancels in the power ratio).
    """

    a_u: np.ndarray
    a_d: np.ndarray
    per_desired: tuple[np.ndarray, ...]
    a_peak: np.ndarray
    k_d: int
    desired: tuple[float, ...]
    undesired: tuple[float, ...]
    peak_angle: float
    ratio: float


def _outer(theta, m, ratio):
    a = steering_vector(theta, m, ratio)
    return np.outer(a, a.conj())


def build_angle_matrices(scenario) -> AngleMatrixSet:
    m = scenario.array.num_tx
    n = scenario.array.code_length
    ratio = scenario.array.spacing_ratio
    des = scenario.angles.desired
    und = scenario.angles.undesired
    if not des or not und:
        raise ValueError("scenario must provide nonempty desired and undesired angle grids")
    a_u = sum(_outer(t, m, ratio) for t in und) / n
    a_d = sum(_outer(t, m, ratio) for t in des) / n
    return AngleMatrixSet(
        a_u=a_u,
        a_d=a_d,
        per_desired=tuple(_outer(t, m, ratio) for t in des),
        a_peak=_outer(scenario.angles.peak_angle, m, ratio),
        k_d=len(des),
        desired=des,
        undesired=und,
        peak_angle=scenario.angles.peak_angle,
        ratio=ratio,
    )


def spatial_islr(s: np.ndarray, ams: AngleMatrixSet, feas_tol: float = 1e-12) -> float:
    """Undesired-to-desired power ratio sum_n s_n^H A_u s_n / sum_n s_n^H A_d s_n."""
    s = np.atleast_2d(np.asarray(s))
    num = float(np.real(np.einsum("in,ij,jn->", s.conj(), ams.a_u, s)))
    den = float(np.real(np.einsum("in,ij,jn->", s.conj(), ams.a_d, s)))
    if den <= feas_tol:
        raise ValueError("degenerate denominator: no power over the desired sector")
    return num / den


def spatial_islr_lifted(xs, ams: AngleMatrixSet) -> float:
    """Same ratio evaluated on lifted matrices X_n in place of s_n s_n^H."""
    num = sum(float(np.real(np.trace(ams.a_u @ x))) for x in xs)
    den = sum(float(np.real(np.trace(ams.a_d @ x))) for x in xs)
    if den <= 0:
        raise ValueError("degenerate denominator in lifted ISLR")
    return num / den


def beamwidth_ratio(s: np.ndarray, theta_d: float, theta0: float, ratio: float = 0.5) -> float:
    """P(S, theta_d) / P(S, theta0); the 3 dB constraint asks for [0.5, 1]."""
    p0 = beampattern(s, theta0, ratio)
    if p0 <= 0:
        raise ValueError("zero power at the peak angle")
    return beampattern(s, theta_d, ratio) / p0


def beampattern_table(s: np.ndarray, thetas, ratio: float = 0.5) -> list[tuple]:
    """Rows (theta_deg, power_linear, power_db) with dB relative to the peak."""
    powers = np.array([beampattern(s, t, ratio) for t in thetas])
    peak = powers.max() if powers.max() > 0 else 1.0
    return [
        (float(t), float(p), float(10.0 * np.log10(max(p / peak, 1e-30))))
        for t, p in zip(thetas, powers)
    ]
