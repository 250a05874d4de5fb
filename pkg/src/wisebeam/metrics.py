"""Waveform quality metrics: correlations, similarity, modulus deviation."""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from . import spatial, spectral

DB_FLOOR = -300.0


def cross_correlation(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Aperiodic correlation r(l) = sum_n a[n] conj(b[n-l]) for lags
    -(N-1) .. N-1, returned in ascending lag order."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.size != b.size:
        raise ValueError("sequences must have equal length")
    # np.correlate(a, b, 'full')[l + N - 1] equals sum_n a[n] conj(b[n - l])
    return np.correlate(a, b, mode="full")


def correlation_level_db(s: np.ndarray):
    """Per-pair correlation levels 20 log10(|r(l)| / N) plus a summary.

    Returns (tables, summary) where tables maps each ordered antenna pair
    (m1, m2) to its level array over ascending lags, and summary holds the
    peak auto-sidelobe and peak cross-correlation levels in dB.  Levels are
    clipped at -300 dB.
    """
    s = np.atleast_2d(np.asarray(s))
    m, n = s.shape
    tables = {}
    auto_peak = DB_FLOOR
    cross_peak = DB_FLOOR
    for m1 in range(m):
        for m2 in range(m):
            r = cross_correlation(s[m1], s[m2])
            levels = 20.0 * np.log10(np.maximum(np.abs(r) / n, 10.0 ** (DB_FLOOR / 20.0)))
            tables[(m1, m2)] = levels
            if m1 == m2:
                side = np.delete(levels, n - 1)  # drop the lag-0 mainlobe
                if side.size:
                    auto_peak = max(auto_peak, float(side.max()))
            else:
                cross_peak = max(cross_peak, float(levels.max()))
    summary = {"auto_peak_db": auto_peak, "cross_peak_db": cross_peak}
    return tables, summary


def similarity_distance(s: np.ndarray, s0: np.ndarray) -> float:
    """Frobenius distance normalized by sqrt(M N); at most 2 for unimodular
    pairs."""
    s = np.atleast_2d(np.asarray(s))
    s0 = np.atleast_2d(np.asarray(s0))
    if s.shape != s0.shape:
        raise ValueError("shape mismatch between waveform and reference")
    return float(np.linalg.norm(s - s0) / np.sqrt(s.size))


def constant_modulus_deviation(s: np.ndarray) -> float:
    mags = np.abs(np.asarray(s))
    return float(mags.max() - mags.min())


@dataclass(frozen=True)
class MetricBundle:
    spatial_islr: float
    islr_db: float
    mask_excess: float
    beamwidth_ratios: tuple[float, ...]
    similarity_distance: float
    cm_deviation: float
    auto_peak_db: float
    cross_peak_db: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["beamwidth_ratios"] = list(d["beamwidth_ratios"])
        return d


def build_metric_bundle(s: np.ndarray, scenario, ams, g: np.ndarray) -> MetricBundle:
    islr = spatial.spatial_islr(s, ams)
    ratios = tuple(
        spatial.beamwidth_ratio(s, t, ams.peak_angle, ams.ratio) for t in ams.desired
    )
    _, summary = correlation_level_db(s)
    return MetricBundle(
        spatial_islr=islr,
        islr_db=float(10.0 * np.log10(max(islr, 1e-30))),
        mask_excess=spectral.mask_excess(s, g, scenario.mask.mask_level),
        beamwidth_ratios=ratios,
        similarity_distance=similarity_distance(s, scenario.similarity.reference),
        cm_deviation=constant_modulus_deviation(s),
        auto_peak_db=summary["auto_peak_db"],
        cross_peak_db=summary["cross_peak_db"],
    )
