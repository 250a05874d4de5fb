"""DFT machinery: stopband bin sets, selector matrices, spectra, mask checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StopbandBins:
    """Sorted stopband DFT bin indices for a length-N code."""

    bins: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "bins", tuple(sorted(self.bins)))
        object.__setattr__(self, "k", len(self.bins))


def _round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def stopband_bins(n: int, stopbands) -> StopbandBins:
    """Map normalized-frequency stopbands (u1, u2) to the inclusive integer
    bin range [round(n*u1), round(n*u2)].

    Rounding is half-away-from-zero so results do not depend on platform
    banker's rounding.  A bin landing on n (frequency 1.0) aliases to 0.
    """
    bins: set[int] = set()
    for u1, u2 in stopbands:
        lo = _round_half_away(n * u1)
        hi = _round_half_away(n * u2)
        for k in range(lo, hi + 1):
            bins.add(k % n)
    return StopbandBins(bins=tuple(sorted(bins)), k=len(bins))


def build_selector(n: int, bins: StopbandBins) -> np.ndarray:
    """K x N matrix whose row for bin k is [1, exp(-2j pi k/n), ...]; these are
    the DFT-matrix rows for the stopband frequencies."""
    idx = np.asarray(bins.bins, dtype=float)
    return np.exp(-2j * np.pi * np.outer(idx, np.arange(n)) / n)


def spectrum_magnitudes(seq: np.ndarray) -> np.ndarray:
    """|F s| over all N DFT bins."""
    return np.abs(np.fft.fft(np.asarray(seq)))


def mask_excess(s: np.ndarray, g: np.ndarray, gamma: float) -> float:
    """Worst-case stopband violation: max over antennas and stopband bins of
    (|<g_k, row_m>| - gamma) clipped at zero.  Zero iff the mask holds."""
    s = np.atleast_2d(np.asarray(s))
    if g.shape[0] == 0:
        return 0.0
    mags = np.abs(g @ s.T)  # K x M
    return float(np.maximum(mags - gamma, 0.0).max())


def spectrum_table(s: np.ndarray, bins: StopbandBins, gamma: float) -> list[tuple]:
    """Rows (antenna, bin, normalized_frequency, magnitude, magnitude_db,
    in_stopband, gamma) covering every antenna and every DFT bin."""
    s = np.atleast_2d(np.asarray(s))
    m, n = s.shape
    inset = set(bins.bins)
    rows = []
    for ant in range(m):
        mags = spectrum_magnitudes(s[ant])
        peak = mags.max() if mags.max() > 0 else 1.0
        for k in range(n):
            db = 20.0 * np.log10(max(mags[k] / peak, 1e-15))
            rows.append((ant, k, k / n, float(mags[k]), float(db), int(k in inset), gamma))
    return rows
