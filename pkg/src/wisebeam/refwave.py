"""Reference waveform generators for the similarity constraint.

The similarity ball needs a unimodular M x N reference set S0 with low
cross-correlation between rows.  Three generated kinds are provided plus a
CSV loader for externally produced references:

- "chirp": cyclically staggered quadratic phases, row m sample n gets phase
  pi (n + m N / M)^2 / N.
- "notched-chirp": the chirp set with its stopband DFT bins suppressed by
  alternating projection, so tight similarity balls stay compatible with the
  spectral mask.
- "random:<seed>": independent uniform phases from a seeded generator.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class ReferenceSpec:
    kind: str  # chirp_family | notched_chirp | random_unimodular | file
    seed: int = 0
    path: str = ""

    @staticmethod
    def from_string(text: str) -> "ReferenceSpec":
        if text == "chirp":
            return ReferenceSpec(kind="chirp_family")
        if text == "notched-chirp":
            return ReferenceSpec(kind="notched_chirp")
        if text == "random":
            return ReferenceSpec(kind="random_unimodular", seed=0)
        if text.startswith("random:"):
            return ReferenceSpec(kind="random_unimodular", seed=int(text.split(":", 1)[1]))
        return ReferenceSpec(kind="file", path=text)


def chirp_family(m: int, n: int) -> np.ndarray:
    rows = np.arange(m)[:, None]
    samples = np.arange(n)[None, :]
    return np.exp(1j * np.pi * (samples + rows * n / m) ** 2 / n)


def random_unimodular(m: int, n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.exp(2j * np.pi * rng.random((m, n)))


def notch_rows(s0: np.ndarray, bins, gamma: float, max_iters: int = 500) -> np.ndarray:
    """Suppress the given DFT bins of every row by alternating projection
    between the clipped-spectrum set and the unimodular set.

    Each pass clips offending bins to gamma / 2 and re-projects the row onto
    unit modulus; iteration stops once all stopband magnitudes sit below
    0.8 gamma.  The output stays exactly unimodular.
    """
    bins = np.asarray(list(bins), dtype=int)
    out = np.array(s0, dtype=complex)
    if bins.size == 0:
        return out
    for r in range(out.shape[0]):
        row = out[r]
        for _ in range(max_iters):
            spec = np.fft.fft(row)
            mags = np.abs(spec[bins])
            if mags.max() <= 0.8 * gamma:
                break
            scale = np.minimum(1.0, (gamma / 2.0) / np.maximum(mags, 1e-300))
            spec[bins] *= scale
            row = np.fft.ifft(spec)
            row = row / np.abs(row)
        out[r] = row
    return out


def load_reference(path: str, m: int, n: int) -> np.ndarray:
    """Load an S0 CSV: a '#' header line, then M rows of 2N values
    alternating real, imaginary."""
    rows = []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rows.append([float(v) for v in line.split(",")])
    data = np.asarray(rows)
    if data.shape != (m, 2 * n):
        raise ValueError(f"reference file shape {data.shape}, expected ({m}, {2 * n})")
    s0 = data[:, 0::2] + 1j * data[:, 1::2]
    if np.max(np.abs(np.abs(s0) - 1.0)) > 1e-6:
        raise ValueError("reference file entries are not unit modulus")
    return s0


def save_reference(s0: np.ndarray, path: str) -> None:
    s0 = np.atleast_2d(np.asarray(s0))
    m, n = s0.shape
    with open(path, "w", newline="") as fh:
        fh.write(f"# reference waveform: {m} rows, {2 * n} columns alternating real,imag\n")
        writer = csv.writer(fh)
        for row in s0:
            flat = np.empty(2 * n)
            flat[0::2] = row.real
            flat[1::2] = row.imag
            writer.writerow([repr(float(v)) for v in flat])


def generate_reference(
    spec: ReferenceSpec, m: int, n: int, bins=(), gamma: float = 0.0
) -> np.ndarray:
    if spec.kind == "chirp_family":
        return chirp_family(m, n)
    if spec.kind == "notched_chirp":
        if gamma <= 0:
            raise ValueError("notched-chirp reference needs a positive gamma")
        return notch_rows(chirp_family(m, n), bins, gamma)
    if spec.kind == "random_unimodular":
        return random_unimodular(m, n, spec.seed)
    if spec.kind == "file":
        if not Path(spec.path).is_file():
            raise FileNotFoundError(f"reference file not found: {spec.path}")
        return load_reference(spec.path, m, n)
    raise ValueError(f"unknown reference kind {spec.kind!r}")
