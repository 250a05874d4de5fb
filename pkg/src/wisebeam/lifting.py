"""Lifted slices, Hermitian eigen-machinery, rank diagnostics and extraction.

Each time sample n contributes a lifted pair (X_n, Q_n) where X_n stands in
for the outer product s_n s_n^H and Q_n borders it:

    Q_n = [[1,   s_n^H],
           [s_n, X_n  ]]

Because the top-left scalar is 1, the rank of Q_n is one plus the rank of the
Schur complement X_n - s_n s_n^H, so Q_n is rank one exactly when X_n equals
the outer product.  That identity is what the iterative driver exploits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class LiftedSlice:
    sbar: np.ndarray  # complex M-vector
    x: np.ndarray  # Hermitian M x M
    q: np.ndarray  # Hermitian (M+1) x (M+1)


@dataclass(frozen=True)
class RankDiagnostics:
    xi: float  # max_n second-eigenvalue over min_n leading-eigenvalue
    gap: float  # max_n Frobenius distance between X_n and the outer product


def _check_hermitian(h: np.ndarray, tol: float) -> np.ndarray:
    h = np.asarray(h)
    scale = max(1.0, float(np.linalg.norm(h)))
    if np.linalg.norm(h - h.conj().T) > tol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return (h + h.conj().T) / 2.0


def lift(sbar: np.ndarray, x: np.ndarray) -> LiftedSlice:
    sbar = np.asarray(sbar, dtype=complex).ravel()
    x = _check_hermitian(np.asarray(x, dtype=complex), HERMITIAN_TOL)
    m = sbar.size
    q = np.empty((m + 1, m + 1), dtype=complex)
    q[0, 0] = 1.0
    q[0, 1:] = sbar.conj()
    q[1:, 0] = sbar
    q[1:, 1:] = x
    return LiftedSlice(sbar=sbar, x=x, q=q)


def eig_hermitian(h: np.ndarray, tol: float = 1e-8):
    """Eigendecomposition with ascending eigenvalues after symmetrizing away
    solver round-off.  Raises for genuinely non-Hermitian input."""
    h = _check_hermitian(np.asarray(h, dtype=complex), tol)
    return np.linalg.eigh(h)


def complex_to_real_psd(h: np.ndarray) -> np.ndarray:
    """Standard real embedding [[Re, -Im], [Im, Re]].

    The embedding is PSD iff the complex matrix is, and every eigenvalue
    shows up with doubled multiplicity.
    """
    h = np.asarray(h, dtype=complex)
    return np.block([[h.real, -h.imag], [h.imag, h.real]])


def smallest_m_eigvecs(q: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal eigenvectors for the M smallest eigenvalues of the
    (M+1) x (M+1) bordered matrix, as an (M+1) x M column block."""
    _, vecs = eig_hermitian(q, tol)
    return vecs[:, : q.shape[0] - 1]


def rank_diagnostics(slices) -> RankDiagnostics:
    """Termination statistics over all lifted slices.

    xi compares the worst second eigenvalue against the smallest leading
    eigenvalue; gap is the worst Frobenius distance to rank one.  Negative
    eigenvalue dust from the solver is clipped so xi stays nonnegative.
    """
    second = []
    leading = []
    gaps = []
    for sl in slices:
        w = np.linalg.eigvalsh((sl.x + sl.x.conj().T) / 2.0)
        leading.append(w[-1])
        second.append(max(w[-2], 0.0) if w.size > 1 else 0.0)
        gaps.append(np.linalg.norm(np.outer(sl.sbar, sl.sbar.conj()) - sl.x))
    if min(leading) <= 0:
        raise ValueError("degenerate slice: nonpositive leading eigenvalue")
    return RankDiagnostics(xi=float(max(second) / min(leading)), gap=float(max(gaps)))


def extract_rank_one(x: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Principal eigenvector scaled by sqrt of the top eigenvalue, projected
    entrywise onto unit modulus.

    Zero entries map to 1, and the global phase is fixed so the first entry
    is real positive; both rules make the rounding deterministic.
    """
    w, vecs = eig_hermitian(x, tol)
    u = vecs[:, -1] * np.sqrt(max(w[-1], 0.0))
    mags = np.abs(u)
    out = np.where(mags > 1e-12, u / np.where(mags > 1e-12, mags, 1.0), 1.0)
    lead = out[0]
    out = out * (lead.conjugate() / abs(lead))
    return out
