"""Dense Hermitian core: validated carriers, entrywise products, spectra.

All numerical decisions in this package flow through the routines here.
The eigensolver is a self-contained cyclic Jacobi iteration on the complex
Hermitian matrix; it is deterministic (fixed sweep order, no pivot search,
no threading), so identical inputs produce bit-identical spectra. Library
decompositions are deliberately not used on this path; they serve as
independent oracles in the test suite instead.

Tolerances are relative with an absolute floor, tau(scale) = tau_rel *
max(1, scale). Rank and definiteness decisions default to tau_rel = 1e-9,
symmetry checks to 1e-12.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np

from .errors import (
    ConvergenceError,
    DimensionError,
    HermitianityError,
    NotProjectionError,
    ZeroPivotError,
)

DEFAULT_TOL_REL = 1e-9
SYMMETRY_TOL_REL = 1e-12
EIG_TOL_REL = 1e-10
# Sweep convergence: off-diagonal Frobenius mass below this times ||A||_F.
JACOBI_OFF_REL = 1e-14
JACOBI_MAX_SWEEPS = 100
TRACE_ROUND_GUARD = 1e-6


def tol_for(scale: float, tau_rel: float = DEFAULT_TOL_REL) -> float:
    """Relative tolerance with an absolute floor: tau_rel * max(1, scale)."""
    return tau_rel * max(1.0, float(scale))


@dataclasses.dataclass(frozen=True)
class HermitianMatrix:
    """Square complex matrix, validated Hermitian at construction.

    The entry array is normalized to complex128 and frozen read-only.
    Conjugate symmetry is asserted within 1e-12 * max(1, max|entry|);
    inputs further from symmetry than that are rejected rather than
    silently symmetrized.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
        if arr.shape[0] == 0:
            raise DimensionError("matrix must have at least one row")
        scale = float(np.max(np.abs(arr)))
        tol = tol_for(scale, SYMMETRY_TOL_REL)
        dev = float(np.max(np.abs(arr - arr.conj().T)))
        if dev > tol:
            raise HermitianityError(
                f"matrix deviates from Hermitian symmetry by {dev:.3e} (tolerance {tol:.3e})"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def diagonal(self) -> np.ndarray:
        """Real parts of the diagonal (imaginary parts are within tolerance of zero)."""
        return self.entries.diagonal().real.copy()

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return np.array(self.entries)
        return np.array(self.entries, dtype=dtype)


def as_hermitian(a) -> HermitianMatrix:
    """Pass through HermitianMatrix instances, validate anything else."""
    if isinstance(a, HermitianMatrix):
        return a
    return HermitianMatrix(a)


def hadamard(a, b) -> HermitianMatrix:
    """Entrywise product of two Hermitian matrices of the same size."""
    am = as_hermitian(a)
    bm = as_hermitian(b)
    if am.n != bm.n:
        raise DimensionError(f"operand sizes differ: {am.n} vs {bm.n}")
    return HermitianMatrix(am.entries * bm.entries)


class PsdKind(enum.Enum):
    POSITIVE_DEFINITE = "positive_definite"
    POSITIVE_SEMIDEFINITE_SINGULAR = "positive_semidefinite_singular"
    INDEFINITE = "indefinite"


@dataclasses.dataclass(frozen=True)
class PsdClassification:
    """Definiteness class plus the witness eigenvalue that decided it."""

    kind: PsdKind
    witness: float

    @property
    def is_psd(self) -> bool:
        return self.kind is not PsdKind.INDEFINITE


@dataclasses.dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in non-increasing order with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=np.float64)
        vecs = np.asarray(self.eigenvectors, dtype=np.complex128)
        n = vals.shape[0]
        if vals.ndim != 1 or vecs.shape != (n, n):
            raise DimensionError("eigenvalue/eigenvector shapes are inconsistent")
        if np.any(vals[:-1] < vals[1:]):
            raise ValueError("eigenvalues must be sorted in non-increasing order")
        gram = vecs.conj().T @ vecs
        ortho_dev = float(np.max(np.abs(gram - np.eye(n))))
        if ortho_dev > tol_for(1.0, EIG_TOL_REL):
            raise ValueError(f"eigenvector columns not orthonormal (deviation {ortho_dev:.3e})")
        vals.setflags(write=False)
        vecs.setflags(write=False)
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "eigenvectors", vecs)

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


def _two_by_two_extremes(w: np.ndarray) -> tuple[float, float]:
    """(largest, smallest) eigenvalue of a 2x2 Hermitian block, closed form."""
    a = w[0, 0].real
    d = w[1, 1].real
    mid = 0.5 * (a + d)
    rad = math.hypot(0.5 * (a - d), abs(w[0, 1]))
    return mid + rad, mid - rad


def _jacobi_sweep_values(a: np.ndarray, want_vectors: bool):
    """Cyclic Jacobi on a Hermitian array. Returns (diagonal, vectors or None).

    Each step annihilates one off-diagonal pair with a 2x2 unitary rotation,
    visiting the upper triangle in row-major order. Convergence is declared
    when the off-diagonal Frobenius mass drops below 1e-14 * ||A||_F; the
    sweep count is capped at 100.
    """
    n = a.shape[0]
    w = np.array(a, dtype=np.complex128)
    v = np.eye(n, dtype=np.complex128) if want_vectors else None
    norm_f = float(np.linalg.norm(w))
    off_tol = JACOBI_OFF_REL * norm_f
    # Rotations on entries this small cannot move the off-diagonal mass
    # above the threshold, so they are skipped.
    skip_tol = off_tol / max(1, n)

    for _ in range(JACOBI_MAX_SWEEPS):
        off_mass = float(np.linalg.norm(w - np.diag(np.diag(w))))
        if off_mass <= off_tol:
            return np.real(np.diag(w)).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[p, q]
                r = abs(apq)
                if r <= skip_tol:
                    continue
                phase = apq / r
                app = w[p, p].real
                aqq = w[q, q].real
                tau = (aqq - app) / (2.0 * r)
                t = -math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                # Right multiply by the rotation: columns p and q mix.
                col_p = w[:, p].copy()
                col_q = w[:, q].copy()
                w[:, p] = c * col_p + s * np.conj(phase) * col_q
                w[:, q] = -s * phase * col_p + c * col_q
                # Left multiply by its conjugate transpose: rows p and q mix.
                row_p = w[p, :].copy()
                row_q = w[q, :].copy()
                w[p, :] = c * row_p + s * phase * row_q
                w[q, :] = -s * np.conj(phase) * row_p + c * row_q
                w[p, q] = 0.0
                w[q, p] = 0.0
                w[p, p] = w[p, p].real
                w[q, q] = w[q, q].real
                if v is not None:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * vp + s * np.conj(phase) * vq
                    v[:, q] = -s * phase * vp + c * vq
    raise ConvergenceError(
        f"Jacobi iteration did not converge within {JACOBI_MAX_SWEEPS} sweeps"
    )


def eigvals_hermitian(a) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, sorted in non-increasing order."""
    am = as_hermitian(a)
    n = am.n
    if n == 1:
        return np.array([am.entries[0, 0].real])
    if n == 2:
        hi, lo = _two_by_two_extremes(am.entries)
        return np.array([hi, lo])
    diag, _ = _jacobi_sweep_values(am.entries, want_vectors=False)
    return np.sort(diag)[::-1].copy()


def eig_hermitian(a) -> SpectralDecomposition:
    """Full spectral decomposition of a Hermitian matrix.

    Eigenvalues come back non-increasing; eigenvector column k matches
    eigenvalue k. The reconstruction residual is verified against
    1e-10 * (1 + max|entry|) before returning.
    """
    am = as_hermitian(a)
    diag, v = _jacobi_sweep_values(am.entries, want_vectors=True)
    order = np.argsort(-diag, kind="stable")
    vals = diag[order]
    vecs = v[:, order]
    dec = SpectralDecomposition(vals, vecs)
    scale = float(np.max(np.abs(am.entries)))
    resid = float(np.max(np.abs(dec.reconstruct() - am.entries)))
    if resid > EIG_TOL_REL * (1.0 + scale):
        raise ConvergenceError(
            f"spectral reconstruction residual {resid:.3e} exceeds tolerance"
        )
    return dec


def classify_psd(a, tau_rel: float = DEFAULT_TOL_REL) -> PsdClassification:
    """Trichotomy on the spectrum with witness lambda_min.

    Positive definite when lambda_min > tau, indefinite when
    lambda_min < -tau, singular positive semidefinite in between,
    where tau = tau_rel * max(1, lambda_max).
    """
    vals = eigvals_hermitian(a)
    tau = tol_for(vals[0], tau_rel)
    lam_min = float(vals[-1])
    if lam_min > tau:
        kind = PsdKind.POSITIVE_DEFINITE
    elif lam_min < -tau:
        kind = PsdKind.INDEFINITE
    else:
        kind = PsdKind.POSITIVE_SEMIDEFINITE_SINGULAR
    return PsdClassification(kind, lam_min)


def rank_numeric(a, tau_rel: float = DEFAULT_TOL_REL) -> int:
    """Count of eigenvalues with |lambda| > tau_rel * max(1, max|lambda|)."""
    vals = eigvals_hermitian(a)
    tau = tol_for(float(np.max(np.abs(vals))), tau_rel)
    return int(np.sum(np.abs(vals) > tau))


def is_orthogonal_projection(p, tol: float = DEFAULT_TOL_REL) -> tuple[bool, int | None]:
    """Check Hermitian idempotency; on success also report the rank.

    Returns (True, rank) when both the symmetry defect and the idempotency
    defect are within tol in max norm. The rank is the rounded trace; a
    trace further than 1e-6 from an integer raises, since that indicates a
    matrix that only superficially resembles a projection.
    """
    arr = np.asarray(p, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    herm_dev = float(np.max(np.abs(arr - arr.conj().T)))
    idem_dev = float(np.max(np.abs(arr @ arr - arr)))
    if herm_dev > tol or idem_dev > tol:
        return False, None
    trace = float(np.trace(arr).real)
    rank = round(trace)
    if abs(trace - rank) > TRACE_ROUND_GUARD:
        raise NotProjectionError(
            f"projection checks passed but trace {trace!r} is not within 1e-6 of an integer"
        )
    return True, int(rank)


def schur_complement(m, i: int, tau_rel: float = DEFAULT_TOL_REL) -> HermitianMatrix:
    """Schur complement that eliminates row/column i against the pivot m[i, i].

    The pivot must exceed tau_rel * max(1, max|entry|); eliminating against
    a vanishing diagonal entry is refused.
    """
    mm = as_hermitian(m)
    n = mm.n
    if not 0 <= i < n:
        raise DimensionError(f"pivot index {i} out of range for size {n}")
    if n == 1:
        raise DimensionError("cannot take a Schur complement of a 1x1 matrix")
    pivot = mm.entries[i, i].real
    tau = tol_for(float(np.max(np.abs(mm.entries))), tau_rel)
    if pivot <= tau:
        raise ZeroPivotError(f"diagonal pivot {pivot!r} at index {i} is not positive")
    keep = [k for k in range(n) if k != i]
    y = mm.entries[keep, i]
    block = mm.entries[np.ix_(keep, keep)]
    return HermitianMatrix(block - np.outer(y, y.conj()) / pivot)
