"""Quantities extracted from principal submatrices and column subsets.

Minimum submatrix eigenvalues, Kruskal rank, the effective condition
number (largest positive eigenvalue over smallest positive eigenvalue),
and subset singular-value minima. All subset scans run in lexicographic
order against a hard enumeration budget, so results and reported argmin
subsets are deterministic.
"""

from __future__ import annotations

import dataclasses
import itertools
import math

import numpy as np

from .errors import (
    BudgetExceededError,
    DimensionError,
    NotPsdError,
    ZeroMatrixError,
)
from .matcore import (
    DEFAULT_TOL_REL,
    SYMMETRY_TOL_REL,
    HermitianMatrix,
    _two_by_two_extremes,
    as_hermitian,
    eigvals_hermitian,
    tol_for,
)

DEFAULT_BUDGET = 2_000_000


def subset_count(n: int, m: int) -> int:
    return math.comb(n, m)


def iter_subsets(n: int, m: int, budget: int = DEFAULT_BUDGET):
    """All size-m subsets of range(n), lexicographic, guarded by the budget."""
    if not 0 <= m <= n:
        raise ValueError(f"subset size {m} is out of range for ground set {n}")
    count = subset_count(n, m)
    if count > budget:
        raise BudgetExceededError(
            f"enumerating C({n},{m}) = {count} subsets exceeds the budget of {budget}; "
            "raise the budget or reduce the problem size"
        )
    return itertools.combinations(range(n), m)


def principal_submatrix(a, indices) -> HermitianMatrix:
    """Rows and columns of a Hermitian matrix at a strictly increasing index set."""
    am = as_hermitian(a)
    idx = tuple(int(i) for i in indices)
    if len(idx) == 0:
        raise DimensionError("index set must be nonempty")
    if any(j <= i for i, j in zip(idx, idx[1:])):
        raise ValueError(f"indices must be strictly increasing, got {idx}")
    if idx[0] < 0 or idx[-1] >= am.n:
        raise IndexError(f"indices {idx} out of range for size {am.n}")
    return HermitianMatrix(am.entries[np.ix_(idx, idx)])


def _block_lambda_min(block: np.ndarray) -> float:
    """Smallest eigenvalue of a small Hermitian block (no carrier overhead)."""
    m = block.shape[0]
    if m == 1:
        return float(block[0, 0].real)
    if m == 2:
        return _two_by_two_extremes(block)[1]
    return float(eigvals_hermitian(block)[-1])


def _block_extremes(block: np.ndarray) -> tuple[float, float]:
    m = block.shape[0]
    if m == 1:
        d = float(block[0, 0].real)
        return d, d
    if m == 2:
        return _two_by_two_extremes(block)
    vals = eigvals_hermitian(block)
    return float(vals[0]), float(vals[-1])


@dataclasses.dataclass(frozen=True)
class MinSubmatrixResult:
    """Minimum over all order-m principal submatrices of the smallest eigenvalue.

    argmin_subset is the lexicographically first subset attaining the value.
    """

    value: float
    argmin_subset: tuple[int, ...]
    order: int


def min_submatrix_eigenvalue(a, m: int, budget: int = DEFAULT_BUDGET) -> MinSubmatrixResult:
    """Scan all C(n, m) principal submatrices for the least smallest-eigenvalue.

    Order 1 reduces to the minimum diagonal entry and order n to the
    smallest eigenvalue of the full matrix; both bypass enumeration, so the
    budget cannot trip on them.
    """
    am = as_hermitian(a)
    n = am.n
    if not 1 <= m <= n:
        raise ValueError(f"order {m} must lie in [1, {n}]")
    if m == 1:
        diag = am.diagonal()
        k = int(np.argmin(diag))
        return MinSubmatrixResult(float(diag[k]), (k,), 1)
    if m == n:
        value = float(eigvals_hermitian(am)[-1])
        return MinSubmatrixResult(value, tuple(range(n)), n)
    best = math.inf
    best_subset: tuple[int, ...] = ()
    entries = am.entries
    for subset in iter_subsets(n, m, budget):
        lam = _block_lambda_min(entries[np.ix_(subset, subset)])
        if lam < best:
            best = lam
            best_subset = subset
    return MinSubmatrixResult(float(best), best_subset, m)


def _is_hermitian_array(arr: np.ndarray) -> bool:
    if arr.shape[0] != arr.shape[1]:
        return False
    scale = float(np.max(np.abs(arr))) if arr.size else 0.0
    return float(np.max(np.abs(arr - arr.conj().T))) <= tol_for(scale, SYMMETRY_TOL_REL)


def kruskal_rank(mat, tau_rel: float = DEFAULT_TOL_REL, budget: int = DEFAULT_BUDGET) -> int:
    """Largest q such that every q columns are linearly independent.

    The search walks q upward and stops at the first q with a dependent
    column subset, returning q - 1. Hermitian positive semidefinite inputs
    take a fast path: every q columns of such a matrix are independent
    exactly when the matching q x q principal submatrix is positive
    definite, so only small blocks are examined. Other inputs fall back to
    eigenvalues of column-subset Gram matrices, thresholded relative to
    the largest Gram eigenvalue. Both paths therefore make the dependence
    decision on the same quadratic scale, which keeps exactly dependent
    subsets from being misread through the rounding noise that squaring
    introduces. A zero column yields 0.
    """
    arr = np.asarray(mat, dtype=np.complex128)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"expected a nonempty 2-D matrix, got shape {arr.shape}")
    n_cols = arr.shape[1]

    hermitian_psd = False
    if _is_hermitian_array(arr):
        vals = eigvals_hermitian(arr)
        if float(vals[-1]) >= -tol_for(float(vals[0]), tau_rel):
            hermitian_psd = True

    if hermitian_psd:
        for q in range(1, n_cols + 1):
            for subset in iter_subsets(n_cols, q, budget):
                lam_max, lam_min = _block_extremes(arr[np.ix_(subset, subset)])
                if lam_min <= tol_for(lam_max, tau_rel):
                    return q - 1
        return n_cols

    lam_max = max(0.0, float(eigvals_hermitian(arr.conj().T @ arr)[0]))
    tau = tol_for(lam_max, tau_rel)
    for q in range(1, n_cols + 1):
        for subset in iter_subsets(n_cols, q, budget):
            cols = arr[:, subset]
            if _block_lambda_min(cols.conj().T @ cols) <= tau:
                return q - 1
    return n_cols


def effective_condition_number(b, tau_rel: float = DEFAULT_TOL_REL) -> float:
    """Largest positive eigenvalue over the smallest positive eigenvalue.

    Defined for positive semidefinite matrices with at least one eigenvalue
    above the rank threshold; equals the ordinary condition number when the
    matrix is nonsingular and is always at least 1.
    """
    bm = as_hermitian(b)
    vals = eigvals_hermitian(bm)
    if float(vals[-1]) < -tol_for(float(vals[0]), tau_rel):
        raise NotPsdError("effective condition number requires a positive semidefinite matrix")
    tau = tol_for(float(np.max(np.abs(vals))), tau_rel)
    r = int(np.sum(np.abs(vals) > tau))
    if r == 0:
        raise ZeroMatrixError("matrix is numerically zero; no positive eigenvalues")
    return float(vals[0] / vals[r - 1])


def min_subset_singular_value(v, m: int, budget: int = DEFAULT_BUDGET) -> float:
    """Minimum over all m-column subsets of the smallest singular value.

    Singular values come from eigenvalues of the m x m Gram matrix of the
    selected columns; negative rounding noise is clamped at zero before the
    square root.
    """
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"expected a nonempty 2-D matrix, got shape {arr.shape}")
    n_cols = arr.shape[1]
    if not 1 <= m <= n_cols:
        raise ValueError(f"subset size {m} must lie in [1, {n_cols}]")
    best = math.inf
    for subset in iter_subsets(n_cols, m, budget):
        cols = arr[:, subset]
        lam_min = _block_lambda_min(cols.conj().T @ cols)
        best = min(best, math.sqrt(max(0.0, lam_min)))
    return float(best)
