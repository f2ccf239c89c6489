"""Eigenvalue floors for entrywise products, with verifiable certificates.

The centerpiece bounds the smallest eigenvalue of A o B (entrywise
product, A and B positive semidefinite) from below by

    mu * min_diag / kappa

where mu is the least smallest-eigenvalue among all principal submatrices
of A of order n - rank(B) + 1, kappa is the effective condition number of
B, and min_diag is the smallest diagonal entry of B. This refines the
classical floor lambda_min(A) * min_diag, which is vacuous whenever A is
singular. Every bound returned here is re-verified as a matrix ordering
before it is reported.

Certificates extend the same mechanism to Hermitian matrices that are not
positive semidefinite: the hypothesis tests a submatrix eigenvalue floor
against a multiple of the most negative eigenvalue, and the conclusion
checks positivity of the product.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import DimensionError, NotProjectionError, NotPsdError, ZeroMatrixError
from .matcore import (
    DEFAULT_TOL_REL,
    HermitianMatrix,
    as_hermitian,
    classify_psd,
    eigvals_hermitian,
    hadamard,
    is_orthogonal_projection,
    rank_numeric,
    tol_for,
)
from .submatrix import (
    DEFAULT_BUDGET,
    effective_condition_number,
    kruskal_rank,
    min_submatrix_eigenvalue,
)


def _require_psd(m: HermitianMatrix, tau_rel: float, label: str) -> None:
    cls = classify_psd(m, tau_rel)
    if not cls.is_psd:
        raise NotPsdError(
            f"{label} must be positive semidefinite; witness eigenvalue {cls.witness:.6e}"
        )


def classical_bound(a, b, tau_rel: float = DEFAULT_TOL_REL) -> float:
    """Floor lambda_min(A) * min_i b_ii for positive semidefinite A and B."""
    am = as_hermitian(a)
    bm = as_hermitian(b)
    if am.n != bm.n:
        raise DimensionError(f"operand sizes differ: {am.n} vs {bm.n}")
    _require_psd(am, tau_rel, "first factor")
    _require_psd(bm, tau_rel, "second factor")
    return float(eigvals_hermitian(am)[-1]) * float(np.min(bm.diagonal()))


def loewner_check(m, c: float, d, tau_rel: float = DEFAULT_TOL_REL) -> bool:
    """Whether M - c * D is positive semidefinite within tolerance."""
    mm = as_hermitian(m)
    dm = as_hermitian(d)
    if mm.n != dm.n:
        raise DimensionError(f"operand sizes differ: {mm.n} vs {dm.n}")
    diff = HermitianMatrix(mm.entries - float(c) * dm.entries)
    return classify_psd(diff, tau_rel).is_psd


@dataclasses.dataclass(frozen=True)
class BoundReport:
    """Everything computed while bounding lambda_min(A o B) from below.

    quantitative_bound is mu * min_diag / kappa_eff exactly as those three
    numbers appear in the report. loewner_verified records that
    A o B - (mu / kappa_eff) * diag(B) passed a positive semidefiniteness
    check, which is a stronger statement than the scalar bound alone.
    """

    n: int
    r_b: int
    mu: float
    kappa_eff: float
    min_diag: float
    classical_bound: float
    quantitative_bound: float
    actual_lambda_min: float
    loewner_verified: bool
    margin: float


def quantitative_bound(
    a, b, tau_rel: float = DEFAULT_TOL_REL, budget: int = DEFAULT_BUDGET
) -> BoundReport:
    """Certified floor for lambda_min(A o B) that survives singular A.

    Both factors must be positive semidefinite and B must not be
    numerically zero. The floor degrades gracefully: it is zero (matching
    the classical floor) when the relevant submatrix minimum vanishes, and
    strictly positive whenever every principal submatrix of A of order
    n - rank(B) + 1 is positive definite and B has a positive diagonal.
    """
    am = as_hermitian(a)
    bm = as_hermitian(b)
    if am.n != bm.n:
        raise DimensionError(f"operand sizes differ: {am.n} vs {bm.n}")
    _require_psd(am, tau_rel, "first factor")
    _require_psd(bm, tau_rel, "second factor")
    n = am.n
    r_b = rank_numeric(bm, tau_rel)
    if r_b == 0:
        raise ZeroMatrixError("second factor is numerically zero")
    mu = min_submatrix_eigenvalue(am, n - r_b + 1, budget).value
    kappa = effective_condition_number(bm, tau_rel)
    min_diag = float(np.min(bm.diagonal()))
    classical = float(eigvals_hermitian(am)[-1]) * min_diag
    product = hadamard(am, bm)
    actual = float(eigvals_hermitian(product)[-1])
    quantitative = mu * min_diag / kappa
    diag_b = HermitianMatrix(np.diag(bm.entries.diagonal()))
    verified = loewner_check(product, mu / kappa, diag_b, tau_rel)
    return BoundReport(
        n=n,
        r_b=r_b,
        mu=float(mu),
        kappa_eff=float(kappa),
        min_diag=min_diag,
        classical_bound=classical,
        quantitative_bound=float(quantitative),
        actual_lambda_min=actual,
        loewner_verified=bool(verified),
        margin=float(actual - quantitative),
    )


@dataclasses.dataclass(frozen=True)
class NonsingularityCheck:
    """Sufficient condition for A o B to be positive definite.

    Requires every diagonal entry of B positive and the Kruskal rank of A
    at least n - rank(B) + 1. Sufficient but not necessary: a True verdict
    certifies positive definiteness of the product, a False verdict proves
    nothing.
    """

    holds: bool
    n: int
    kruskal_rank_a: int
    rank_b: int
    min_diag_b: float
    reason: str


def nonsingularity_predicate(
    a, b, tau_rel: float = DEFAULT_TOL_REL, budget: int = DEFAULT_BUDGET
) -> NonsingularityCheck:
    """Evaluate the diagonal-and-Kruskal-rank sufficient condition."""
    am = as_hermitian(a)
    bm = as_hermitian(b)
    if am.n != bm.n:
        raise DimensionError(f"operand sizes differ: {am.n} vs {bm.n}")
    _require_psd(am, tau_rel, "first factor")
    _require_psd(bm, tau_rel, "second factor")
    n = am.n
    diag = bm.diagonal()
    min_diag = float(np.min(diag))
    diag_ok = min_diag > tol_for(float(np.max(diag)), tau_rel)
    k_a = kruskal_rank(am.entries, tau_rel, budget)
    r_b = rank_numeric(bm, tau_rel)
    needed = n - r_b + 1
    holds = bool(diag_ok and k_a >= needed)
    if not diag_ok:
        reason = f"diagonal of B has a vanishing entry (min {min_diag!r})"
    elif k_a < needed:
        reason = f"Kruskal rank {k_a} of A is below the required {needed} = {n} - {r_b} + 1"
    else:
        reason = f"Kruskal rank {k_a} >= {needed} and diagonal of B is positive"
    return NonsingularityCheck(
        holds=holds,
        n=n,
        kruskal_rank_a=k_a,
        rank_b=r_b,
        min_diag_b=min_diag,
        reason=reason,
    )


@dataclasses.dataclass(frozen=True)
class ProjectionParts:
    """Bordered split of an orthogonal projection at its trailing corner.

    p1 is the leading (n-1) x (n-1) block, x the border column, p the real
    corner entry. When p is interior to (0, 1), q is the rank reduced
    projection p1 - x x* / p (it annihilates x) and r restores the border
    direction, q + x x* / ||x||^2, recovering a projection of the original
    rank. When p sits at 0 or 1 the border vanishes and p1 is itself a
    projection, so q and r are None.
    """

    p1: HermitianMatrix
    x: np.ndarray
    p: float
    q: HermitianMatrix | None
    r: HermitianMatrix | None
    rank: int


def decompose_projection(proj, tol: float = DEFAULT_TOL_REL) -> ProjectionParts:
    """Split a projection at its corner and verify every claimed identity.

    Checks performed: the input is an orthogonal projection; the corner
    lies in [0, 1]; ||x||^2 = p (1 - p); and on the interior branch, q and
    r are projections of ranks rank-1 and rank with q x = 0. Any residual
    beyond tol raises NotProjectionError rather than returning parts that
    do not satisfy their own contract.
    """
    arr = np.asarray(proj, dtype=np.complex128)
    ok, rank = is_orthogonal_projection(arr, tol)
    if not ok:
        raise NotProjectionError("input is not an orthogonal projection within tolerance")
    n = arr.shape[0]
    if n < 2:
        raise DimensionError("bordered split needs size at least 2")
    p1_block = arr[:-1, :-1]
    x = arr[:-1, -1].copy()
    p = float(arr[-1, -1].real)
    if p < -tol or p > 1.0 + tol:
        raise NotProjectionError(f"corner entry {p!r} lies outside [0, 1]")
    norm_x_sq = float(np.real(np.vdot(x, x)))
    if abs(norm_x_sq - p * (1.0 - p)) > tol:
        raise NotProjectionError(
            f"border norm ||x||^2 = {norm_x_sq!r} does not match p(1-p) = {p * (1.0 - p)!r}"
        )

    if p <= tol or p >= 1.0 - tol:
        # Border is forced to zero; the leading block is a projection whose
        # residual is bounded by ||x||^2 <= tol, hence the relaxed check.
        ok1, rank1 = is_orthogonal_projection(p1_block, 2.0 * tol)
        if not ok1 or rank1 != rank - round(p):
            raise NotProjectionError("leading block is not a projection of the expected rank")
        return ProjectionParts(
            p1=HermitianMatrix(p1_block),
            x=x,
            p=p,
            q=None,
            r=None,
            rank=rank,
        )

    outer = np.outer(x, x.conj())
    q_arr = p1_block - outer / p
    r_arr = q_arr + outer / norm_x_sq
    ok_q, rank_q = is_orthogonal_projection(q_arr, tol)
    if not ok_q or rank_q != rank - 1:
        raise NotProjectionError("reduced block q is not a projection of rank one less")
    qx = float(np.max(np.abs(q_arr @ x)))
    if qx > tol:
        raise NotProjectionError(f"reduced block does not annihilate the border (|qx| = {qx:.3e})")
    ok_r, rank_r = is_orthogonal_projection(r_arr, tol)
    if not ok_r or rank_r != rank:
        raise NotProjectionError("restored block r is not a projection of the original rank")
    return ProjectionParts(
        p1=HermitianMatrix(p1_block),
        x=x,
        p=p,
        q=HermitianMatrix(q_arr),
        r=HermitianMatrix(r_arr),
        rank=rank,
    )


@dataclasses.dataclass(frozen=True)
class ProjectionCertificate:
    """Submatrix floor hypothesis and product positivity conclusion.

    The implication hypothesis => conclusion always holds mathematically;
    `consistent` is False only if the implementation itself is broken.
    """

    hypothesis_holds: bool
    conclusion_holds: bool
    mu: float
    hypothesis_threshold: float
    lambda_min_product: float
    projection_rank: int

    @property
    def consistent(self) -> bool:
        return self.conclusion_holds or not self.hypothesis_holds


def projection_certificate(
    c, proj, tau_rel: float = DEFAULT_TOL_REL, budget: int = DEFAULT_BUDGET
) -> ProjectionCertificate:
    """Certify C o P for Hermitian C against a rank-r orthogonal projection P.

    Hypothesis: every principal submatrix of C of order n - r + 1 is
    positive semidefinite (equivalently the submatrix eigenvalue minimum
    clears -tau). Conclusion: C o P is positive semidefinite.
    """
    cm = as_hermitian(c)
    arr = np.asarray(proj, dtype=np.complex128)
    ok, rank = is_orthogonal_projection(arr, tol_for(1.0, tau_rel))
    if not ok:
        raise NotProjectionError("second factor is not an orthogonal projection")
    if arr.shape[0] != cm.n:
        raise DimensionError(f"operand sizes differ: {cm.n} vs {arr.shape[0]}")
    if rank < 1:
        raise NotProjectionError("projection rank must be at least 1")
    mu = min_submatrix_eigenvalue(cm, cm.n - rank + 1, budget).value
    threshold = -tol_for(float(np.max(np.abs(cm.entries))), tau_rel)
    product = hadamard(cm, HermitianMatrix(arr))
    lam = float(eigvals_hermitian(product)[-1])
    return ProjectionCertificate(
        hypothesis_holds=bool(mu >= threshold),
        conclusion_holds=classify_psd(product, tau_rel).is_psd,
        mu=float(mu),
        hypothesis_threshold=float(threshold),
        lambda_min_product=lam,
        projection_rank=rank,
    )


@dataclasses.dataclass(frozen=True)
class IndefiniteCertificate:
    """Certificate that C o B stays positive semidefinite for indefinite C.

    Hypothesis: mu, the submatrix eigenvalue minimum of C at order
    n - rank(B) + 1, is at least -(kappa_eff(B) - 1) * lambda_min(C).
    Conclusion: C o B is positive semidefinite. The hypothesis is checked
    with slack tau to absorb rounding on instances built to sit exactly on
    the boundary.
    """

    hypothesis_holds: bool
    conclusion_holds: bool
    mu: float
    required_floor: float
    lambda_min_c: float
    kappa_eff: float
    rank_b: int
    lambda_min_product: float

    @property
    def consistent(self) -> bool:
        return self.conclusion_holds or not self.hypothesis_holds


def indefinite_certificate(
    c, b, tau_rel: float = DEFAULT_TOL_REL, budget: int = DEFAULT_BUDGET
) -> IndefiniteCertificate:
    """Evaluate the submatrix floor hypothesis for Hermitian C against PSD B."""
    cm = as_hermitian(c)
    bm = as_hermitian(b)
    if cm.n != bm.n:
        raise DimensionError(f"operand sizes differ: {cm.n} vs {bm.n}")
    _require_psd(bm, tau_rel, "second factor")
    r_b = rank_numeric(bm, tau_rel)
    if r_b == 0:
        raise ZeroMatrixError("second factor is numerically zero")
    mu = min_submatrix_eigenvalue(cm, cm.n - r_b + 1, budget).value
    kappa = effective_condition_number(bm, tau_rel)
    lam_c = float(eigvals_hermitian(cm)[-1])
    required = -(kappa - 1.0) * lam_c
    slack = tol_for(float(np.max(np.abs(cm.entries))), tau_rel)
    product = hadamard(cm, bm)
    lam_product = float(eigvals_hermitian(product)[-1])
    return IndefiniteCertificate(
        hypothesis_holds=bool(mu >= required - slack),
        conclusion_holds=classify_psd(product, tau_rel).is_psd,
        mu=float(mu),
        required_floor=float(required),
        lambda_min_c=lam_c,
        kappa_eff=float(kappa),
        rank_b=r_b,
        lambda_min_product=lam_product,
    )


def shift_construction(
    a,
    b,
    fraction: float,
    tau_rel: float = DEFAULT_TOL_REL,
    budget: int = DEFAULT_BUDGET,
) -> HermitianMatrix:
    """Shift A down by a fraction of its certified floor against B.

    Returns C = A - c I with c = fraction * mu / kappa_eff, the largest
    family of shifts for which the indefinite certificate still passes.
    With fraction = 1 and singular A the result is genuinely indefinite
    while C o B remains positive semidefinite. Raises when the certified
    floor for (A, B) is not positive, since then no admissible shift
    exists.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must lie in (0, 1], got {fraction!r}")
    report = quantitative_bound(a, b, tau_rel, budget)
    if report.quantitative_bound <= tau_rel:
        raise NotPsdError(
            f"certified floor {report.quantitative_bound!r} is not positive; no admissible shift"
        )
    c = fraction * report.mu / report.kappa_eff
    am = as_hermitian(a)
    return HermitianMatrix(am.entries - c * np.eye(am.n))
