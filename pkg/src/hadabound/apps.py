"""Application calculators built on the entrywise-product floor.

Two consumers of the same inequality:

* Forward spatial smoothing of a source covariance across a uniform
  linear array. The smoothed covariance factors exactly as the original
  covariance times (entrywise) the conjugated Gram matrix of a steering
  block, so the floor machinery applies verbatim and explains when
  smoothing restores full rank for coherent sources.

* The lag-zero moment matrix of a factor model with componentwise
  products. Summing diagonally scaled copies of a loading Gram matrix
  collapses into an entrywise product with the score Gram matrix, which
  yields a floor on the smallest positive eigenvalue of the moment
  matrix.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import DimensionError, NotPsdError, ZeroMatrixError
from .matcore import (
    DEFAULT_TOL_REL,
    HermitianMatrix,
    as_hermitian,
    classify_psd,
    eigvals_hermitian,
    rank_numeric,
    tol_for,
)
from .submatrix import (
    DEFAULT_BUDGET,
    effective_condition_number,
    kruskal_rank,
    min_submatrix_eigenvalue,
    min_subset_singular_value,
)

MIN_FREQUENCY_GAP = 1e-9


@dataclasses.dataclass(frozen=True)
class DoaScenario:
    """Uniform linear array snapshot model for direction finding.

    N sensors, K narrowband sources at electrical frequencies omega
    (radians, in [-pi, pi), pairwise distinct), P forward subarrays, and a
    K x K positive semidefinite source covariance sigma_s. Keys match the
    on-disk scenario schema.
    """

    N: int
    K: int
    P: int
    omega: tuple[float, ...]
    sigma_s: HermitianMatrix

    def __post_init__(self):
        object.__setattr__(self, "omega", tuple(float(w) for w in self.omega))
        if self.K < 1:
            raise ValueError("need at least one source")
        if not 1 <= self.P <= self.N:
            raise ValueError(f"subarray count {self.P} must lie in [1, N={self.N}]")
        if self.K >= self.N:
            raise ValueError(f"source count {self.K} must be below sensor count {self.N}")
        if len(self.omega) != self.K:
            raise ValueError(f"expected {self.K} frequencies, got {len(self.omega)}")
        for w in self.omega:
            if not -math.pi <= w < math.pi:
                raise ValueError(f"frequency {w!r} outside [-pi, pi)")
        for i in range(self.K):
            for j in range(i + 1, self.K):
                if abs(self.omega[i] - self.omega[j]) <= MIN_FREQUENCY_GAP:
                    raise ValueError("frequencies must be pairwise distinct")
        sig = as_hermitian(self.sigma_s)
        if sig.n != self.K:
            raise DimensionError(f"covariance must be {self.K} x {self.K}, got {sig.n}")
        if not classify_psd(sig).is_psd:
            raise NotPsdError("source covariance must be positive semidefinite")
        object.__setattr__(self, "sigma_s", sig)


def build_steering(n: int, omega) -> np.ndarray:
    """n x K steering matrix with entry (i, k) = exp(1j * i * omega_k)."""
    freqs = np.asarray([float(w) for w in omega], dtype=np.float64)
    if n < 1:
        raise ValueError("steering matrix needs at least one row")
    for w in freqs:
        if not -math.pi <= w < math.pi:
            raise ValueError(f"frequency {w!r} outside [-pi, pi)")
    return np.exp(1j * np.outer(np.arange(n), freqs))


def smoothed_cov_direct(scenario: DoaScenario) -> HermitianMatrix:
    """Sum of the P phase-shifted copies of the source covariance.

    Term p conjugates the covariance by the p-th power of the diagonal
    phase matrix diag(exp(1j * omega)). This is the subarray-averaging
    definition, kept deliberately independent of the entrywise form so the
    two can be cross-checked.
    """
    phases = np.exp(1j * np.asarray(scenario.omega))
    sig = scenario.sigma_s.entries
    total = np.zeros_like(sig)
    for p in range(scenario.P):
        left = phases**p
        total = total + (left[:, None] * sig) * np.conj(left)[None, :]
    return HermitianMatrix(total)


def smoothed_cov_hadamard(scenario: DoaScenario) -> HermitianMatrix:
    """Entrywise form: sigma_s o conj(V_P* V_P) with V_P the P-row steering block."""
    v = build_steering(scenario.P, scenario.omega)
    gram = v.conj().T @ v
    return HermitianMatrix(scenario.sigma_s.entries * np.conj(gram))


@dataclasses.dataclass(frozen=True)
class DoaBoundReport:
    """Floor for the smallest eigenvalue of the smoothed source covariance.

    bound = tilde_sigma_sq * min_diag / kappa_eff, where tilde_sigma_sq is
    the worst squared subset singular value of the P x K steering block at
    subset size m = K - rank(sigma_s) + 1. positivity_predicted records the
    combinatorial criterion P >= m, which is exactly when the floor can be
    positive.
    """

    r_sigma_s: int
    m: int
    tilde_sigma_sq: float
    kappa_eff: float
    min_diag: float
    bound: float
    lambda_min_smoothed: float
    bound_holds: bool
    positivity_predicted: bool
    bound_positive: bool


def doa_bound(
    scenario: DoaScenario, tau_rel: float = DEFAULT_TOL_REL, budget: int = DEFAULT_BUDGET
) -> DoaBoundReport:
    """Certified floor for the smoothed covariance of the given scenario."""
    r = rank_numeric(scenario.sigma_s, tau_rel)
    if r == 0:
        raise ZeroMatrixError("source covariance is numerically zero")
    m = scenario.K - r + 1
    v = build_steering(scenario.P, scenario.omega)
    tilde = min_subset_singular_value(v, m, budget)
    tilde_sq = tilde * tilde
    kappa = effective_condition_number(scenario.sigma_s, tau_rel)
    min_diag = float(np.min(scenario.sigma_s.diagonal()))
    bound = tilde_sq * min_diag / kappa
    lam = float(eigvals_hermitian(smoothed_cov_direct(scenario))[-1])
    return DoaBoundReport(
        r_sigma_s=r,
        m=m,
        tilde_sigma_sq=float(tilde_sq),
        kappa_eff=float(kappa),
        min_diag=min_diag,
        bound=float(bound),
        lambda_min_smoothed=lam,
        bound_holds=bool(bound <= lam + tol_for(abs(lam), tau_rel)),
        positivity_predicted=bool(scenario.P >= m),
        bound_positive=bool(bound > 1e-12),
    )


def rank_identity_check(
    scenario: DoaScenario, tau_rel: float = DEFAULT_TOL_REL, budget: int = DEFAULT_BUDGET
) -> bool:
    """Steering Gram matrix has rank and Kruskal rank both equal to min(P, K).

    Holds for every choice of pairwise distinct frequencies; it is the
    structural fact that makes the smoothing floor nonvacuous.
    """
    v = build_steering(scenario.P, scenario.omega)
    gram = HermitianMatrix(v.conj().T @ v)
    expected = min(scenario.P, scenario.K)
    if rank_numeric(gram, tau_rel) != expected:
        return False
    return kruskal_rank(gram.entries, tau_rel, budget) == expected


@dataclasses.dataclass(frozen=True)
class CpScenario:
    """Componentwise factor model: loadings with unit-norm columns and scores.

    a_load (observations by d) and b_load (second mode by d) are real
    loading matrices whose columns have unit norm; g is the list of score
    vectors in R^d.
    """

    d: int
    a_load: np.ndarray
    b_load: np.ndarray
    g: tuple[np.ndarray, ...]

    def __post_init__(self):
        a = np.array(self.a_load, dtype=np.float64)
        b = np.array(self.b_load, dtype=np.float64)
        scores = tuple(np.array(v, dtype=np.float64) for v in self.g)
        if a.ndim != 2 or a.shape[1] != self.d:
            raise DimensionError(f"first loading must have {self.d} columns, got {a.shape}")
        if b.ndim != 2 or b.shape[1] != self.d:
            raise DimensionError(f"second loading must have {self.d} columns, got {b.shape}")
        if len(scores) < 1:
            raise ValueError("need at least one score vector")
        for v in scores:
            if v.shape != (self.d,):
                raise DimensionError(f"score vectors must have length {self.d}, got {v.shape}")
        for name, mat in (("first", a), ("second", b)):
            norms = np.linalg.norm(mat, axis=0)
            if np.max(np.abs(norms - 1.0)) > 1e-9:
                raise ValueError(f"{name} loading columns must have unit norm")
        a.setflags(write=False)
        b.setflags(write=False)
        for v in scores:
            v.setflags(write=False)
        object.__setattr__(self, "a_load", a)
        object.__setattr__(self, "b_load", b)
        object.__setattr__(self, "g", scores)


@dataclasses.dataclass(frozen=True)
class CpM1:
    """Lag-zero moment matrix in both of its algebraically equal forms.

    lag_form sums A diag(g_k) B*B diag(g_k) A* over scores; factored_form
    is A (G o B*B) A* with G the score Gram matrix. core is G o B*B.
    """

    lag_form: HermitianMatrix
    factored_form: HermitianMatrix
    core: HermitianMatrix


def _score_gram(scenario: CpScenario) -> np.ndarray:
    g_sum = np.zeros((scenario.d, scenario.d))
    for v in scenario.g:
        g_sum = g_sum + np.outer(v, v)
    return g_sum


def cp_m1(scenario: CpScenario) -> CpM1:
    """Compute the moment matrix two ways and verify they agree.

    The summed and factored forms are equal in exact arithmetic; a
    discrepancy beyond 1e-10 relative to scale means the inputs were
    corrupted, so it raises instead of returning.
    """
    a = scenario.a_load
    b = scenario.b_load
    btb = b.T @ b
    lag = np.zeros((a.shape[0], a.shape[0]))
    for v in scenario.g:
        scaled = a * v[None, :]
        lag = lag + scaled @ btb @ scaled.T
    core = _score_gram(scenario) * btb
    factored = a @ core @ a.T
    scale = max(1.0, float(np.max(np.abs(lag))))
    dev = float(np.max(np.abs(lag - factored)))
    if dev > 1e-10 * scale:
        raise ArithmeticError(f"moment matrix forms disagree by {dev:.3e}")
    return CpM1(
        lag_form=HermitianMatrix(lag),
        factored_form=HermitianMatrix(factored),
        core=HermitianMatrix(core),
    )


@dataclasses.dataclass(frozen=True)
class CpBoundReport:
    """Floor for the smallest positive eigenvalue of the moment matrix.

    hadamard_floor bounds lambda_min of the core G o B*B (B*B has a unit
    diagonal, so no diagonal factor appears); m1_floor multiplies it by the
    d1-th squared singular value of the first loading. condition_met
    records whether the Kruskal rank of G reaches d - rank(B*B) + 1, the
    regime in which the floors are positive.
    """

    d1: int
    d2: int
    mu: float
    kappa_eff: float
    sigma_d1_sq: float
    hadamard_floor: float
    m1_floor: float
    lambda_min_core: float
    lambda_min_pos_m1: float
    kruskal_g: int
    condition_met: bool
    core_floor_holds: bool
    m1_floor_holds: bool


def cp_bound(
    scenario: CpScenario, tau_rel: float = DEFAULT_TOL_REL, budget: int = DEFAULT_BUDGET
) -> CpBoundReport:
    """Certified floors for the factor-model moment matrix."""
    btb = HermitianMatrix(scenario.b_load.T @ scenario.b_load)
    gram = _score_gram(scenario)
    g_mat = HermitianMatrix(gram)
    d2 = rank_numeric(btb, tau_rel)
    if d2 == 0:
        raise ZeroMatrixError("second loading Gram matrix is numerically zero")
    if rank_numeric(g_mat, tau_rel) == 0:
        raise ZeroMatrixError("score Gram matrix is numerically zero")
    m = scenario.d - d2 + 1
    mu = min_submatrix_eigenvalue(g_mat, m, budget).value
    kappa = effective_condition_number(btb, tau_rel)
    hadamard_floor = mu / kappa

    a_gram = HermitianMatrix(scenario.a_load.T @ scenario.a_load)
    a_vals = eigvals_hermitian(a_gram)
    tau_a = tol_for(float(np.max(np.abs(a_vals))), tau_rel)
    d1 = int(np.sum(np.abs(a_vals) > tau_a))
    sigma_d1_sq = float(a_vals[d1 - 1]) if d1 >= 1 else 0.0
    m1_floor = sigma_d1_sq * hadamard_floor

    parts = cp_m1(scenario)
    lam_core = float(eigvals_hermitian(parts.core)[-1])
    m1_vals = eigvals_hermitian(parts.factored_form)
    rank_m1 = rank_numeric(parts.factored_form, tau_rel)
    lam_pos = float(m1_vals[rank_m1 - 1]) if rank_m1 >= 1 else 0.0

    kg = kruskal_rank(g_mat.entries, tau_rel, budget)
    slack_core = tol_for(abs(lam_core), tau_rel)
    slack_m1 = tol_for(abs(lam_pos), tau_rel)
    return CpBoundReport(
        d1=d1,
        d2=d2,
        mu=float(mu),
        kappa_eff=float(kappa),
        sigma_d1_sq=sigma_d1_sq,
        hadamard_floor=float(hadamard_floor),
        m1_floor=float(m1_floor),
        lambda_min_core=lam_core,
        lambda_min_pos_m1=lam_pos,
        kruskal_g=kg,
        condition_met=bool(kg >= m),
        core_floor_holds=bool(hadamard_floor <= lam_core + slack_core),
        m1_floor_holds=bool(m1_floor <= lam_pos + slack_m1),
    )
