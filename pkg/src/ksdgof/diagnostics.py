"""Independent oracles and spectrum diagnostics.

:func:`projection_oracle` recomputes the Nystrom quantities from their
defining least-squares problem (project the weighted empirical embedding
onto the landmark span) using its own eigendecomposition path, so agreement
with the production estimators is a genuine cross-check rather than a
tautology.

The spectrum tools estimate the effective dimension
``N(lam) = sum_i lam_i / (lam_i + lam)`` from the eigenvalues of the
double-centered Gram matrix divided by n (the empirical surrogate for the
centered covariance spectrum), classify the decay as polynomial or
exponential, and turn the decay regime into a landmark-budget suggestion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .kernels import SteinKernel
from .samplers import RngStream

__all__ = [
    "SpectrumSummary",
    "centered_gram",
    "effective_dimension",
    "spectrum_summary",
    "suggest_m",
    "projection_oracle",
    "stein_identity_check",
]


def centered_gram(G: np.ndarray) -> np.ndarray:
    """Double centering H G H with H = I - (1/n) 1 1^T."""
    G = np.asarray(G, dtype=float)
    n = G.shape[0]
    row = G.mean(axis=1, keepdims=True)
    col = G.mean(axis=0, keepdims=True)
    return G - row - col + G.mean()


def _centered_eigenvalues(G: np.ndarray) -> np.ndarray:
    lam = np.linalg.eigvalsh(centered_gram(G) / G.shape[0])
    return np.clip(lam[::-1], 0.0, None)


def effective_dimension(G: np.ndarray, lam: float) -> float:
    """Empirical effective dimension at regularization lam > 0."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    ev = _centered_eigenvalues(G)
    return float(np.sum(ev / (ev + lam)))


@dataclass(frozen=True)
class SpectrumSummary:
    """Eigenvalues of the centered Gram / n plus a decay classification."""

    eigenvalues: np.ndarray  # descending, clipped at 0
    decay_kind: str  # "polynomial" | "exponential" | "inconclusive"
    decay_gamma: float | None  # effective-dimension exponent for polynomial decay
    r2_polynomial: float
    r2_exponential: float

    def effective_dimension(self, lam: float) -> float:
        if lam <= 0:
            raise ValueError("lambda must be positive")
        ev = self.eigenvalues
        return float(np.sum(ev / (ev + lam)))

    @property
    def decay_label(self) -> str:
        if self.decay_kind == "polynomial":
            return f"polynomial(gamma={self.decay_gamma:.3f})"
        return self.decay_kind


def _fit_r2(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Least-squares slope and R^2 of y against x."""
    A = np.stack([x, np.ones_like(x)], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 0.0
    return float(coef[0]), r2


def spectrum_summary(G: np.ndarray, r2_threshold: float = 0.9) -> SpectrumSummary:
    """Classify the spectrum decay over the top half of the positive eigenvalues."""
    ev = _centered_eigenvalues(G)
    pos = ev[ev > 0]
    top = pos[: max(3, pos.size // 2)]
    if top.size < 3:
        return SpectrumSummary(ev, "inconclusive", None, 0.0, 0.0)
    idx = np.arange(1, top.size + 1, dtype=float)
    logev = np.log(top)
    slope_poly, r2_poly = _fit_r2(np.log(idx), logev)
    slope_exp, r2_exp = _fit_r2(idx, logev)
    kind, gamma = "inconclusive", None
    if max(r2_poly, r2_exp) >= r2_threshold:
        if r2_poly >= r2_exp and slope_poly < 0:
            # eigenvalue decay i^{-b} gives effective dimension lam^{-1/b}
            kind, gamma = "polynomial", float(np.clip(-1.0 / slope_poly, 1e-6, 1.0))
        elif slope_exp < 0:
            kind = "exponential"
    return SpectrumSummary(ev, kind, gamma, r2_poly, r2_exp)


def suggest_m(n: int, regime: str, gamma: float | None = None) -> int:
    """Landmark budget for no statistical loss under the given decay regime.

    Polynomial decay with exponent gamma: ``ceil((n log n)^(1/(2-gamma)))``;
    exponential decay: ``ceil(sqrt(n) log n)``.  Both are capped at n (a
    budget of n means no speedup regime exists for that spectrum).

    These rates cover the accelerated point estimator.  Known sufficient
    conditions for the accelerated test with a bootstrapped threshold carry
    extra logarithmic factors (log^(3/(2-gamma)) n, resp. sqrt(n) log^2 n)
    with unspecified constants; scale the result accordingly when the test
    decision itself must stay loss-free at small n.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if regime == "polynomial":
        if gamma is None or not 0.0 < gamma <= 1.0:
            raise ValueError("polynomial regime requires gamma in (0, 1]")
        m = np.ceil((n * np.log(n)) ** (1.0 / (2.0 - gamma)))
    elif regime == "exponential":
        m = np.ceil(np.sqrt(n) * np.log(n))
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return int(min(max(m, 1), n))


def projection_oracle(
    kernel: SteinKernel,
    X: np.ndarray,
    indices: np.ndarray,
    weights: np.ndarray,
    pinv_tol: float = 1e-10,
) -> float:
    """Squared norm of the landmark-span projection of (1/n) sum_i w_i K0(., X_i).

    Solves the normal equations ``K_mm alpha = (1/n) K_mn w`` in the
    eigenbasis of the landmark block with explicit minimum-norm selection
    (directions below the cutoff are dropped), then returns
    ``alpha^T K_mm alpha``.  This code path is deliberately separate from the
    production pseudoinverse so the two can validate each other; it is meant
    for small instances only.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    if n > 200:
        raise ValueError("projection_oracle is restricted to n <= 200")
    indices = np.asarray(indices, dtype=np.int64)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (n,):
        raise ValueError("weights must have one entry per sample")
    k_mn = kernel.cross(X[indices], X)
    k_mm = k_mn[:, indices]
    k_mm = 0.5 * (k_mm + k_mm.T)
    b = (k_mn @ weights) / n
    lam, Q = scipy.linalg.eigh(k_mm)
    cutoff = pinv_tol * max(float(lam[-1]), 0.0)
    coords = Q.T @ b
    keep = lam > cutoff
    # ||P mu_w||^2 = sum over retained directions of <q_i, b>^2 / lam_i
    return float(np.sum(coords[keep] ** 2 / lam[keep]))


def stein_identity_check(
    kernel: SteinKernel,
    p0_sampler,
    x_star: np.ndarray,
    n: int,
    rng: RngStream | np.random.Generator,
) -> float:
    """z-score of mean K0(x*, X_i) over n draws from the target sampler.

    Under a correctly matched kernel/target pair the Stein kernel has zero
    mean, so |z| stays at noise level; a mis-specified score drives |z| up
    like sqrt(n).  ``p0_sampler(n, rng)`` must return the draws.
    """
    if n < 1000:
        raise ValueError("need n >= 1000 for a meaningful z-score")
    X = p0_sampler(n, rng)
    row = kernel.cross(np.atleast_2d(np.asarray(x_star, dtype=float)), X)[0]
    std = float(row.std(ddof=1))
    return float(row.mean() / (std / np.sqrt(n)))
