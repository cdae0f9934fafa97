"""Gram matrices and the KSD point estimators (V, U, and Nystrom).

The squared discrepancy estimators are quadratic forms in the Stein-kernel
Gram matrix ``G[i, j] = K0(X_i, X_j)``:

* V-statistic: ``(1/n^2) sum_{i,j} G_ij`` (nonnegative; it is a squared
  RKHS norm).
* U-statistic: same sum without the diagonal, scaled by ``1/(n(n-1))``
  (unbiased, may be negative).
* Nystrom: restrict the empirical embedding to the span of m landmark
  feature vectors drawn uniformly with replacement.  With
  ``beta = (1/n) K_mn 1`` the estimate is ``beta^T K_mm^+ beta``, computed
  from the small ``m x m`` block only, so the full Gram matrix is never
  materialized (cost O(nm + m^3)).

The pseudoinverse of the landmark block is the eigendecomposition-based
Moore-Penrose inverse of a PSD matrix; sampling landmarks with replacement
makes exact rank deficiency routine, so the cutoff policy matters and is
exposed via ``pinv_tol``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import SteinKernel
from .samplers import RngStream, _as_generator

__all__ = [
    "KsdEstimate",
    "NystromSketch",
    "gram_full",
    "ksd_v_statistic",
    "ksd_u_statistic",
    "sample_landmarks",
    "build_sketch",
    "ksd_nystrom",
    "pinv_psd",
]

DEFAULT_PINV_TOL = 1e-10
_GRAM_BLOCK = 512  # row-block size for Gram construction


@dataclass(frozen=True)
class KsdEstimate:
    """A squared-KSD estimate together with how it was obtained."""

    value: float
    method: str  # "v_stat" | "u_stat" | "nystrom"
    n: int
    m: int | None = None


@dataclass(frozen=True)
class NystromSketch:
    """Landmark blocks of the Gram matrix plus the PSD pseudoinverse.

    ``k_mm_pinv`` equals ``pinv_factor.T @ pinv_factor``; the factor lets
    quadratic forms in the pseudoinverse be evaluated as plain squared norms.
    """

    indices: np.ndarray  # (m,) positions into the sample, 0-based
    k_mm: np.ndarray  # (m, m) landmark block
    k_mn: np.ndarray  # (m, n) landmark-vs-sample block
    k_mm_pinv: np.ndarray  # (m, m) PSD Moore-Penrose inverse of k_mm
    pinv_factor: np.ndarray  # (r, m) with k_mm_pinv = factor.T @ factor
    pinv_tol: float
    n: int

    @property
    def m(self) -> int:
        return self.indices.size


def gram_full(kernel: SteinKernel, X: np.ndarray) -> np.ndarray:
    """Full Stein-kernel Gram matrix; the upper triangle is computed and mirrored."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    if n < 1:
        raise ValueError("need at least one point")
    G = np.empty((n, n))
    for lo in range(0, n, _GRAM_BLOCK):
        hi = min(lo + _GRAM_BLOCK, n)
        try:
            G[lo:hi, lo:] = kernel.cross(X[lo:hi], X[lo:])
        except ValueError as exc:
            raise ValueError(
                f"Gram block rows [{lo}, {hi}) x columns [{lo}, {n}): {exc}"
            ) from None
    iu = np.triu_indices(n, k=1)
    G[(iu[1], iu[0])] = G[iu]
    return G


def _check_square(G: np.ndarray) -> np.ndarray:
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError("Gram matrix must be square")
    return G


def ksd_v_statistic(G: np.ndarray) -> KsdEstimate:
    """V-statistic (1/n^2) sum_ij G_ij; nonnegative up to rounding."""
    G = _check_square(G)
    n = G.shape[0]
    return KsdEstimate(value=float(G.sum()) / n**2, method="v_stat", n=n)


def ksd_u_statistic(G: np.ndarray) -> float:
    """U-statistic (1/(n(n-1))) sum_{i != j} G_ij; may be negative."""
    G = _check_square(G)
    n = G.shape[0]
    if n < 2:
        raise ValueError("U-statistic needs n >= 2")
    return (float(G.sum()) - float(np.trace(G))) / (n * (n - 1))


def sample_landmarks(
    n: int, m: int, rng: RngStream | np.random.Generator
) -> np.ndarray:
    """Draw m landmark positions i.i.d. uniformly from {0..n-1}, with replacement."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    gen = _as_generator(rng)
    return gen.integers(0, n, size=m)


def pinv_psd(M: np.ndarray, tol: float = DEFAULT_PINV_TOL) -> np.ndarray:
    """Moore-Penrose inverse of a symmetric PSD matrix via eigendecomposition.

    Eigenvalues above ``tol * lambda_max`` are inverted, the rest are zeroed,
    so the result is symmetric PSD and satisfies the Penrose identities on
    the retained range.
    """
    pinv, _ = _psd_pinv_with_factor(M, tol)
    return pinv


def _psd_pinv_with_factor(
    M: np.ndarray, tol: float
) -> tuple[np.ndarray, np.ndarray]:
    M = _check_square(M)
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    scale = float(np.max(np.abs(M))) if M.size else 0.0
    if not np.allclose(M, M.T, rtol=0.0, atol=1e-8 * max(scale, 1.0)):
        raise ValueError("matrix must be symmetric")
    M = 0.5 * (M + M.T)
    lam, Q = np.linalg.eigh(M)
    cutoff = tol * max(float(lam[-1]), 0.0)
    keep = lam > cutoff
    inv = np.zeros_like(lam)
    inv[keep] = 1.0 / lam[keep]
    pinv = (Q * inv[None, :]) @ Q.T
    pinv = 0.5 * (pinv + pinv.T)
    factor = np.sqrt(inv[keep])[:, None] * Q[:, keep].T
    return pinv, factor


def build_sketch(
    kernel: SteinKernel,
    X: np.ndarray,
    indices: np.ndarray,
    pinv_tol: float = DEFAULT_PINV_TOL,
) -> NystromSketch:
    """Materialize the landmark Gram blocks and the pseudoinverse of the small one."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size < 1 or indices.min() < 0 or indices.max() >= n:
        raise ValueError("landmark indices must lie in [0, n)")
    k_mn = kernel.cross(X[indices], X)
    k_mm = k_mn[:, indices]
    k_mm = 0.5 * (k_mm + k_mm.T)
    pinv, factor = _psd_pinv_with_factor(k_mm, pinv_tol)
    return NystromSketch(
        indices=indices,
        k_mm=k_mm,
        k_mn=k_mn,
        k_mm_pinv=pinv,
        pinv_factor=factor,
        pinv_tol=pinv_tol,
        n=n,
    )


def ksd_nystrom(sketch: NystromSketch, n: int | None = None) -> KsdEstimate:
    """Nystrom estimate beta^T K_mm^+ beta with beta = (1/n) K_mn 1.

    The quadratic form is evaluated as ||factor @ beta||^2, which avoids the
    cancellation a materialized ill-conditioned pseudoinverse would incur.
    """
    if n is not None and n != sketch.n:
        raise ValueError(f"sketch was built for n={sketch.n}, got n={n}")
    n = sketch.n
    beta = sketch.k_mn.sum(axis=1) / n
    proj = sketch.pinv_factor @ beta
    value = float(proj @ proj)
    return KsdEstimate(value=value, method="nystrom", n=n, m=sketch.m)
