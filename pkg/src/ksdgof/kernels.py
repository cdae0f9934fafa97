"""Stein kernels for Euclidean and spherical data.

A Stein kernel combines a base kernel with the score of a target density so
that the resulting kernel has zero mean under the target.  Two concrete
constructions are provided:

* :class:`LangevinSteinKernel` on R^d, built from a Gaussian base kernel
  ``k(x, y) = exp(-||x - y||^2 / (2 sigma^2))`` and a Euclidean score
  ``s(x) = grad log p0(x)``::

      K0(x, y) = <s(x), s(y)> k(x, y) + <s(y), grad_x k> + <s(x), grad_y k>
                 + sum_i d^2 k / dx_i dy_i

* :class:`DirectionalSteinKernel` on the unit sphere S^{d-1}, built from the
  exponential dot-product kernel ``k(x, xt) = exp(gamma <x, xt>)`` evaluated
  through the spherical coordinate map, with the score taken with respect to
  the angles and including the coordinate-Jacobian correction
  ``d/dtheta_i log(p0(theta) J(theta))``.

All kernel objects are immutable and evaluation is pure, so they are safe to
share across threads.  Scores only enter through gradients of the log
density, so targets known up to a normalizing constant are fully supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "BaseKernelSpec",
    "ScoreModel",
    "LangevinSteinKernel",
    "DirectionalSteinKernel",
    "build_stein_kernel",
    "langevin_stein_eval",
    "directional_stein_eval",
    "sphere_to_cartesian",
    "sphere_jacobian",
    "log_jacobian",
    "log_jacobian_grad",
    "verify_kernel_gradients",
    "median_heuristic",
]


@dataclass(frozen=True)
class BaseKernelSpec:
    """Base-kernel choice: Gaussian on R^d or exponential dot-product on the sphere.

    Exactly one of ``sigma`` (kind ``"gaussian"``) or ``gamma`` (kind
    ``"vmf"``) must be set, and it must be strictly positive.
    """

    kind: str
    sigma: float | None = None
    gamma: float | None = None

    def __post_init__(self) -> None:
        if self.kind == "gaussian":
            if self.sigma is None or self.sigma <= 0 or self.gamma is not None:
                raise ValueError("gaussian kernel requires sigma > 0 and no gamma")
        elif self.kind == "vmf":
            if self.gamma is None or self.gamma <= 0 or self.sigma is not None:
                raise ValueError("vmf kernel requires gamma > 0 and no sigma")
        else:
            raise ValueError(f"unknown base kernel kind {self.kind!r}")


@dataclass(frozen=True)
class ScoreModel:
    """Gradient of the log target density.

    ``grad`` maps a batch of points, shape ``(n, dim_in)``, to a batch of
    gradients of shape ``(n, dim_out)``.  Euclidean models take Cartesian
    coordinates (``dim_in = dim_out = d``); spherical models take angles
    (``dim_in = dim_out = d - 1``) and must include the coordinate-Jacobian
    term, i.e. return ``d/dtheta_i log(p0(theta) J(theta))``.
    """

    domain: str  # "euclidean" | "spherical"
    dim: int  # ambient dimension d
    grad: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self) -> None:
        if self.domain not in ("euclidean", "spherical"):
            raise ValueError(f"unknown score domain {self.domain!r}")
        if self.dim < 1 or (self.domain == "spherical" and self.dim < 2):
            raise ValueError("score dimension too small")

    @property
    def coord_dim(self) -> int:
        """Length of a coordinate vector (d for Euclidean, d-1 for angles)."""
        return self.dim if self.domain == "euclidean" else self.dim - 1

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.coord_dim:
            raise ValueError(
                f"score expects points of length {self.coord_dim}, got {pts.shape[1]}"
            )
        out = np.asarray(self.grad(pts), dtype=float)
        if out.shape != pts.shape:
            raise ValueError(f"score returned shape {out.shape}, expected {pts.shape}")
        if not np.all(np.isfinite(out)):
            bad = int(np.flatnonzero(~np.isfinite(out).all(axis=1))[0])
            raise ValueError(f"score produced non-finite output at point index {bad}")
        return out

    @staticmethod
    def from_pointwise(
        fn: Callable[[np.ndarray], np.ndarray], domain: str, dim: int
    ) -> "ScoreModel":
        """Wrap a single-point gradient callable into a batch score model."""

        def batched(pts: np.ndarray) -> np.ndarray:
            return np.stack([np.asarray(fn(p), dtype=float) for p in pts])

        return ScoreModel(domain=domain, dim=dim, grad=batched)


# ---------------------------------------------------------------------------
# Spherical coordinate machinery


def sphere_to_cartesian(theta: np.ndarray, d: int) -> np.ndarray:
    """Map spherical coordinates to Cartesian coordinates on S^{d-1}.

    With angles ``theta = (theta_1, ..., theta_{d-1})``::

        x_k = cos(theta_k) * prod_{i<k} sin(theta_i)   for k = 1..d-1
        x_d = prod_{i=1}^{d-1} sin(theta_i)

    Accepts a single angle vector ``(d-1,)`` or a batch ``(n, d-1)``.
    """
    if d < 2:
        raise ValueError("sphere dimension d must be >= 2")
    th = np.asarray(theta, dtype=float)
    single = th.ndim == 1
    th = np.atleast_2d(th)
    if th.shape[1] != d - 1:
        raise ValueError(f"expected {d - 1} angles, got {th.shape[1]}")
    s = np.sin(th)
    c = np.cos(th)
    # prefix[:, k] = prod_{i<k} sin(theta_i), with prefix[:, 0] = 1
    prefix = np.concatenate(
        [np.ones((th.shape[0], 1)), np.cumprod(s, axis=1)], axis=1
    )
    x = np.empty((th.shape[0], d))
    x[:, : d - 1] = c * prefix[:, : d - 1]
    x[:, d - 1] = prefix[:, d - 1]
    return x[0] if single else x


def sphere_jacobian(theta: np.ndarray, d: int) -> np.ndarray:
    """Jacobian d x_k / d theta_a of the spherical coordinate map.

    Returns shape ``(n, d, d-1)`` for batched input (or ``(d, d-1)`` for a
    single point).  Products that exclude one sine factor are formed by
    re-running the cumulative product with that factor replaced by 1, which
    avoids dividing by sines that may vanish at the poles.
    """
    th = np.asarray(theta, dtype=float)
    single = th.ndim == 1
    th = np.atleast_2d(th)
    n, dm1 = th.shape
    if dm1 != d - 1:
        raise ValueError(f"expected {d - 1} angles, got {dm1}")
    s = np.sin(th)
    c = np.cos(th)
    prefix = np.concatenate([np.ones((n, 1)), np.cumprod(s, axis=1)], axis=1)
    jac = np.zeros((n, d, dm1))
    for a in range(dm1):
        sm = s.copy()
        sm[:, a] = 1.0
        prefix_excl = np.concatenate(
            [np.ones((n, 1)), np.cumprod(sm, axis=1)], axis=1
        )
        # x_a (0-based) = cos(theta_a) * prefix[a]: derivative in theta_a
        jac[:, a, a] = -s[:, a] * prefix[:, a]
        for k in range(a + 1, dm1):
            jac[:, k, a] = c[:, k] * c[:, a] * prefix_excl[:, k]
        jac[:, d - 1, a] = c[:, a] * prefix_excl[:, dm1]
    return jac[0] if single else jac


def _check_angular_box(th: np.ndarray, d: int) -> None:
    if d >= 3:
        bad = ~((th[:, : d - 2] >= 0.0) & (th[:, : d - 2] <= np.pi)).all(axis=1)
        if np.any(bad):
            i = int(np.flatnonzero(bad)[0])
            raise ValueError(
                f"point {i}: angles theta_1..theta_{{d-2}} must lie in [0, pi]"
            )
    last = th[:, d - 2]
    bad = (last < 0.0) | (last >= 2.0 * np.pi)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise ValueError(f"point {i}: last angle must lie in [0, 2*pi)")


def log_jacobian(theta: np.ndarray, d: int) -> np.ndarray:
    """log J(theta) with J(theta) = prod_{i=1}^{d-2} sin^{d-i-1}(theta_i)."""
    th = np.atleast_2d(np.asarray(theta, dtype=float))
    if d == 2:
        out = np.zeros(th.shape[0])
    else:
        powers = np.arange(d - 2, 0, -1, dtype=float)  # d-i-1 for i=1..d-2
        out = np.log(np.sin(th[:, : d - 2])) @ powers
    return out[0] if np.asarray(theta).ndim == 1 else out


def log_jacobian_grad(theta: np.ndarray, d: int) -> np.ndarray:
    """Angular gradient of log J: ``(d-i-1) cot(theta_i)`` for i <= d-2, else 0.

    Exact poles (``theta_i in {0, pi}`` for i <= d-2) make the cotangent
    diverge and are rejected.
    """
    if d < 2:
        raise ValueError("sphere dimension d must be >= 2")
    th = np.asarray(theta, dtype=float)
    single = th.ndim == 1
    th = np.atleast_2d(th)
    if th.shape[1] != d - 1:
        raise ValueError(f"expected {d - 1} angles, got {th.shape[1]}")
    out = np.zeros_like(th)
    if d >= 3:
        polar = th[:, : d - 2]
        if np.any(polar == 0.0) or np.any(polar == np.pi):
            raise ValueError(
                "angle at a coordinate pole (theta_i in {0, pi}); the "
                "log-Jacobian gradient diverges there"
            )
        powers = np.arange(d - 2, 0, -1, dtype=float)
        out[:, : d - 2] = powers / np.tan(polar)
    return out[0] if single else out


# ---------------------------------------------------------------------------
# Stein kernels


class LangevinSteinKernel:
    """Stein kernel on R^d from a Gaussian base kernel and a Euclidean score."""

    domain = "euclidean"

    def __init__(self, score: ScoreModel, sigma: float, dim: int | None = None):
        if score.domain != "euclidean":
            raise ValueError("LangevinSteinKernel requires a Euclidean score")
        if sigma <= 0:
            raise ValueError("bandwidth sigma must be positive")
        self.score = score
        self.sigma = float(sigma)
        self.dim = int(dim) if dim is not None else score.dim
        if self.dim != score.dim:
            raise ValueError("kernel/score dimension mismatch")

    def _validate(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise ValueError(f"points have dimension {X.shape[1]}, kernel is {self.dim}")
        if not np.all(np.isfinite(X)):
            bad = int(np.flatnonzero(~np.isfinite(X).all(axis=1))[0])
            raise ValueError(f"point {bad} contains non-finite entries")
        return X

    def base(self, x: np.ndarray, y: np.ndarray) -> float:
        """Base kernel value exp(-||x - y||^2 / (2 sigma^2))."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return float(np.exp(-np.sum((x - y) ** 2) / (2.0 * self.sigma**2)))

    def _grad_x(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return -(x - y) * self.base(x, y) / self.sigma**2

    def _grad_y(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x - y) * self.base(x, y) / self.sigma**2

    def _cross_diag(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Per-coordinate mixed second derivatives d^2 k / dx_i dy_i."""
        k = self.base(x, y)
        return k * (1.0 / self.sigma**2 - (x - y) ** 2 / self.sigma**4)

    def cross(self, Xa: np.ndarray, Xb: np.ndarray) -> np.ndarray:
        """Stein-kernel matrix [K0(xa_i, xb_j)] of shape (na, nb)."""
        Xa = self._validate(Xa)
        Xb = self._validate(Xb)
        Sa = self.score(Xa)
        Sb = self.score(Xb)
        s2 = self.sigma**2
        sq = (
            np.sum(Xa**2, axis=1)[:, None]
            + np.sum(Xb**2, axis=1)[None, :]
            - 2.0 * (Xa @ Xb.T)
        )
        np.maximum(sq, 0.0, out=sq)
        k = np.exp(-sq / (2.0 * s2))
        dots = Sa @ Sb.T
        # <xa_i - xb_j, s(xb_j)> and <xa_i - xb_j, s(xa_i)> via rank-one pieces
        qa = np.einsum("ij,ij->i", Xa, Sa)
        qb = np.einsum("ij,ij->i", Xb, Sb)
        x_dot_sb = Xa @ Sb.T
        sa_dot_y = Sa @ Xb.T
        grad_terms = (qa[:, None] - sa_dot_y) - (x_dot_sb - qb[None, :])
        trace_term = self.dim / s2 - sq / s2**2
        return k * (dots + grad_terms / s2 + trace_term)

    def pair(self, x: np.ndarray, y: np.ndarray) -> float:
        """Single Stein-kernel evaluation K0(x, y)."""
        return float(self.cross(np.atleast_2d(x), np.atleast_2d(y))[0, 0])


class DirectionalSteinKernel:
    """Stein kernel on S^{d-1} in spherical coordinates.

    The base kernel ``exp(gamma <x(theta), x(theta~)>)`` is differentiated
    through the coordinate map by the chain rule; sine/cosine tables and the
    coordinate Jacobian are computed once per batch of points.
    """

    domain = "spherical"

    def __init__(self, score: ScoreModel, gamma: float, dim: int | None = None):
        if score.domain != "spherical":
            raise ValueError("DirectionalSteinKernel requires a spherical score")
        if gamma <= 0:
            raise ValueError("gamma must be positive")
        self.score = score
        self.gamma = float(gamma)
        self.dim = int(dim) if dim is not None else score.dim
        if self.dim != score.dim:
            raise ValueError("kernel/score dimension mismatch")
        if self.dim < 2:
            raise ValueError("sphere dimension d must be >= 2")

    def _validate(self, T: np.ndarray) -> np.ndarray:
        T = np.atleast_2d(np.asarray(T, dtype=float))
        if T.shape[1] != self.dim - 1:
            raise ValueError(
                f"angular points have length {T.shape[1]}, expected {self.dim - 1}"
            )
        if not np.all(np.isfinite(T)):
            bad = int(np.flatnonzero(~np.isfinite(T).all(axis=1))[0])
            raise ValueError(f"point {bad} contains non-finite angles")
        _check_angular_box(T, self.dim)
        return T

    def base(self, theta: np.ndarray, theta_t: np.ndarray) -> float:
        """Base kernel value exp(gamma <x(theta), x(theta~)>)."""
        x = sphere_to_cartesian(np.asarray(theta, dtype=float), self.dim)
        xt = sphere_to_cartesian(np.asarray(theta_t, dtype=float), self.dim)
        return float(np.exp(self.gamma * np.dot(x, xt)))

    def _dk_dtheta(self, theta: np.ndarray, theta_t: np.ndarray) -> np.ndarray:
        k = self.base(theta, theta_t)
        jac = sphere_jacobian(theta, self.dim)
        xt = sphere_to_cartesian(theta_t, self.dim)
        return self.gamma * k * (jac.T @ xt)

    def _dk_dtheta_t(self, theta: np.ndarray, theta_t: np.ndarray) -> np.ndarray:
        return self._dk_dtheta(theta_t, theta)

    def _d2k_diag(self, theta: np.ndarray, theta_t: np.ndarray) -> np.ndarray:
        """Per-angle mixed second derivatives d^2 k / dtheta_a dtheta~_a."""
        k = self.base(theta, theta_t)
        x = sphere_to_cartesian(theta, self.dim)
        xt = sphere_to_cartesian(theta_t, self.dim)
        ja = sphere_jacobian(theta, self.dim)
        jb = sphere_jacobian(theta_t, self.dim)
        m1 = ja.T @ xt
        m2 = jb.T @ x
        frob = np.einsum("ka,ka->a", ja, jb)
        return self.gamma * k * (self.gamma * m1 * m2 + frob)

    def cross(self, Ta: np.ndarray, Tb: np.ndarray) -> np.ndarray:
        """Stein-kernel matrix [K0(theta_i, theta~_j)] of shape (na, nb)."""
        Ta = self._validate(Ta)
        Tb = self._validate(Tb)
        Xa = sphere_to_cartesian(Ta, self.dim)
        Xb = sphere_to_cartesian(Tb, self.dim)
        Sa = self.score(Ta)
        Sb = self.score(Tb)
        Ja = sphere_jacobian(Ta, self.dim)
        Jb = sphere_jacobian(Tb, self.dim)
        g = self.gamma
        k = np.exp(g * (Xa @ Xb.T))
        dots = Sa @ Sb.T
        # m1[i, j, a] = <dx/dtheta_a at theta_i, x(theta~_j)>
        m1 = np.tensordot(Ja, Xb, axes=([1], [1])).transpose(0, 2, 1)
        # m2[i, j, a] = <x(theta_i), dx~/dtheta~_a at theta~_j>
        m2 = np.tensordot(Xa, Jb, axes=([1], [1]))
        score_grad = np.einsum("ia,ija->ij", Sa, m2) + np.einsum(
            "ja,ija->ij", Sb, m1
        )
        na, nb = k.shape
        frob = Ja.reshape(na, -1) @ Jb.reshape(nb, -1).T
        second = g * np.einsum("ija,ija->ij", m1, m2) + frob
        return k * (dots + g * (score_grad + second))

    def pair(self, theta: np.ndarray, theta_t: np.ndarray) -> float:
        """Single Stein-kernel evaluation K0(theta, theta~)."""
        return float(self.cross(np.atleast_2d(theta), np.atleast_2d(theta_t))[0, 0])


SteinKernel = LangevinSteinKernel | DirectionalSteinKernel


def build_stein_kernel(base: BaseKernelSpec, score: ScoreModel) -> SteinKernel:
    """Pair a base-kernel spec with a score model into a Stein kernel."""
    if base.kind == "gaussian":
        if score.domain != "euclidean":
            raise ValueError("gaussian base kernel requires a Euclidean score")
        return LangevinSteinKernel(score, base.sigma)
    if score.domain != "spherical":
        raise ValueError("vmf base kernel requires a spherical score")
    return DirectionalSteinKernel(score, base.gamma)


def langevin_stein_eval(
    score: ScoreModel, sigma: float, x: np.ndarray, y: np.ndarray
) -> float:
    """Evaluate the Euclidean Stein kernel at a single pair of points."""
    return LangevinSteinKernel(score, sigma).pair(x, y)


def directional_stein_eval(
    score: ScoreModel, gamma: float, theta: np.ndarray, theta_t: np.ndarray
) -> float:
    """Evaluate the spherical Stein kernel at a single pair of angle vectors."""
    return DirectionalSteinKernel(score, gamma).pair(theta, theta_t)


# ---------------------------------------------------------------------------
# Derivative verification


def _rel_err(analytic: float, approx: float) -> float:
    return abs(analytic - approx) / max(1.0, abs(analytic))


def verify_kernel_gradients(
    kernel: SteinKernel,
    pairs: Sequence[tuple[np.ndarray, np.ndarray]],
    step: float = 1e-5,
) -> float:
    """Check every analytic derivative inside a Stein kernel by central differences.

    For each point pair, compares the analytic first derivatives of the base
    kernel (in both arguments) and the mixed second derivatives against
    second-order central differences; for spherical kernels the gradient of
    the log coordinate-Jacobian is checked as well.  Returns the maximum
    relative error, with magnitudes below 1 compared absolutely.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    worst = 0.0
    for x, y in pairs:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if isinstance(kernel, LangevinSteinKernel):
            worst = max(worst, _verify_langevin_pair(kernel, x, y, step))
        else:
            worst = max(worst, _verify_directional_pair(kernel, x, y, step))
    return worst


def _verify_langevin_pair(
    kernel: LangevinSteinKernel, x: np.ndarray, y: np.ndarray, h: float
) -> float:
    worst = 0.0
    gx = kernel._grad_x(x, y)
    gy = kernel._grad_y(x, y)
    cd = kernel._cross_diag(x, y)
    for i in range(kernel.dim):
        e = np.zeros(kernel.dim)
        e[i] = h
        fd_gx = (kernel.base(x + e, y) - kernel.base(x - e, y)) / (2 * h)
        fd_gy = (kernel.base(x, y + e) - kernel.base(x, y - e)) / (2 * h)
        fd_cd = (
            kernel.base(x + e, y + e)
            - kernel.base(x + e, y - e)
            - kernel.base(x - e, y + e)
            + kernel.base(x - e, y - e)
        ) / (4 * h * h)
        worst = max(
            worst, _rel_err(gx[i], fd_gx), _rel_err(gy[i], fd_gy), _rel_err(cd[i], fd_cd)
        )
    return worst


def _verify_directional_pair(
    kernel: DirectionalSteinKernel, ta: np.ndarray, tb: np.ndarray, h: float
) -> float:
    worst = 0.0
    d = kernel.dim
    da = kernel._dk_dtheta(ta, tb)
    db = kernel._dk_dtheta_t(ta, tb)
    dd = kernel._d2k_diag(ta, tb)
    lj = log_jacobian_grad(ta, d)
    for a in range(d - 1):
        e = np.zeros(d - 1)
        e[a] = h
        fd_da = (kernel.base(ta + e, tb) - kernel.base(ta - e, tb)) / (2 * h)
        fd_db = (kernel.base(ta, tb + e) - kernel.base(ta, tb - e)) / (2 * h)
        fd_dd = (
            kernel.base(ta + e, tb + e)
            - kernel.base(ta + e, tb - e)
            - kernel.base(ta - e, tb + e)
            + kernel.base(ta - e, tb - e)
        ) / (4 * h * h)
        worst = max(
            worst,
            _rel_err(da[a], fd_da),
            _rel_err(db[a], fd_db),
            _rel_err(dd[a], fd_dd),
        )
        if a < d - 2:  # log-Jacobian only involves the polar angles
            fd_lj = (log_jacobian(ta + e, d) - log_jacobian(ta - e, d)) / (2 * h)
            worst = max(worst, _rel_err(lj[a], float(fd_lj)))
    return worst


def median_heuristic(X: np.ndarray) -> float:
    """Median pairwise Euclidean distance; a common bandwidth starting point."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    if n < 2:
        raise ValueError("median heuristic needs at least two points")
    sq = (
        np.sum(X**2, axis=1)[:, None]
        + np.sum(X**2, axis=1)[None, :]
        - 2.0 * (X @ X.T)
    )
    iu = np.triu_indices(n, k=1)
    return float(np.median(np.sqrt(np.maximum(sq[iu], 0.0))))
