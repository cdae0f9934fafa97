"""Seeded samplers for the target and alternative distributions.

All samplers are pure functions of an :class:`RngStream`: calling a sampler
twice with the same ``(seed, stream)`` pair returns identical draws, and
distinct stream ids give independent sequences.  Concurrent use therefore
only requires handing each worker its own stream id.

Spherical samples are returned in spherical coordinates matching the
coordinate map of :func:`ksdgof.kernels.sphere_to_cartesian`; the inverse map
lives here (:func:`cartesian_to_sphere`) so the convention cannot drift.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .kernels import ScoreModel, log_jacobian_grad

__all__ = [
    "RngStream",
    "VmfSpec",
    "sample_gaussian",
    "sample_uniform_sphere",
    "sample_vmf",
    "score_gaussian",
    "score_uniform_sphere",
    "cartesian_to_sphere",
    "read_points_csv",
]

POLE_NUDGE = 1e-12  # shift applied when a sample lands exactly on a pole


@dataclass(frozen=True)
class RngStream:
    """A (seed, stream id) pair naming one deterministic random sequence."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        return np.random.default_rng([self.seed & 0xFFFFFFFFFFFFFFFF, self.stream])


def _as_generator(rng: RngStream | np.random.Generator) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng


@dataclass(frozen=True)
class VmfSpec:
    """von Mises-Fisher parameters: unit mean direction and concentration."""

    mu: np.ndarray
    kappa: float

    def __post_init__(self) -> None:
        mu = np.asarray(self.mu, dtype=float)
        object.__setattr__(self, "mu", mu)
        if mu.ndim != 1 or mu.size < 2:
            raise ValueError("mu must be a vector of length >= 2")
        if abs(np.linalg.norm(mu) - 1.0) > 1e-12:
            raise ValueError("mu must be a unit vector")
        if self.kappa < 0:
            raise ValueError("kappa must be nonnegative")

    @property
    def d(self) -> int:
        return self.mu.size


def sample_gaussian(
    mean: np.ndarray | float,
    sigma: float,
    n: int,
    rng: RngStream | np.random.Generator,
) -> np.ndarray:
    """Draw n i.i.d. samples from N(mean, sigma^2 I); returns shape (n, d)."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    gen = _as_generator(rng)
    return mean[None, :] + sigma * gen.standard_normal((n, mean.size))


def _nudge_poles(theta: np.ndarray, d: int) -> np.ndarray:
    """Shift exact polar-angle hits off {0, pi} so cotangent scores stay finite."""
    if d >= 3:
        polar = theta[:, : d - 2]
        polar[polar == 0.0] = POLE_NUDGE
        polar[polar == np.pi] = np.pi - POLE_NUDGE
    last = theta[:, d - 2] % (2.0 * np.pi)
    last[last >= 2.0 * np.pi] = 0.0  # tiny negatives can round up to 2*pi
    theta[:, d - 2] = last
    return theta


def cartesian_to_sphere(x: np.ndarray, d: int | None = None) -> np.ndarray:
    """Invert the spherical coordinate map for points on S^{d-1}.

    The first d-2 angles are recovered by successive arccosines against the
    running sine product; the last angle comes from atan2 of the final two
    coordinates and is mapped into [0, 2*pi).
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    d = x.shape[1] if d is None else d
    if x.shape[1] != d or d < 2:
        raise ValueError("points must be Cartesian vectors of length d >= 2")
    n = x.shape[0]
    theta = np.empty((n, d - 1))
    residual = np.ones(n)  # prod_{j<i} sin(theta_j), always >= 0
    for i in range(d - 2):
        safe = np.where(residual > 0.0, residual, 1.0)
        ratio = np.where(residual > 0.0, x[:, i] / safe, 1.0)
        theta[:, i] = np.arccos(np.clip(ratio, -1.0, 1.0))
        residual = residual * np.sin(theta[:, i])
    theta[:, d - 2] = np.arctan2(x[:, d - 1], x[:, d - 2]) % (2.0 * np.pi)
    theta = _nudge_poles(theta, d)
    return theta[0] if single else theta


def sample_uniform_sphere(
    d: int, n: int, rng: RngStream | np.random.Generator
) -> np.ndarray:
    """Draw n points uniformly on S^{d-1}; returns angles of shape (n, d-1)."""
    if d < 2:
        raise ValueError("d must be >= 2")
    gen = _as_generator(rng)
    x = gen.standard_normal((n, d))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return cartesian_to_sphere(x, d)


def _vmf_radial(kappa: float, d: int, n: int, gen: np.random.Generator) -> np.ndarray:
    """Draw n values of <mu, x> by the beta-envelope rejection scheme."""
    dim = d - 1
    b = dim / (np.sqrt(4.0 * kappa**2 + dim**2) + 2.0 * kappa)
    x0 = (1.0 - b) / (1.0 + b)
    c = kappa * x0 + dim * np.log(1.0 - x0**2)
    out = np.empty(n)
    filled = 0
    while filled < n:
        todo = n - filled
        z = gen.beta(dim / 2.0, dim / 2.0, size=todo)
        w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z)
        u = gen.random(todo)
        accept = kappa * w + dim * np.log1p(-x0 * w) - c >= np.log(u)
        taken = w[accept]
        out[filled : filled + taken.size] = taken
        filled += taken.size
    return out


def sample_vmf(
    spec: VmfSpec, n: int, rng: RngStream | np.random.Generator
) -> np.ndarray:
    """Draw n von Mises-Fisher samples; returns angles of shape (n, d-1).

    Uses the exact tangent-radial rejection sampler: the radial component
    ``w = <mu, x>`` comes from a beta-envelope accept/reject step and the
    tangent direction is uniform on the orthogonal complement of ``mu``.
    At ``kappa = 0`` the scheme reduces to the uniform sphere distribution.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = _as_generator(rng)
    d = spec.d
    w = _vmf_radial(spec.kappa, d, n, gen)
    # tangent directions: Gaussian projected orthogonal to mu, normalized
    v = gen.standard_normal((n, d))
    v -= np.outer(v @ spec.mu, spec.mu)
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    x = w[:, None] * spec.mu[None, :] + np.sqrt(np.maximum(1.0 - w**2, 0.0))[:, None] * v
    return cartesian_to_sphere(x, d)


def score_gaussian(mean: np.ndarray | float, sigma: float) -> ScoreModel:
    """Score of N(mean, sigma^2 I): x -> -(x - mean) / sigma^2."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    s2 = float(sigma) ** 2

    def grad(x: np.ndarray) -> np.ndarray:
        return -(x - mean[None, :]) / s2

    return ScoreModel(domain="euclidean", dim=mean.size, grad=grad)


def score_uniform_sphere(d: int) -> ScoreModel:
    """Angular score of the uniform sphere density: the log-Jacobian gradient."""
    if d < 2:
        raise ValueError("d must be >= 2")

    def grad(theta: np.ndarray) -> np.ndarray:
        return log_jacobian_grad(theta, d)

    return ScoreModel(domain="spherical", dim=d, grad=grad)


# ---------------------------------------------------------------------------
# CSV ingestion


class CsvFormatError(ValueError):
    """Malformed sample CSV; the message carries the offending row/column."""


def read_points_csv(path: str) -> tuple[str, int, np.ndarray]:
    """Read externally generated samples from CSV.

    Expected layout: a ``coord_system,d`` header line, one metadata row
    (``cartesian`` or ``angular``, then the ambient dimension d), then one
    sample per row.  Cartesian rows carry d values; angular rows carry d-1.
    Returns ``(coord_system, d, points)``.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row and not row[0].lstrip().startswith("#")]
    if not rows:
        raise CsvFormatError(f"{path}: empty data file")
    header = [c.strip() for c in rows[0]]
    if header[:2] != ["coord_system", "d"]:
        raise CsvFormatError(f"{path}: row 1 must be the header 'coord_system,d'")
    if len(rows) < 2:
        raise CsvFormatError(f"{path}: missing metadata row after the header")
    meta = [c.strip() for c in rows[1]]
    if len(meta) < 2 or meta[0] not in ("cartesian", "angular"):
        raise CsvFormatError(
            f"{path}: row 2 must be '<cartesian|angular>,<d>', got {rows[1]!r}"
        )
    try:
        d = int(meta[1])
    except ValueError as exc:
        raise CsvFormatError(f"{path}: row 2 column 2: d must be an integer") from exc
    if len(rows) < 3:
        raise CsvFormatError(f"{path}: no sample rows")
    width = d if meta[0] == "cartesian" else d - 1
    data = np.empty((len(rows) - 2, width))
    for r, row in enumerate(rows[2:], start=3):
        if len(row) != width:
            raise CsvFormatError(
                f"{path}: row {r}: expected {width} values, got {len(row)}"
            )
        for c, cell in enumerate(row, start=1):
            try:
                data[r - 3, c - 1] = float(cell)
            except ValueError as exc:
                raise CsvFormatError(
                    f"{path}: row {r} column {c}: not a number: {cell!r}"
                ) from exc
    if not np.all(np.isfinite(data)):
        r, c = np.argwhere(~np.isfinite(data))[0]
        raise CsvFormatError(f"{path}: row {int(r) + 3} column {int(c) + 1}: non-finite value")
    return meta[0], d, data
