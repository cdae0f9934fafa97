"""Wild bootstrap and the complete goodness-of-fit test procedures.

Under the null the scaled V-statistic ``n * D^2`` converges to a weighted
chi-square limit whose quantiles are intractable; the wild bootstrap
replaces it with the sign-randomized quadratic form

    B^2 = (1/n^2) * R^T G R,   R_i i.i.d. Rademacher,

whose scaled draws share that limit.  The test computes the statistic, the
empirical ``1 - alpha`` quantile of ``c_b`` scaled bootstrap draws, and
rejects on strict exceedance.  The Nystrom path applies the same recipe to
the low-rank quadratic form ``(1/n^2) (K_mn R)^T K_mm^+ (K_mn R)`` using one
landmark draw shared between the statistic and every bootstrap replicate.

Replicate b draws its signs from the dedicated stream ``(seed, b)``, so
replicates can be evaluated in any order (or concurrently) with identical
results; a fixed seed yields a bitwise-identical TestResult.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .estimators import (
    DEFAULT_PINV_TOL,
    NystromSketch,
    build_sketch,
    gram_full,
    ksd_nystrom,
    ksd_v_statistic,
    sample_landmarks,
)
from .kernels import SteinKernel
from .samplers import RngStream

__all__ = [
    "TestConfig",
    "TestResult",
    "PhaseTimings",
    "draw_rademacher",
    "replicate_signs",
    "wild_bootstrap_stat",
    "nystrom_bootstrap_stat",
    "empirical_quantile",
    "gof_test",
]

# fixed stream ids hanging off TestConfig.seed
_STREAM_LANDMARKS = 1
_STREAM_SIGNS = 2


def draw_rademacher(n: int, rng: RngStream | np.random.Generator) -> np.ndarray:
    """n i.i.d. signs, +1 or -1 with probability 1/2 each."""
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    signs = gen.integers(0, 2, size=n).astype(np.float64)
    signs *= 2.0
    signs -= 1.0
    return signs


def _replicate_key(seed: int) -> np.ndarray:
    return np.random.SeedSequence(
        [seed & 0xFFFFFFFFFFFFFFFF, _STREAM_SIGNS]
    ).generate_state(2, np.uint64)


def _replicate_words(n: int) -> int:
    """64-bit words per replicate, padded to whole counter blocks of 4."""
    words = (n + 63) // 64
    return ((words + 3) // 4) * 4


def _words_to_signs(words: np.ndarray, n: int) -> np.ndarray:
    bits = np.unpackbits(words.view(np.uint8).reshape(words.shape[0], -1), axis=1)
    signs = bits[:, :n].astype(np.float64)
    signs *= 2.0
    signs -= 1.0
    return signs


def replicate_signs(n: int, seed: int, b: int) -> np.ndarray:
    """Rademacher signs of bootstrap replicate b for a given test seed.

    Replicate b owns the counter block ``b * words/4`` of a counter-based
    generator keyed by (seed, fixed sign-stream tag), so any replicate can be
    regenerated independently, in any order, and a batched draw of all
    replicates is bitwise identical to stacking these vectors.
    """
    w = _replicate_words(n)
    bg = np.random.Philox(key=_replicate_key(seed), counter=[b * (w // 4), 0, 0, 0])
    return _words_to_signs(bg.random_raw(w)[None, :], n)[0]


def _sign_matrix(n: int, c_b: int, seed: int) -> np.ndarray:
    w = _replicate_words(n)
    words = np.random.Philox(key=_replicate_key(seed)).random_raw(c_b * w)
    return _words_to_signs(words.reshape(c_b, w), n)


def wild_bootstrap_stat(G: np.ndarray, signs: np.ndarray) -> float:
    """One bootstrap draw (1/n^2) R^T G R from the full Gram matrix."""
    G = np.asarray(G, dtype=float)
    signs = np.asarray(signs, dtype=float)
    n = G.shape[0]
    if signs.shape != (n,):
        raise ValueError(f"sign vector has length {signs.size}, Gram is {n}x{n}")
    return float(signs @ G @ signs) / n**2


def nystrom_bootstrap_stat(
    sketch: NystromSketch, signs: np.ndarray, n: int | None = None
) -> float:
    """One accelerated bootstrap draw from the landmark sketch.

    Evaluates ``(1/n^2) (K_mn R)^T K_mm^+ (K_mn R)`` as a squared norm of the
    pseudoinverse factor applied to ``K_mn R``; the full Gram matrix is never
    formed and the cost is O(nm + m^2).
    """
    if n is not None and n != sketch.n:
        raise ValueError(f"sketch was built for n={sketch.n}, got n={n}")
    n = sketch.n
    signs = np.asarray(signs, dtype=float)
    if signs.shape != (n,):
        raise ValueError(f"sign vector has length {signs.size}, expected {n}")
    proj = sketch.pinv_factor @ (sketch.k_mn @ signs)
    return float(proj @ proj) / n**2


def empirical_quantile(draws: np.ndarray, level: float) -> float:
    """The ceil(level * N)-th order statistic (1-indexed) of the draws.

    Ties resolve to the higher order statistic, which is the conservative
    convention for a rejection threshold.  A small slack keeps products like
    0.95 * 500 from being pushed past their exact integer value by rounding.
    """
    draws = np.asarray(draws, dtype=float)
    if draws.size == 0:
        raise ValueError("draws must be nonempty")
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    k = math.ceil(level * draws.size - 1e-9)
    k = min(max(k, 1), draws.size)
    return float(np.sort(draws)[k - 1])


@dataclass(frozen=True)
class TestConfig:
    """Parameters of a single goodness-of-fit test run."""

    alpha: float = 0.01
    c_b: int = 1000
    method: str = "exact"  # "exact" | "nystrom"
    m: int | None = None
    pinv_tol: float = DEFAULT_PINV_TOL
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.c_b < 1:
            raise ValueError("c_b must be >= 1")
        if self.method not in ("exact", "nystrom"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "nystrom" and (self.m is None or self.m < 1):
            raise ValueError("method='nystrom' requires m >= 1")


@dataclass(frozen=True)
class PhaseTimings:
    """Wall-clock seconds spent on the statistic and on the bootstrap."""

    statistic_s: float
    bootstrap_s: float


@dataclass(frozen=True)
class TestResult:
    statistic: float  # n * squared-KSD estimate
    threshold: float  # empirical 1-alpha quantile of the scaled draws
    reject: bool  # statistic > threshold (strict)
    bootstrap_draws: np.ndarray = field(repr=False)  # length c_b, scaled by n
    wall_times: PhaseTimings | None = None


def gof_test(kernel: SteinKernel, X: np.ndarray, cfg: TestConfig) -> TestResult:
    """Run the wild-bootstrap goodness-of-fit test on samples X.

    The exact path scores ``n * V-statistic`` against scaled draws
    ``n * (1/n^2) R^T G R``.  The Nystrom path draws one landmark set, reuses
    it for the statistic and for all bootstrap replicates, and never builds
    the full Gram matrix.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    if n < 2:
        raise ValueError("need at least two samples")

    t0 = time.perf_counter()
    if cfg.method == "exact":
        G = gram_full(kernel, X)
        statistic = n * ksd_v_statistic(G).value
        t1 = time.perf_counter()
        signs = _sign_matrix(n, cfg.c_b, cfg.seed)
        # row b of signs @ G dotted with row b of signs = R_b^T G R_b
        draws = np.einsum("bi,bi->b", signs @ G, signs) / n
    else:
        m = cfg.m
        indices = sample_landmarks(n, m, RngStream(cfg.seed, _STREAM_LANDMARKS))
        sketch = build_sketch(kernel, X, indices, cfg.pinv_tol)
        statistic = n * ksd_nystrom(sketch).value
        t1 = time.perf_counter()
        signs = _sign_matrix(n, cfg.c_b, cfg.seed)
        proj = sketch.pinv_factor @ (sketch.k_mn @ signs.T)  # (r, c_b)
        draws = np.einsum("rb,rb->b", proj, proj) / n
    threshold = empirical_quantile(draws, 1.0 - cfg.alpha)
    t2 = time.perf_counter()

    return TestResult(
        statistic=float(statistic),
        threshold=float(threshold),
        reject=bool(statistic > threshold),
        bootstrap_draws=draws,
        wall_times=PhaseTimings(statistic_s=t1 - t0, bootstrap_s=t2 - t1),
    )
