"""Why the landmark acceleration exists: same decisions, fraction of the time.

The exact test pays O(n^2) for the Gram matrix and O(c_b n^2) for the
bootstrap.  The accelerated path projects onto m feature vectors sampled
with replacement, paying O(nm + m^3) per pass, and its statistic can never
exceed the exact one (projections shrink norms).
"""

import math

from ksdgof import (
    LangevinSteinKernel,
    RngStream,
    TestConfig,
    gof_test,
    sample_gaussian,
    score_gaussian,
)

kernel = LangevinSteinKernel(score_gaussian(0.0, 1.0), sigma=1.0, dim=1)

for n in (500, 2000, 5000):
    X = sample_gaussian(0.0, 1.0, n, RngStream(seed=n))
    m = math.ceil(math.sqrt(n))
    exact = gof_test(kernel, X, TestConfig(alpha=0.05, c_b=200, method="exact", seed=3))
    fast = gof_test(
        kernel, X, TestConfig(alpha=0.05, c_b=200, method="nystrom", m=m, seed=3)
    )
    t_exact = exact.wall_times.statistic_s + exact.wall_times.bootstrap_s
    t_fast = fast.wall_times.statistic_s + fast.wall_times.bootstrap_s
    assert fast.statistic <= exact.statistic + 1e-10  # projection shrinks norms
    print(
        f"n={n:5d} m={m:3d}: exact {t_exact * 1e3:8.1f} ms "
        f"(stat {exact.statistic:.3f}) | nystrom {t_fast * 1e3:7.1f} ms "
        f"(stat {fast.statistic:.3f}) | speedup {t_exact / t_fast:6.1f}x"
    )
