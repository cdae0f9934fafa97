"""Command-line harness: single tests, level/power/runtime sweeps, diagnostics.

Subcommands
-----------
``test``   run one goodness-of-fit test on CSV data or freshly drawn samples
           (exit code 0 = fail to reject, 1 = reject, 2 = error)
``level``  rejection rate under the null over a grid of sample sizes
``power``  rejection rate under an alternative (vMF concentration grid or
           Gaussian mean shift)
``bench``  wall-time comparison of the exact and Nystrom test paths
``diag``   effective-dimension curve and spectrum decay label

Experiments are declared by an :class:`ExperimentSpec`, assembled from an
optional flat ``key = value`` config file plus command-line flags (flags
win).  Every random quantity derives from the single ``seed``: each grid
cell and repetition owns its own substream, so results are independent of
execution order and the emitted CSV is reproducible.  ``KSD_THREADS``
bounds the worker count used for repetitions (default: machine cores).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats as scipy_stats

from .bootstrap import TestConfig, gof_test
from .diagnostics import spectrum_summary, suggest_m
from .estimators import gram_full
from .kernels import BaseKernelSpec, SteinKernel, build_stein_kernel
from .samplers import (
    CsvFormatError,
    VmfSpec,
    cartesian_to_sphere,
    read_points_csv,
    sample_gaussian,
    sample_uniform_sphere,
    sample_vmf,
    score_gaussian,
    score_uniform_sphere,
)

__all__ = [
    "ExperimentSpec",
    "ResultRow",
    "RESULT_HEADER",
    "run_level",
    "run_power",
    "run_bench",
    "write_rows",
    "main",
]

# Result schema v1; the header bytes are pinned by a golden-file test and
# any change to them is a schema version bump.
RESULT_SCHEMA_VERSION = 1
RESULT_HEADER = (
    "method,n,m,kappa,rep,reject,statistic,threshold,"
    "runtime_ms_stat,runtime_ms_bootstrap"
)

# substream tags hanging off ExperimentSpec.seed
_TAG_DATA = 10
_TAG_TEST = 11


class ConfigError(ValueError):
    """Invalid experiment configuration; message identifies the field."""


@dataclass(frozen=True)
class TargetSpec:
    kind: str  # "gaussian" | "uniform_sphere"
    mean: float = 0.0
    sigma: float = 1.0
    d: int = 1


@dataclass(frozen=True)
class AlternativeSpec:
    kind: str  # "gaussian" | "vmf"
    mean: float = 0.0
    sigma: float = 1.0
    kappa: float | None = None  # None: take kappa from the grid


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str  # "level" | "power" | "bench"
    target: TargetSpec
    kernel: BaseKernelSpec
    alternative: AlternativeSpec | None = None
    n_grid: tuple[int, ...] = (50, 100, 200, 400)
    kappa_grid: tuple[float, ...] = (0.01, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
    alpha: float = 0.01
    c_b: int = 1000
    reps: int = 600
    methods: tuple[str, ...] = ("exact", "nystrom")
    m_rule: str = "sqrt_n"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("level", "power", "bench"):
            raise ConfigError(f"kind: unknown experiment kind {self.kind!r}")
        if not self.n_grid:
            raise ConfigError("n_grid: must be nonempty")
        if self.kind == "power" and not self.kappa_grid:
            raise ConfigError("kappa_grid: must be nonempty")
        if self.reps < 1:
            raise ConfigError("reps: must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha: must lie in (0, 1)")
        for mth in self.methods:
            if mth not in ("exact", "nystrom"):
                raise ConfigError(f"methods: unknown method {mth!r}")
        _parse_m_rule(self.m_rule)  # validate eagerly


@dataclass(frozen=True)
class ResultRow:
    method: str
    n: int
    m: int | None
    kappa: float
    rep: int
    reject: int
    statistic: float
    threshold: float
    runtime_ms_stat: float
    runtime_ms_bootstrap: float

    def to_csv(self) -> str:
        m = "" if self.m is None else str(self.m)
        return (
            f"{self.method},{self.n},{m},{self.kappa!r},{self.rep},{self.reject},"
            f"{self.statistic!r},{self.threshold!r},"
            f"{self.runtime_ms_stat:.3f},{self.runtime_ms_bootstrap:.3f}"
        )


# ---------------------------------------------------------------------------
# Spec parsing


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc


def parse_target(text: str) -> TargetSpec:
    kind, _, rest = text.partition(":")
    if kind == "gaussian":
        vals = _parse_floats(rest) if rest else []
        if len(vals) not in (2, 3):
            raise ConfigError(
                f"target: gaussian takes 'mean,sigma[,d]', got {text!r}"
            )
        d = int(vals[2]) if len(vals) == 3 else 1
        if vals[1] <= 0 or d < 1:
            raise ConfigError("target: gaussian needs sigma > 0 and d >= 1")
        return TargetSpec(kind="gaussian", mean=vals[0], sigma=vals[1], d=d)
    if kind == "uniform_sphere":
        try:
            d = int(rest)
        except ValueError as exc:
            raise ConfigError(f"target: uniform_sphere takes ':d', got {text!r}") from exc
        if d < 2:
            raise ConfigError("target: uniform_sphere needs d >= 2")
        return TargetSpec(kind="uniform_sphere", d=d)
    raise ConfigError(f"target: unknown kind {kind!r}")


def parse_kernel(text: str) -> BaseKernelSpec:
    kind, _, rest = text.partition(":")
    try:
        value = float(rest)
    except ValueError as exc:
        raise ConfigError(f"kernel: takes '<kind>:<parameter>', got {text!r}") from exc
    try:
        if kind == "gaussian":
            return BaseKernelSpec(kind="gaussian", sigma=value)
        if kind == "vmf":
            return BaseKernelSpec(kind="vmf", gamma=value)
    except ValueError as exc:
        raise ConfigError(f"kernel: {exc}") from exc
    raise ConfigError(f"kernel: unknown kind {kind!r}")


def parse_alternative(text: str) -> AlternativeSpec:
    kind, _, rest = text.partition(":")
    if kind == "gaussian":
        vals = _parse_floats(rest)
        if len(vals) != 2 or vals[1] <= 0:
            raise ConfigError(f"alternative: gaussian takes 'mean,sigma', got {text!r}")
        return AlternativeSpec(kind="gaussian", mean=vals[0], sigma=vals[1])
    if kind == "vmf":
        kappa = float(rest) if rest else None
        if kappa is not None and kappa < 0:
            raise ConfigError("alternative: vmf kappa must be >= 0")
        return AlternativeSpec(kind="vmf", kappa=kappa)
    raise ConfigError(f"alternative: unknown kind {kind!r}")


def _parse_m_rule(text: str):
    if text == "sqrt_n":
        return lambda n: max(1, math.ceil(math.sqrt(n)))
    if text == "four_sqrt_n":
        return lambda n: max(1, 4 * math.ceil(math.sqrt(n)))
    head, _, rest = text.partition(":")
    if head == "fixed":
        try:
            m = int(rest)
        except ValueError as exc:
            raise ConfigError(f"m_rule: fixed takes ':m', got {text!r}") from exc
        if m < 1:
            raise ConfigError("m_rule: fixed m must be >= 1")
        return lambda n: m
    if head == "auto":
        regime, _, gamma_text = rest.partition(":")
        if regime == "exponential":
            return lambda n: suggest_m(n, "exponential")
        if regime == "polynomial":
            try:
                gamma = float(gamma_text)
            except ValueError as exc:
                raise ConfigError(
                    f"m_rule: auto:polynomial takes ':gamma', got {text!r}"
                ) from exc
            return lambda n: suggest_m(n, "polynomial", gamma)
        raise ConfigError(f"m_rule: unknown auto regime {regime!r}")
    raise ConfigError(f"m_rule: unknown rule {text!r}")


def build_kernel(target: TargetSpec, kernel: BaseKernelSpec) -> SteinKernel:
    """Combine a target with a base kernel into the matching Stein kernel."""
    if target.kind == "gaussian":
        score = score_gaussian(np.full(target.d, target.mean), target.sigma)
    else:
        score = score_uniform_sphere(target.d)
    return build_stein_kernel(kernel, score)


# ---------------------------------------------------------------------------
# Config file


def read_config(path: str) -> dict[str, str]:
    """Read a flat ``key = value`` config file; '#' starts a comment."""
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            if not key:
                raise ConfigError(f"{path}:{lineno}: empty key")
            values[key] = value.strip()
    return values


_CONFIG_KEYS = {
    "target",
    "kernel",
    "alternative",
    "n_grid",
    "kappa_grid",
    "alpha",
    "c_b",
    "reps",
    "methods",
    "m_rule",
    "seed",
}


def spec_from_options(kind: str, options: dict[str, str]) -> ExperimentSpec:
    """Build an ExperimentSpec from merged config/flag string options."""
    unknown = set(options) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
    if "target" not in options:
        raise ConfigError("target: required")
    if "kernel" not in options:
        raise ConfigError("kernel: required")
    target = parse_target(options["target"])
    kernel = parse_kernel(options["kernel"])
    kwargs = {}
    if "alternative" in options:
        kwargs["alternative"] = parse_alternative(options["alternative"])
    if "n_grid" in options:
        kwargs["n_grid"] = tuple(int(v) for v in _parse_floats(options["n_grid"]))
    if "kappa_grid" in options:
        kwargs["kappa_grid"] = tuple(_parse_floats(options["kappa_grid"]))
    for key, cast in (("alpha", float), ("c_b", int), ("reps", int), ("seed", int)):
        if key in options:
            try:
                kwargs[key] = cast(options[key])
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}") from exc
    if "methods" in options:
        kwargs["methods"] = tuple(
            tok.strip() for tok in options["methods"].split(",") if tok.strip()
        )
    if "m_rule" in options:
        kwargs["m_rule"] = options["m_rule"]
    if kind == "power" and "alternative" not in options:
        if target.kind == "uniform_sphere":
            kwargs["alternative"] = AlternativeSpec(kind="vmf")
        else:
            raise ConfigError("alternative: required for power with a Euclidean target")
    return ExperimentSpec(kind=kind, target=target, kernel=kernel, **kwargs)


# ---------------------------------------------------------------------------
# Experiment execution


def _worker_count() -> int:
    env = os.environ.get("KSD_THREADS")
    if env:
        try:
            count = int(env)
        except ValueError as exc:
            raise ConfigError(f"KSD_THREADS: not an integer: {env!r}") from exc
        if count < 1:
            raise ConfigError("KSD_THREADS: must be >= 1")
        return count
    return os.cpu_count() or 1


def _derived_seed(seed: int, tag: int, *path: int) -> int:
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, tag, *path])
    return int(ss.generate_state(1, np.uint64)[0] >> 1)


def _draw_data(spec: ExperimentSpec, n: int, kappa: float, cell: int, rep: int):
    gen = np.random.default_rng(
        [spec.seed & 0xFFFFFFFFFFFFFFFF, _TAG_DATA, cell, rep]
    )
    if spec.kind == "power":
        alt = spec.alternative
        if alt.kind == "vmf":
            mu = np.zeros(spec.target.d)
            mu[0] = 1.0
            k = alt.kappa if alt.kappa is not None else kappa
            return sample_vmf(VmfSpec(mu=mu, kappa=k), n, gen)
        return sample_gaussian(np.full(spec.target.d, alt.mean), alt.sigma, n, gen)
    if spec.target.kind == "gaussian":
        return sample_gaussian(
            np.full(spec.target.d, spec.target.mean), spec.target.sigma, n, gen
        )
    return sample_uniform_sphere(spec.target.d, n, gen)


def _run_cell(
    spec: ExperimentSpec, kernel: SteinKernel, cell: int, n: int, kappa: float, rep: int
) -> list[ResultRow]:
    X = _draw_data(spec, n, kappa, cell, rep)
    m_of = _parse_m_rule(spec.m_rule)
    test_seed = _derived_seed(spec.seed, _TAG_TEST, cell, rep)
    rows = []
    for method in spec.methods:
        m = m_of(n) if method == "nystrom" else None
        cfg = TestConfig(
            alpha=spec.alpha, c_b=spec.c_b, method=method, m=m, seed=test_seed
        )
        res = gof_test(kernel, X, cfg)
        rows.append(
            ResultRow(
                method=method,
                n=n,
                m=m,
                kappa=kappa,
                rep=rep,
                reject=int(res.reject),
                statistic=res.statistic,
                threshold=res.threshold,
                runtime_ms_stat=res.wall_times.statistic_s * 1e3,
                runtime_ms_bootstrap=res.wall_times.bootstrap_s * 1e3,
            )
        )
    return rows


def _run_sweep(spec: ExperimentSpec, cells: list[tuple[int, float]]) -> list[ResultRow]:
    kernel = build_kernel(spec.target, spec.kernel)
    jobs = [
        (cell, n, kappa, rep)
        for cell, (n, kappa) in enumerate(cells)
        for rep in range(spec.reps)
    ]
    workers = 1 if spec.kind == "bench" else _worker_count()
    if workers == 1:
        results = [_run_cell(spec, kernel, *job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda job: _run_cell(spec, kernel, *job), jobs))
    # deterministic (method, grid cell, rep) output order, whatever the
    # completion order was
    order = {method: i for i, method in enumerate(spec.methods)}
    tagged = [
        (order[row.method], job[0], job[3], row)
        for job, batch in zip(jobs, results)
        for row in batch
    ]
    tagged.sort(key=lambda t: t[:3])
    return [t[3] for t in tagged]


def run_level(spec: ExperimentSpec) -> list[ResultRow]:
    """Null rejection rates over the n grid; data come from the target."""
    if spec.kind != "level":
        raise ConfigError("run_level requires kind='level'")
    cells = [(n, float("nan")) for n in spec.n_grid]
    return _run_sweep(spec, cells)


def run_power(spec: ExperimentSpec) -> list[ResultRow]:
    """Rejection rates under the alternative over the (n, kappa) grid."""
    if spec.kind != "power":
        raise ConfigError("run_power requires kind='power'")
    if spec.alternative is None:
        raise ConfigError("alternative: required for power experiments")
    if spec.alternative.kind == "vmf":
        if spec.target.kind != "uniform_sphere":
            raise ConfigError("alternative vmf requires a uniform_sphere target")
        cells = [(n, float(k)) for n in spec.n_grid for k in spec.kappa_grid]
    else:
        cells = [(n, float("nan")) for n in spec.n_grid]
    return _run_sweep(spec, cells)


def run_bench(spec: ExperimentSpec) -> list[ResultRow]:
    """Wall-time benchmark over the n grid (always single-threaded)."""
    if spec.kind != "bench":
        raise ConfigError("run_bench requires kind='bench'")
    cells = [(n, float("nan")) for n in spec.n_grid]
    return _run_sweep(spec, cells)


def write_rows(path: str, rows: list[ResultRow]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(RESULT_HEADER + "\n")
        for row in rows:
            fh.write(row.to_csv() + "\n")


def _binomial_band(reps: int, alpha: float, conf: float = 0.99) -> tuple[float, float]:
    lo = scipy_stats.binom.ppf((1 - conf) / 2, reps, alpha) / reps
    hi = scipy_stats.binom.ppf(1 - (1 - conf) / 2, reps, alpha) / reps
    return float(lo), float(hi)


def _summarize(spec: ExperimentSpec, rows: list[ResultRow], out) -> None:
    by_cell: dict[tuple[str, int, float], list[ResultRow]] = {}
    for row in rows:
        by_cell.setdefault((row.method, row.n, row.kappa), []).append(row)
    if spec.kind == "level":
        lo, hi = _binomial_band(spec.reps, spec.alpha)
        print(
            f"# 99% binomial band around alpha={spec.alpha}: [{lo:.4f}, {hi:.4f}]",
            file=out,
        )
    for (method, n, kappa), group in sorted(by_cell.items()):
        rate = sum(r.reject for r in group) / len(group)
        total_ms = sum(r.runtime_ms_stat + r.runtime_ms_bootstrap for r in group)
        mean_ms = total_ms / len(group)
        kappa_txt = "" if math.isnan(kappa) else f" kappa={kappa:g}"
        label = {"level": "level", "power": "power", "bench": "reject_rate"}[spec.kind]
        print(
            f"{spec.kind} method={method} n={n}{kappa_txt} {label}={rate:.4f} "
            f"mean_ms={mean_ms:.2f} reps={len(group)}",
            file=out,
        )
    if spec.kind == "bench" and {"exact", "nystrom"} <= set(spec.methods):
        for n in spec.n_grid:
            t = {
                method: np.mean(
                    [
                        r.runtime_ms_stat + r.runtime_ms_bootstrap
                        for r in rows
                        if r.method == method and r.n == n
                    ]
                )
                for method in ("exact", "nystrom")
            }
            print(
                f"bench n={n} speedup exact/nystrom = {t['exact'] / t['nystrom']:.2f}x",
                file=out,
            )


# ---------------------------------------------------------------------------
# Subcommand drivers


def _merged_options(args: argparse.Namespace) -> dict[str, str]:
    options = read_config(args.config) if args.config else {}
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            options[key] = str(flag)
    return options


def _cmd_sweep(kind: str, args: argparse.Namespace) -> int:
    spec = spec_from_options(kind, _merged_options(args))
    runner = {"level": run_level, "power": run_power, "bench": run_bench}[kind]
    rows = runner(spec)
    if args.out:
        write_rows(args.out, rows)
    _summarize(spec, rows, sys.stdout)
    return 0


def _load_test_data(args: argparse.Namespace, target: TargetSpec) -> np.ndarray:
    if args.data:
        coord, d, pts = read_points_csv(args.data)
        if target.kind == "gaussian":
            if coord != "cartesian":
                raise ConfigError("data: Euclidean targets need cartesian coordinates")
            return pts
        if d != target.d:
            raise ConfigError(f"data: dimension {d} does not match target d={target.d}")
        return cartesian_to_sphere(pts, d) if coord == "cartesian" else pts
    if args.n is None:
        raise ConfigError("test: provide --data or --n for freshly drawn samples")
    gen = np.random.default_rng([args.seed & 0xFFFFFFFFFFFFFFFF, _TAG_DATA])
    source = args.sample_from or (
        f"gaussian:{target.mean},{target.sigma}"
        if target.kind == "gaussian"
        else f"uniform_sphere:{target.d}"
    )
    kind, _, rest = source.partition(":")
    if kind == "gaussian":
        vals = _parse_floats(rest)
        if len(vals) != 2:
            raise ConfigError("sample-from: gaussian takes 'mean,sigma'")
        return sample_gaussian(np.full(target.d, vals[0]), vals[1], args.n, gen)
    if kind == "uniform_sphere":
        return sample_uniform_sphere(target.d, args.n, gen)
    if kind == "vmf":
        mu = np.zeros(target.d)
        mu[0] = 1.0
        return sample_vmf(VmfSpec(mu=mu, kappa=float(rest)), args.n, gen)
    raise ConfigError(f"sample-from: unknown source {source!r}")


def _cmd_test(args: argparse.Namespace) -> int:
    target = parse_target(args.target)
    base = parse_kernel(args.kernel)
    data = _load_test_data(args, target)
    if target.kind == "gaussian" and data.shape[1] != target.d:
        target = replace(target, d=data.shape[1])
    kernel = build_kernel(target, base)
    m = args.m
    if args.method == "nystrom" and m is None:
        m = max(1, math.ceil(math.sqrt(data.shape[0])))
        print(
            f"warning: --m not given; falling back to m_rule sqrt_n (m={m})",
            file=sys.stderr,
        )
    cfg = TestConfig(
        alpha=args.alpha,
        c_b=args.cb,
        method=args.method,
        m=m,
        pinv_tol=args.pinv_tol,
        seed=args.seed,
    )
    res = gof_test(kernel, data, cfg)
    decision = "reject" if res.reject else "fail-to-reject"
    print(f"n: {data.shape[0]}")
    print(f"statistic: {res.statistic!r}")
    print(f"threshold: {res.threshold!r}")
    print(f"decision: {decision}")
    print(
        f"time_ms: statistic={res.wall_times.statistic_s * 1e3:.3f} "
        f"bootstrap={res.wall_times.bootstrap_s * 1e3:.3f}"
    )
    return 1 if res.reject else 0


def _cmd_diag(args: argparse.Namespace) -> int:
    target = parse_target(args.target)
    base = parse_kernel(args.kernel)
    if not args.data and args.n is None:
        raise ConfigError("diag: provide --data or --n")
    data = _load_test_data(args, target)
    if target.kind == "gaussian" and data.shape[1] != target.d:
        target = replace(target, d=data.shape[1])
    kernel = build_kernel(target, base)
    G = gram_full(kernel, data)
    summary = spectrum_summary(G)
    top = float(summary.eigenvalues[0]) if summary.eigenvalues.size else 1.0
    lams = np.logspace(-8, 0, args.points) * max(top, 1e-300)
    lines = ["lambda,effective_dimension"]
    for lam in lams:
        lines.append(f"{float(lam)!r},{summary.effective_dimension(float(lam))!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"decay: {summary.decay_label}")
    print(
        f"r2: polynomial={summary.r2_polynomial:.4f} "
        f"exponential={summary.r2_exponential:.4f}"
    )
    return 0


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--target", help="gaussian:mean,sigma[,d] | uniform_sphere:d")
    p.add_argument("--kernel", help="gaussian:sigma | vmf:gamma")
    p.add_argument("--alternative", help="gaussian:mean,sigma | vmf[:kappa]")
    p.add_argument("--n-grid", dest="n_grid", help="comma-separated sample sizes")
    p.add_argument("--kappa-grid", dest="kappa_grid", help="comma-separated kappas")
    p.add_argument("--alpha", type=float)
    p.add_argument("--cb", dest="c_b", type=int)
    p.add_argument("--reps", type=int)
    p.add_argument("--methods", help="subset of exact,nystrom")
    p.add_argument(
        "--m-rule",
        dest="m_rule",
        help="sqrt_n | four_sqrt_n | fixed:m | auto:exponential | auto:polynomial:g",
    )
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output CSV path")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ksdgof",
        description="Goodness-of-fit testing with kernel Stein discrepancies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run a single test")
    p_test.add_argument("--target", required=True)
    p_test.add_argument("--kernel", required=True)
    p_test.add_argument("--data", help="sample CSV (see README for the layout)")
    p_test.add_argument("--n", type=int, help="draw this many samples instead")
    p_test.add_argument("--sample-from", dest="sample_from", help="sampling source")
    p_test.add_argument("--alpha", type=float, default=0.01)
    p_test.add_argument("--cb", type=int, default=1000)
    p_test.add_argument("--method", choices=("exact", "nystrom"), default="exact")
    p_test.add_argument("--m", type=int)
    p_test.add_argument("--pinv-tol", dest="pinv_tol", type=float, default=1e-10)
    p_test.add_argument("--seed", type=int, default=0)

    for kind in ("level", "power", "bench"):
        _add_sweep_flags(sub.add_parser(kind, help=f"run a {kind} sweep"))

    p_diag = sub.add_parser("diag", help="effective-dimension diagnostics")
    p_diag.add_argument("--target", required=True)
    p_diag.add_argument("--kernel", required=True)
    p_diag.add_argument("--data")
    p_diag.add_argument("--n", type=int)
    p_diag.add_argument("--sample-from", dest="sample_from")
    p_diag.add_argument("--points", type=int, default=25)
    p_diag.add_argument("--seed", type=int, default=0)
    p_diag.add_argument("--out")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "test":
            return _cmd_test(args)
        if args.command == "diag":
            return _cmd_diag(args)
        return _cmd_sweep(args.command, args)
    except (ConfigError, CsvFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
