"""Figure construction from experiment result CSVs.

The input schema is the harness's pinned result header; anything else is a
hard error with the difference printed.  Rendering is a pure function of the
CSV bytes: figure size, fonts, and metadata are fixed, so re-rendering the
same input produces byte-identical image files.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

EXPECTED_HEADER = (
    "method,n,m,kappa,rep,reject,statistic,threshold,"
    "runtime_ms_stat,runtime_ms_bootstrap"
)

KINDS = ("level", "power", "runtime")

# runtime plots switch to a log axis when the spread exceeds this factor
LOG_SCALE_RATIO = 50.0


class SchemaError(ValueError):
    """The CSV header does not match the pinned schema."""


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple[str, ...]
    kind: str  # "level" | "power" | "runtime"
    output: str
    confidence_band: bool = True
    alpha: float = 0.01  # reference line for level figures

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


@dataclass(frozen=True)
class Row:
    method: str
    n: int
    kappa: float
    reject: float
    runtime_ms: float


def read_rows(paths: Iterable[str]) -> list[Row]:
    rows: list[Row] = []
    for path in paths:
        with open(path, newline="") as fh:
            header = fh.readline().rstrip("\n")
            if header != EXPECTED_HEADER:
                raise SchemaError(
                    f"{path}: unexpected header\n"
                    f"  expected: {EXPECTED_HEADER}\n"
                    f"  got:      {header}"
                )
            for record in csv.reader(fh):
                if not record:
                    continue
                rows.append(
                    Row(
                        method=record[0],
                        n=int(record[1]),
                        kappa=float(record[3]),
                        reject=float(record[5]),
                        runtime_ms=float(record[8]) + float(record[9]),
                    )
                )
    if not rows:
        raise ValueError("no data rows found in the given CSVs")
    return rows


def _x_axis(kind: str, rows: list[Row]) -> str:
    """Power curves run over kappa when the grid varies, otherwise over n."""
    if kind == "power":
        kappas = {r.kappa for r in rows if not math.isnan(r.kappa)}
        if len(kappas) >= 1 and len({r.n for r in rows}) <= 1:
            return "kappa"
        if len(kappas) > 1:
            return "kappa"
    return "n"


def _binomial_halfwidth(p: float, count: int) -> float:
    return 1.96 * math.sqrt(max(p * (1.0 - p), 0.0) / count)


def build_figure(spec: FigureSpec):
    """Aggregate the rows and build the matplotlib figure (not yet saved)."""
    rows = read_rows(spec.inputs)
    x_field = _x_axis(spec.kind, rows)
    methods = sorted({r.method for r in rows})

    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=120)
    for method in methods:
        mine = [r for r in rows if r.method == method]
        xs = sorted({getattr(r, x_field) for r in mine})
        if not xs:
            raise ValueError(f"empty group for method {method!r}")
        ys, halfwidths = [], []
        for x in xs:
            group = [r for r in mine if getattr(r, x_field) == x]
            if not group:
                raise ValueError(f"empty group at {x_field}={x} for {method!r}")
            if spec.kind == "runtime":
                ys.append(float(np.mean([r.runtime_ms for r in group])))
                halfwidths.append(0.0)
            else:
                p = float(np.mean([r.reject for r in group]))
                ys.append(p)
                halfwidths.append(_binomial_halfwidth(p, len(group)))
        if spec.kind != "runtime" and spec.confidence_band:
            ax.errorbar(
                xs, ys, yerr=halfwidths, marker="o", capsize=3, label=method
            )
        else:
            ax.plot(xs, ys, marker="o", label=method)

    if spec.kind == "level":
        ax.axhline(spec.alpha, linestyle="--", linewidth=1.0, label=f"alpha={spec.alpha:g}")
        ax.set_ylabel("rejection rate")
    elif spec.kind == "power":
        ax.set_ylabel("power")
        ax.set_ylim(-0.05, 1.05)
    else:
        ax.set_ylabel("mean runtime [ms]")
        values = [line.get_ydata() for line in ax.get_lines()]
        flat = np.concatenate(values) if values else np.array([1.0])
        positive = flat[flat > 0]
        if positive.size and positive.max() / positive.min() > LOG_SCALE_RATIO:
            ax.set_yscale("log")
    ax.set_xlabel("concentration kappa" if x_field == "kappa" else "sample size n")
    ax.legend()
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> str:
    """Render the figure to ``spec.output`` and return the path."""
    fig = build_figure(spec)
    try:
        # strip the version-stamped Software tag so reruns are byte-identical
        metadata = {"Software": None} if spec.output.endswith(".png") else None
        fig.savefig(spec.output, metadata=metadata)
    finally:
        plt.close(fig)
    return spec.output
