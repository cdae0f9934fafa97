"""Acceptance: the `plot` CLI renders the golden CSVs reproducibly."""

import hashlib
import subprocess
import sys
from pathlib import Path

from ksdplots import FigureSpec, build_figure

DATA = Path(__file__).parent / "data"


def checksum(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def run_plot(kind, source, out):
    subprocess.run(
        [
            sys.executable, "-m", "ksdplots.cli",
            "--kind", kind, "--in", str(source), "--out", str(out),
            "--alpha", "0.05",
        ],
        check=True,
        capture_output=True,
    )


def test_criterion_12_plot_rendering(tmp_path):
    sums = {}
    for kind in ("level", "power", "runtime"):
        source = DATA / f"golden_{kind}.csv"
        first = tmp_path / f"{kind}_1.png"
        second = tmp_path / f"{kind}_2.png"
        run_plot(kind, source, first)
        run_plot(kind, source, second)
        assert first.stat().st_size > 0
        assert checksum(first) == checksum(second)
        sums[kind] = checksum(first)[:12]

    fig = build_figure(
        FigureSpec(
            inputs=(str(DATA / "golden_level.csv"),),
            kind="level",
            output="unused.png",
            alpha=0.05,
        )
    )
    legend = [t.get_text() for t in fig.axes[0].get_legend().get_texts()]
    assert "exact" in legend and "nystrom" in legend
    assert any(label.startswith("alpha=") for label in legend)
    print(f"\nACCEPTANCE 12 plot rendering: PASS (checksums {sums})")
