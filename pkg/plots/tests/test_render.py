import hashlib
import subprocess
import sys

import pytest

from ksdplots import EXPECTED_HEADER, FigureSpec, SchemaError, build_figure, render
from ksdplots.render import read_rows

HEADER = (
    "method,n,m,kappa,rep,reject,statistic,threshold,"
    "runtime_ms_stat,runtime_ms_bootstrap"
)


def level_csv(tmp_path, name="level.csv"):
    lines = [HEADER]
    for method, m in (("exact", ""), ("nystrom", "10")):
        for i, n in enumerate((50, 100, 200)):
            for rep in range(4):
                reject = 1 if (rep == 0 and method == "exact" and n == 50) else 0
                lines.append(
                    f"{method},{n},{m},nan,{rep},{reject},0.5,1.2,3.214,8.991"
                )
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def power_csv(tmp_path, kappas=(1.0, 2.0, 4.0), name="power.csv"):
    lines = [HEADER]
    for method in ("exact", "nystrom"):
        for kappa in kappas:
            for rep in range(5):
                reject = 1 if kappa >= 2.0 else rep % 2
                lines.append(
                    f"{method},200,15,{kappa},{rep},{reject},2.0,1.0,4.0,6.0"
                )
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def runtime_csv(tmp_path, slow_factor=100.0, name="bench.csv"):
    lines = [HEADER]
    for n in (500, 1000, 2000):
        base = n / 100.0
        lines.append(f"exact,{n},,nan,0,0,1.0,2.0,{base * slow_factor},{base * slow_factor}")
        lines.append(f"nystrom,{n},32,nan,0,0,1.0,2.0,{base},{base}")
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def checksum(path):
    return hashlib.sha256(open(path, "rb").read()).hexdigest()


def test_header_matches_harness_contract():
    assert EXPECTED_HEADER == HEADER


def test_level_figure_series_and_reference(tmp_path):
    spec = FigureSpec(inputs=(level_csv(tmp_path),), kind="level", output="x.png")
    fig = build_figure(spec)
    ax = fig.axes[0]
    legend = [t.get_text() for t in ax.get_legend().get_texts()]
    # one series per method plus the alpha reference line
    assert "exact" in legend
    assert "nystrom" in legend
    assert any(l.startswith("alpha=") for l in legend)


def test_level_render_deterministic(tmp_path):
    csv_path = level_csv(tmp_path)
    out1 = str(tmp_path / "level1.png")
    out2 = str(tmp_path / "level2.png")
    render(FigureSpec(inputs=(csv_path,), kind="level", output=out1))
    render(FigureSpec(inputs=(csv_path,), kind="level", output=out2))
    assert checksum(out1) == checksum(out2)


def test_power_single_kappa_no_crash(tmp_path):
    csv_path = power_csv(tmp_path, kappas=(2.0,))
    out = str(tmp_path / "power.png")
    render(FigureSpec(inputs=(csv_path,), kind="power", output=out))
    assert checksum(out)  # file exists and is non-empty


def test_power_kappa_axis(tmp_path):
    spec = FigureSpec(inputs=(power_csv(tmp_path),), kind="power", output="x.png")
    fig = build_figure(spec)
    assert "kappa" in fig.axes[0].get_xlabel()


def test_runtime_log_scale_rule(tmp_path):
    wide = FigureSpec(inputs=(runtime_csv(tmp_path, 100.0),), kind="runtime", output="x.png")
    assert build_figure(wide).axes[0].get_yscale() == "log"
    narrow = FigureSpec(
        inputs=(runtime_csv(tmp_path, 2.0, name="narrow.csv"),),
        kind="runtime",
        output="x.png",
    )
    assert build_figure(narrow).axes[0].get_yscale() == "linear"


def test_schema_mismatch_reports_diff(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("method,n,reject\nexact,10,0\n")
    with pytest.raises(SchemaError) as err:
        read_rows([str(bad)])
    assert "expected:" in str(err.value) and "got:" in str(err.value)


def test_empty_csv_rejected(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(HEADER + "\n")
    with pytest.raises(ValueError, match="no data rows"):
        read_rows([str(empty)])


def test_multiple_inputs_concatenate(tmp_path):
    a = level_csv(tmp_path, "a.csv")
    b = level_csv(tmp_path, "b.csv")
    rows = read_rows([a, b])
    assert len(rows) == 2 * 24


def test_cli_end_to_end(tmp_path):
    csv_path = level_csv(tmp_path)
    out = tmp_path / "cli_level.png"
    cmd = [
        sys.executable, "-m", "ksdplots.cli",
        "--kind", "level", "--in", csv_path, "--out", str(out),
    ]
    runs = []
    for _ in range(2):
        subprocess.run(cmd, check=True, capture_output=True)
        runs.append(checksum(str(out)))
    assert runs[0] == runs[1]


def test_cli_schema_error_exit_code(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("nope\n")
    out = tmp_path / "x.png"
    proc = subprocess.run(
        [sys.executable, "-m", "ksdplots.cli", "--kind", "level", "--in", str(bad), "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert "error:" in proc.stderr
