import math
import subprocess
import sys
from pathlib import Path

import pytest

from figrender import FIGURES, SUPPORTED_IDS, SchemaError, build_figure, load_slice, render
from figrender.cli import main


def _write_slice(path, rows, header="panel,x,series,y"):
    lines = [header] + [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def test_supported_ids():
    assert SUPPORTED_IDS == (1, 4, 5, 6, 7, 8, 9, 10, 11)


def test_load_slice_round_trip(tmp_path):
    path = tmp_path / "fig1.csv"
    _write_slice(path, [("capacity", 0.1, "C_SH", 0.2), ("capacity", 1.0, "C_SH", 1.1)])
    panels = load_slice(path)
    assert panels["capacity"]["C_SH"] == ([0.1, 1.0], [0.2, 1.1])


def test_empty_csv_is_schema_error(tmp_path):
    path = tmp_path / "fig1.csv"
    path.write_text("")
    with pytest.raises(SchemaError):
        load_slice(path)


def test_header_only_is_schema_error(tmp_path):
    path = tmp_path / "fig1.csv"
    path.write_text("panel,x,series,y\n")
    with pytest.raises(SchemaError):
        load_slice(path)


def test_missing_columns_listed(tmp_path):
    path = tmp_path / "fig1.csv"
    _write_slice(path, [(0.1, 0.2)], header="x,y")
    with pytest.raises(SchemaError) as excinfo:
        load_slice(path)
    assert "panel" in str(excinfo.value) and "series" in str(excinfo.value)


def test_unsupported_figure_id(tmp_path):
    path = tmp_path / "fig2.csv"
    _write_slice(path, [("capacity", 0.1, "C_SH", 0.2)])
    with pytest.raises(SchemaError):
        render(2, path, tmp_path / "fig2.png")


def test_render_writes_image(tmp_path):
    path = tmp_path / "fig1.csv"
    _write_slice(path, [("capacity", x, "C_SH", 0.5 * x) for x in (0.1, 0.5, 1.0, 5.0)])
    out = render(1, path, tmp_path / "out" / "fig1.png")
    assert out.exists() and out.stat().st_size > 0


def test_axis_scales_match_captions():
    # figures 5 and 8 are log-log; figure 9 is linear in the amplitude
    data5 = {
        "pie": {"P_WH M=1": ([1e-4, 1e-3], [3.0, 2.5])},
        "lo": {"z2_WH M=1": ([1e-4, 1e-3], [0.01, 0.05])},
    }
    fig = build_figure(5, data5)
    for axis in fig.axes:
        assert axis.get_xscale() == "log"
        assert axis.get_yscale() == "log"
    fig8 = build_figure(8, {"pie": {"P_DW M=5": ([1e-4, 1e-2], [1.0, 0.5])}})
    assert fig8.axes[0].get_xscale() == "log"
    assert fig8.axes[0].get_yscale() == "log"
    fig9 = build_figure(9, {"density": {"nu=2": ([-1.0, 0.0, 1.0], [0.1, 0.0, 0.1])}})
    assert fig9.axes[0].get_xscale() == "linear"


def test_bpsk_marker_values_render(tmp_path):
    path = tmp_path / "fig10.csv"
    _write_slice(
        path,
        [("nu", 1e-4, "M=5", 0.5), ("nu", 0.05, "M=5", math.inf), ("nu", 10.0, "M=5", 0.5)],
    )
    out = render(10, path, tmp_path / "fig10.png")
    assert out.exists()


def test_cli_renders_directory(tmp_path):
    csv_dir = tmp_path / "slices"
    csv_dir.mkdir()
    _write_slice(csv_dir / "fig1.csv", [("capacity", x, "C_SH", x) for x in (0.1, 1.0)])
    _write_slice(csv_dir / "fig9.csv", [("density", x, "nu=2", abs(x)) for x in (-1.0, 0.0, 1.0)])
    out_dir = tmp_path / "images"
    assert main([str(csv_dir), str(out_dir), "--format", "svg"]) == 0
    assert (out_dir / "fig1.svg").exists()
    assert (out_dir / "fig9.svg").exists()


def test_cli_empty_directory_fails(tmp_path):
    empty = tmp_path / "none"
    empty.mkdir()
    assert main([str(empty), str(tmp_path / "out")]) == 1


def test_cli_malformed_slice_fails(tmp_path):
    csv_dir = tmp_path / "slices"
    csv_dir.mkdir()
    (csv_dir / "fig1.csv").write_text("bad,header\n1,2\n")
    assert main([str(csv_dir), str(tmp_path / "out")]) == 1


@pytest.mark.slow
def test_end_to_end_from_primary_cli(tmp_path):
    """All nine supported figure ids render from CSVs produced by the primary CLI."""
    pytest.importorskip("weakfield")
    workdir = tmp_path / "primary"
    workdir.mkdir()
    configs = {
        "baselines": "n_s_min = 0.05\nn_s_max = 2.0\nn_s_points = 9\n",
        "single_quadrature": "n_s_min = 1e-3\nn_s_max = 0.1\nn_s_points = 3\nm_list = 1,5\n",
        "photon_starved": "n_s_min = 1e-4\nn_s_max = 1e-2\nn_s_points = 3\nm_list = 1\n",
        "double_quadrature": "n_s_min = 1e-3\nn_s_max = 0.1\nn_s_points = 3\nm_list = 1,5\n",
        "gains": "n_s_min = 0.5\nn_s_max = 5.0\nn_s_points = 3\nm_list = 1\n",
        "ngm": "n_s_min = 0.05\nn_s_max = 0.5\nn_s_points = 2\nm_list = 5\n",
    }
    combined = []
    for experiment, body in configs.items():
        config = workdir / f"{experiment}.cfg"
        config.write_text(f"[sweep]\nexperiment = {experiment}\n{body}")
        out_csv = workdir / f"{experiment}.csv"
        subprocess.run(
            [sys.executable, "-m", "weakfield.cli", "sweep", "--config", str(config), "--out", str(out_csv)],
            check=True,
        )
        lines = out_csv.read_text().splitlines()
        combined.extend(lines[1:] if combined else lines)
    all_csv = workdir / "all.csv"
    all_csv.write_text("\n".join(combined) + "\n")

    slices = workdir / "slices"
    subprocess.run(
        [sys.executable, "-m", "weakfield.cli", "figures", "--in", str(all_csv), "--out", str(slices)],
        check=True,
    )
    for figure_id in SUPPORTED_IDS:
        assert (slices / f"fig{figure_id}.csv").exists(), f"fig{figure_id}.csv missing"

    images = workdir / "images"
    assert main([str(slices), str(images)]) == 0
    for figure_id in SUPPORTED_IDS:
        assert (images / f"fig{figure_id}.png").exists()
