"""Command-line interface: parsing, exit codes, artifacts, exports."""

import json

import numpy as np
import pytest

from paretoscape.cli import RunConfig, main, parse_args


def _summary(capsys):
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 1, out
    return json.loads(out[0])


def test_parse_defaults():
    cfg = parse_args(["--problem", "sgk"])
    assert cfg.mode == "plot"
    assert cfg.n1 == 300 and cfg.n2 == 300
    assert cfg.fmt == "ppm"
    assert cfg.lower is None and cfg.upper is None
    assert cfg.log_scale is True
    assert cfg.output_path() == "sgk_plot.ppm"


def test_parse_resolution_and_bounds():
    cfg = parse_args(["--problem", "sgk", "--resolution", "101,51",
                      "--lower", "0,0.5", "--upper", "1.5,2",
                      "--mode", "gfh", "--format", "png", "--no-log-scale"])
    assert (cfg.n1, cfg.n2) == (101, 51)
    assert cfg.lower == (0.0, 0.5) and cfg.upper == (1.5, 2.0)
    assert cfg.log_scale is False
    assert cfg.output_path() == "sgk_gfh.png"


def test_output_path_sanitizes_parametrized_problem():
    cfg = RunConfig(problem="bisphere:-1,0,1,0", mode="critical", fmt="png")
    assert cfg.output_path() == "bisphere_-1_0_1_0_critical.png"
    assert RunConfig(problem="sgk", out="custom.ppm").output_path() == "custom.ppm"


@pytest.mark.parametrize("argv", [
    ["--problem", "sgk", "--resolution", "1,2,3"],
    ["--problem", "sgk", "--resolution", "1"],
    ["--problem", "sgk", "--resolution", "abc"],
    ["--problem", "sgk", "--lower", "1"],
    ["--problem", "sgk", "--mode", "volumetric"],
    [],
])
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "error:" in capsys.readouterr().err


def test_unknown_problem_exit_1(capsys):
    assert main(["--problem", "dtlz9"]) == 1
    err = capsys.readouterr().err
    assert "unknown problem" in err and "available:" in err


def test_list_problems(capsys):
    assert main(["--list-problems"]) == 0
    out = capsys.readouterr().out
    for name in ("aspar", "bisphere", "kursawe", "mindist", "sgk"):
        assert name in out


def test_bisphere_plot_run(tmp_path, capsys):
    out = tmp_path / "bs.ppm"
    code = main(["--problem", "bisphere:-1,0,1,0", "--mode", "plot",
                 "--resolution", "201", "--out", str(out)])
    assert code == 0
    s = _summary(capsys)
    assert list(s) == ["problem", "n_efficient", "n_components",
                       "n_rank0", "n_cycles"]
    assert s["problem"] == "bisphere"
    assert s["n_components"] == 1
    assert s["n_rank0"] == s["n_efficient"] > 0
    data = out.read_bytes()
    assert data.startswith(b"P6\n201 201\n255\n")
    assert len(data) == len(b"P6\n201 201\n255\n") + 201 * 201 * 3


def test_sgk_gfh_finds_three_components(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["--problem", "sgk", "--mode", "gfh",
                 "--resolution", "300"]) == 0
    s = _summary(capsys)
    assert s["n_components"] == 3
    assert (tmp_path / "sgk_gfh.ppm").exists()


def test_critical_mode_exports(tmp_path, capsys):
    img = tmp_path / "c.png"
    csv = tmp_path / "fields.csv"
    js = tmp_path / "crit.json"
    code = main(["--problem", "aspar", "--mode", "critical",
                 "--resolution", "201", "--format", "png",
                 "--out", str(img), "--export-csv", str(csv),
                 "--export-json", str(js)])
    assert code == 0
    _summary(capsys)
    assert img.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    lines = csv.read_text().splitlines()
    assert lines[0] == "j1,j2,x1,x2,g1x,g1y,g2x,g2y,mox,moy,div"
    assert len(lines) == 1 + 201 * 201

    records = json.loads(js.read_text())
    classes = {r["class"] for r in records}
    assert "CriticalOnly" in classes
    assert "LocallyEfficientInterior" in classes


def test_plot_mode_exports_decomposition(tmp_path, capsys):
    csv = tmp_path / "h.csv"
    js = tmp_path / "d.json"
    code = main(["--problem", "bisphere", "--mode", "plot",
                 "--resolution", "101", "--out", str(tmp_path / "o.ppm"),
                 "--export-csv", str(csv), "--export-json", str(js)])
    assert code == 0
    s = _summary(capsys)
    lines = csv.read_text().splitlines()
    assert lines[0] == "j1,j2,x1,x2,height"
    assert len(lines) == 1 + 101 * 101
    payload = json.loads(js.read_text())
    assert payload["n_efficient"] == s["n_efficient"]
    assert payload["n_components"] == s["n_components"]


def test_cost_mode_heights_are_dominance_counts(tmp_path, capsys):
    csv = tmp_path / "cost.csv"
    code = main(["--problem", "bisphere", "--mode", "cost",
                 "--resolution", "41", "--out", str(tmp_path / "c.ppm"),
                 "--export-csv", str(csv)])
    assert code == 0
    _summary(capsys)
    rows = csv.read_text().splitlines()[1:]
    heights = np.array([float(r.split(",")[4]) for r in rows])
    assert (heights == np.rint(heights)).all()
    assert heights.min() == 0.0
    assert heights.max() > 0.0


def test_repeated_runs_byte_identical(tmp_path, capsys):
    outs = []
    for tag in ("one", "two"):
        img = tmp_path / f"{tag}.ppm"
        csv = tmp_path / f"{tag}.csv"
        js = tmp_path / f"{tag}.json"
        assert main(["--problem", "sgk", "--mode", "plot",
                     "--resolution", "101", "--out", str(img),
                     "--export-csv", str(csv), "--export-json", str(js)]) == 0
        outs.append((img.read_bytes(), csv.read_bytes(), js.read_bytes(),
                     capsys.readouterr().out))
    assert outs[0] == outs[1]


def test_log_scale_flag_changes_plot(tmp_path, capsys):
    a = tmp_path / "a.ppm"
    b = tmp_path / "b.ppm"
    assert main(["--problem", "sgk", "--mode", "gfh", "--resolution", "51",
                 "--out", str(a)]) == 0
    assert main(["--problem", "sgk", "--mode", "gfh", "--resolution", "51",
                 "--out", str(b), "--no-log-scale"]) == 0
    capsys.readouterr()
    assert a.read_bytes() != b.read_bytes()


def test_unwritable_output_exits_2(tmp_path, capsys):
    out = tmp_path / "missing_dir" / "x.ppm"
    code = main(["--problem", "bisphere", "--resolution", "21",
                 "--out", str(out)])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_invalid_bounds_exit_1(tmp_path, capsys):
    code = main(["--problem", "bisphere", "--resolution", "21",
                 "--lower", "1,1", "--upper", "0,0",
                 "--out", str(tmp_path / "x.ppm")])
    assert code == 1
    code = main(["--problem", "bisphere", "--resolution", "21",
                 "--lower", "-9,-9", "--out", str(tmp_path / "y.ppm")])
    assert code == 1
    err = capsys.readouterr().err
    assert "error:" in err


def test_bounds_override_restricts_window(tmp_path, capsys):
    # zooming into the left half of the bisphere box keeps only the part
    # of the efficient segment that lies inside the window
    code = main(["--problem", "bisphere", "--resolution", "81",
                 "--lower", "-2,-2", "--upper", "0,2",
                 "--out", str(tmp_path / "z.ppm")])
    assert code == 0
    s = _summary(capsys)
    assert s["n_efficient"] > 0
    assert s["n_components"] == 1
