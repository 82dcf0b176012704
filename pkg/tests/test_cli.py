import json
import subprocess
import sys
from xml.etree import ElementTree

import pytest

from rfcharge.cli import main

SVG = "{http://www.w3.org/2000/svg}"


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def regular(tmp_path):
    path = tmp_path / "reg.json"
    assert run("generate", "--kind", "regular", "--n", 16, "--field", "4x4", "--out", path) == 0
    return path


def test_generate_random_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run("generate", "--kind", "random", "--n", 20, "--field", "5x3", "--seed", 7, "--out", p) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["field"] == {"width": 5.0, "height": 3.0} and len(doc["nodes"]) == 20 and doc["seed"] == 7


def test_generate_non_square_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run("generate", "--kind", "regular", "--n", 15, "--out", tmp_path / "x.json")
    assert exc.value.code == 2


@pytest.mark.parametrize("algo", ["greedy", "pso", "pso-dc"])
def test_place_deterministic(tmp_path, regular, algo):
    outs = []
    for tag in "ab":
        out, rep = tmp_path / f"p{tag}.json", tmp_path / f"r{tag}.txt"
        code = run("place", regular, "--algo", algo, "--alpha", 0.4, "--seed", 3, "--grid-size", 0.25,
                   "--out", out, "--report", rep)
        assert code == 0
        outs.append((out.read_bytes(), rep.read_bytes()))
    assert outs[0] == outs[1]
    report = outs[0][1].decode()
    assert "sustainable_ratio=1.0" in report and f"algorithm={algo}" in report
    assert 'config.power.alpha=0.4' in report


def test_place_infeasible_exit_code(tmp_path, regular):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"power": {"pa_w": 1.0, "pq_w": 0.5}}))
    rep = tmp_path / "r.txt"
    code = run("place", regular, "--algo", "greedy", "--config", cfg, "--alpha", 1.0, "--grid-size", 0.5,
               "--out", tmp_path / "p.json", "--report", rep)
    assert code == 4
    assert "status=infeasible" in rep.read_text()


def test_config_env_and_unknown_key(tmp_path, regular, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"radio": {"colour": 1}}))
    monkeypatch.setenv("RFCHARGE_CONFIG", str(cfg))
    code = run("place", regular, "--algo", "greedy", "--out", tmp_path / "p.json", "--report", tmp_path / "r")
    assert code == 2


def test_missing_scenario_is_io_error(tmp_path):
    assert run("place", tmp_path / "nope.json", "--out", tmp_path / "p.json") == 3


def test_baseline_report(tmp_path, regular):
    rep = tmp_path / "b.txt"
    code = run("baseline", regular, "--pattern", "triangle-disk", "--eval-model", "disk",
               "--out", tmp_path / "b.json", "--report", rep)
    assert code == 0
    assert "sustainable_ratio=1.0" in rep.read_text()
    with pytest.raises(SystemExit) as exc:
        run("baseline", regular, "--pattern", "hexagon")
    assert exc.value.code == 2


def test_validate_bundled(tmp_path):
    out = tmp_path / "v.csv"
    assert run("validate", "--out", out) == 0
    first = out.read_bytes()
    assert run("validate", "--out", out) == 0
    assert out.read_bytes() == first
    assert len(first.decode().splitlines()) == 30


def test_plot_svg_deterministic(tmp_path):
    scen = tmp_path / "s.json"
    run("generate", "--kind", "regular", "--n", 144, "--field", "12x12", "--out", scen)
    place = tmp_path / "p.json"
    assert run("baseline", scen, "--pattern", "triangle-summation", "--alpha", 0.5, "--out", place,
               "--report", tmp_path / "r") == 0
    k = len(json.loads(place.read_text())["chargers"])
    svgs = []
    for tag in "ab":
        out = tmp_path / f"m{tag}.svg"
        assert run("plot", scen, place, "--out", out, "--alpha", 0.5) == 0
        svgs.append(out.read_bytes())
    assert svgs[0] == svgs[1]
    root = ElementTree.fromstring(svgs[0])
    groups = {g.get("id"): g for g in root.iter(f"{SVG}g") if g.get("id") in ("nodes", "chargers")}
    assert len(list(groups["nodes"].iter(f"{SVG}use"))) == 144
    assert len(list(groups["chargers"].iter(f"{SVG}use"))) == k


def test_plot_field_mismatch(tmp_path, regular):
    other = tmp_path / "big.json"
    run("generate", "--kind", "regular", "--n", 16, "--field", "8x8", "--out", other)
    place = tmp_path / "p.json"
    run("baseline", other, "--pattern", "triangle-disk", "--out", place, "--report", tmp_path / "r")
    assert run("plot", regular, place, "--out", tmp_path / "m.svg") == 3


def test_sweep_csv_and_figure(tmp_path, regular):
    outs = []
    for tag in "ab":
        out, fig = tmp_path / f"s{tag}.csv", tmp_path / f"s{tag}.svg"
        code = run("sweep", regular, "--algos", "greedy,pso-dc", "--alphas", "0.3,0.6", "--seeds", "0,1",
                   "--grid-size", 0.5, "--out", out, "--figure", fig)
        assert code == 0
        outs.append((out.read_bytes(), fig.read_bytes()))
    assert outs[0] == outs[1]
    lines = outs[0][0].decode().splitlines()
    assert len(lines) == 1 + 2 * (1 + 2)
    with pytest.raises(SystemExit):
        run("sweep", regular, "--algos", "annealing")


def test_console_entry_point(tmp_path):
    out = tmp_path / "s.json"
    proc = subprocess.run(
        [sys.executable, "-m", "rfcharge.cli", "generate", "--kind", "regular", "--n", "4", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
