import json
import subprocess
import sys

import pytest

from surfint.cli import main

from oracles import FIXTURES


def fx(name):
    return str(FIXTURES / f"{name}.json")


def run(tmp_path, *args, sub="out"):
    out = tmp_path / sub
    rc = main(list(args) + ["--out", str(out)])
    return rc, out


def test_implicitize_stage(tmp_path):
    rc, out = run(tmp_path, "--s1", fx("ex22_s1"), "--s2", fx("ex61_s2"), "--stage", "implicitize")
    assert rc == 0
    assert (out / "F.txt").read_text() == "x^2 + y^2 - z^2 - 1\n"
    assert not (out / "G.txt").exists()
    assert json.loads((out / "report.json").read_text())["S1"] == "parametric"


def test_ruled_input(tmp_path):
    rc, out = run(tmp_path, "--s1", fx("ex22_ruled"), "--s2", fx("ex61_s2"), "--stage", "implicitize")
    assert rc == 0
    assert (out / "F.txt").read_text() == "x^2 + y^2 - z^2 - 1\n"


def test_full_run_cone_cylinder(tmp_path):
    rc, out = run(tmp_path, "--s1", fx("ex61_s1"), "--s2", fx("ex61_s2"),
                  "--box", "-3", "3", "-3", "3", "--epsilon", "0.05")
    assert rc == 0
    for name in ["F.txt", "G.txt", "plane_graph.json", "plane_graph.svg", "space_graph.json",
                 "curve.obj", "curve.json", "report.json", "timing.json"]:
        assert (out / name).exists(), name
    rep = json.loads((out / "report.json").read_text())
    assert rep["epsilon"] == "1/20"
    sing = [c for c in rep["plane_graph"]["critical"] if c["kind"] == "singular"]
    assert len(sing) == 1 and sing[0]["approx"] == ["1", "0"]
    pts = [v["point"] for v in rep["space_graph"]["character_vertices"] if "singular" in v["tags"]]
    assert pts == [["0", "1", "1"]]
    ap = rep["approximation"]
    assert (ap["components"], ap["cycle_rank"]) == (rep["space_graph"]["components"],
                                                   rep["space_graph"]["cycle_rank"])
    assert float(ap["max_hausdorff_estimate"]) < 0.05


def test_deterministic(tmp_path):
    args = ["--s1", fx("ex61_s1"), "--s2", fx("ex61_s2"), "--box", "-3", "3", "-3", "3"]
    _, a = run(tmp_path, *args, sub="a")
    _, b = run(tmp_path, *args, sub="b")
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    for n in names:
        if n != "timing.json":
            assert (a / n).read_bytes() == (b / n).read_bytes(), n


def test_formats_subset(tmp_path):
    rc, out = run(tmp_path, "--s1", fx("plane_s1"), "--s2", fx("plane_s2"), "--format", "obj")
    assert rc == 0
    assert (out / "curve.obj").exists()
    assert not (out / "curve.json").exists() and not (out / "plane_graph.svg").exists()


def test_plane_topology_stage(tmp_path):
    rc, out = run(tmp_path, "--s1", fx("ex61_s1"), "--s2", fx("ex61_s2"),
                  "--box", "-3", "3", "-3", "3", "--stage", "plane-topology")
    assert rc == 0
    assert (out / "plane_graph.json").exists()
    assert not (out / "space_graph.json").exists()


def test_box_order_is_usage_error(tmp_path):
    rc, _ = run(tmp_path, "--s1", fx("ex61_s1"), "--s2", fx("ex61_s2"), "--box", "3", "-3", "-3", "3")
    assert rc == 1


def test_bad_epsilon_is_usage_error(tmp_path):
    rc, _ = run(tmp_path, "--s1", fx("ex61_s1"), "--s2", fx("ex61_s2"), "--epsilon", "-1")
    assert rc == 1
    with pytest.raises(SystemExit) as exc:
        main(["--s1", fx("ex61_s1"), "--s2", fx("ex61_s2"), "--epsilon", "abc"])
    assert exc.value.code == 1


def test_unknown_format_is_usage_error(tmp_path):
    rc, _ = run(tmp_path, "--s1", fx("ex61_s1"), "--s2", fx("ex61_s2"), "--format", "png")
    assert rc == 1


def test_missing_file_is_usage_error(tmp_path):
    rc, _ = run(tmp_path, "--s1", str(tmp_path / "nope.json"), "--s2", fx("ex61_s2"))
    assert rc == 1


def test_not_projectable_exit_code(tmp_path, capsys):
    rc, _ = run(tmp_path, "--s1", fx("not_projectable"), "--s2", fx("ex61_s2"))
    assert rc == 2
    assert "projectable" in capsys.readouterr().err


def test_shared_component_exit_code(tmp_path):
    rc, _ = run(tmp_path, "--s1", fx("plane_s1"), "--s2", fx("plane_s1"))
    assert rc == 3


def test_implicit_s1(tmp_path):
    rc, out = run(tmp_path, "--s1", fx("ex41_s1_implicit"), "--s2", fx("ex63_s2"),
                  "--box", "-3", "3", "-3", "3", "--stage", "space-topology")
    assert rc == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["S1"] == "implicit"
    assert rep["character_points"]["special_component"] == "t"


def test_console_script_entry(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "surfint.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "--epsilon" in proc.stdout
