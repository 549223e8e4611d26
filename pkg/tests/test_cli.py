import csv
import io
import subprocess
import sys

import pytest

from rggboot.cli import main, read_config


def call(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def table(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bounds():
    code, out = call("bounds", "--a", "30", "--gamma", "0.01")
    assert code == 0
    (row,) = table(out)
    assert float(row["p_prime"]) == pytest.approx(0.000133, abs=5e-7)
    assert float(row["p_double_prime"]) == pytest.approx(0.002089, abs=5e-7)
    assert row["feasible"] == "1"


def test_bounds_domain_error():
    assert call("bounds", "--a", "30", "--gamma", "-1")[0] == 2
    assert call("bounds", "--a", "30")[0] == 2


def test_table1():
    code, out = call("table1")
    rows = table(out)
    assert code == 0 and len(rows) == 11
    flags = {int(r["a"]): r["p_scaled_match"] for r in rows}
    assert flags[50] == "0" and flags[4] == "1"


def test_gen(tmp_path):
    code, out = call("gen", "--n", "300", "--a", "5", "--seed", "3", "--out", str(tmp_path), "--plot")
    assert code == 0
    assert out.startswith("nodes=")
    assert (tmp_path / "points.csv").read_text().startswith("id,x,y\n")
    assert (tmp_path / "edges.csv").read_text().startswith("u,v\n")
    assert (tmp_path / "graph.png").stat().st_size > 0


def test_gen_uniform_radius(tmp_path):
    code, out = call("gen", "--mode", "uniform", "--n", "100", "--radius", "0.2", "--out", str(tmp_path))
    assert code == 0 and "radius=0.2 " in out


def test_sweep_outputs(tmp_path):
    out_csv = tmp_path / "s" / "sweep.csv"
    code, out = call("sweep", "--n", "500", "--a", "8", "--gamma", "0.05", "--trials", "3",
                     "--p-grid", "0.01,0.1,0.5", "--out", str(out_csv), "--trial-log")
    assert code == 0
    assert len(table(out)) == 3
    assert out_csv.read_text().startswith("# schema=1\n")
    assert out_csv.with_suffix(".svg").exists() and out_csv.with_suffix(".png").exists()
    assert len(out_csv.with_suffix(".trials.csv").read_text().splitlines()) == 10


def test_sweep_bad_grid(tmp_path):
    code, _ = call("sweep", "--n", "500", "--p-grid", "0.5,0.1", "--out", str(tmp_path / "x.csv"))
    assert code == 2


def test_sweep_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _ = call("sweep", "--n", "300", "--a", "8", "--gamma", "0.05", "--trials", "1", "--p-grid", "0.5",
                   "--out", str(blocker / "sub" / "x.csv"), "--no-figures")
    assert code == 3


def test_lattice():
    code, out = call("lattice", "--N", "20", "--p", "0.2", "--trials", "3")
    rows = table(out)
    assert code == 0 and len(rows) == 3
    assert all(r["within_2N"] == "1" for r in rows)


def test_tiling_seed_forms():
    for seeds in ("2", "0-1", "0,1"):
        code, out = call("tiling", "--n", "2000", "--a", "10", "--gamma", "0.05", "--p", "0.05", "--seeds", seeds)
        assert code == 0
        vals = {r["quantity"]: r["value"] for r in table(out)}
        assert vals["seeds"] == "2"
    assert call("tiling", "--seeds", "a-b")[0] == 2


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# bounds defaults\na = 30\ngamma = 0.01\n")
    assert read_config(cfg) == {"a": "30", "gamma": "0.01"}
    code, out = call("--config", str(cfg), "bounds")
    assert code == 0 and table(out)[0]["a"] == "30"
    code, out = call("--config", str(cfg), "bounds", "--a", "35", "--gamma", str(1 / 75))
    assert table(out)[0]["a"] == "35"


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense\n")
    assert call("--config", str(bad), "bounds")[0] == 2
    unknown = tmp_path / "unk.cfg"
    unknown.write_text("colour = red\n")
    assert call("--config", str(unknown), "bounds")[0] == 2
    assert call("--config", str(tmp_path / "missing.cfg"), "bounds")[0] == 3


def test_usage_errors():
    assert call()[0] == 2
    assert call("nope")[0] == 2
    assert call("--help")[0] == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rggboot", "bounds", "--a", "4", "--gamma", "0.05", "-v"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0].startswith("a,gamma,p_prime")
