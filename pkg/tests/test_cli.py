import csv
import re

import pytest

from minsurf4 import cli
from minsurf4 import stability as sb
from minsurf4.errors import ConfigError


def run(tmp_path, command, text, *extra):
    cfg = tmp_path / "run.ini"
    cfg.write_text(text)
    out = tmp_path / "out"
    return cli.main([command, "--config", str(cfg), "--out", str(out), *extra]), out


def read_kv(path):
    return dict(line.split("=", 1) for line in path.read_text().splitlines())


def test_load_job_catalog_and_overrides():
    job = cli.load_job("[surface]\nname = sigma_pq\np = 2\nq = 1\nR = 3\n[run]\ngrid = 24\nidentity = 1e-7\n",
                       mesh_level=4)
    assert job.surface.name == "sigma_2_1"
    assert job.surface.domain.R == 3
    assert job.run.grid == 24 and job.run.mesh_level == 4
    assert job.run.tol.identity == 1e-7


def test_load_job_expressions():
    job = cli.load_job("[surface]\ne = z\nf = 0\ng = z^2\nh = 0\n[domain]\nkind = disk\nR = 2\nnx = 16\n")
    assert job.surface.domain.kind == "disk" and job.surface.domain.R == 2
    assert job.run.grid == 16


@pytest.mark.parametrize("text", [
    "[surface]\nname = nope\n",
    "[surface]\ne = z\nf = 0\n",
    "[surface]\ne = z\nf = z\ng = 0\nh = 0\n",
    "[run]\ngrid = 3\n",
    "[run]\nbogus = 1\n",
    "[extra]\n",
    "[surface]\nname = catenoid\nR = 2\n",
    "[run]\ncoverage = maybe\n",
    "[atlas]\npoints = a:1\n",
])
def test_config_errors(text):
    with pytest.raises(ConfigError):
        cli.load_job(text)


def test_config_error_exit_code(tmp_path):
    code, _ = run(tmp_path, "analyze", "[run]\ngrid = 2\n")
    assert code == cli.EXIT_CONFIG
    code, _ = run(tmp_path, "analyze", "[run]\ngrid = 16\n")
    assert code == cli.EXIT_CONFIG


def test_analyze_flat_line(tmp_path):
    code, out = run(tmp_path, "analyze", "[surface]\nname = flat_line\n[run]\ngrid = 16\nmesh_level = 4\n")
    assert code == 0
    kv = read_kv(out / "report.txt")
    assert kv["verdict"] == "Stable"
    assert float(kv["area.aL_pull"]) == 0 and float(kv["area.total_pull"]) == 0
    assert kv["checks.failed"] == "0"
    rows = list(csv.DictReader((out / "areas.csv").open()))
    assert rows[0]["surface"] == "flat_line"


def test_analyze_catenoid_flat_normal(tmp_path):
    code, out = run(tmp_path, "analyze", "[surface]\nname = catenoid\n[run]\ngrid = 16\n")
    assert code == 0
    kv = read_kv(out / "report.txt")
    assert float(kv["fact.max_abs_KN"]) < 1e-12
    assert kv["certificate.flat_normal.verdict"] == "Stable"
    assert kv["certificate.flat_normal.criterion"] == "FlatNormal"


def test_analyze_sigma_total(tmp_path):
    code, out = run(tmp_path, "analyze", "[surface]\nname = sigma_1_2\n[run]\ngrid = 16\nsecond_variation = false\n"
                    "coverage = false\n")
    assert code == 0
    kv = read_kv(out / "report.txt")
    assert float(kv["area.total_grassmannian"]) / (2 * 3.141592653589793) == pytest.approx(3.0, rel=0.01)
    assert kv["certificate.total_area_pipeline.verdict"] == "Unknown"


def test_tampered_tolerance_exit_two(tmp_path):
    code, out = run(tmp_path, "analyze", "[surface]\nname = catenoid\n[run]\ngrid = 16\nidentity = 1e-20\n"
                    "coverage = false\nsecond_variation = false\n")
    assert code == cli.EXIT_VIOLATION
    kv = read_kv(out / "report.txt")
    failed = [k for k, v in kv.items() if k.endswith(".status") and v == "FAIL"]
    assert failed
    assert all(k.replace(".status", ".value") in kv for k in failed)


def test_associate_outputs(tmp_path):
    code, out = run(tmp_path, "associate", "[surface]\nname = catenoid_balanced\n[run]\ngrid = 16\ntsamples = 5\n")
    assert code == 0
    rows = list(csv.reader((out / "trajectory.csv").open()))
    assert rows[0][:6] == ["t", "aL_prop", "aR_prop", "total_prop", "metric_residual", "KT_residual"]
    assert len(rows) == 6
    assert rows[1][0] == "0" and rows[1][-1] == "1"
    kv = read_kv(out / "associate.txt")
    assert kv["balanced_t0"] == "0"
    assert "NotInIdentityComponent" in kv["diagnostic.swap_path"]
    assert complex(kv["diagnostic.det_AinvSA"]) == pytest.approx(-1.0)


def test_associate_unbalanced_reports_diagnostic(tmp_path):
    code, out = run(tmp_path, "associate", "[surface]\nname = complex_curve\n[run]\ngrid = 16\ntsamples = 3\n")
    assert code == 0
    kv = read_kv(out / "associate.txt")
    assert kv["certificate.total_area_pipeline.verdict"] == "Unknown"
    assert "NotInIdentityComponent" in kv["certificate.total_area_pipeline.notes"]
    assert "certificate.total_area_pipeline.det_AinvSA" in kv


def _points(svg):
    return [tuple(map(float, m)) for m in re.findall(r'<circle class="surface" cx="([\d.]+)" cy="([\d.]+)"', svg)]


def test_atlas_curves_only(tmp_path):
    code = cli.main(["atlas", "--out", str(tmp_path)])
    assert code == 0
    svg = (tmp_path / "atlas.svg").read_text()
    assert 'width="800" height="800"' in svg
    for ident in ("sum-third", "hyperbola", "enlarged", "diagonal", "open-question"):
        assert f'id="{ident}"' in svg
    assert "stroke-dasharray" in svg.split('id="open-question"')[1].split("/>")[0]
    assert not _points(svg)
    pts = cli.hyperbola_polyline()
    d = ((pts[:, 0] - 0.5) ** 2 + (pts[:, 1] - 0.5) ** 2) ** 0.5
    assert d.min() < 1e-9
    e = cli.enlarged_polyline()
    assert e[0] == pytest.approx([0, cli.ENLARGED_INTERCEPT])
    assert e[-1] == pytest.approx([cli.ENLARGED_INTERCEPT, 0], abs=1e-12)


def test_atlas_points(tmp_path):
    code, out = run(tmp_path, "atlas", "[surface]\nname = catenoid_balanced\n[run]\ngrid = 16\ncoverage = false\n"
                    "tsamples = 3\n[atlas]\npoints = flat:0,0\ntrajectory = true\n")
    assert code == 0
    svg = (out / "atlas.svg").read_text()
    pts = _points(svg)
    assert pts[0] == (80.0, 720.0)
    x, y = pts[1]
    # balanced snapshot sits on the diagonal
    assert (x - 80) == pytest.approx(720 - y, abs=1e-3)
    assert 'class="trajectory"' in svg


def test_examples_and_verify_deterministic(tmp_path):
    assert cli.main(["examples", "--out", str(tmp_path / "ex")]) == 0
    names = sorted(p.name for p in (tmp_path / "ex").iterdir())
    assert "verify_quick.ini" in names and "catenoid.ini" in names
    for n in names:
        cli.load_job((tmp_path / "ex" / n).read_text())
    cfg = "[run]\ngrid = 8\nmesh_level = 5\ncaps = 5\nsurfaces = flat_line\n"
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    code1, out1 = run(tmp_path / "a", "verify", cfg)
    code2, out2 = run(tmp_path / "b", "verify", cfg)
    assert code1 == code2 == 0
    t1 = (out1 / "verify.txt").read_bytes()
    assert t1 == (out2 / "verify.txt").read_bytes()
    # grid 8 is below the second-variation minimum: skipped, not failed
    assert re.search(rb"^SKIP\s+flat_line:second_variation", t1, re.M)


def test_seed_env_override(monkeypatch):
    monkeypatch.setenv("MINSURF4_SEED", "12345")
    assert cli.load_job("").run.seed == 12345
    assert cli.load_job("[run]\nseed = 7\n").run.seed == 7


def test_fmt():
    assert cli.fmt(0.1) == "0.1"
    assert cli.fmt(float("inf")) == "inf"
    assert cli.fmt(None) == "none"
    assert cli.fmt(True) == "true"
    assert cli.fmt(sb.Verdict.STABLE) == "Stable"
