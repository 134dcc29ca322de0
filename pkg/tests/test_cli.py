from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from gaussgeo import __version__
from gaussgeo.cli import main
from gaussgeo.volumes import v_gc_analytic, v_icbc_analytic


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fields(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines())


def read_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith(f"# gaussgeo {__version__} ")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


class TestClassify:
    @pytest.mark.parametrize(
        "m,n,expected",
        [("1,0,0,1", "0,0,0,0", "CPOnly"), ("0,0,0,0", "1,0,0,1", "EB"), ("2,0,0,2", "0,0,0,0", "NotCP")],
    )
    def test_examples(self, capsys, m, n, expected):
        code, out, _ = run(capsys, "classify", "--M", m, "--N", n, "--c", "0,0")
        assert code == 0
        f = fields(out)
        assert f["class"] == expected
        assert set(f) == {"det_M", "det_N", "class", "residual_CP", "residual_EB", "residual_ICB"}

    def test_malformed_matrix(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["classify", "--M", "1,0,0", "--N", "0,0,0,0"])
        assert exc.value.code == 2

    def test_asymmetric_noise(self, capsys):
        code, _, err = run(capsys, "classify", "--M", "1,0,0,1", "--N", "1,0.5,0,1")
        assert code == 2
        assert "symmetric" in err

    def test_json(self, capsys):
        code, out, _ = run(capsys, "classify", "--M", "0,0,0,0", "--N", "1,0,0,1", "--json")
        doc = json.loads(out)
        assert doc["records"][0]["class"] == "EB"
        assert doc["version"] == __version__


class TestCJ:
    def test_identity(self, capsys):
        code, out, _ = run(capsys, "cj", "to", "--M", "1,0,0,1", "--N", "0,0,0,0", "--nu-sigma", "2")
        assert code == 0
        sigma = np.array([float(v) for v in fields(out)["sigma"].split(",")]).reshape(4, 4)
        r3 = np.sqrt(3.0)
        np.testing.assert_allclose(sigma[:2, 2:], np.diag([r3, -r3]), atol=1e-15)
        assert float(fields(out)["mu"]) == pytest.approx(1.0)

    def test_round_trip(self, capsys):
        M, N, c = "0.8,0.3,-0.2,1.1", "1.5,0.2,0.2,0.9", "0.5,-1"
        _, out, _ = run(capsys, "cj", "to", "--M", M, "--N", N, "--c", c, "--nu-sigma", "2.5")
        f = fields(out)
        code, out, _ = run(capsys, "cj", "from", "--sigma", f["sigma"], "--ell", f["ell"])
        assert code == 0
        g = fields(out)
        for key, orig in (("M", M), ("N", N), ("c", c)):
            got = np.array([float(v) for v in g[key].split(",")])
            np.testing.assert_allclose(got, [float(v) for v in orig.split(",")], atol=1e-9)

    def test_pure_reference_rejected(self, capsys):
        code, _, err = run(capsys, "cj", "to", "--M", "1,0,0,1", "--N", "0,0,0,0", "--nu-sigma", "1")
        assert code == 3
        assert "rank" in err

    def test_non_cp_rejected(self, capsys):
        code, _, err = run(capsys, "cj", "to", "--M", "2,0,0,2", "--N", "0,0,0,0", "--nu-sigma", "2")
        assert code == 3

    def test_missing_inputs(self, capsys):
        assert run(capsys, "cj", "from")[0] == 2
        assert run(capsys, "cj", "to", "--M", "1,0,0,1", "--N", "0,0,0,0")[0] == 2


class TestVolumes:
    def test_analytic_sweep(self, capsys):
        code, out, _ = run(capsys, "volumes", "--sweep", "0.05:0.95:19", "--method", "analytic")
        assert code == 0
        rows = read_csv(out)
        assert len(rows) == 19
        assert list(rows[0]) == ["mu_sigma", "V_GC", "V_EBC", "V_ICBC", "ratio_EB", "ratio_ICB", "method", "err_est"]
        for key in ("ratio_EB", "ratio_ICB"):
            vals = np.array([float(r[key]) for r in rows])
            assert np.all(np.diff(vals) >= 0)

    def test_quadrature_matches_analytic(self, capsys):
        _, a, _ = run(capsys, "volumes", "--sweep", "0.2:0.8:3")
        _, q, _ = run(capsys, "volumes", "--sweep", "0.2:0.8:3", "--method", "quadrature", "--tol", "1e-7")
        for ra, rq in zip(read_csv(a), read_csv(q)):
            for key in ("V_GC", "V_EBC", "V_ICBC"):
                assert float(rq[key]) == pytest.approx(float(ra[key]), rel=1e-6)
            assert rq["method"] == "quadrature"

    def test_mc_byte_identical(self, tmp_path, capsys):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            args = ["volumes", "--mu-sigma", "0.5", "--method", "mc", "--samples", "1000000", "--seed", "42"]
            assert main(args + ["--out", str(p)]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    @pytest.mark.parametrize("ms", ["0", "1", "1.5"])
    def test_endpoint_rejected(self, capsys, ms):
        assert run(capsys, "volumes", "--mu-sigma", ms)[0] == 2

    def test_needs_one_grid(self, capsys):
        assert run(capsys, "volumes")[0] == 2
        assert run(capsys, "volumes", "--mu-sigma", "0.5", "--sweep", "0.1:0.2:2")[0] == 2

    def test_failed_run_leaves_no_file(self, tmp_path, capsys):
        out = tmp_path / "v.csv"
        assert run(capsys, "volumes", "--mu-sigma", "1.0", "--out", str(out))[0] == 2
        assert not out.exists()
        out.write_text("keep")
        assert run(capsys, "volumes", "--sweep", "0.5:1.0:3", "--out", str(out))[0] == 2
        assert out.read_text() == "keep"
        assert sorted(p.name for p in tmp_path.iterdir()) == ["v.csv"]

    def test_full_precision(self, capsys):
        _, out, _ = run(capsys, "volumes", "--mu-sigma", "0.3")
        row = read_csv(out)[0]
        assert float(row["V_GC"]) == v_gc_analytic(0.3)
        assert float(row["ratio_ICB"]) == v_icbc_analytic(0.3) / v_gc_analytic(0.3)


class TestRegions:
    def test_default_panels(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        assert main(["regions", "--grid", "21", "--out", str(out)]) == 0
        rows = read_csv(out.read_text())
        assert sorted({r["mu_sigma"] for r in rows}) == ["0.20000000000000001", "0.5", "0.80000000000000004"]
        assert len(rows) == 3 * 21 * 21
        for r in rows:
            mu, ma = float(r["mu"]), float(r["mu_A"])
            assert r["nonsteerable"] == ("true" if mu <= ma else "false")
            if r["label"] == "Separable":
                assert float(r["entangled_fraction"]) == 0.0
            if r["label"] == "Entangled":
                assert float(r["entangled_fraction"]) == 1.0
            if r["label"] == "Unphysical":
                assert r["entangled_fraction"] == "nan"

    def test_json_records(self, capsys):
        code, out, _ = run(capsys, "regions", "--mu-sigma", "0.5", "--grid", "5", "--json")
        doc = json.loads(out)
        assert doc["columns"][:3] == ["mu_sigma", "mu", "mu_A"]
        assert len(doc["records"]) == 25
        assert any(r["entangled_fraction"] is None for r in doc["records"])

    def test_validation(self, capsys):
        assert run(capsys, "regions", "--grid", "1")[0] == 2
        assert run(capsys, "regions", "--mu-sigma", "0.5,1.0")[0] == 2


def test_overlap(capsys):
    code, out, _ = run(capsys, "overlap", "--sigma-a", "1,0,0,1", "--sigma-b", "1,0,0,1", "--ell-b", "2,0")
    assert code == 0
    assert float(fields(out)["overlap"]) == pytest.approx(np.exp(-1.0))


def test_overlap_size_mismatch(capsys):
    assert run(capsys, "overlap", "--sigma-a", "1,0,0,1", "--sigma-b", "1,0,0")[0] == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gaussgeo.cli", "classify", "--M", "1,0,0,1", "--N", "0,0,0,0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "class: CPOnly" in proc.stdout
