import json
import subprocess
import sys

import pytest

from newform_stats import cli
from newform_stats.dataset import NewformRecord

from conftest import CURVE_11A3, curve_table, synthetic_records, write_catalog_dir


@pytest.fixture(scope="module")
def catalog_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cat")
    recs = synthetic_records(1, 300, 60) + [NewformRecord(11, 0, 1, 1, -1, (0, 1))]
    write_catalog_dir(root, recs, [curve_table(CURVE_11A3, 11, 8196)])
    return root


def _run(catalog_dir, out, *args, capsys=None):
    argv = ["--catalog", str(catalog_dir / "forms.csv"), "--coefficients", str(catalog_dir / "coefficients"),
            "--out", str(out), *args]
    return cli.run(argv)


def _result(capsys):
    return json.loads(capsys.readouterr().out.strip().splitlines()[-1])


def test_counts_and_manifest(catalog_dir, tmp_path, capsys):
    assert _run(catalog_dir, tmp_path, "counts", "--by", "degree") == cli.EXIT_OK
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["status"] == 0 and manifest["command"] == "counts"
    assert "counts_by_degree.csv" in manifest["artifacts"]
    assert len(manifest["inputs"]["catalog"]) == 64
    assert (tmp_path / "counts_by_degree.csv").read_text().startswith("degree,")


def test_artifacts_are_deterministic(catalog_dir, tmp_path):
    outs = [tmp_path / "a", tmp_path / "b"]
    for out in outs:
        assert _run(catalog_dir, out, "report") == cli.EXIT_OK
    files = sorted(p.relative_to(outs[0]) for p in outs[0].rglob("*") if p.is_file() and p.name != "manifest.json")
    assert files
    for rel in files:
        assert (outs[0] / rel).read_bytes() == (outs[1] / rel).read_bytes(), rel


def test_report_skips_missing_discriminants(catalog_dir, tmp_path, capsys):
    assert _run(catalog_dir, tmp_path, "report") == cli.EXIT_OK
    res = _result(capsys)
    assert "skipped" in res["collisions_8"] and "rows" in res["collisions_5"]


def test_heckepoly_and_genus2(tmp_path, capsys):
    assert cli.run(["--out", str(tmp_path), "heckepoly", "--p", "2", "--n-max", "2"]) == 0
    assert _result(capsys)["h"] == [5, 97]
    assert cli.run(["--out", str(tmp_path), "genus2", "brumer", "1"]) == 0
    data = json.loads((tmp_path / "genus2_brumer_1.json").read_text())
    assert data["core"] == -191 and data["discriminant"] == 191**2


def test_weilbox(tmp_path, capsys):
    assert cli.run(["--out", str(tmp_path), "lt", "weilbox", "--poly=0,1", "--p", "2"]) == 0
    assert _result(capsys)["total"] == 5


def test_lang_trotter_on_stored_form(catalog_dir, tmp_path, capsys):
    assert _run(catalog_dir, tmp_path, "lt", "eisenstein", "--level", "11", "--orbit", "0") == 0
    assert _result(capsys)["ells"] == [5]


@pytest.mark.parametrize("argv,code", [
    (["nope"], cli.EXIT_USAGE),
    ([], cli.EXIT_USAGE),
    (["counts", "--by", "bogus"], cli.EXIT_USAGE),
    (["heckepoly", "--p", "4"], cli.EXIT_VALIDATION),
    (["lt", "weilbox", "--poly=a,b"], cli.EXIT_VALIDATION),
    (["lt", "weilbox"], cli.EXIT_CONFIG),
])
def test_exit_codes(tmp_path, argv, code):
    assert cli.run(["--out", str(tmp_path), *argv]) == code


def test_parse_error_exit(tmp_path):
    bad = tmp_path / "forms.csv"
    bad.write_text("level,orbit,degree,disc,al_sign,field_poly\n11,0,one,1,-1,0;1\n")
    assert cli.run(["--catalog", str(bad), "--out", str(tmp_path / "o"), "counts"]) == cli.EXIT_PARSE
    assert json.loads((tmp_path / "o" / "manifest.json").read_text())["status"] == cli.EXIT_PARSE


def test_compute_error_exit(catalog_dir, tmp_path):
    assert _run(catalog_dir, tmp_path, "collisions", "--disc", "8") == cli.EXIT_COMPUTE


def test_config_file(catalog_dir, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"catalog": str(catalog_dir / "forms.csv"), "out": str(tmp_path / "o")}))
    assert cli.run(["--config", str(cfg), "counts", "--by", "sign"]) == 0
    assert (tmp_path / "o" / "counts_by_sign.csv").exists()
    cfg.write_text(json.dumps({"no_such_field": 1}))
    assert cli.run(["--config", str(cfg), "counts"]) == cli.EXIT_CONFIG
    assert cli.run(["--config", str(tmp_path / "missing.json"), "counts"]) == cli.EXIT_CONFIG


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "newform_stats.cli", "--out", str(tmp_path), "heckepoly", "--p", "3",
                           "--n-max", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["h"] == [2 * 3 + 1]
