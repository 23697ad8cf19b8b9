import json
from pathlib import Path

import pytest

from hktlab import cli
from hktlab.catalog import builtin_by_name, load, serialize

from oracle_impl import ALL_NAMES

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def cat():
    return builtin_by_name()


@pytest.fixture()
def heis4_path(tmp_path, cat):
    # valid wire document whose first complex structure pair is not integrable
    doc = serialize(cat["hopf4"])
    doc["name"] = "heis4"
    doc["structure_constants"] = [[0, 1, 2, "1"]]
    doc.pop("expected", None)
    path = tmp_path / "heis4.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def run(capsys, *argv):
    rc = cli.main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


@pytest.mark.parametrize("name", ALL_NAMES)
def test_analyze_json_matches_golden(capsys, name):
    rc, out, err = run(capsys, "analyze", "--builtin", name, "--format", "json")
    assert rc == 0 and err == ""
    report = json.loads(out)
    assert isinstance(report.pop("elapsed_ms"), int)
    golden = json.loads((GOLDEN_DIR / f"{name}.json").read_text(encoding="utf-8"))
    golden.pop("elapsed_ms")
    assert report == golden


def test_analyze_all_json(capsys):
    rc, out, err = run(capsys, "analyze", "--all", "--format", "json")
    assert rc == 0
    payload = json.loads(out)
    assert [r["entry"] for r in payload["reports"]] == sorted(ALL_NAMES)
    assert all(r["theorem_violations"] == [] for r in payload["reports"])


def test_analyze_text_hopf4(capsys):
    rc, out, err = run(capsys, "analyze", "--builtin", "hopf4")
    assert rc == 0
    assert "entry: hopf4 (n=1, dim=4)" in out
    assert "common skew torsion: ✓  torsion zero: ✗" in out
    assert "ricci-equals-d-lee" in out and "✗" not in out.split("lee form:")[1]
    assert "verdict: tier restricted_SL  [caveat]" in out
    assert "restricted holonomy only" in out
    assert "theorem violations: none" in out


def test_analyze_text_non_hkt(capsys):
    rc, out, err = run(capsys, "analyze", "--builtin", "hc_only8")
    assert rc == 0
    assert "common skew torsion: ✗" in out
    assert "first difference:" in out
    assert "verdict: tier not_applicable" in out
    assert "obstruction flags: none; verdict: inconclusive" in out


def test_analyze_non_integrable_entry(capsys, heis4_path):
    rc, out, err = run(capsys, "analyze", str(heis4_path), "--format", "json")
    assert rc == 0
    report = json.loads(out)
    assert report["validation"]["integrable"] is False
    assert report["validation"]["first_nonintegrable"] == 2
    assert report["obata"] is None
    assert report["verdict"]["sl_tier"] == "not_applicable"
    assert report["theorem_violations"] == []


def test_check_builtin(capsys):
    rc, out, err = run(capsys, "check", "--builtin", "torus4")
    assert rc == 0
    assert out.startswith("ok: torus4")


def test_check_unknown_builtin(capsys):
    rc, out, err = run(capsys, "check", "--builtin", "nope")
    assert rc == 1
    assert "invalid input: unknown entry 'nope'" in err


def test_check_missing_file(capsys, tmp_path):
    rc, out, err = run(capsys, "check", str(tmp_path / "absent.json"))
    assert rc == 2
    assert err.startswith("i/o error:")


def test_check_malformed_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{oops", encoding="utf-8")
    rc, out, err = run(capsys, "check", str(path))
    assert rc == 1
    assert "invalid input:" in err and "parse error" in err


def test_check_requires_one_source(capsys, tmp_path):
    rc, out, err = run(capsys, "check")
    assert rc == 1
    assert "usage error: an entry is required" in err
    path = tmp_path / "x.json"
    path.write_text("{}", encoding="utf-8")
    rc, out, err = run(capsys, "check", str(path), "--builtin", "torus4")
    assert rc == 1
    assert "not both" in err


def test_check_allow_unknown_flag(capsys, tmp_path, cat):
    doc = serialize(cat["torus4"])
    doc["note"] = "extra"
    path = tmp_path / "t.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    rc, out, err = run(capsys, "check", str(path))
    assert rc == 1 and "unknown field" in err
    rc, out, err = run(capsys, "check", str(path), "--allow-unknown")
    assert rc == 0


def test_usage_errors_exit_one(capsys):
    rc, out, err = run(capsys)
    assert rc == 1 and "usage error:" in err
    rc, out, err = run(capsys, "analyze", "--builtin", "hopf4", "--format", "xml")
    assert rc == 1 and "usage error:" in err
    rc, out, err = run(capsys, "analyze", "--all", "--builtin", "hopf4")
    assert rc == 1 and "usage error:" in err


def test_holonomy_default_obata(capsys):
    rc, out, err = run(capsys, "holonomy", "--builtin", "hopf4")
    assert rc == 0
    assert "connection: obata" in out
    assert "holonomy dimension: 0" in out
    assert "special quaternionic: True" in out
    assert "first_violation=None" in out


def test_holonomy_bismut_nil8(capsys):
    rc, out, err = run(capsys, "holonomy", "--builtin", "nil8", "--connection", "bismut")
    assert rc == 0
    assert "holonomy dimension: 3" in out
    assert "metric-skew: True" in out
    assert "quaternion-linear: True" in out


def test_holonomy_levicivita_hopf4(capsys):
    rc, out, err = run(capsys, "holonomy", "--builtin", "hopf4", "--connection", "levicivita")
    assert rc == 0
    assert "holonomy dimension: 3" in out


def test_holonomy_bismut_rejected_without_common_torsion(capsys):
    rc, out, err = run(capsys, "holonomy", "--builtin", "hc_only8", "--connection", "bismut")
    assert rc == 1
    assert "no common skew-torsion connection" in err


def test_holonomy_obata_rejected_non_integrable(capsys, heis4_path):
    rc, out, err = run(capsys, "holonomy", str(heis4_path))
    assert rc == 1
    assert "torsion-free route requires an integrable structure" in err


def test_catalog_list(capsys):
    rc, out, err = run(capsys, "catalog", "--list")
    assert rc == 0
    for name in ALL_NAMES:
        assert f"{name}  (n=" in out
    assert "expected:" in out


def test_catalog_export_round_trip(capsys, tmp_path, cat):
    target = tmp_path / "out.json"
    rc, out, err = run(capsys, "catalog", "--export", "hopf8", str(target))
    assert rc == 0 and str(target) in out
    rc, out, err = run(capsys, "check", str(target))
    assert rc == 0
    assert load(target).lie.brackets == cat["hopf8"].lie.brackets


def test_catalog_export_unknown(capsys, tmp_path):
    rc, out, err = run(capsys, "catalog", "--export", "nope", str(tmp_path / "y.json"))
    assert rc == 1
    assert "unknown entry 'nope'" in err


def test_catalog_group_usage(capsys, tmp_path):
    rc, out, err = run(capsys, "catalog")
    assert rc == 1 and "usage error:" in err
    rc, out, err = run(
        capsys, "catalog", "--list", "--export", "hopf4", str(tmp_path / "z.json")
    )
    assert rc == 1 and "usage error:" in err


def test_env_catalog_dir_extends_builtins(capsys, tmp_path, monkeypatch, cat):
    doc = serialize(cat["torus4"])
    doc["name"] = "usertorus"
    (tmp_path / "usertorus.json").write_text(json.dumps(doc), encoding="utf-8")
    monkeypatch.setenv("HKTLAB_CATALOG_DIR", str(tmp_path))
    rc, out, err = run(capsys, "check", "--builtin", "usertorus")
    assert rc == 0 and out.startswith("ok: usertorus")
    rc, out, err = run(capsys, "catalog", "--list")
    assert rc == 0 and "usertorus" in out
