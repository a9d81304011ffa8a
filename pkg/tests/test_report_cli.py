"""Report JSON contract, the survey harness, and CLI exit codes."""

import json
import os

import pytest

from schemeconn.catalog import build_family, gen_cyclic, save_scheme
from schemeconn.cli import main
from schemeconn.report import (AnalysisConfig, analyze_relation,
                               analyze_scheme, builtin_entries, run_survey)

REQUIRED_FIELDS = [
    "scheme", "relation", "v", "d", "valency", "connected", "complete",
    "symmetrized", "diameter", "kappa", "lambda", "godsil_bound_num",
    "godsil_bound_den", "whitney_ok", "godsil_ok", "conjecture_ok",
    "twin_pairs", "h_prime_connected", "theorem1", "corollaries", "iuw",
    "w_empty", "small_cut", "min_cut_count", "min_cuts_are_neighborhoods",
    "ball_deletion", "spectral", "findings", "ok",
]


def test_report_fields_present():
    rep = analyze_relation(gen_cyclic(5), 1)
    for field in REQUIRED_FIELDS:
        assert field in rep, field
    assert rep["ok"] and not rep["findings"]


def test_petersen_relation_report():
    rep = analyze_relation(build_family("johnson", (5, 2)), 2)
    assert rep["kappa"] == 3 and rep["lambda"] == 3 and rep["valency"] == 3
    t1 = rep["theorem1"]
    assert t1["status"] == "ok"
    assert t1["exists_a_connected"] and t1["forall_a_connected"]
    assert t1["h_prime_connected"] and t1["twin_free"] and t1["equivalent"]
    assert rep["godsil_bound_num"] == 5 and rep["godsil_bound_den"] == 3
    assert rep["conjecture_ok"] is True
    assert rep["min_cut_count"] == 10
    assert rep["min_cuts_are_neighborhoods"] is True


def test_h42_r2_report_consistent_negative():
    # disconnected relation: equivalence audit is gated, report stays clean
    rep = analyze_relation(build_family("hamming", (4, 2)), 2)
    assert rep["twin_pairs"] == 8
    assert rep["h_prime_connected"] is False
    t1 = rep["theorem1"]
    assert t1["status"] == "skipped" and "disconnected" in t1["reason"]
    assert rep["ok"]


def test_h62_r3_report_consistent_negative():
    # connected relation where all four equivalence conditions fail together
    rep = analyze_relation(build_family("hamming", (6, 2)), 3)
    assert rep["h_prime_connected"] is False
    t1 = rep["theorem1"]
    assert t1["status"] == "ok" and t1["equivalent"]
    assert not t1["twin_free"] and not t1["h_prime_connected"]
    assert not t1["exists_a_connected"] and not t1["forall_a_connected"]
    assert rep["ok"]


def test_cyclic5_small_cut_section():
    rep = analyze_relation(gen_cyclic(5), 1)
    sc = rep["small_cut"]
    assert rep["kappa"] == 2
    assert sc["tcut2_applicable"] and sc["tcut2_ok"]


def test_disconnected_relation_sections_skipped():
    rep = analyze_relation(build_family("hamming", (4, 2)), 4)
    assert rep["connected"] is False
    assert rep["kappa"] is None and rep["lambda"] is None
    for section in ("corollaries", "w_empty", "small_cut", "ball_deletion"):
        assert rep[section]["status"] == "skipped"
    assert rep["ok"]


def test_spectral_section_encoding():
    rep = analyze_relation(build_family("johnson", (5, 2)), 1)
    spec = rep["spectral"]
    assert spec["multiplicities"] == [1, 4, 5]
    # decimal-string encoding, 12 significant digits
    assert all(isinstance(x, str) for row in spec["P"] for x in row)
    assert spec["P"][0][0] == "1"
    assert isinstance(spec["second_eigenvalue"], str)
    assert spec["cut_size_lemma"]["applicable"] in (True, False)


def test_analyze_scheme_symmetrizes():
    reports = analyze_scheme(build_family("conjugacy", ("Z5",)))
    assert len(reports) == 2
    assert all(rep["symmetrized"] for rep in reports)
    assert reports[0]["v"] == 5 and reports[0]["valency"] == 2
    with pytest.raises(ValueError):
        analyze_scheme(build_family("conjugacy", ("Z5",)), symmetrize=False)


def test_config_threading():
    rep = analyze_relation(build_family("johnson", (9, 2)), 1,
                           config=AnalysisConfig(seed=99))
    assert rep["corollaries"]["seed"] == 99
    assert rep["config"]["seed"] == 99


def test_builtin_entries_cover_catalog():
    entries = builtin_entries()
    assert len(entries) >= 40
    assert all(rel is None for _, rel in entries)


# -- survey harness ------------------------------------------------------

SMALL_ENTRIES = [
    (("cyclic", (5,)), None),
    (("johnson", (5, 2)), None),
    (("hamming", (3, 2)), None),
    (("conjugacy", ("S3",)), None),
]


def _tree(root):
    out = {}
    for name in sorted(os.listdir(root)):
        with open(os.path.join(root, name), "rb") as fh:
            out[name] = fh.read()
    return out


def test_survey_writes_reports_and_summary(tmp_path):
    out = tmp_path / "reports"
    summary = run_survey(SMALL_ENTRIES, str(out))
    assert summary["ok"]
    assert summary["errors"] == [] and summary["counterexamples"] == []
    assert summary["reports"] == 2 + 2 + 3 + 2
    names = sorted(os.listdir(out))
    assert "summary.json" in names
    assert "cyclic-5-r1.json" in names
    with open(out / "cyclic-5-r1.json", encoding="utf-8") as fh:
        rep = json.load(fh)
    assert rep["kappa"] == 2


def test_survey_jobs_byte_identical(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    run_survey(SMALL_ENTRIES, str(a), jobs=1)
    run_survey(SMALL_ENTRIES, str(b), jobs=2)
    ta, tb = _tree(a), _tree(b)
    assert list(ta) == list(tb)
    for name in ta:
        assert ta[name] == tb[name], name


def test_survey_isolates_bad_entry(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out = tmp_path / "out"
    entries = [(("cyclic", (5,)), None), (("file", str(bad)), None)]
    summary = run_survey(entries, str(out))
    assert not summary["ok"]
    assert len(summary["errors"]) == 1
    assert summary["errors"][0]["entry"] == 1
    assert "ParseError" in summary["errors"][0]["error"]
    # the good entry still produced its report
    assert (out / "cyclic-5-r1.json").exists()


def test_survey_relation_selection(tmp_path):
    out = tmp_path / "sel"
    summary = run_survey([(("hamming", (3, 2)), [1])], str(out))
    assert summary["reports"] == 1
    assert sorted(os.listdir(out)) == ["hamming-3-2-r1.json", "summary.json"]


# -- CLI -----------------------------------------------------------------

def _write_pentagon(tmp_path):
    path = tmp_path / "pentagon.json"
    save_scheme(gen_cyclic(5), str(path))
    return path


def test_cli_verify_ok(tmp_path, capsys):
    path = _write_pentagon(tmp_path)
    assert main(["verify", str(path)]) == 0
    assert "valid symmetric scheme" in capsys.readouterr().out


def test_cli_verify_parse_error(tmp_path, capsys):
    path = tmp_path / "trunc.json"
    path.write_text('{"name": "x", "v": 5')
    assert main(["verify", str(path)]) == 1
    assert "parse error" in capsys.readouterr().err


def test_cli_verify_invalid_scheme(tmp_path, capsys):
    # P4 distance matrix is a partition but not a scheme
    classes = [[abs(i - j) for j in range(4)] for i in range(4)]
    path = tmp_path / "p4.json"
    path.write_text(json.dumps(
        {"name": "p4", "v": 4, "d": 3, "classes": classes}))
    assert main(["verify", str(path)]) == 2
    assert "invalid scheme" in capsys.readouterr().err


def test_cli_analyze_family(tmp_path, capsys):
    report = tmp_path / "out.json"
    code = main(["analyze", "--family", "johnson", "5", "2",
                 "--relation", "2", "--report", str(report)])
    assert code == 0
    assert "kappa=3" in capsys.readouterr().out
    with open(report, encoding="utf-8") as fh:
        payload = json.load(fh)
    assert isinstance(payload, list) and len(payload) == 1
    assert payload[0]["scheme"] == "johnson-5-2"


def test_cli_analyze_file_all_relations(tmp_path, capsys):
    path = _write_pentagon(tmp_path)
    assert main(["analyze", str(path)]) == 0
    out = capsys.readouterr().out
    assert "r1" in out and "r2" in out


def test_cli_analyze_no_source(capsys):
    assert main(["analyze"]) == 1


def test_cli_analyze_refuse_symmetrize(capsys):
    code = main(["analyze", "--family", "conjugacy", "Z5",
                 "--no-symmetrize"])
    assert code == 2


def test_cli_cuts_pentagon(capsys):
    code = main(["cuts", "--family", "cyclic", "5", "--relation", "1",
                 "--max-size", "2"])
    assert code == 0
    out = capsys.readouterr().out
    assert "5 minimum cuts of size 2" in out
    assert "all_neighborhoods=True" in out


def test_cli_cuts_cap(capsys):
    code = main(["cuts", "--family", "johnson", "8", "2", "--relation", "1",
                 "--max-size", "10"])
    assert code == 4
    assert "CapExceeded" in capsys.readouterr().err


def test_cli_survey_manifest(tmp_path, capsys):
    out = tmp_path / "sv"
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({
        "entries": [{"family": ["cyclic", 5]},
                    {"family": ["hamming", 3, 2], "relations": [1]}],
        "out": str(out), "jobs": 1,
    }))
    assert main(["survey", "--manifest", str(manifest)]) == 0
    assert "3 reports" in capsys.readouterr().out
    assert (out / "summary.json").exists()


def test_cli_survey_manifest_fail_fast(tmp_path, capsys):
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({
        "entries": [{"file": str(tmp_path / "missing.json")}],
        "out": str(tmp_path / "never"),
    }))
    assert main(["survey", "--manifest", str(manifest)]) == 1
    assert not (tmp_path / "never").exists()


def test_cli_survey_bad_manifest_shape(tmp_path):
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({"schemes": []}))
    assert main(["survey", "--manifest", str(manifest)]) == 1


def test_cli_survey_content_error_isolated(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    # valid JSON, resolvable file, but not a valid scheme: isolated at run time
    classes = [[abs(i - j) for j in range(4)] for i in range(4)]
    bad.write_text(json.dumps(
        {"name": "p4", "v": 4, "d": 3, "classes": classes}))
    out = tmp_path / "sv"
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({
        "entries": [{"family": ["cyclic", 5]}, {"file": str(bad)}],
        "out": str(out),
    }))
    assert main(["survey", "--manifest", str(manifest)]) == 3
    assert (out / "cyclic-5-r1.json").exists()
    assert "NonConstantIntersection" in capsys.readouterr().err


def test_cli_survey_jobs_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("SCHEME_CONN_JOBS", "2")
    out = tmp_path / "sv"
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps(
        {"entries": [{"family": ["cyclic", 6]}], "out": str(out)}))
    assert main(["survey", "--manifest", str(manifest)]) == 0
    assert len(os.listdir(out)) == 4  # r1 r2 r3 + summary
