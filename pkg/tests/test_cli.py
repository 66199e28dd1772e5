from __future__ import annotations

import json

import pytest

from zsum.cli import (
    EXIT_FAILED,
    EXIT_INVALID,
    EXIT_OK,
    EXIT_RESOURCE_CAP,
    EXIT_UNSATISFIABLE,
    main,
)
from zsum.groups import canonicalize
from zsum.serialize import dumps_stable, instance_to_json
from zsum.weighted import Instance


def _write_instance(path, statement, group_orders, x, w, ell):
    inst = Instance(group=canonicalize(group_orders), x=x, w=w, ell=ell)
    path.write_text(dumps_stable(instance_to_json(statement, inst)))
    return inst


def test_group_canonicalization(capsys):
    assert main(["group", "--orders", "4,6"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["canonical"]["orders"] == [2, 12]
    assert out["order"] == 24
    assert out["exponent"] == 12


def test_group_rejects_bad_orders(capsys):
    assert main(["group", "--orders", "4,0"]) == EXIT_INVALID
    assert capsys.readouterr().err.strip() != ""


def test_davenport_value_and_witness(capsys):
    assert main(["davenport", "--orders", "3,3"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == 5
    assert len(out["witness"]) == 4


def test_davenport_formula_unavailable(capsys):
    assert main(["davenport", "--orders", "2,2,6", "--formula"]) == EXIT_INVALID


def test_davenport_node_budget(capsys):
    assert main(["davenport", "--orders", "11", "--exact", "--node-budget", "2"]) == EXIT_RESOURCE_CAP


def test_davenport_table(capsys):
    assert main(["davenport-table", "--max-order", "8"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "2x4" in out or "2 x 4" in out.replace("⊕", "x")


def test_solve_word0_example(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    _write_instance(inst_path, "word1", [4], ((1,), (3,), (2,), (2,)), (1, 1, 1, 1), 2)
    assert main(["solve-word0", "--instance", str(inst_path)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["indices"] == [1, 2]


def test_zero_sum_exact_length_found(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    _write_instance(inst_path, "word1", [3], ((1,), (1,), (1,)), (1, 1, 1), 3)
    assert main(["zero-sum", "--length", "3", "--instance", str(inst_path)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["indices"] == [1, 2, 3]


def test_zero_sum_absent_is_unsatisfiable(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    _write_instance(inst_path, "word1", [3], ((1,), (1,), (0,)), (1, 1, 1), 2)
    assert main(["zero-sum", "--length", "2", "--instance", str(inst_path)]) == EXIT_UNSATISFIABLE
    captured = capsys.readouterr()
    assert json.loads(captured.out)["indices"] is None


def test_solve_verify_round_trip_theorem1(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    cert_path = tmp_path / "cert.json"
    _write_instance(inst_path, "theorem1", [3], ((1,), (2,), (0,)), (1, 1, 1), 2)
    assert main(["solve", "--instance", str(inst_path), "--out", str(cert_path)]) == EXIT_OK
    cert = json.loads(cert_path.read_text())
    assert cert["statement"] == "theorem1"
    assert cert["verified"] is True
    assert main(["verify", "--instance", str(inst_path), "--cert", str(cert_path)]) == EXIT_OK
    assert "VALID" in capsys.readouterr().out


def test_solve_verify_round_trip_corollary(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    cert_path = tmp_path / "cert.json"
    _write_instance(
        inst_path, "corollary", [3], ((1,), (2,), (1,), (0,), (2,)), (1, 1, 1), 2
    )
    assert main(["solve", "--instance", str(inst_path), "--out", str(cert_path)]) == EXIT_OK
    cert = json.loads(cert_path.read_text())
    assert cert["I"] == [1, 2, 3]
    assert cert["f"] == {"1": 1, "2": 4, "3": 5}
    assert main(["verify", "--instance", str(inst_path), "--cert", str(cert_path)]) == EXIT_OK


def test_solve_verify_round_trip_word1(tmp_path):
    inst_path = tmp_path / "inst.json"
    cert_path = tmp_path / "cert.json"
    _write_instance(inst_path, "word1", [2], ((0,), (1,)), (2, 1), 1)
    assert main(["solve", "--instance", str(inst_path), "--out", str(cert_path)]) == EXIT_OK
    assert main(["verify", "--instance", str(inst_path), "--cert", str(cert_path)]) == EXIT_OK


def test_verify_rejects_tampered_certificate(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    cert_path = tmp_path / "cert.json"
    _write_instance(inst_path, "theorem1", [3], ((1,), (2,), (0,)), (1, 1, 1), 2)
    main(["solve", "--instance", str(inst_path), "--out", str(cert_path)])
    cert = json.loads(cert_path.read_text())
    cert["I"] = [1, 2, 3]
    cert["f"] = {"1": 1, "2": 2, "3": 3}
    cert_path.write_text(dumps_stable(cert))
    capsys.readouterr()
    assert main(["verify", "--instance", str(inst_path), "--cert", str(cert_path)]) == EXIT_FAILED
    captured = capsys.readouterr()
    assert "INVALID" in captured.out
    assert "size window" in captured.out or "size window" in captured.err


def test_verify_rejects_group_mismatch(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    cert_path = tmp_path / "cert.json"
    other_path = tmp_path / "other.json"
    _write_instance(inst_path, "theorem1", [3], ((1,), (2,), (0,)), (1, 1, 1), 2)
    main(["solve", "--instance", str(inst_path), "--out", str(cert_path)])
    _write_instance(other_path, "theorem1", [2], ((0,), (1,)), (1, 1), 1)
    assert main(["verify", "--instance", str(other_path), "--cert", str(cert_path)]) == EXIT_FAILED


def test_solve_unsatisfiable_corollary(tmp_path):
    inst_path = tmp_path / "inst.json"
    cert_path = tmp_path / "cert.json"
    _write_instance(inst_path, "corollary", [2], ((0,), (0,), (0,)), (1,), 3)
    rc = main(["solve", "--instance", str(inst_path), "--out", str(cert_path)])
    assert rc == EXIT_UNSATISFIABLE
    assert not cert_path.exists()


def test_malformed_instance_reports_location(tmp_path, capsys):
    inst_path = tmp_path / "broken.json"
    inst_path.write_text('{\n  "statement": "theorem1",\n')
    rc = main(["solve", "--instance", str(inst_path), "--out", str(tmp_path / "c.json")])
    assert rc == EXIT_INVALID
    err = capsys.readouterr().err
    assert "line" in err or ":" in err


def test_missing_instance_file(tmp_path):
    rc = main(["verify", "--instance", str(tmp_path / "nope.json"), "--cert", str(tmp_path / "c.json")])
    assert rc == EXIT_INVALID


def test_scan_conjecture_writes_report(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    rc = main(
        [
            "scan-conjecture",
            "--orders",
            "4",
            "--k",
            "2",
            "--weights",
            "1,2,3",
            "--out",
            str(report_path),
        ]
    )
    assert rc == EXIT_OK
    report = json.loads(report_path.read_text())
    assert report["checked"] == 1836
    assert report["counterexample_count"] == 24
    assert report["authoritative"] is True


def test_scan_conjecture_budget_cap(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    rc = main(
        [
            "scan-conjecture",
            "--orders",
            "4",
            "--k",
            "4",
            "--budget",
            "10",
            "--out",
            str(report_path),
        ]
    )
    assert rc == EXIT_RESOURCE_CAP
    report = json.loads(report_path.read_text())
    assert report["authoritative"] is False


def test_scan_conjecture_defaults_weights(capsys):
    rc = main(["scan-conjecture", "--orders", "2", "--k", "1"])
    assert rc == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["config"]["weight_values"] == [1]


def test_solve_oracle_cap_flag_is_accepted(tmp_path):
    inst_path = tmp_path / "inst.json"
    cert_path = tmp_path / "cert.json"
    _write_instance(inst_path, "theorem1", [3], ((1,), (2,), (0,)), (1, 1, 1), 2)
    rc = main(
        ["solve", "--instance", str(inst_path), "--out", str(cert_path), "--oracle-cap", "5"]
    )
    assert rc == EXIT_OK


def test_selftest_writes_summary(tmp_path, capsys, monkeypatch):
    import zsum.acceptance as acceptance

    def fake_run_all(scale="small"):
        return [
            acceptance.CriterionResult(number=1, name="stub", passed=True, details="ok"),
            acceptance.CriterionResult(number=2, name="stub2", passed=False, details="bad"),
        ]

    monkeypatch.setattr(acceptance, "run_all", fake_run_all)
    out_path = tmp_path / "summary.json"
    rc = main(["selftest", "--out", str(out_path)])
    assert rc == EXIT_FAILED  # one stubbed criterion fails
    lines = capsys.readouterr().out.strip().splitlines()
    assert any("PASS" in line for line in lines)
    assert any("FAIL" in line for line in lines)
    summary = json.loads(out_path.read_text())
    assert summary["all_passed"] is False
    assert [r["number"] for r in summary["results"]] == [1, 2]
