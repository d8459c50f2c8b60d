"""
testing/test_cli.py
-------------------
End-to-end tests for the command-line entry point (cli.py).

Each test calls main() in-process and inspects the exit code and the
captured stdout/stderr.
"""
from __future__ import annotations

import json

import pytest

from cli import main
from config import PATHOLOGY_CATALOG
from db import Database


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

class TestCatalogCommand:

    def test_bundled_catalog_holds(self, capsys):
        code, out, _ = run(capsys, "catalog")
        assert code == 0
        assert "X_{4,6}" in out
        assert "Inconclusive" not in out

    def test_single_family_as_json(self, capsys):
        code, out, _ = run(capsys, "catalog", "--family", "X_{4,6}", "--json")
        assert code == 0
        (record,) = json.loads(out)
        assert record["bn"]["exact"] == "sqrt(48)"
        assert record["bn"]["decimal"] == "6.928203230276"
        assert record["chi"] == "8"
        assert record["verdict"] == "Holds"

    def test_pathology_exits_two(self, capsys):
        code, out, _ = run(capsys, "catalog", "--file", str(PATHOLOGY_CATALOG))
        assert code == 2
        assert "Inconclusive" in out

    def test_bad_catalog_exits_one(self, capsys, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("covers:\n  - {name: c, r: 4, d: 2, hY3: 1, colour: red}\n",
                        encoding="utf-8")
        code, _, err = run(capsys, "catalog", "--file", str(path))
        assert code == 1
        assert "unknown fields" in err

    def test_unknown_family_exits_one(self, capsys):
        code, _, err = run(capsys, "catalog", "--family", "X_99")
        assert code == 1
        assert "Unknown family" in err

    def test_writes_database(self, capsys, tmp_path):
        path = tmp_path / "runs.db"
        code, _, _ = run(capsys, "catalog", "--db", str(path))
        assert code == 0
        with Database(path) as db:
            counts = db.row_counts().set_index("table")["rows"]
        assert counts["mart_reports"] == 13
        assert counts["stg_wci"] == 13

    def test_output_is_deterministic(self, capsys):
        _, first, _ = run(capsys, "catalog", "--json")
        _, second, _ = run(capsys, "catalog", "--json")
        assert first == second


# ---------------------------------------------------------------------------
# walls
# ---------------------------------------------------------------------------

class TestWallsCommand:

    def test_line_bundle_has_no_walls(self, capsys):
        code, out, _ = run(capsys, "walls", "--geometry", "delpezzo", "--m", "1",
                           "--class=1,0,0", "--window=-1,0")
        assert code == 0
        assert out.strip() == "no walls"

    def test_oracle_agrees(self, capsys):
        code, out, _ = run(capsys, "walls", "--geometry", "k3", "--m", "2",
                           "--class=1,0,-1", "--window=-3,0", "--oracle")
        assert code == 0
        assert out.strip().splitlines() == ["no walls", "oracle: match"]

    def test_torsion_class_groups_by_slope(self, capsys):
        code, out, _ = run(capsys, "walls", "--geometry", "k3", "--m", "2",
                           "--class=0,2,1", "--window=-1,1", "--cap", "3",
                           "--allow-truncation")
        assert code == 0
        assert out.strip() == "no walls" or out.startswith("slope 1/2 ×")

    def test_json_payload(self, capsys):
        code, out, _ = run(capsys, "walls", "--geometry", "delpezzo", "--m", "1",
                           "--class=1,0,0", "--window=-1,0", "--json")
        assert code == 0
        assert json.loads(out) == {"class": [1, "0", "0"], "walls": []}

    def test_off_lattice_class(self, capsys):
        code, _, err = run(capsys, "walls", "--geometry", "delpezzo", "--m", "1",
                           "--class=1,0,1/3", "--window=-1,0")
        assert code == 1
        assert "lattice" in err


# ---------------------------------------------------------------------------
# bn / bmt / reduce / audit
# ---------------------------------------------------------------------------

class TestCalculators:

    def test_bn_delpezzo(self, capsys):
        code, out, _ = run(capsys, "bn", "--surface", "delpezzo", "--s", "3", "--m", "1")
        assert code == 0
        assert out.strip() == "3"

    def test_bn_k3(self, capsys):
        code, out, _ = run(capsys, "bn", "--surface", "k3", "--s", "4", "--m", "2")
        assert code == 0
        assert out.strip() == "sqrt(48)  ≈ 6.928203230276"

    def test_bn_classical(self, capsys):
        code, out, _ = run(capsys, "bn", "--g", "9", "--gonality", "4")
        assert code == 0
        assert "CliffordBound" in out

    def test_bmt(self, capsys):
        code, out, _ = run(capsys, "bmt", "--h3", "5", "--c2h", "50", "--epsilon", "1/10")
        assert code == 0
        assert out.strip().splitlines() == ["ε = 1/10", "γ = 8", "Γ·H = 215/6"]

    def test_bmt_json_with_class(self, capsys):
        code, out, _ = run(capsys, "bmt", "--h3", "5", "--c2h", "50", "--epsilon", "1/10",
                           "--class=0,0,0,1", "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["gammaH"] == "215/6"
        assert payload["Q"] == "0"
        assert payload["valid"] is True

    def test_reduce_smooth(self, capsys):
        code, out, _ = run(capsys, "reduce", "--m", "5", "--chi", "5", "--bn", "3")
        assert code == 0
        lines = out.splitlines()
        assert "n       2" in lines
        assert "delta   7/100" in lines
        assert "epsilon 7/221" in lines

    def test_reduce_singular(self, capsys):
        code, out, _ = run(capsys, "reduce", "--m", "5", "--chi", "5", "--bn", "3", "--singular")
        assert code == 0
        assert "epsilon 1/18" in out.splitlines()

    def test_reduce_without_certificate(self, capsys):
        code, _, err = run(capsys, "reduce", "--m", "5", "--chi", "5", "--bn", "5")
        assert code == 2
        assert "no certificate" in err

    def test_audit(self, capsys):
        code, out, _ = run(capsys, "audit", "--h3", "5", "--c2h", "50", "--samples", "500")
        assert code == 0
        assert "passed        True" in out.splitlines()


# ---------------------------------------------------------------------------
# Usage errors and logging
# ---------------------------------------------------------------------------

class TestUsage:

    @pytest.mark.parametrize("argv", [
        ["walls"],
        ["frobnicate"],
        ["bn", "--s", "three"],
        ["bmt", "--h3", "5", "--c2h", "50", "--epsilon", "0.1.2"],
    ])
    def test_usage_errors_exit_one(self, capsys, argv):
        assert main(argv) == 1
        capsys.readouterr()

    def test_json_logs_on_stderr(self, capsys):
        code, out, err = run(capsys, "--log-json", "--log-level", "INFO",
                             "bmt", "--h3", "5", "--c2h", "50", "--epsilon", "1/10")
        assert code == 0
        assert '"levelname": "INFO"' in err
        assert "levelname" not in out
