from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

from ghirano import __version__
from ghirano.cli import EXIT_FALSE, EXIT_INPUT, EXIT_OK, main
from ghirano.matfile import from_document, write_matrix


@pytest.fixture
def mat(tmp_path):
    def make(name, a):
        path = tmp_path / f"{name}.json"
        write_matrix(path, np.atleast_2d(np.asarray(a, dtype=complex)))
        return str(path)

    return make


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    report = json.loads(out.out) if out.out.strip() else None
    return code, report, out.err


class TestSingleOperand:
    def test_hirano(self, capsys, mat):
        code, rep, _ = run(capsys, "hirano", "--in", mat("a", np.diag([1, -1, 0])))
        assert code == EXIT_OK
        res = rep["result"]
        assert {"b", "e", "w", "residuals"} <= set(res)
        assert np.allclose(from_document(res["b"]), np.diag([1, -1, 0]))
        assert rep["tool"] == "ghirano" and rep["version"] == __version__
        assert rep["policy"]["tol_residual"] == 1e-8

    def test_hirano_absent(self, capsys, mat):
        code, rep, _ = run(capsys, "hirano", "--in", mat("a", np.diag([2, 0])))
        assert code == EXIT_FALSE and rep["result"] == {"has_hirano": False}

    def test_classify(self, capsys, mat):
        code, rep, _ = run(capsys, "classify", "--in", mat("a", np.diag([2, 0])))
        assert code == EXIT_FALSE and rep["result"]["is_hirano"] is False

    def test_drazin(self, capsys, mat):
        code, rep, _ = run(capsys, "drazin", "--in", mat("a", np.diag([2, 0])))
        assert code == EXIT_OK and rep["result"]["index"] == 1
        assert np.allclose(from_document(rep["result"]["dinv"]), np.diag([0.5, 0]))

    def test_decompose(self, capsys, mat):
        code, rep, _ = run(capsys, "decompose", "--in", mat("a", [[1, 1], [0, 1]]))
        assert code == EXIT_OK
        assert np.allclose(from_document(rep["result"]["tripotent_split"]["e"]), np.eye(2))
        code, rep, _ = run(capsys, "decompose", "--in", mat("b", np.diag([-1, 0])))
        assert code == EXIT_OK and rep["result"]["idempotent_split"] is None


class TestInputErrors:
    def test_missing_file(self, capsys, tmp_path):
        code, rep, err = run(capsys, "hirano", "--in", str(tmp_path / "nope.json"))
        assert code == EXIT_INPUT and rep is None and "nope.json" in err

    def test_malformed_entry(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"n": 1, "data": [["x", 0]]}')
        code, _, err = run(capsys, "classify", "--in", str(bad))
        assert code == EXIT_INPUT and "data[0][0]" in err

    def test_non_square(self, capsys, mat):
        code, _, err = run(capsys, "hirano", "--in", mat("a", np.zeros((1, 2))))
        assert code == EXIT_INPUT and "dimension" in err

    def test_unknown_flag(self, capsys):
        assert main(["hirano", "--bogus"]) == EXIT_INPUT

    def test_bad_tolerance(self, capsys, mat):
        code, _, err = run(capsys, "hirano", "--in", mat("a", [[1]]), "--tol-rank", "-1")
        assert code == EXIT_INPUT and "--tol-rank" in err

    def test_dimension_mismatch(self, capsys, mat):
        code, _, err = run(capsys, "verify-cline", "--in", mat("a", np.eye(2)), "--in2", mat("b", np.eye(3)))
        assert code == EXIT_INPUT

    def test_help_and_version(self, capsys):
        assert main(["--version"]) == EXIT_OK
        assert main(["--help"]) == EXIT_OK


class TestVerify:
    def test_cline_pair(self, capsys, mat):
        n = [[0, 1], [0, 0]]
        code, rep, _ = run(capsys, "verify-cline", "--in", mat("a", n), "--in2", mat("b", np.array(n).T))
        assert code == EXIT_OK and rep["result"]["holds"]

    def test_cline_truncated_shift(self, capsys):
        code, rep, _ = run(capsys, "verify-cline", "--example37", "--trunc", "3")
        res = rep["result"]
        assert code == EXIT_OK
        assert res["hyp_weak"] and not res["hyp_strong"] and res["aca_neq_dba"] and res["has_hirano_ac"]

    def test_cline_truncated_shift_needs_trunc(self, capsys):
        code, _, err = run(capsys, "verify-cline", "--example37")
        assert code == EXIT_INPUT and "--trunc" in err
        code, _, err = run(capsys, "verify-cline", "--example37", "--trunc", "2")
        assert code == EXIT_INPUT and "--trunc" in err

    def test_cline_quad_precondition(self, capsys, mat):
        blocks = [mat("a", np.eye(2)), mat("b", np.diag([1, 2])), mat("c", np.eye(2)), mat("d", np.diag([1, 3]))]
        code, rep, _ = run(capsys, "verify-cline", "--blocks", *blocks)
        assert code == EXIT_INPUT and rep["status"] == "precondition"

    def test_additive(self, capsys, mat):
        code, rep, _ = run(capsys, "verify-additive", "--in", mat("a", np.diag([1, 0])), "--in2", mat("b", np.diag([0, 1])))
        assert code == EXIT_OK and rep["result"]["additive_equiv"] == [True, True]

    def test_additive_precondition(self, capsys, mat):
        code, rep, _ = run(capsys, "verify-additive", "--in", mat("a", np.diag([2, 0])), "--in2", mat("b", np.eye(2)))
        assert code == EXIT_INPUT and "Hirano" in rep["failed_condition"]

    def test_block_schur(self, capsys, mat):
        blocks = [mat("A", [[1]]), mat("B", [[0]]), mat("C", [[1]]), mat("D", [[0]])]
        code, rep, _ = run(capsys, "verify-block", "--blocks", *blocks)
        checks = rep["result"]["checks"]
        assert code == EXIT_OK and checks["schur"] == {"applicable": True, "holds": True}
        assert rep["result"]["has_hirano_assembled"]

    def test_block_nothing_applies(self, capsys, mat):
        blocks = [mat("A", [[2]]), mat("B", [[1]]), mat("C", [[1]]), mat("D", [[3]])]
        code, rep, _ = run(capsys, "verify-block", "--blocks", *blocks)
        assert code == EXIT_INPUT
        assert not any(c["applicable"] for c in rep["result"]["checks"].values())

    def test_block_shape_error(self, capsys, mat):
        blocks = [mat("A", [[1]]), mat("B", [[0, 0]]), mat("C", [[1]]), mat("D", [[0]])]
        code, _, err = run(capsys, "verify-block", "--blocks", *blocks)
        assert code == EXIT_INPUT and "B must be" in err


class TestProptest:
    def test_summary(self, capsys):
        code, rep, _ = run(capsys, "proptest", "--theorem", "T4.3", "--trials", "50", "--seed", "42")
        assert code == EXIT_OK and rep["seed"] == 42
        assert rep["result"]["summary"]["failed"] == 0
        assert len(rep["result"]["outcomes"]) == 50

    def test_unknown_label(self, capsys):
        assert main(["proptest", "--theorem", "T9.9"]) == EXIT_INPUT

    def test_negative_seed(self, capsys):
        assert main(["proptest", "--theorem", "T4.3", "--seed", "-1"]) == EXIT_INPUT

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "ghirano", "proptest", "--theorem", "Cline", "--trials", "3"],
            capture_output=True,
            text=True,
            check=False,
        )
        assert proc.returncode == 0 and json.loads(proc.stdout)["status"] == "ok"
