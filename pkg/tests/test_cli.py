"""Command line front end: formats, exit codes, report determinism.

Everything runs through dispatch() in process, so exit codes and emitted
JSON are asserted directly without spawning subprocesses.
"""

import json
import math

import numpy as np
import pytest

from hadabound.cli import (
    dispatch,
    fixture_path,
    format_matrix,
    parse_matrix_text,
    write_matrix,
)
from hadabound.errors import MatrixFormatError

A = np.array([[2.0, 1.0, 1.0], [1.0, 1.0, 0.0], [1.0, 0.0, 1.0]])
B = np.array([[2.0, 1.0, 1.0], [1.0, 1.0, 1.0], [1.0, 1.0, 1.0]])


def run(capsys, *argv):
    """Dispatch and return (exit_code, parsed_report_or_None)."""
    code = dispatch(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


class TestMatrixFormat:
    def test_parse_real(self):
        text = "n 2 2 real\n1.5 2\n2 -3\n"
        np.testing.assert_array_equal(
            parse_matrix_text(text), np.array([[1.5, 2.0], [2.0, -3.0]])
        )

    def test_parse_complex(self):
        text = "n 2 2 complex\n1,0 0,-1\n0,1 2,0\n"
        expected = np.array([[1.0, -1.0j], [1.0j, 2.0]])
        np.testing.assert_array_equal(parse_matrix_text(text), expected)

    def test_blank_lines_and_extra_spacing_are_tolerated(self):
        text = "\nn 2 2 real\n\n 1  0 \n0 1\n\n"
        np.testing.assert_array_equal(parse_matrix_text(text), np.eye(2))

    def test_roundtrip_real_is_exact(self):
        rng = np.random.default_rng(51)
        m = rng.normal(size=(4, 3))
        again = parse_matrix_text(format_matrix(m))
        assert np.array_equal(again, m.astype(np.complex128))

    def test_roundtrip_complex_is_exact(self):
        rng = np.random.default_rng(52)
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        assert np.array_equal(parse_matrix_text(format_matrix(m)), m)

    @pytest.mark.parametrize(
        "text,fragment",
        [
            ("", "1:1: empty file"),
            ("m 2 2 real\n1 0\n0 1\n", "header must be"),
            ("n 2 2 int\n1 0\n0 1\n", "entry kind must be"),
            ("n x 2 real\n1 0\n0 1\n", "must be integers"),
            ("n 0 2 real\n", "must be positive"),
            ("n 2 2 real\n1 0\n", "expected 2 data rows, found 1"),
            ("n 2 2 real\n1 0 3\n0 1\n", "expected 2 entries, found 3"),
            ("n 2 2 real\n1,2 0\n0 1\n", "complex entry"),
            ("n 2 2 complex\n1,2,3 0,0\n0,0 1,0\n", "malformed complex entry"),
            ("n 2 2 complex\na,b 0,0\n0,0 1,0\n", "cannot parse complex entry"),
            ("n 2 2 real\nabc 0\n0 1\n", "cannot parse entry"),
        ],
    )
    def test_errors_carry_location(self, text, fragment):
        with pytest.raises(MatrixFormatError, match="f.mtx:\\d+:\\d+"):
            try:
                parse_matrix_text(text, source="f.mtx")
            except MatrixFormatError as exc:
                assert fragment in str(exc)
                raise

    def test_error_column_points_at_token(self):
        with pytest.raises(MatrixFormatError, match="f.mtx:2:3"):
            parse_matrix_text("n 1 2 real\n1 bad\n", source="f.mtx")


class TestFixtures:
    def test_packaged_inputs_parse(self):
        a = parse_matrix_text(open(fixture_path("singular_pair_a.mtx")).read())
        b = parse_matrix_text(open(fixture_path("singular_pair_b.mtx")).read())
        np.testing.assert_array_equal(a.real, A)
        np.testing.assert_array_equal(b.real, B)

    def test_projection_fixture(self):
        p = parse_matrix_text(open(fixture_path("rank2_projection_p.mtx")).read())
        assert float(np.max(np.abs(p @ p - p))) < 1e-15


class TestBoundCommand:
    def test_golden_pair_verifies(self, capsys):
        code, doc = run(
            capsys,
            "bound",
            "--a", fixture_path("singular_pair_a.mtx"),
            "--b", fixture_path("singular_pair_b.mtx"),
        )
        assert code == 0
        assert list(doc) == ["command", "inputs", "results", "timing_ms"]
        assert doc["command"] == "bound"
        assert doc["timing_ms"] is None
        res = doc["results"]
        assert res["status"] == "verified"
        assert res["r_b"] == 2
        assert res["mu"] == pytest.approx((3 - math.sqrt(5)) / 2, abs=1e-9)
        assert res["kappa_eff"] == pytest.approx(3 + 2 * math.sqrt(2), abs=1e-9)
        assert res["quantitative_bound"] == pytest.approx(
            res["mu"] / res["kappa_eff"], abs=1e-12
        )

    def test_reports_are_byte_identical(self, tmp_path, capsys):
        paths = [str(tmp_path / f"r{i}.json") for i in (0, 1)]
        for path in paths:
            code = dispatch(
                [
                    "bound",
                    "--a", fixture_path("singular_pair_a.mtx"),
                    "--b", fixture_path("singular_pair_b.mtx"),
                    "--json", path,
                ]
            )
            assert code == 0
        capsys.readouterr()
        blobs = [open(p, "rb").read() for p in paths]
        assert blobs[0] == blobs[1]

    def test_timing_flag_adds_measurement(self, capsys):
        code, doc = run(
            capsys,
            "bound",
            "--a", fixture_path("singular_pair_a.mtx"),
            "--b", fixture_path("singular_pair_b.mtx"),
            "--timing",
        )
        assert code == 0
        assert isinstance(doc["timing_ms"], float)
        assert doc["timing_ms"] >= 0.0

    def test_vanishing_diagonal_fails_cleanly(self, tmp_path, capsys):
        b_path = str(tmp_path / "b.mtx")
        write_matrix(np.diag([1.0, 0.0, 1.0]), b_path)
        a_path = str(tmp_path / "a.mtx")
        write_matrix(np.eye(3), a_path)
        code, doc = run(capsys, "bound", "--a", a_path, "--b", b_path)
        assert code == 1
        assert doc["results"]["status"] == "failed"
        assert doc["results"]["reason"] == "min_diag is zero"

    def test_indefinite_input_is_a_usage_error(self, capsys):
        code = dispatch(
            [
                "bound",
                "--a", fixture_path("indefinite_c.mtx"),
                "--b", fixture_path("singular_pair_b.mtx"),
            ]
        )
        captured = capsys.readouterr()
        assert code == 2
        assert captured.out == ""
        assert "positive semidefinite" in captured.err

    def test_missing_file(self, capsys):
        code, doc = run(capsys, "bound", "--a", "/no/such.mtx", "--b", "/no/such.mtx")
        assert code == 2

    def test_malformed_matrix_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.mtx"
        bad.write_text("n 2 2 real\n1 0\n")
        code = dispatch(["bound", "--a", str(bad), "--b", str(bad)])
        assert code == 2
        assert "expected 2 data rows" in capsys.readouterr().err


class TestScalarCommands:
    def test_classical(self, capsys):
        code, doc = run(
            capsys,
            "classical",
            "--a", fixture_path("singular_pair_a.mtx"),
            "--b", fixture_path("singular_pair_b.mtx"),
        )
        assert code == 0
        assert doc["results"]["classical_bound"] == pytest.approx(0.0, abs=1e-12)

    def test_kruskal(self, capsys):
        code, doc = run(
            capsys, "kruskal", "--a", fixture_path("singular_pair_b.mtx")
        )
        assert code == 0
        assert doc["results"]["kruskal_rank"] == 1

    def test_kruskal_rectangular(self, tmp_path, capsys):
        path = str(tmp_path / "v.mtx")
        write_matrix(np.array([[1.0, 1.0, 1.0], [0.0, 1.0, 2.0]]), path)
        code, doc = run(capsys, "kruskal", "--a", path)
        assert code == 0
        assert doc["results"]["kruskal_rank"] == 2

    def test_mu(self, capsys):
        code, doc = run(
            capsys, "mu", "--a", fixture_path("singular_pair_a.mtx"), "--m", "2"
        )
        assert code == 0
        assert doc["results"]["value"] == pytest.approx(
            (3 - math.sqrt(5)) / 2, abs=1e-9
        )
        assert doc["results"]["argmin_subset"] == [0, 1]
        assert doc["inputs"]["m"] == 2

    def test_kappa(self, capsys):
        code, doc = run(
            capsys, "kappa", "--b", fixture_path("singular_pair_b.mtx")
        )
        assert code == 0
        assert doc["results"]["kappa_eff"] == pytest.approx(
            3 + 2 * math.sqrt(2), abs=1e-9
        )


class TestCertificateCommands:
    def test_projection_golden(self, capsys):
        code, doc = run(
            capsys,
            "projection",
            "--c", fixture_path("indefinite_c.mtx"),
            "--p", fixture_path("rank2_projection_p.mtx"),
        )
        assert code == 0
        res = doc["results"]
        assert res["status"] == "verified"
        assert res["hypothesis_holds"] and res["conclusion_holds"]
        assert res["projection_rank"] == 2
        assert res["lambda_min_product"] == pytest.approx(
            (16 - math.sqrt(65)) / 3, abs=1e-9
        )

    def test_certify_indefinite_from_shift(self, capsys):
        code, doc = run(
            capsys,
            "certify-indefinite",
            "--a", fixture_path("singular_pair_a.mtx"),
            "--b", fixture_path("singular_pair_b.mtx"),
        )
        assert code == 0
        res = doc["results"]
        assert res["status"] == "verified"
        expected_shift = (3 - math.sqrt(5)) / 2 / (3 + 2 * math.sqrt(2))
        assert res["shift"] == pytest.approx(expected_shift, abs=1e-9)
        assert res["hypothesis_holds"] and res["conclusion_holds"]

    def test_certify_indefinite_fraction(self, capsys):
        code, doc = run(
            capsys,
            "certify-indefinite",
            "--a", fixture_path("singular_pair_a.mtx"),
            "--b", fixture_path("singular_pair_b.mtx"),
            "--fraction", "0.5",
        )
        assert code == 0
        full = (3 - math.sqrt(5)) / 2 / (3 + 2 * math.sqrt(2))
        assert doc["results"]["shift"] == pytest.approx(0.5 * full, abs=1e-9)

    def test_certify_indefinite_hypothesis_failure(self, tmp_path, capsys):
        c_path = str(tmp_path / "c.mtx")
        write_matrix(np.diag([1.0, -1.0]), c_path)
        b_path = str(tmp_path / "b.mtx")
        write_matrix(np.eye(2), b_path)
        code, doc = run(capsys, "certify-indefinite", "--c", c_path, "--b", b_path)
        assert code == 1
        assert doc["results"]["status"] == "failed"
        assert doc["results"]["reason"] == "hypothesis not met"

    def test_certify_indefinite_requires_some_input(self, capsys):
        code, doc = run(
            capsys, "certify-indefinite", "--b", fixture_path("singular_pair_b.mtx")
        )
        assert code == 2


class TestScenarioCommands:
    def test_doa_golden(self, capsys):
        code, doc = run(
            capsys, "doa-bound", "--scenario", fixture_path("doa_coherent_pair.json")
        )
        assert code == 0
        res = doc["results"]
        assert res["status"] == "verified"
        assert res["bound"] == pytest.approx(2 - 2 * math.cos(0.6), abs=1e-12)
        assert res["positivity_predicted"] and res["bound_positive"]

    def test_cp_golden(self, capsys):
        code, doc = run(
            capsys, "cp-bound", "--scenario", fixture_path("cp_rank_deficient.json")
        )
        assert code == 0
        res = doc["results"]
        assert res["status"] == "verified"
        assert res["m1_floor"] == pytest.approx(0.99 - math.sqrt(0.0776), abs=1e-12)
        assert res["condition_met"]

    def test_scenario_missing_field(self, tmp_path, capsys):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({"N": 4, "K": 2, "P": 2, "omega": [0.1, 0.5]}))
        code = dispatch(["doa-bound", "--scenario", str(path)])
        assert code == 2
        assert "missing fields" in capsys.readouterr().err

    def test_scenario_bad_entries(self, tmp_path, capsys):
        path = tmp_path / "s.json"
        path.write_text(
            json.dumps(
                {
                    "N": 4, "K": 2, "P": 2, "omega": [0.1, 0.5],
                    "sigma_s": [[1.0, "x"], ["x", 1.0]],
                }
            )
        )
        code, doc = run(capsys, "doa-bound", "--scenario", str(path))
        assert code == 2

    def test_cp_non_unit_columns(self, tmp_path, capsys):
        path = tmp_path / "s.json"
        path.write_text(
            json.dumps(
                {
                    "d": 2,
                    "A_load": [[2.0, 0.0], [0.0, 1.0]],
                    "B_load": [[1.0, 0.0], [0.0, 1.0]],
                    "g": [[1.0, 1.0]],
                }
            )
        )
        code = dispatch(["cp-bound", "--scenario", str(path)])
        assert code == 2
        assert "unit norm" in capsys.readouterr().err


class TestSelftestCommand:
    def test_small_scale_run_passes(self, capsys):
        code, doc = run(capsys, "selftest", "--scale", "0.02", "--seed", "3")
        assert code == 0
        res = doc["results"]
        assert res["status"] == "verified"
        assert res["all_passed"]
        assert res["total_failures"] == 0
        assert len(res["suites"]) == 9


class TestUsage:
    def test_no_command(self, capsys):
        assert dispatch([]) == 2
        capsys.readouterr()

    def test_unknown_command(self, capsys):
        assert dispatch(["frobnicate"]) == 2
        capsys.readouterr()

    def test_missing_required_option(self, capsys):
        assert dispatch(["mu", "--a", "x.mtx"]) == 2
        capsys.readouterr()
