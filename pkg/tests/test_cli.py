"""CLI subcommands, exit codes, and output determinism."""

import json

import pytest

from pcfcert.cli import main, parse_scalar_literal, UsageError
from pcfcert.numfield import nf_new
from pcfcert.polyring import Poly, ZZ


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestLiterals:
    def setup_method(self):
        self.K = nf_new(Poly.from_ints(ZZ, [3, 0, 3, 0, 1]))

    def test_integer(self):
        assert parse_scalar_literal("4", self.K) == self.K.from_int(4)
        assert parse_scalar_literal("-7", self.K) == self.K.from_int(-7)

    def test_rational(self):
        from fractions import Fraction

        assert parse_scalar_literal("3/2", self.K) == self.K.from_rational(Fraction(3, 2))

    def test_polynomial(self):
        c = self.K.gen()
        assert parse_scalar_literal("c^2", self.K) == c * c
        assert parse_scalar_literal("2*c^2-c+3", self.K) == (
            self.K.from_int(2) * c * c - c + self.K.from_int(3)
        )

    def test_garbage_rejected(self):
        with pytest.raises(UsageError):
            parse_scalar_literal("x+1", self.K)


class TestSubcommands:
    def test_gleason_text(self, capsys):
        code, out, _ = run_cli(capsys, "gleason", "--d", "2", "--n", "3")
        assert code == 0
        assert out.strip() == "c^3 + 2*c^2 + c + 1"

    def test_misiurewicz_json(self, capsys):
        code, out, _ = run_cli(
            capsys, "misiurewicz", "--d", "3", "--m", "2", "--n", "1", "--format", "json"
        )
        assert code == 0
        data = json.loads(out)
        assert data["norm_form"]["coeffs"] == ["3", "0", "3", "0", "1"]

    def test_orbit(self, capsys):
        code, out, _ = run_cli(capsys, "orbit", "--d", "2", "--i", "2")
        assert code == 0 and out.strip() == "c^2 + c"

    def test_exact_type(self, capsys):
        code, out, _ = run_cli(capsys, "exact-type", "--d", "2", "--gleason-n", "2")
        assert code == 0 and out.strip() == "Periodic(2)"

    def test_factor_verify_count(self, capsys):
        code, out, _ = run_cli(
            capsys, "factor", "--d", "2", "--gleason-n", "2", "--k", "3",
            "--verify", "--format", "json",
        )
        assert code == 0
        data = json.loads(out)
        assert data["product"]["count"] == 3
        assert data["certificate"]["verdict"] == "Verified"

    def test_stability_verified(self, capsys):
        code, out, _ = run_cli(
            capsys, "stability-cert", "--d", "2", "--misiurewicz", "2,1",
            "--alpha", "4", "--kmax", "12",
        )
        assert code == 0 and "Verified" in out

    def test_stability_hypothesis_unmet(self, capsys):
        code, _, err = run_cli(
            capsys, "stability-cert", "--d", "2", "--gleason-n", "2",
            "--alpha", "1", "--kmax", "4",
        )
        assert code == 2 and "hypothesis unmet" in err

    def test_f_irred_cert(self, capsys):
        code, out, _ = run_cli(
            capsys, "f-irred-cert", "--d", "2", "--gleason-n", "2", "--k", "2", "--i", "1"
        )
        assert code == 0 and "Verified" in out

    def test_disc_check(self, capsys):
        code, out, _ = run_cli(
            capsys, "disc-check", "--d", "3", "--gleason-n", "2", "--x0", "3", "--k", "2"
        )
        assert code == 0 and "oracle-checked" in out

    def test_ideal_audit(self, capsys):
        code, out, _ = run_cli(
            capsys, "ideal-audit", "--d", "3", "--misiurewicz", "2,1", "--i", "1"
        )
        assert code == 0 and "A_emp = 4" in out

    def test_nonabelian_verified(self, capsys):
        code, out, _ = run_cli(
            capsys, "nonabelian-cert", "--d", "2", "--gleason-n", "3",
            "--case", "periodic-1", "--alpha", "2",
        )
        assert code == 0 and "Verified" in out

    def test_nonabelian_unsupported_exits_4(self, capsys, tmp_path):
        path = tmp_path / "field.json"
        path.write_text(json.dumps({"g": {"var": "c", "coeffs": ["3", "0", "1"]}}))
        code, _, err = run_cli(
            capsys, "nonabelian-cert", "--d", "2", "--field", str(path),
            "--case", "preperiodic-1", "--alpha", "4",
        )
        assert code == 4 and "unsupported" in err

    def test_field_file_roundtrip(self, capsys, tmp_path):
        path = tmp_path / "field.json"
        path.write_text(json.dumps({"g": {"var": "c", "coeffs": ["1", "1", "2", "1"]}}))
        code, out, _ = run_cli(capsys, "exact-type", "--d", "2", "--field", str(path))
        assert code == 0 and out.strip() == "Periodic(3)"


class TestErrors:
    def test_usage_error_exit_3(self, capsys):
        code, _, err = run_cli(capsys, "exact-type", "--d", "2")
        assert code == 3

    def test_conflicting_field_flags(self, capsys):
        code, _, err = run_cli(
            capsys, "exact-type", "--d", "2", "--gleason-n", "2", "--misiurewicz", "2,1"
        )
        assert code == 3

    def test_budget_exit_4(self, capsys):
        code, _, err = run_cli(
            capsys, "factor", "--d", "2", "--gleason-n", "2", "--k", "30",
            "--budget", "1024",
        )
        assert code == 4

    def test_reducible_field_exit_3(self, capsys, tmp_path):
        path = tmp_path / "field.json"
        path.write_text(json.dumps({"g": {"var": "c", "coeffs": ["-2", "1", "1"]}}))
        code, _, _ = run_cli(capsys, "exact-type", "--d", "2", "--field", str(path))
        assert code == 3


class TestDeterminism:
    CASES = (
        ("gleason", "--d", "2", "--n", "4", "--format", "json"),
        ("misiurewicz", "--d", "3", "--m", "2", "--n", "1", "--format", "json"),
        (
            "factor", "--d", "2", "--gleason-n", "3", "--k", "4", "--verify",
            "--format", "json", "--seed", "1",
        ),
        (
            "stability-cert", "--d", "3", "--gleason-n", "2", "--alpha", "3",
            "--kmax", "6", "--format", "json", "--seed", "1",
        ),
        (
            "nonabelian-cert", "--d", "3", "--gleason-n", "2", "--case",
            "periodic-3", "--alpha", "3", "--format", "json", "--seed", "1",
        ),
    )

    def test_byte_identical_repeats(self, capsys):
        for argv in self.CASES:
            first = run_cli(capsys, *argv)
            second = run_cli(capsys, *argv)
            assert first == second
            assert first[0] == 0
