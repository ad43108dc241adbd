"""Tests for the command-line surface."""

import json

import pytest

from app.cli import EXIT_BAD_CONFIG, EXIT_OK, create_parser, main


class TestParser:

    def test_requires_command(self):
        with pytest.raises(SystemExit):
            create_parser().parse_args([])

    def test_catalog_defaults(self):
        args = create_parser().parse_args(["catalog"])
        assert args.claims == ["all"]
        assert args.t == [1]
        assert args.max_order == 32


class TestCommands:
    """Tests for each subcommand through main()."""

    def test_claims(self, capsys):
        assert main(["claims"]) == EXIT_OK
        ids = [c["id"] for c in json.loads(capsys.readouterr().out)]
        assert "thm_all_modules" in ids and "stratify" in ids

    def test_gamma(self, capsys, spec_file):
        path = spec_file({"ring": {"components": [{"modulus": 8}]}, "rank": 1, "relations": []})
        assert main(["gamma", "--spec", path, "--a", "2", "--t", "2"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["gln"] == [0, 4]
        assert data["gamma"] == [0, 1, 2, 3, 4, 5, 6, 7]

    def test_check_writes_out(self, tmp_path, spec_file, z16_spec):
        """check --out writes the reports as JSON."""
        out = tmp_path / "report.json"
        code = main([
            "check", "--spec", spec_file(z16_spec), "--claim", "equivalences",
            "--a", "2", "--t", "2", "--out", str(out),
        ])
        assert code == EXIT_OK
        reports = json.loads(out.read_text())
        assert reports[0]["claim"] == "equivalences"
        assert reports[0]["status"] == "holds"

    def test_check_mult_set(self, capsys, spec_file):
        path = spec_file({"ring": {"components": [{"modulus": 4}]}})
        code = main([
            "check", "--spec", path, "--claim", "localization", "--mult-set", "[2]", "--t", "1",
        ])
        assert code == EXIT_OK
        reports = json.loads(capsys.readouterr().out)
        assert reports[0]["status"] == "fails"

    def test_catalog_run(self, tmp_path):
        """A stratify run over small rings exits 0 and echoes its configuration."""
        out = tmp_path / "run.json"
        code = main([
            "catalog", "--max-order", "8", "--claims", "stratify", "--t", "1", "--out", str(out),
        ])
        assert code == EXIT_OK
        document = json.loads(out.read_text())
        assert document["configuration"]["claims"] == ["stratify"]
        assert document["summary"]["fails"] == 0
        assert document["summary"]["holds"] == len(document["reports"])

    def test_catalog_table(self, capsys):
        code = main(["catalog", "--max-order", "4", "--claims", "stratify", "--table"])
        assert code == EXIT_OK
        err = capsys.readouterr().err
        assert "stratify" in err
        assert "failed_expected=0" in err

    def test_search(self, capsys):
        assert main(["search", "--claim", "noeth_t_regular_iff_reduced", "--t", "2", "--max-order", "16"]) == EXIT_OK
        witnesses = json.loads(capsys.readouterr().out)
        assert "Z4" in [w["ring"] for w in witnesses]

    def test_unknown_claim(self):
        assert main(["catalog", "--claims", "nope"]) == EXIT_BAD_CONFIG

    def test_missing_spec_file(self, tmp_path):
        assert main(["gamma", "--spec", str(tmp_path / "missing.json"), "--a", "1"]) == EXIT_BAD_CONFIG

    def test_bad_literal(self, spec_file, z16_spec):
        assert main(["gamma", "--spec", spec_file(z16_spec), "--a", "two"]) == EXIT_BAD_CONFIG
