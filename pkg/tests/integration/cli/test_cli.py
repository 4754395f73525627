"""
Integration tests for the batch command line.

Runs cli.main.main end to end on the bundled documents and checks output
and exit codes.
"""

import json
import pytest

from cli.main import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, main


class TestValidateCommand:
    """Tests for `validate`."""

    @pytest.mark.integration
    @pytest.mark.cli
    def test_bundled_document(self, capsys):
        """Test validating a bundled example by name."""
        assert main(["validate", "dual_numbers"]) == EXIT_OK
        assert "5/5 objects valid" in capsys.readouterr().out

    @pytest.mark.integration
    @pytest.mark.cli
    def test_failing_document(self, tmp_path, bundled_raw, capsys):
        """Test that axiom failures exit with the domain code."""
        raw = bundled_raw["dual_numbers"]
        raw["algebras"]["DUAL"]["unit"] = "x"
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(raw), encoding="utf-8")
        assert main(["validate", str(path), "--json"]) == EXIT_DOMAIN
        assert json.loads(capsys.readouterr().out)["ok"] is False

    @pytest.mark.integration
    @pytest.mark.cli
    def test_float_in_document(self, tmp_path, capsys):
        """Test that a document error exits with the usage code and names the location."""
        path = tmp_path / "float.json"
        path.write_text('{"schema_version": "1.0", "algebras": {"A": {"kind": "associative", '
                        '"basis": ["1"], "c": [["1", "1", "1", 1.0]]}}}', encoding="utf-8")
        assert main(["validate", str(path)]) == EXIT_USAGE
        assert "algebras.A.c[0]" in capsys.readouterr().err

    @pytest.mark.integration
    @pytest.mark.cli
    def test_unknown_example(self, capsys):
        """Test an input that is neither a file nor a bundled name."""
        assert main(["validate", "no_such_example"]) == EXIT_USAGE
        assert "unknown bundled example" in capsys.readouterr().err


class TestCohomologyCommand:
    """Tests for `cohomology`."""

    @pytest.mark.integration
    @pytest.mark.cli
    def test_json_output(self, capsys):
        """Test the Betti numbers of (DUAL, 0) as JSON."""
        code = main(["cohomology", "dual_numbers", "--pair", "DUAL_PAIR", "--max-degree", "4", "--json"])
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert [r["dim"] for r in payload["degrees"]] == [0, 1, 1, 1, 1]

    @pytest.mark.integration
    @pytest.mark.cli
    def test_poisson_branch(self, capsys):
        """Test the text table of the modified Poisson complex."""
        code = main(["cohomology", "pois3", "--pair", "POIS3", "--branch", "poisson", "--max-degree", "1"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "branch: poisson" in out
        assert "POIS3 with coefficients" in out

    @pytest.mark.integration
    @pytest.mark.cli
    def test_branch_error(self, capsys):
        """Test that the poisson branch on a plain pair is a domain failure."""
        code = main(["cohomology", "dual_numbers", "--pair", "DUAL_PAIR", "--branch", "poisson"])
        assert code == EXIT_DOMAIN
        assert "not a Poisson algebra" in capsys.readouterr().err

    @pytest.mark.integration
    @pytest.mark.cli
    def test_whitehead(self, capsys):
        """Test the augmenting-column comparison on (Q, sl_2)."""
        code = main(["cohomology", "sl2_over_q", "--pair", "Q_SL2", "--whitehead", "--semisimple"])
        assert code == EXIT_OK
        assert "dimensions agree" in capsys.readouterr().out

    @pytest.mark.integration
    @pytest.mark.cli
    @pytest.mark.parametrize("argv", [
        [],
        ["cohomology", "dual_numbers"],
        ["cohomology", "dual_numbers", "--pair", "DUAL_PAIR", "--max-degree", "-1"],
        ["cohomology", "dual_numbers", "--pair", "DUAL_PAIR", "--branch", "lie"],
    ])
    def test_usage_errors(self, argv):
        """Test that argument errors exit with the usage code."""
        assert main(argv) == EXIT_USAGE

    @pytest.mark.integration
    @pytest.mark.cli
    def test_help(self, capsys):
        """Test that --help succeeds."""
        assert main(["--help"]) == EXIT_OK
        assert "cohomology" in capsys.readouterr().out


class TestDeformCommand:
    """Tests for `deform check` and `deform lift`."""

    @pytest.mark.integration
    @pytest.mark.cli
    def test_check_clean_jet(self, capsys):
        """Test a jet satisfying the axioms."""
        assert main(["deform", "check", "dual_numbers", "--jet", "X2"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "order 1: clean" in out
        assert "nonzero class in H^2" in out
        assert "    class 6:1" in out

    @pytest.mark.integration
    @pytest.mark.cli
    def test_check_reports_class(self, capsys):
        """Test that the JSON report carries the class of the infinitesimal."""
        assert main(["deform", "check", "dual_numbers", "--jet", "X2", "--json"]) == EXIT_OK
        infinitesimal = json.loads(capsys.readouterr().out)["infinitesimal"]
        assert infinitesimal == {"cocycle": True, "trivial_class": False, "class": [[6, "1"]]}

    @pytest.mark.integration
    @pytest.mark.cli
    def test_check_broken_jet(self, capsys):
        """Test that defects exit with the domain code."""
        assert main(["deform", "check", "dual_numbers", "--jet", "BROKEN"]) == EXIT_DOMAIN
        assert "defects in assoc" in capsys.readouterr().out

    @pytest.mark.integration
    @pytest.mark.cli
    def test_lift(self, capsys):
        """Test lifting x² = t to order 5."""
        code = main(["deform", "lift", "dual_numbers", "--jet", "X2", "--order", "5", "--json"])
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["success"] is True
        assert payload["order_reached"] == 5

    @pytest.mark.integration
    @pytest.mark.cli
    def test_lift_non_cocycle(self, capsys):
        """Test that lifting a non-cocycle reports the failing order."""
        assert main(["deform", "lift", "dual_numbers", "--jet", "BROKEN"]) == EXIT_DOMAIN
        assert "(order 1)" in capsys.readouterr().err

    @pytest.mark.integration
    @pytest.mark.cli
    @pytest.mark.integration
    @pytest.mark.cli
    def test_lift_obstructed(self, tmp_path, abelian3_raw, capsys):
        """Test that a lift stopping at a nonzero obstruction still exits cleanly."""
        path = tmp_path / "abelian3.json"
        path.write_text(json.dumps(abelian3_raw), encoding="utf-8")
        code = main(["deform", "lift", str(path), "--jet", "SKEW", "--order", "3", "--json"])
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["success"] is False
        assert payload["failed_order"] == 2
        assert payload["order_reached"] == 1
        assert payload["obstruction_class"]

    def test_unknown_jet(self):
        """Test that an unknown jet is a document error."""
        assert main(["deform", "check", "dual_numbers", "--jet", "NOPE"]) == EXIT_USAGE


class TestServeCommand:
    """Tests for `serve`."""

    @pytest.mark.integration
    @pytest.mark.cli
    def test_serve_starts_uvicorn(self, mocker):
        """Test that serve hands the app to uvicorn with the given address."""
        run = mocker.patch("uvicorn.run")
        assert main(["serve", "--host", "0.0.0.0", "--port", "9000"]) == EXIT_OK
        run.assert_called_once()
        assert run.call_args.kwargs == {"host": "0.0.0.0", "port": 9000}
