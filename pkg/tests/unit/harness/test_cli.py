"""
Unit tests for the lipmin command-line interface.
"""

import csv
import json

import pytest

from src.core.config import settings
from src.harness.cli import (
    EXIT_OK,
    EXIT_USAGE,
    UsageError,
    azema_report,
    evaluate_quantity,
    main,
)
from src.laws.brownian import LawParams


class TestMain:
    """Test argument handling and exit codes."""

    def test_no_command(self, capsys):
        """Without a command the help is printed and the exit code is 2."""
        assert main([]) == EXIT_USAGE
        assert "lipmin" in capsys.readouterr().out

    def test_unknown_suite(self):
        """An unknown suite is a usage error."""
        assert main(["verify", "--suite", "bogus"]) == EXIT_USAGE

    def test_help(self):
        """--help exits cleanly."""
        assert main(["--help"]) == EXIT_OK

    def test_invalid_law_parameters(self):
        """α <= |β| is a usage error, not a traceback."""
        args = "laws eval --quantity mean-zeta --alpha 1 --beta 2".split()
        assert main(args) == EXIT_USAGE

    def test_missing_seed(self, tmp_path, monkeypatch):
        """Random commands need --seed or LIPMIN_SEED."""
        monkeypatch.setattr(settings, "seed", None)
        out = tmp_path / "rows.csv"
        args = "sample-excursion --alpha 1 --n 5 --out".split() + [str(out)]
        assert main(args) == EXIT_USAGE


class TestLawsEval:
    """Test ``lipmin laws eval``."""

    def test_single_value(self, capsys):
        """A closed-form mean prints as a bare number."""
        assert main(["laws", "eval", "--quantity", "mean-zeta", "--alpha", "1"]) == EXIT_OK
        assert float(capsys.readouterr().out) == pytest.approx(0.5)

    def test_missing_argument(self):
        """Densities need --at."""
        assert main(["laws", "eval", "--quantity", "zeta-density", "--alpha", "1"]) == EXIT_USAGE

    def test_batch(self, tmp_path):
        """Batch requests come back with their values."""
        requests = [
            {"quantity": "mean-L", "alpha": 2.0, "beta": 1.0},
            {"quantity": "psi", "alpha": 1.0, "rho": [0.0, 0.0, 0.0, 0.0]},
        ]
        source = tmp_path / "requests.json"
        source.write_text(json.dumps(requests))
        out = tmp_path / "values.json"
        assert main(["laws", "eval", "--batch", str(source), "--out", str(out)]) == EXIT_OK
        values = json.loads(out.read_text())
        assert values[0]["value"] == pytest.approx(1 / 8)
        assert values[1]["value"] == pytest.approx(1.0)

    def test_evaluate_quantity(self):
        """evaluate_quantity names every quantity the CLI offers."""
        assert evaluate_quantity("second-moment-zeta", 1.0) == pytest.approx(1.0)
        with pytest.raises(UsageError):
            evaluate_quantity("nonsense", 1.0)
        with pytest.raises(UsageError):
            evaluate_quantity("psi", 1.0, rho=[0.0, 0.0])


class TestPathCommands:
    """Test simulate, minorant, excursions and sample-excursion."""

    def test_simulate_then_minorant(self, tmp_path):
        """A simulated path feeds the minorant command."""
        path_file = tmp_path / "path.json"
        args = "simulate --tmin -5 --tmax 5 --dt 0.01 --seed 3 --out".split()
        assert main([*args, str(path_file)]) == EXIT_OK
        out = tmp_path / "minorant.json"
        args = ["minorant", "--in", str(path_file), "--alpha", "1", "--out", str(out)]
        assert main(args) == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["alpha"] == 1.0
        assert len(payload["minorant"]) == len(json.loads(path_file.read_text())["values"])
        assert payload["contacts"]

    def test_excursions_csv(self, tmp_path):
        """The excursions command writes one feature row per excursion."""
        path_file = tmp_path / "path.json"
        main([*"simulate --tmin -20 --tmax 20 --dt 0.01 --seed 4 --out".split(), str(path_file)])
        out = tmp_path / "features.csv"
        args = ["excursions", "--in", str(path_file), "--alpha", "1", "--out", str(out)]
        assert main(args) == EXIT_OK
        with out.open() as fh:
            header = next(csv.reader(fh))
        assert header == ["start", "zeta", "L", "zeta_minus_L", "w_zeta", "h"]

    def test_sample_features(self, tmp_path):
        """Feature mode writes n rows."""
        out = tmp_path / "rows.csv"
        args = ["sample-excursion", "--alpha", "1", "--n", "50", "--seed", "2", "--out", str(out)]
        assert main(args) == EXIT_OK
        assert len(out.read_text().splitlines()) == 51

    def test_sample_paths(self, tmp_path):
        """Path mode writes a JSON list of paths with features."""
        out = tmp_path / "paths.json"
        args = "sample-excursion --alpha 1 --n 3 --mode path --dt 0.01 --seed 2 --out".split()
        args.append(str(out))
        assert main(args) == EXIT_OK
        paths = json.loads(out.read_text())
        assert len(paths) == 3
        assert set(paths[0]["features"]) == {"zeta", "L", "zeta_minus_L", "w_zeta", "h"}


class TestAzemaReport:
    """Test the azema command's report."""

    def test_one_record_per_time(self):
        """Each requested t gets a mean-survival record."""
        report = azema_report(LawParams(alpha=1.0), [0.5, 1.0], 40, seed=9, dt=1e-2)
        assert [c.name for c in report.checks] == ["mean_survival_t=0.5", "mean_survival_t=1"]
        assert all(c.n == 40 and c.seed == 9 for c in report.checks)

    def test_time_outside_window_is_usage_error(self):
        """A --t past the window ends with exit code 2, not a traceback."""
        args = "azema --alpha 1 --n 5 --t 40 --dt 0.01 --seed 1".split()
        assert main(args) == EXIT_USAGE
