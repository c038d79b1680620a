import math

import pytest

from berrybell.cli import main, parse_settings_file

TWO_SQRT2 = 2.0 * math.sqrt(2.0)


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def value_after(text, key):
    for line in text.splitlines():
        if key in line:
            return float(line.split(key, 1)[1].split()[0].rstrip(","))
    raise AssertionError(f"{key!r} not found in output:\n{text}")


class TestPhases:
    def test_half_echo_sixty_degrees(self, capsys):
        code, out, _ = run(capsys, "phases", "--theta", "60", "--mode", "half")
        assert code == 0
        assert value_after(out, "gamma = ") == pytest.approx(-0.5 * math.pi)
        assert "dynamical = 0" in out

    def test_untilted(self, capsys):
        code, out, _ = run(capsys, "phases", "--theta", "0")
        assert code == 0
        assert value_after(out, "gamma = ") == 0.0

    def test_oracle_within_tolerance(self, capsys):
        code, out, _ = run(capsys, "phases", "--theta", "60", "--ratio", "0.005")
        assert code == 0
        assert value_after(out, "residual = ") < 5e-3

    def test_half_mode_oracle_not_applicable(self, capsys):
        code, out, _ = run(capsys, "phases", "--theta", "60", "--mode", "half", "--ratio", "0.02")
        assert code == 0
        assert "not applicable" in out

    def test_tolerance_violation_exit_code(self, capsys):
        # at ratio 1/50 the 90-degree residual is ~1.6e-2
        code, _, err = run(capsys, "phases", "--theta", "90", "--ratio", "0.02", "--tol", "1e-3")
        assert code == 2
        assert "exceeds tolerance" in err

    def test_invalid_theta(self, capsys):
        code, _, err = run(capsys, "phases", "--theta", "120")
        assert code == 1
        assert "theta" in err

    def test_unknown_flag(self, capsys):
        code, _, _ = run(capsys, "phases", "--theta", "60", "--frobnicate")
        assert code == 1


class TestSweepSmax:
    def test_analytic_endpoints(self, tmp_path, capsys):
        out_file = tmp_path / "sweep.csv"
        code, _, _ = run(
            capsys, "sweep-smax", "--points", "5", "--method", "analytic", "--out", str(out_file)
        )
        assert code == 0
        lines = out_file.read_text().splitlines()
        header = lines[0].split(",")
        rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
        assert float(rows[0]["smax_analytic"]) == pytest.approx(TWO_SQRT2, abs=1e-5)
        assert float(rows[1]["smax_analytic"]) == pytest.approx(2.0, abs=1e-4)  # gamma = pi/4
        assert float(rows[0]["beta1_branch_pp"]) == pytest.approx(0.785398, abs=1e-6)

    def test_deterministic_output(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert run(capsys, "sweep-smax", "--points", "7", "--method", "analytic", "--out", str(path))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_invalid_range(self, capsys):
        code, _, err = run(capsys, "sweep-smax", "--start", "90", "--stop", "10")
        assert code == 1
        assert "start" in err

    def test_too_few_points(self, capsys):
        assert run(capsys, "sweep-smax", "--points", "1")[0] == 1

    def test_tsv_format(self, capsys):
        code, out, _ = run(capsys, "sweep-smax", "--points", "2", "--method", "analytic", "--format", "tsv")
        assert code == 0
        assert "\t" in out.splitlines()[0]


class TestBellAngles:
    def test_zero_phase(self, capsys):
        code, out, _ = run(capsys, "bell-angles", "--gamma", "0")
        assert code == 0
        assert value_after(out, "beta1 = ") == pytest.approx(0.25 * math.pi)
        assert value_after(out, "smax_analytic = ") == pytest.approx(TWO_SQRT2)

    def test_grid_flag(self, capsys):
        code, out, _ = run(capsys, "bell-angles", "--gamma", "30", "--grid")
        assert code == 0
        assert "grid argmax" in out


class TestCorrelation:
    def test_closed_form_value(self, capsys):
        code, out, _ = run(
            capsys, "correlation", "--gamma", "45", "--alpha1", "0", "--beta1", "45", "--beta2", "90"
        )
        assert code == 0
        assert value_after(out, "E = ") == pytest.approx(-math.cos(math.radians(45)))
        probs = [value_after(out, f"P{s} = ") for s in ("++", "+-", "-+", "--")]
        assert sum(probs) == pytest.approx(1.0)


def compensated_settings_text(gamma_b_deg):
    return (
        "# chi_deg delta1_deg delta2_deg\n"
        f"0 135 {gamma_b_deg}\n"
        f"0 45 {gamma_b_deg}\n"
        f"90 135 {gamma_b_deg}\n"
        f"90 45 {gamma_b_deg}\n"
    )


class TestCounts:
    def test_chsh_trailer_and_determinism(self, tmp_path, capsys):
        settings = tmp_path / "settings.txt"
        settings.write_text(compensated_settings_text(28.6478897))
        out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (out_a, out_b):
            code, _, _ = run(
                capsys, "counts", "--gamma-b", "28.6478897", "--settings", str(settings),
                "--total", "100000", "--seed", "7", "--out", str(path),
            )
            assert code == 0
        assert out_a.read_bytes() == out_b.read_bytes()
        trailer = out_a.read_text().splitlines()[-1]
        assert trailer.startswith("# S = ")
        s_value = float(trailer.split()[3])
        assert abs(s_value - TWO_SQRT2) < 0.05

    def test_malformed_settings_names_line(self, tmp_path, capsys):
        settings = tmp_path / "bad.txt"
        settings.write_text("0 45 0\n0 45\n")
        code, _, err = run(
            capsys, "counts", "--gamma-b", "0", "--settings", str(settings), "--total", "10"
        )
        assert code == 1
        assert "line 2" in err

    def test_non_numeric_settings(self, tmp_path, capsys):
        settings = tmp_path / "bad.txt"
        settings.write_text("0 45 zero\n")
        code, _, err = run(
            capsys, "counts", "--gamma-b", "0", "--settings", str(settings), "--total", "10"
        )
        assert code == 1
        assert "line 1" in err

    def test_zero_total(self, tmp_path, capsys):
        settings = tmp_path / "settings.txt"
        settings.write_text("0 45 0\n")
        code, _, err = run(
            capsys, "counts", "--gamma-b", "0", "--settings", str(settings), "--total", "0"
        )
        assert code == 1
        assert "total" in err

    def test_empty_settings_file(self, tmp_path, capsys):
        settings = tmp_path / "settings.txt"
        settings.write_text("# nothing here\n")
        code, _, _ = run(
            capsys, "counts", "--gamma-b", "0", "--settings", str(settings), "--total", "10"
        )
        assert code == 1

    def test_missing_settings_file(self, tmp_path, capsys):
        code, _, _ = run(
            capsys, "counts", "--gamma-b", "0", "--settings", str(tmp_path / "nope.txt"), "--total", "10"
        )
        assert code == 1


class TestParseSettingsFile:
    def test_comments_and_blanks_skipped(self, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text("# header\n\n0 45 10  # inline comment\n90 135 10\n")
        settings = parse_settings_file(str(path))
        assert len(settings) == 2
        chi, delta = settings[0]
        assert chi == pytest.approx(0.0)
        assert delta.polar == pytest.approx(math.radians(45))
        assert delta.azimuthal == pytest.approx(math.radians(10))


class TestVerifyAdiabatic:
    def test_passes_with_loose_tolerance(self, capsys):
        code, out, _ = run(
            capsys, "verify-adiabatic", "--ratios", "0.02,0.01", "--thetas", "30", "--tol", "0.01"
        )
        assert code == 0
        assert "residual" in out

    def test_fails_with_tight_tolerance(self, capsys):
        code, _, err = run(
            capsys, "verify-adiabatic", "--ratios", "0.02,0.01", "--thetas", "90", "--tol", "1e-4"
        )
        assert code == 2
        assert "exceeds" in err
