"""Command-line interface: golden reports, exit codes and determinism.

Golden files live in tests/golden/ and are compared byte for byte.  To
regenerate them after an intentional change run

    CANTOR_DIOPH_UPDATE_GOLDEN=1 pytest tests/test_cli.py

and review the diff before committing.
"""
import json
import os
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from cantor_dioph.cli import build_parser, main
from cantor_dioph.report import decode_int, dumps, encode, encode_int

GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("CANTOR_DIOPH_UPDATE_GOLDEN", "") not in ("", "0")

CASES = {
    "member_quarter": ["member", "--x", "1/4"],
    "member_half": ["member", "--x", "1/2"],
    "nearest_half": ["nearest", "--x", "1/2"],
    "expand_seventh": ["expand", "--x", "1/7", "--base", "10"],
    "enumerate_4": ["enumerate", "--N", "4"],
    "enumerate_10_csv": ["enumerate", "--N", "10", "--format", "csv"],
    "intrinsic_quarter": ["intrinsic", "--Q", "9", "--address", "|1,2"],
    "intrinsic_random": ["intrinsic", "--Q", "27", "--random", "50", "--seed", "3"],
    "intrinsic_squares": ["intrinsic", "--Q", "9", "--pattern", "squares"],
    "extrinsic_zero": ["extrinsic", "--xi", "0", "--Q", "3", "--nmax", "5"],
    "extrinsic_bound_half": ["extrinsic", "--check-bound", "--x", "1/2"],
    "liouville_2": ["liouville", "--stages", "2", "--witness", "1"],
    "profile_sqrt2": ["profile", "--xi", "sqrt:2", "--t", "0:2:1"],
    "profile_golden_csv": ["profile", "--xi", "golden", "--t", "0,1", "--format", "csv"],
    "exponents_golden": ["profile", "--xi", "golden", "--exponents", "--depth", "1000000"],
    "periods_tenth": ["periods", "--x", "1/10"],
    "scan_safe_prime": ["scan", "--kind", "safe-prime", "--qmax", "30"],
    "scan_gcd": ["scan", "--kind", "gcd", "--word", "02"],
    "scan_divisor": ["scan", "--kind", "divisor", "--N", "4", "--dN", "2", "--word", "1111"],
    "scan_phi_ratio": ["scan", "--kind", "phi-ratio", "--x", "1/2"],
    "set_base5": ["member", "--set", "missing-digit b=5 W=0,4", "--x", "1/6"],
}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------------------
# golden reports


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys):
    code, out, _ = run(CASES[name], capsys)
    path = GOLDEN / (name + ".txt")
    text = "exit %d\n%s" % (code, out)
    if UPDATE:
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(text)
    assert path.exists(), "missing golden file %s; regenerate with CANTOR_DIOPH_UPDATE_GOLDEN=1" % path.name
    assert text == path.read_text()


def test_report_is_deterministic(capsys):
    first = run(CASES["liouville_2"], capsys)
    second = run(CASES["liouville_2"], capsys)
    assert first == second


def test_report_schema(capsys):
    code, out, _ = run(["nearest", "--x", "4/9"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert set(rep) == {"command", "inputs", "outputs", "certificates", "version", "seed"}
    assert rep["outputs"]["distance"] == {"p": 1, "q": 9, "display-only": "0.111111111111"}
    code, out, _ = run(["nearest", "--x", "4/9", "--timings"], capsys)
    timings = json.loads(out)["timings"]
    assert timings["backend"] in ("cython", "python") and "total" in timings


# ---------------------------------------------------------------------------
# exit codes


def test_member_exit_codes(capsys):
    assert run(["member", "--x", "1/4"], capsys)[0] == 0
    code, out, _ = run(["member", "--x", "1/2"], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["outputs"]["member"] is False
    assert rep["outputs"]["nearest"]["q"] == 3 and rep["outputs"]["distance"]["q"] == 6


def test_enumerate_row_counts(capsys):
    for N, rows in [(1, 2), (4, 6)]:
        code, out, _ = run(["enumerate", "--N", str(N), "--format", "csv"], capsys)
        assert code == 0 and len(out.splitlines()) == rows + 1
    assert run(["enumerate", "--N", "0"], capsys)[0] == 2


@pytest.mark.parametrize("argv", [
    ["member", "--x", "1/x"],
    ["member", "--x", "1/0"],
    ["member", "--set", "missing-digit b=3 W=0,2", "--ifs-file", "f.txt", "--x", "1/4"],
    ["member", "--x", "1/4", "--format", "csv"],
    ["enumerate", "--N", "100", "--budget", "10"],
    ["scan", "--kind", "phi-ratio"],
    ["verify", "--suite", "nonexistent"],
    ["intrinsic", "--Q", "9"],
    ["nosuchcommand"],
])
def test_usage_errors_exit_2(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:          # argparse-level errors
        code = exc.code
    capsys.readouterr()
    assert code == 2


def test_help_for_every_command(capsys):
    parser = build_parser()
    commands = parser._subparsers._group_actions[0].choices
    assert set(commands) == {"member", "nearest", "expand", "enumerate", "intrinsic", "extrinsic",
                             "liouville", "profile", "periods", "scan", "verify"}
    for name in list(commands) + [None]:
        with pytest.raises(SystemExit) as exc:
            main(([name] if name else []) + ["--help"])
        assert exc.value.code == 0
    capsys.readouterr()


def test_ifs_file_input(tmp_path, capsys):
    f = tmp_path / "c.ifs"
    f.write_text("dim 1\nmap\nA 1\nq 3\nb 0\ns 1\nmap\nA 1\nq 3\nb 2\ns 3\n")
    code, out, _ = run(["periods", "--ifs-file", str(f), "--x", "1/4"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["outputs"]["address"] == "|1,2"


def test_library_error_gives_error_report(capsys):
    code, out, _ = run(["periods", "--x", "1/2"], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["outputs"]["error"] == "NotInAttractor"


def test_verify_single_suite(capsys):
    code, out, err = run(["verify", "--suite", "counting"], capsys)
    assert code == 0
    assert "PASS" in err
    assert json.loads(out)["certificates"]["all_pass"] is True


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cantor_dioph.cli", "member", "--x", "1/4"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["outputs"]["member"] is True


# ---------------------------------------------------------------------------
# report encoding


def test_huge_integers_are_written_as_hex():
    n = 3 ** 20000
    assert encode_int(n) == {"hex": hex(n)}
    assert decode_int(encode_int(n)) == n
    assert encode_int(12345) == 12345 and decode_int(12345) == 12345
    enc = encode(Fraction(1, n))
    assert enc["q"] == {"hex": hex(n)} and "display-only" not in enc
    json.loads(dumps({"x": Fraction(1, n)}))


def test_budget_flag_does_not_leak_into_environment(capsys):
    before = os.environ.get("CANTOR_DIOPH_BUDGET")
    assert run(["enumerate", "--N", "100", "--budget", "10"], capsys)[0] == 2
    assert os.environ.get("CANTOR_DIOPH_BUDGET") == before
    assert run(["extrinsic", "--xi", "1/4", "--Q", "100", "--branch", "prime", "--budget", "20"], capsys)[0] == 2
