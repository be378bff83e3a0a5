import json
import subprocess
import sys

import pytest

from oddcancel.cli import EXIT_CONFIG, EXIT_MISMATCH, EXIT_OK, EXIT_PRECISION, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_delta1(capsys):
    code, out, _ = run(capsys, "expand", "--form", "delta1", "--order", "4")
    assert code == EXIT_OK
    assert out.startswith("1/4 + 6q + 6q^2 + ")


def test_expand_block_and_json(capsys):
    code, out, _ = run(capsys, "expand", "--form", "b1", "--order", "0", "--depth", "8")
    assert code == EXIT_OK
    assert out.startswith("(-1/2*z^2 - 1/12*z^4)")
    code, out, _ = run(capsys, "expand", "--form", "eps2", "--order", "1", "--format", "json")
    assert json.loads(out)["q_order"] == 2


def test_crosscheck_pass(capsys):
    code, out, _ = run(capsys, "crosscheck", "--id", "3.24", "--r", "2")
    assert code == EXIT_OK
    assert "pass" in out


def test_crosscheck_mismatch_exit(capsys):
    code, out, _ = run(capsys, "crosscheck", "--id", "3.36", "--r", "2")
    assert code == EXIT_MISMATCH


def test_numeric_check(capsys):
    code, out, _ = run(capsys, "numeric-check", "--law", "2.11", "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)
    assert rows[0]["max_residual"] < 1e-9


def test_numeric_s_relation(capsys):
    code, out, _ = run(capsys, "numeric-check", "--law", "3.21")
    assert code == EXIT_OK
    assert out.count("pass") == 4


def test_derive_r3_json(capsys):
    code, out, _ = run(capsys, "derive", "--r", "3")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["q_order"] == 7
    assert data["two_adic"] == {"family": "3.20", "exponent": {"const": "2", "coeffN": "1/2"}}
    assert data["h"][0]["poly"] == "0"
    checks = {c["id"]: c["holds"] for c in data["printed_checks"]}
    assert checks["3.32"] is True


def test_derive_r1(capsys):
    code, out, _ = run(capsys, "derive", "--r", "1")
    assert code == EXIT_OK
    data = json.loads(out)
    assert [h["poly"] for h in data["h"]] == ["0"]


def test_derive_twisted_mentions_xi(capsys):
    code, out, _ = run(capsys, "derive", "--r", "4", "--twisted", "--format", "text")
    assert code == EXIT_OK
    assert "T_C M - 3 xi_C" in out


def test_derive_latex_and_output_file(tmp_path, capsys):
    path = tmp_path / "r3.tex"
    code, out, _ = run(capsys, "derive", "--r", "3", "--format", "latex", "--output", str(path))
    assert code == EXIT_OK and out == ""
    assert "\\tag{3.20}" in path.read_text()


def test_derive_deterministic(capsys):
    a = run(capsys, "derive", "--r", "4")[1]
    b = run(capsys, "derive", "--r", "4")[1]
    assert a == b


def test_derive_requested_printed_mismatch(capsys):
    code, _, err = run(capsys, "derive", "--r", "4", "--ids", "3.33")
    assert code == EXIT_MISMATCH
    assert "3.33" in err


def test_derive_requested_printed_holds(capsys):
    code, _, _ = run(capsys, "derive", "--r", "3", "--ids", "3.20", "3.32")
    assert code == EXIT_OK


@pytest.mark.parametrize(
    "argv",
    [
        ["derive", "--r", "0"],
        ["derive", "--r", "3", "--q-order", "2"],
        ["derive", "--r", "3", "--N", "3"],
        ["derive", "--r", "3", "--ids", "9.99"],
        ["expand", "--form", "nope"],
        ["catalog", "--R", "0"],
        [],
    ],
)
def test_configuration_errors(capsys, argv):
    assert main(argv) == EXIT_CONFIG


def test_precision_error_exit(capsys, monkeypatch):
    import oddcancel.cli as cli

    def boom(*a, **k):
        from oddcancel.errors import PrecisionError

        raise PrecisionError("too close to the real axis")

    monkeypatch.setattr(cli, "check_grid", boom)
    assert main(["numeric-check", "--law", "2.11"]) == EXIT_PRECISION


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog", "--R", "3", "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)
    assert [r["h_count"] for r in rows] == [0, 1, 1]
    assert rows[2]["two_adic"]["3.20"] == "2^(N/2+2)"


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "oddcancel", "expand", "--form", "eps1", "--order", "2"],
                       capture_output=True, text=True)
    assert p.returncode == 0
    assert p.stdout.startswith("1/16 - q + 7q^2")
