import json
import subprocess
import sys

import jsonschema
import pytest

from eulersum.cli import SCHEMAS, parse_monomial, run
from eulersum.symbolic import PI, Log, SymbolicExpression, zeta


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, command, *argv):
    code, out, err = call(capsys, command, *argv, "--format", "json")
    payload = json.loads(out)
    jsonschema.validate(payload, SCHEMAS[command])
    return code, payload


def test_worked_example_simplified(capsys):
    code, out, _ = call(capsys, "closed-form", "1/(2*k-1)^2", "--simplify")
    assert code == 0
    assert out.strip() == "7/4*zeta(3) - 2*log(2) + 1/4*pi^2 - 1/4*pi^2*log(2)"


def test_worked_example_latex(capsys):
    code, out, _ = call(capsys, "closed-form", "1/(2*k-1)^2", "--format", "latex", "--simplify")
    assert code == 0
    assert "".join(out.split()) == r"\frac{1}{4}\left(7\zeta(3)-8\log(2)+1\pi^{2}-1\pi^{2}\log(2)\right)"


def test_direct_published_prefix(capsys):
    code, out, _ = call(capsys, "direct", "1/(3*k+2)^4", "--digits", "60", "--terms", "1000")
    assert code == 0 and out.startswith("0.002220075526")


def test_infinite_summand(capsys):
    code, _, err = call(capsys, "closed-form", "1/(k-3)^2")
    assert code == 3 and "infinite summand" in err


def test_not_convergent(capsys):
    code, _, err = call(capsys, "eval", "k/(k^2+1)")
    assert code == 2 and "sum not convergent" in err


def test_parse_error(capsys):
    code, _, err = call(capsys, "closed-form", "1/(k+")
    assert code == 1 and "column" in err


def test_usage_error_is_not_exit_two():
    proc = subprocess.run([sys.executable, "-m", "eulersum.cli", "closed-form"], capture_output=True)
    assert proc.returncode == 1


def test_digit_floor(capsys):
    with pytest.raises(SystemExit) as info:
        run(["direct", "1/k^2", "--digits", "5"])
    assert info.value.code == 1


def test_eval_both(capsys):
    code, payload = call_json(capsys, "eval", "1/((2k+1)(3k+1))", "--method", "both", "-d", "50", "-N", "1e3")
    assert code == 0 and payload["agree"]
    assert payload["difference"] < 1e-40
    assert payload["closed"][:45] == payload["direct"][:45]


def test_eval_text_lines(capsys):
    code, out, _ = call(capsys, "eval", "1/(k+1)^2", "--method", "both", "-d", "30", "-N", "100")
    lines = out.splitlines()
    assert [l.split()[0] for l in lines] == ["closed", "direct", "difference"]


@pytest.mark.parametrize(
    "command, argv",
    [
        ("closed-form", ["1/(k^3+1)"]),
        ("eval", ["1/k^3", "-d", "30"]),
        ("direct", ["1/(4k+1)^2", "-d", "30", "-N", "500"]),
        ("discover", ["1/(k+1)^5", "--basis", "zeta(6)", "zeta(3)^2", "-d", "40"]),
        ("verify-catalog", ["--filter", "single/(2k+1)^2", "-d", "30", "-N", "500"]),
        ("polygamma", ["2", "1/4", "-d", "30"]),
        ("bernoulli", ["20"]),
    ],
)
def test_json_schemas(capsys, command, argv):
    code, _ = call_json(capsys, command, *argv)
    assert code == 0


def test_discover_result(capsys):
    code, payload = call_json(capsys, "discover", "1/(k+1)^5", "--basis", "zeta(6)", "zeta(3)^2", "-d", "40")
    assert payload["relation"] == [4, -3, 2]
    assert payload["text"] == "3/4*zeta(6) - 1/2*zeta(3)^2"


def test_discover_failure_exit(capsys):
    code, payload = call_json(capsys, "discover", "1/(k+1)^2", "--basis", "zeta(5)", "-d", "40", "--max-coeff", "1000")
    assert code == 1 and payload["status"] != "found"


def test_special_functions(capsys):
    assert call(capsys, "bernoulli", "20")[1].strip() == "-174611/330"
    code, out, _ = call(capsys, "polygamma", "1", "1/2", "-d", "20")
    assert out.strip() == "4.9348022005446793094"  # pi^2 / 2


def test_verify_catalog_mismatch_exit(capsys, tmp_path):
    from eulersum.catalog import Fixture, save_catalog

    bad = Fixture("bad", "1/(k+1)^2", "planted", zeta(3) * 2)
    path = tmp_path / "bad.jsonl"
    save_catalog([bad], path)
    code, out, _ = call(capsys, "verify-catalog", "--catalog", str(path), "-d", "30", "-N", "200")
    assert code == 4 and "FAIL" in out


def test_env_default_digits(monkeypatch, capsys):
    monkeypatch.setenv("EULERSUM_DIGITS", "25")
    code, payload = call_json(capsys, "eval", "1/k^3")
    assert payload["digits"] == 25


def test_output_bit_stable(capsys):
    first = call(capsys, "closed-form", "1/((2k+1)^3*(3k+1)^2)", "-f", "json")[1]
    second = call(capsys, "closed-form", "1/((2k+1)^3*(3k+1)^2)", "-f", "json")[1]
    assert first == second


def test_parse_monomial():
    assert parse_monomial("zeta(3)^2") == zeta(3) ** 2
    assert parse_monomial("pi^2*log(2)") == SymbolicExpression.atom(PI, 2) * SymbolicExpression.atom(Log(2))
    with pytest.raises(ValueError):
        parse_monomial("sin(1)")
