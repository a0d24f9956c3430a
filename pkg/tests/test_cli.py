import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from peanoquad.cli import ComboParseError, parse_combo, run


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def no_floats(obj):
    if isinstance(obj, float):
        return False
    if isinstance(obj, dict):
        return all(no_floats(v) for v in obj.values())
    if isinstance(obj, list):
        return all(no_floats(v) for v in obj)
    return True


@pytest.mark.parametrize(
    "text,coeffs",
    [
        ("0.5*g2+0.5*lob3", (Fraction(1, 2), Fraction(1, 2))),
        ("1*g3", (Fraction(1),)),
        ("0.25*rad2l+0.75*rad2r", (Fraction(1, 4), Fraction(3, 4))),
        ("1/3*g2 - 2/3*lob3", (Fraction(1, 3), Fraction(-2, 3))),
        ("-1*g2", (Fraction(-1),)),
    ],
)
def test_parse_combo(text, coeffs):
    assert parse_combo(text).coefficients == coeffs


@pytest.mark.parametrize(
    "text,position",
    [("0.5*g2+0.5*nope", 11), ("0.5*g2 0.5*g3", 7), ("0.5g2", 0), ("", 0), ("1*g2+", 4)],
)
def test_parse_combo_errors(text, position):
    with pytest.raises(ComboParseError) as info:
        parse_combo(text)
    assert info.value.position == position


def test_constant():
    code, text = invoke("constant", "--combo", "0.5*g2+0.5*lob3", "--order", "4")
    assert code == 0
    assert json.loads(text) == {"constant": "1/540"}


def test_certify():
    code, text = invoke("certify", "--combo", "0.5*g3+0.5*lob4", "--order", "6", "--expect", "nonnegative")
    assert code == 0
    assert json.loads(text) == {"verdict": "Nonnegative"}


def test_certify_mismatch_exit_code():
    code, text = invoke("certify", "--combo", "0.5*rad2l+0.5*rad2r", "--order", "3", "--expect", "nonnegative")
    assert code == 2
    doc = json.loads(text)
    assert doc["verdict"] == "SignChanging"
    assert Fraction(doc["witness"]["negative_point"]) < 0


def test_integral_coefficient_flag():
    code, text = invoke("constant", "--combo=-1*g2", "--order", "4", "--integral-coef", "-1")
    assert code == 0 and json.loads(text) == {"constant": "1/135"}


def test_kernel_json_round_trip():
    from peanoquad.field import FieldElement
    from peanoquad.poly import Polynomial

    code, text = invoke("kernel", "--combo", "0.5*g2+0.5*lob3")
    doc = json.loads(text)
    assert code == 0 and doc["order"] == 4 and no_floats(doc)
    bps = [FieldElement.from_json(b) for b in doc["breakpoints"]]
    assert len(bps) == 5
    p = Polynomial.from_json(doc["pieces"][-1]["coefficients"])
    assert p(FieldElement(1)) == 0


def test_kernel_csv():
    code, text = invoke("kernel", "--combo", "0.5*g2+0.5*lob3", "--format", "csv", "--grid", "5")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["x", "K_lo", "K_hi"]
    assert [r[0] for r in rows[1:]] == ["-1", "-1/2", "0", "1/2", "1"]
    for _, lo, hi in rows[1:]:
        assert Fraction(lo) <= Fraction(hi)


def test_figure():
    code, text = invoke("figure", "--n", "4", "--grid", "9")
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0 and len(rows) == 10
    assert all(Fraction(lo) >= Fraction(-1, 10**30) for _, lo, _ in rows[1:])


def test_compare_and_enclose():
    code, text = invoke("compare", "--fn", "x^4", "--n", "2")
    doc = json.loads(text)
    assert code == 0 and doc["gauss_error"] == "8/45" and doc["lobatto_error"] == "4/15"
    code, text = invoke("enclose", "--fn", "exp", "--a", "-1", "--b", "1", "--n", "2", "--tol", "1/1000000")
    doc = json.loads(text)
    assert code == 0 and Fraction(doc["width"]) <= Fraction(1, 10**6)
    assert no_floats(doc)


def test_enclose_depth_error():
    code, _ = invoke("enclose", "--fn", "exp", "--a", "-1", "--b", "1", "--n", "1", "--tol", "1/10000000000", "--max-depth", "2")
    assert code == 1


def test_listings():
    code, text = invoke("rules", "list")
    names = [r["name"] for r in json.loads(text)["rules"]]
    assert code == 0 and "g4" in names and "lob4" in names
    code, text = invoke("corpus", "list")
    assert "exp" in [f["name"] for f in json.loads(text)["corpus"]]


def test_counterexample():
    code, text = invoke("counterexample", "radau")
    doc = json.loads(text)
    assert doc["g"]["residual"] == "16/135"
    assert doc["signs_differ"] is True


def test_unknown_function_is_error():
    code, _ = invoke("compare", "--fn", "sin", "--n", "2")
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [["bogus"], ["constant"], ["constant", "--combo", "1*g2", "--nope"], ["compare", "--fn", "exp", "--n", "4"]],
)
def test_usage_errors_exit_1(argv):
    with pytest.raises(SystemExit) as info:
        run(argv, out=io.StringIO())
    assert info.value.code == 1


def test_determinism():
    a = invoke("kernel", "--combo", "0.5*g3+0.5*lob4")[1]
    b = invoke("kernel", "--combo", "0.5*g3+0.5*lob4")[1]
    assert a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "peanoquad", "constant", "--combo", "0.5*g3+0.5*lob4", "--order", "6"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"constant": "1/94500"}


def test_precision_env(monkeypatch):
    monkeypatch.setenv("PEANO_PRECISION", "70")
    code, text = invoke("figure", "--n", "5", "--grid", "3")
    assert code == 0
    lo = text.splitlines()[2].split(",")[1]
    assert len(lo.replace("-", "").replace(".", "").split("E")[0]) >= 70
