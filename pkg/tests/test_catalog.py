import json
from fractions import Fraction as F

import pytest

from eulersum.catalog import (
    CatalogError,
    Fixture,
    emit_latex,
    load_catalog,
    normalize_for_comparison,
    parse_latex,
    save_catalog,
    verify_catalog,
    verify_fixture,
)
from eulersum.residue import T_func, closed_form, corollary1
from eulersum.rfparse import parse_ratfunc
from eulersum.symbolic import SymbolicExpression, gamma, psi, zeta

CATALOG = load_catalog()


def squash(s):
    return "".join(s.split())


def test_bundled_size_and_families():
    ids = [f.id for f in CATALOG]
    assert len(CATALOG) >= 80
    for family, count in [("(2k+1)", 6), ("(3k+1)", 7), ("(3k+2)", 7), ("(4k+1)", 7), ("(4k+3)", 7)]:
        assert sum(i.startswith(f"single/{family}^") for i in ids) == count
    assert sum(i.startswith("mixed/") for i in ids) >= 48
    assert {"intro/k^3", "intro/(k+1)^5", "intro/(k+1)^7", "example/(2k-1)^2", "example/k^3+1"} <= set(ids)


@pytest.mark.parametrize("fixture", [f for f in CATALOG if f.rhs is not None], ids=lambda f: f.id)
def test_latex_round_trip(fixture):
    assert parse_latex(emit_latex(fixture.rhs)) == fixture.rhs


@pytest.mark.parametrize("fixture", [f for f in CATALOG if f.rhs is not None], ids=lambda f: f.id)
def test_stored_rhs_matches_derivation(fixture):
    cf = closed_form(parse_ratfunc(fixture.lhs))
    assert normalize_for_comparison(cf.expression) == normalize_for_comparison(fixture.rhs)


def test_emit_first_catalog_formula():
    expected = r"\frac{1}{8}\left( -1\psi(2,1/2) +2\gamma\psi(1,1/2) +2\psi(0,1/2)\psi(1,1/2)\right)"
    assert emit_latex(corollary1(2, 1, 2).expression) == expected


def test_emit_matches_source_text():
    # second row of the (3k+1) block, copied verbatim
    src = r"\frac{ 1}{108}\left(  1\psi(3,1/3) -2\gamma\psi(2,1/3) -2\psi(0,1/3)\psi(2,1/3) -2\psi(1,1/3)\psi(1,1/3)\right)"
    assert squash(emit_latex(corollary1(3, 1, 3).expression)) == squash(src)


def test_emit_zero_and_raw_t12():
    assert emit_latex(SymbolicExpression()) == "0"
    raw = r"\frac{1}{2}\left(-1\psi(2,1)+2\gamma\psi(1,1)+2\psi(0,1)\psi(1,1)\right)"
    assert squash(emit_latex(T_func(1, 2))) == squash(raw)


def test_parse_continuation_markup():
    text = (
        r"\frac{-1}{16}\left( -4\psi(1,1/2) +8\gamma\psi(0,1/2)  \right. \nonumber \\ "
        r"&\left. \hspace{1em} +4\psi(1,1/4)\right)"
    )
    h, q = F(1, 2), F(1, 4)
    expected = F(-1, 16) * (-4 * psi(1, h) + 8 * gamma() * psi(0, h) + 4 * psi(1, q))
    assert parse_latex(text) == expected


def test_parse_powers_and_constants():
    e = parse_latex(r"\frac{1}{4}\left( 3\zeta(6) -2\zeta(3)^{2}\right)")
    assert e == F(3, 4) * zeta(6) - F(1, 2) * zeta(3) ** 2


class TestLoad:
    def test_empty(self, tmp_path):
        p = tmp_path / "empty.json"
        p.write_text("[]")
        assert load_catalog(p) == []
        p.write_text("")
        assert load_catalog(p) == []

    def test_round_trip(self, tmp_path):
        p = tmp_path / "c.jsonl"
        save_catalog(CATALOG[:5], p)
        assert load_catalog(p) == CATALOG[:5]

    def test_duplicate_id(self, tmp_path):
        p = tmp_path / "dup.jsonl"
        save_catalog([CATALOG[0], CATALOG[0]], p)
        with pytest.raises(CatalogError, match="duplicate"):
            load_catalog(p)

    def test_bad_lhs_names_fixture(self, tmp_path):
        p = tmp_path / "bad.jsonl"
        p.write_text(json.dumps({"id": "broken/one", "lhs": "1/(k+", "source": "x"}) + "\n")
        with pytest.raises(CatalogError, match="broken/one.*lhs"):
            load_catalog(p)

    def test_schema_violation(self, tmp_path):
        p = tmp_path / "bad.jsonl"
        p.write_text(json.dumps({"id": "x", "lhs": "1/k^2", "source": "s", "expected_digits": 3}) + "\n")
        with pytest.raises(CatalogError, match="expected_digits"):
            load_catalog(p)
        p.write_text(json.dumps({"id": "x", "lhs": "1/k^2"}) + "\n")
        with pytest.raises(CatalogError, match="source"):
            load_catalog(p)


def by_id(i):
    return next(f for f in CATALOG if f.id == i)


def test_verify_single_fixture():
    rep = verify_fixture(by_id("single/(2k+1)^2"), digits=60, terms=2000)
    assert rep.passed and rep.rhs_canonical_match
    assert rep.difference < 1e-50


def test_verify_intro_value():
    rep = verify_fixture(by_id("intro/k^3"), digits=60, terms=2000)
    assert rep.passed
    assert rep.closed_value.startswith("1.35290404")  # 5/4 zeta(4)


def test_expected_digits_checked():
    rep = verify_fixture(by_id("example/k^3+1"), digits=40, terms=2000)
    assert rep.passed and rep.expected_match
    wrong = Fixture("w", "1/(k^3+1)", "s", None, "0.828902143400992508743")
    assert not verify_fixture(wrong, digits=40, terms=2000).passed


def test_corrupted_rhs_diagnosed():
    f = by_id("single/(3k+1)^2")
    terms = f.rhs.items()
    mono, c = terms[0]
    bad = f.rhs + SymbolicExpression({mono: c})  # doubles one coefficient
    rep = verify_fixture(Fixture("corrupt", f.lhs, f.source, bad), digits=40, terms=2000)
    assert not rep.passed
    assert "canonical mismatch" in rep.diagnosis


def test_report_sorted_and_parallel():
    subset = [by_id("single/(4k+3)^2"), by_id("intro/k^3"), by_id("mixed/(2k+1)(3k+1)")]
    serial = verify_catalog(subset, digits=40, terms=2000)
    parallel = verify_catalog(subset, digits=40, terms=2000, jobs=2)
    assert [e.id for e in serial.entries] == sorted(f.id for f in subset)
    assert [e.id for e in parallel.entries] == [e.id for e in serial.entries]
    assert serial.all_passed and parallel.all_passed
    assert "3/3 passed" in serial.table()
    assert all("speedup" in r for r in serial.records())
