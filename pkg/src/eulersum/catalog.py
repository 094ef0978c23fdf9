"""Fixture corpus of known Euler-sum formulas and the verification runner.

Fixtures live one per line in ``data/catalog.jsonl``::

    {"id": ..., "lhs": "1/((2k+1)(3k+1))", "rhs": <expression json> | null,
     "source": ..., "expected_digits": "0.8289..." | null}

Each fixture is checked three ways: the closed form against direct
summation, the closed form against the stored right-hand side (exactly,
after rewriting polygamma values at 1 and 1/2 through zeta values), and
the value against any stored decimal digits.
"""

from __future__ import annotations

import json
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

import mpmath
from mpmath import mpf

from .directsum import DirectSumConfig, direct_euler_sum
from .numerics import digits_to_bits, eval_symexpr
from .residue import closed_form_fast
from .rfparse import parse_ratfunc, require_summable
from .symbolic import (
    GAMMA,
    PI,
    Alpha,
    Atom,
    Gamma,
    Log,
    Pi,
    Psi,
    PsiRoot,
    RootSum,
    SymbolicExpression,
    Zeta,
    _mono_key,
    reduce_psi_to_zeta,
    simplify_special_values,
)


class CatalogError(ValueError):
    pass


# ---------------------------------------------------------------------------
# LaTeX in the catalog's house style


def _frac_tex(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def atom_latex(a: Atom) -> str:
    if isinstance(a, Gamma):
        return r"\gamma"
    if isinstance(a, Psi):
        return rf"\psi({a.order},{_frac_tex(a.arg)})"
    if isinstance(a, Zeta):
        return rf"\zeta({a.n})"
    if isinstance(a, Pi):
        return r"\pi"
    if isinstance(a, Log):
        return rf"\log({a.n})"
    if isinstance(a, Alpha):
        return r"\alpha"
    if isinstance(a, PsiRoot):
        return rf"\psi({a.order},-\alpha)"
    if isinstance(a, RootSum):
        from .exact import Polynomial

        poly = Polynomial(a.poly).to_text(r"\alpha")
        return rf"\sum_{{{poly}=0}}\left[{emit_latex(a.template)}\right]"
    raise TypeError(f"no LaTeX form for {a!r}")


def _catalog_term_key(mono) -> tuple:
    psis = []
    ng = 0
    other = False
    for a, e in mono:
        if isinstance(a, Psi):
            psis.extend([a] * e)
        elif isinstance(a, Gamma):
            ng += e
        else:
            other = True
    if not psis or other:
        return (1, _mono_key(mono))
    arg = min((p.arg.denominator, p.arg.numerator) for p in psis)
    weight = sum(p.order + 1 for p in psis) + ng
    if ng:
        category = 1
    else:
        category = 0 if len(psis) == 1 else 2
    return (0, arg, weight, category, tuple(sorted(p.order for p in psis)))


def _monomial_latex(mono) -> str:
    def order(ae):
        a = ae[0]
        if isinstance(a, Gamma):
            return (0,)
        if isinstance(a, Psi):
            return (1, a.order, a.arg)
        return (2,) + a.sort_key()

    parts = []
    for a, e in sorted(mono, key=order):
        tex = atom_latex(a)
        if isinstance(a, Psi) or e == 1:
            parts.append(tex * e)
        else:
            parts.append(f"{tex}^{{{e}}}")
    return "".join(parts)


def emit_latex(e: SymbolicExpression) -> str:
    """``\\frac{a}{b}\\left( c_1 m_1 +c_2 m_2 ...\\right)`` with coprime integer ``c_i``."""
    if e.is_zero():
        return "0"
    pref = e.common_prefactor()
    terms = sorted(e.items(), key=lambda mc: _catalog_term_key(mc[0]))
    body = []
    for i, (mono, c) in enumerate(terms):
        k = c / pref
        sign = "-" if k < 0 else (" " if i == 0 else "+")
        body.append(f" {sign}{abs(k.numerator)}{_monomial_latex(mono)}")
    inner = r"\left(" + "".join(body) + r"\right)"
    if pref == 1:
        return inner
    return rf"\frac{{{pref.numerator}}}{{{pref.denominator}}}" + inner


_CONT = re.compile(r"\\right\.\s*\\nonumber\s*\\\\\s*&\\left\.\s*\\hspace\{[^}]*\}")
_ATOM = re.compile(
    r"\\gamma|\\pi|\\psi\(\s*(\d+)\s*,\s*(\d+)(?:\s*/\s*(\d+))?\s*\)|\\zeta\(\s*(\d+)\s*\)|\\log\(\s*(\d+)\s*\)"
)
_POWER = re.compile(r"\^\{?\s*(\d+)\s*\}?")


def parse_latex(text: str) -> SymbolicExpression:
    """Inverse of :func:`emit_latex` for gamma, psi, zeta, pi and log atoms.

    Also reads the line-continuation markup used in long catalog entries.
    """
    s = _CONT.sub(" ", text).replace("\n", " ").strip()
    pref = Fraction(1)
    m = re.match(r"\\frac\{\s*(-?\s*\d+)\s*\}\{\s*(\d+)\s*\}", s)
    if m:
        pref = Fraction(int(m.group(1).replace(" ", "")), int(m.group(2)))
        s = s[m.end() :].strip()
    if s.startswith(r"\left("):
        if not s.endswith(r"\right)"):
            raise ValueError(r"unbalanced \left( ... \right)")
        s = s[len(r"\left(") : -len(r"\right)")]
    elif s == "0":
        return SymbolicExpression()
    pos = 0
    out = SymbolicExpression()
    s = s.rstrip()
    while pos < len(s):
        m = re.compile(r"\s*([+-]?)\s*(\d+)").match(s, pos)
        if not m:
            raise ValueError(f"expected a signed integer coefficient at offset {pos}: {s[pos:pos + 20]!r}")
        coeff = int(m.group(2)) * (-1 if m.group(1) == "-" else 1)
        pos = m.end()
        term = SymbolicExpression.const(coeff)
        while True:
            am = _ATOM.match(s, pos)
            if not am:
                break
            pos = am.end()
            tok = am.group(0)
            if tok == r"\gamma":
                atom = GAMMA
            elif tok == r"\pi":
                atom = PI
            elif tok.startswith(r"\psi"):
                den = int(am.group(3)) if am.group(3) else 1
                atom = Psi(int(am.group(1)), Fraction(int(am.group(2)), den))
            elif tok.startswith(r"\zeta"):
                atom = Zeta(int(am.group(4)))
            else:
                atom = Log(int(am.group(5)))
            power = 1
            pm = _POWER.match(s, pos)
            if pm:
                power = int(pm.group(1))
                pos = pm.end()
            term = term * SymbolicExpression.atom(atom, power)
        out = out + term
        while pos < len(s) and s[pos].isspace():
            pos += 1
    return out * pref


def normalize_for_comparison(e: SymbolicExpression) -> SymbolicExpression:
    """Exact rewriting used to compare formulas written in different bases."""
    return reduce_psi_to_zeta(simplify_special_values(e), even_zeta=True)


# ---------------------------------------------------------------------------
# fixtures


@dataclass(frozen=True)
class Fixture:
    id: str
    lhs: str
    source: str
    rhs: Optional[SymbolicExpression] = None
    expected_digits: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "lhs": self.lhs,
            "rhs": None if self.rhs is None else self.rhs.to_json(),
            "source": self.source,
            "expected_digits": self.expected_digits,
        }


def _fixture_from_record(rec, where: str) -> Fixture:
    if not isinstance(rec, dict):
        raise CatalogError(f"{where}: record is not an object")
    fid = rec.get("id")
    if not isinstance(fid, str) or not fid:
        raise CatalogError(f"{where}: field 'id' missing or not a string")
    for key in ("lhs", "source"):
        if not isinstance(rec.get(key), str):
            raise CatalogError(f"fixture {fid!r}: field {key!r} missing or not a string")
    unknown = set(rec) - {"id", "lhs", "rhs", "source", "expected_digits"}
    if unknown:
        raise CatalogError(f"fixture {fid!r}: unknown field(s) {sorted(unknown)}")
    try:
        require_summable(parse_ratfunc(rec["lhs"]))
    except ValueError as exc:
        raise CatalogError(f"fixture {fid!r}: field 'lhs': {exc}") from exc
    rhs = rec.get("rhs")
    if rhs is not None:
        try:
            rhs = SymbolicExpression.from_json(rhs)
        except (KeyError, TypeError, ValueError) as exc:
            raise CatalogError(f"fixture {fid!r}: field 'rhs': {exc}") from exc
    exp = rec.get("expected_digits")
    if exp is not None and not (isinstance(exp, str) and re.fullmatch(r"-?\d+\.\d+", exp)):
        raise CatalogError(f"fixture {fid!r}: field 'expected_digits' must be a decimal string")
    return Fixture(fid, rec["lhs"], rec["source"], rhs, exp)


def bundled_catalog_path() -> Path:
    return Path(str(resources.files("eulersum") / "data" / "catalog.jsonl"))


def load_catalog(path: str | Path | None = None) -> list[Fixture]:
    path = bundled_catalog_path() if path is None else Path(path)
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("["):
        records = json.loads(text)
        where = [f"{path}: entry {i}" for i in range(len(records))]
    else:
        records, where = [], []
        for n, line in enumerate(text.splitlines(), 1):
            if line.strip():
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise CatalogError(f"{path}:{n}: invalid JSON ({exc.msg})") from exc
                where.append(f"{path}:{n}")
    out: list[Fixture] = []
    seen: set[str] = set()
    for rec, w in zip(records, where):
        f = _fixture_from_record(rec, w)
        if f.id in seen:
            raise CatalogError(f"duplicate fixture id {f.id!r} ({w})")
        seen.add(f.id)
        out.append(f)
    return out


def save_catalog(fixtures: Iterable[Fixture], path: str | Path) -> None:
    lines = [json.dumps(f.to_json(), separators=(",", ":")) for f in fixtures]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# verification


@dataclass
class FixtureReport:
    id: str
    passed: bool
    closed_value: Optional[str] = None
    direct_value: Optional[str] = None
    difference: Optional[float] = None
    tolerance: float = 0.0
    rhs_canonical_match: Optional[bool] = None
    rhs_difference: Optional[float] = None
    expected_match: Optional[bool] = None
    closed_seconds: float = 0.0
    direct_seconds: float = 0.0
    path: str = ""
    diagnosis: str = ""

    @property
    def speedup(self) -> float:
        return self.direct_seconds / self.closed_seconds if self.closed_seconds > 0 else float("inf")


@dataclass
class VerificationReport:
    entries: list[FixtureReport] = field(default_factory=list)
    digits: int = 100
    terms: int = 100_000
    seconds: float = 0.0

    @property
    def passed(self) -> int:
        return sum(e.passed for e in self.entries)

    @property
    def all_passed(self) -> bool:
        return self.passed == len(self.entries)

    def records(self) -> list[dict]:
        return [dict(asdict(e), speedup=e.speedup) for e in self.entries]

    def table(self) -> str:
        rows = [f"{'id':<34} {'ok':<4} {'|closed-direct|':>15} {'rhs':>5} {'closed s':>9} {'direct s':>9} {'ratio':>7}"]
        for e in self.entries:
            diff = "-" if e.difference is None else f"{e.difference:.1e}"
            rhs = "-" if e.rhs_canonical_match is None else ("yes" if e.rhs_canonical_match else "NO")
            rows.append(
                f"{e.id:<34} {'ok' if e.passed else 'FAIL':<4} {diff:>15} {rhs:>5} "
                f"{e.closed_seconds:>9.4f} {e.direct_seconds:>9.3f} {e.speedup:>7.1f}"
                + (f"  {e.diagnosis}" if e.diagnosis else "")
            )
        rows.append(f"{self.passed}/{len(self.entries)} passed at D={self.digits}, N={self.terms} in {self.seconds:.1f}s")
        return "\n".join(rows)


def _expected_ok(value: mpf, expected: str) -> bool:
    """``expected`` is ``value`` truncated or rounded to its printed decimals."""
    decimals = len(expected.split(".")[1])
    with mpmath.workprec(digits_to_bits(decimals + 10)):
        d = value - mpf(expected)
        ulp = mpf(10) ** (-decimals)
        if expected.startswith("-"):
            d = -d
        return 0 <= d < ulp or abs(d) <= ulp / 2


def verify_fixture(
    f: Fixture,
    digits: int = 100,
    terms: int = 100_000,
    tolerance_digits: int | None = None,
) -> FixtureReport:
    """Closed form vs direct sum, stored formula and stored digits for one fixture."""
    tol_digits = digits - 10 if tolerance_digits is None else tolerance_digits
    tol = mpf(10) ** (-tol_digits)
    rep = FixtureReport(f.id, False, tolerance=float(tol))
    try:
        R = parse_ratfunc(f.lhs)
        t0 = time.perf_counter()
        cf = closed_form_fast(R)
        closed = eval_symexpr(cf.expression, digits)
        rep.closed_seconds = time.perf_counter() - t0
        rep.path = cf.provenance.get("path", "")
        t0 = time.perf_counter()
        direct = direct_euler_sum(R, DirectSumConfig(digits=digits, terms=terms)).value
        rep.direct_seconds = time.perf_counter() - t0
    except ValueError as exc:
        rep.diagnosis = f"{f.id}: {exc}"
        return rep
    problems = []
    with mpmath.workprec(digits_to_bits(digits + 20)):
        diff = abs(closed - direct)
        rep.closed_value = mpmath.nstr(closed, digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
        rep.direct_value = mpmath.nstr(direct, digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
        rep.difference = float(diff)
        if diff >= tol:
            problems.append("closed form and direct sum disagree")
        if f.rhs is not None:
            rep.rhs_canonical_match = normalize_for_comparison(f.rhs) == normalize_for_comparison(cf.expression)
            rhs_val = eval_symexpr(f.rhs, digits)
            rep.rhs_difference = float(abs(rhs_val - closed))
            if not rep.rhs_canonical_match:
                problems.append("canonical mismatch with stored rhs")
            if abs(rhs_val - closed) >= tol:
                problems.append("stored rhs differs numerically")
        if f.expected_digits is not None:
            rep.expected_match = _expected_ok(closed, f.expected_digits)
            if not rep.expected_match:
                problems.append(f"value does not start {f.expected_digits}")
    rep.passed = not problems
    rep.diagnosis = "; ".join(problems)
    return rep


def _verify_args(args):
    return verify_fixture(*args)


def verify_catalog(
    fixtures: Iterable[Fixture],
    digits: int = 100,
    terms: int = 100_000,
    jobs: int = 1,
) -> VerificationReport:
    fixtures = sorted(fixtures, key=lambda f: f.id)
    t0 = time.perf_counter()
    args = [(f, digits, terms) for f in fixtures]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_verify_args, args))
    else:
        entries = [_verify_args(a) for a in args]
    return VerificationReport(entries, digits, terms, time.perf_counter() - t0)
