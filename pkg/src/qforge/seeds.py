"""Seed Bailey pairs and the closed-form sequences attached to them.

Every sequence used by the identity families is an :class:`IntSeq`: on each
residue class mod M it is either zero or a signed monomial

    (-1)^((u n^2 + v n + w)/2) * q^((A n^2 + B n + C)/den).

That covers all the f_n / g_n shapes we need and keeps catalog entries
serializable.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .bailey import BaileyPair, verify_pair
from .qcore import (
    ONE,
    Q,
    Factor,
    QMonomial,
    QSeries,
    finite_product,
    poch_factors,
)
from .report import Cell, Report


class UnknownSeed(KeyError):
    pass


@dataclass(frozen=True)
class Rule:
    """Signed monomial on one residue class; see the module docstring."""

    u: int = 0
    v: int = 0
    w: int = 0
    A: int = 0
    B: int = 0
    C: int = 0
    den: int = 1

    def sign(self, n: int) -> int:
        s = self.u * n * n + self.v * n + self.w
        if s % 2:
            raise ValueError(f"sign exponent ({self.u}n^2+{self.v}n+{self.w})/2 is not integral at n={n}")
        return -1 if (s // 2) % 2 else 1

    def exponent(self, n: int) -> Fraction:
        return Fraction(self.A * n * n + self.B * n + self.C, self.den)

    def __call__(self, n: int) -> QMonomial:
        return QMonomial.q(self.exponent(n), self.sign(n))

    def shifted(self, k: int) -> Rule:
        """The rule for n -> n + k."""
        return Rule(self.u, self.v + 2 * self.u * k, self.w + self.u * k * k + self.v * k,
                    self.A, self.B + 2 * self.A * k, self.C + self.A * k * k + self.B * k, self.den)

    def plus(self, u=0, v=0, w=0, A: Fraction | int = 0, B: Fraction | int = 0, C: Fraction | int = 0) -> Rule:
        """Multiply by (-1)^((u n^2+v n+w)/2) q^(A n^2 + B n + C), with rational A, B, C."""
        A, B, C = Fraction(A), Fraction(B), Fraction(C)
        d = self.den
        for x in (A, B, C):
            d = d * x.denominator // _gcd(d, x.denominator)
        k = d // self.den
        return Rule(self.u + u, self.v + v, self.w + w,
                    self.A * k + int(A * d), self.B * k + int(B * d), self.C * k + int(C * d), d)

    def to_json(self) -> list:
        return [self.u, self.v, self.w, self.A, self.B, self.C, self.den]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class IntSeq:
    """Two-sided sequence gated by residue class; ``None`` rules are zero."""

    modulus: int
    rules: tuple

    def __post_init__(self):
        if len(self.rules) != self.modulus:
            raise ValueError("need one rule per residue class")

    @classmethod
    def single(cls, rule: Rule) -> IntSeq:
        return cls(1, (rule,))

    def rule(self, n: int) -> Rule | None:
        return self.rules[n % self.modulus]

    def __call__(self, n: int) -> QMonomial | None:
        r = self.rule(n)
        return None if r is None else r(n)

    def map(self, fn: Callable[[Rule], Rule]) -> IntSeq:
        return IntSeq(self.modulus, tuple(None if r is None else fn(r) for r in self.rules))

    def shifted(self, k: int) -> IntSeq:
        """The sequence n -> self(n + k)."""
        M = self.modulus
        return IntSeq(M, tuple(None if self.rules[(r + k) % M] is None else self.rules[(r + k) % M].shifted(k)
                               for r in range(M)))

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "rules": [None if r is None else r.to_json() for r in self.rules]}

    @classmethod
    def from_json(cls, obj) -> IntSeq:
        return cls(obj["modulus"], tuple(None if r is None else Rule(*r) for r in obj["rules"]))


@dataclass
class SeedEntry:
    name: str
    pair: BaileyPair
    source: str
    alpha_form: str
    beta_form: str
    fseq: IntSeq | None = None
    gseq: IntSeq | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "x": repr(self.pair.x), "alpha_form": self.alpha_form,
                "beta_form": self.beta_form, "source": self.source}


# -- sequences ------------------------------------------------------------------

def _quint_f(t: int) -> IntSeq:
    # q^((t/3) binom(n+1,2) - n) on n = 0 mod 3, zero on 1, negated on 2
    base = Rule(A=t, B=t - 6, den=6)
    return IntSeq(3, (base, None, replace(base, w=2)))


F_E3 = IntSeq.single(Rule(v=2, A=1))
F_W44 = IntSeq.single(Rule(v=2, A=3, B=-1, den=4))
F_NEWPAIR = IntSeq.single(Rule(u=1, v=-1, A=1, B=-1, den=2))
F_UNIT = IntSeq.single(Rule(v=2, A=1, B=-1, den=2))
F_QUINT = {t: _quint_f(t) for t in (2, 3, 4)}
G_B1 = IntSeq.single(Rule(v=2, A=3, B=-1, den=2))
G_P468 = IntSeq.single(Rule(v=2, A=2, B=-1, den=2))
G_CORR = IntSeq.single(Rule(A=1, B=-1, den=2))


# -- alpha / beta builders --------------------------------------------------------

def _mono_series(m: QMonomial | None, order) -> QSeries:
    return QSeries.zero(order) if m is None else m.to_series(order)


def alpha_from_f(f: IntSeq):
    """``alpha_n = (1 - q^(2n+1))/(1 - q) f_n``, i.e. f_n (1 + q + ... + q^(2n))."""
    def alpha(n, order):
        m = f(n)
        if m is None:
            return QSeries.zero(order)
        terms = {m.exponent + j: m.sign for j in range(2 * n + 1)}
        return QSeries.from_terms(terms, order)
    return alpha


def alpha_from_g(g: IntSeq):
    """``alpha_0 = 1`` and ``alpha_n = (1 + q^n) g_n``."""
    def alpha(n, order):
        if n == 0:
            return QSeries.one(order)
        m = g(n)
        if m is None:
            return QSeries.zero(order)
        return QSeries.from_terms({m.exponent: m.sign, m.exponent + n: m.sign}, order)
    return alpha


def _beta_product(factor_fn, mono_fn=None):
    def beta(n, order):
        mono = mono_fn(n) if mono_fn else ONE
        return finite_product(factor_fn(n), order - mono.exponent).times_monomial(mono).truncate(order)
    return beta


def _p470_alpha(n: int, order) -> QSeries:
    if n == 0:
        return QSeries.one(order)
    r, odd = divmod(n, 2)
    s = -1 if r % 2 else 1
    if odd:
        terms = {2 * r * r + r: s, 2 * r * r + 3 * r + 1: -s}
    else:
        terms = {2 * r * r + r: s, 2 * r * r - r: s}
    return QSeries.from_terms(terms, order)


def _delta_beta(n, order):
    return QSeries.one(order) if n == 0 else QSeries.zero(order)


def _q(e, sign=1):
    return QMonomial.q(Fraction(e), sign)


HALF = Fraction(1, 2)
Q2 = _q(2)
Q_HALF = _q(HALF)
NEG_Q_HALF = _q(HALF, -1)


def _beta_e3(n):
    return poch_factors(Q2, Q2, n, -1)


def _beta_w44(n):
    return poch_factors(Q2, Q2, n, -1) + poch_factors(NEG_Q_HALF, Q, n, -1)


def _beta_newpair(n):
    return poch_factors(_q(0, -1), Q2, n) + poch_factors(Q, Q, 2 * n, -1)


def _beta_q2n(n):
    return poch_factors(Q, Q, 2 * n, -1)


def _beta_t3(n):
    # (-1;q^3)_n / (-1;q)_n with the common factor 2 cancelled
    fs = poch_factors(Q, Q, 2 * n, -1)
    if n:
        fs += poch_factors(_q(3, -1), _q(3), n - 1) + poch_factors(_q(1, -1), Q, n - 1, -1)
    return fs


def _beta_b1(n):
    return poch_factors(Q, Q, n, -1)


def _beta_p468(n):
    return poch_factors(NEG_Q_HALF, Q, n, -1) + poch_factors(Q, Q, n, -1)


def _beta_corr(n):
    return (poch_factors(_q(0, -1), Q, n) + poch_factors(NEG_Q_HALF, Q, n, -1)
            + poch_factors(Q_HALF, Q, n, -1) + poch_factors(Q, Q, n, -1))


def _build(name: str) -> SeedEntry:
    if name == "E3":
        return SeedEntry(name, BaileyPair(Q, alpha_from_f(F_E3), _beta_product(_beta_e3), name),
                         "classical pair, x = q", "(1-q^(2n+1))/(1-q) (-1)^n q^(n^2)", "1/(q^2;q^2)_n", fseq=F_E3)
    if name == "W44":
        return SeedEntry(name, BaileyPair(Q, alpha_from_f(F_W44), _beta_product(_beta_w44), name, den=4),
                         "half-integer exponent pair, x = q", "(1-q^(2n+1))/(1-q) (-1)^n q^(n(3n-1)/4)",
                         "1/((q^2;q^2)_n (-q^(1/2);q)_n)", fseq=F_W44)
    if name == "NEWPAIR":
        return SeedEntry(name, BaileyPair(Q, alpha_from_f(F_NEWPAIR), _beta_product(_beta_newpair), name),
                         "one_to_q(SLATER_P470, b=0)", "(1-q^(2n+1))/(1-q) (-1)^binom(n,2) q^binom(n,2)",
                         "(-1;q^2)_n/(q)_(2n)", fseq=F_NEWPAIR)
    if name.startswith("QUINT_T") and name[7:] in ("2", "3", "4"):
        t = int(name[7:])
        f = F_QUINT[t]
        if t == 2:
            beta = _beta_product(_beta_q2n, lambda n: _q(n * n - n))
            form = "q^(n^2-n)/(q)_(2n)"
        elif t == 3:
            beta = _beta_product(_beta_t3)
            form = "(-1;q^3)_n/((q)_(2n) (-1;q)_n)"
        else:
            beta = _beta_product(_beta_q2n)
            form = "1/(q)_(2n)"
        return SeedEntry(name, BaileyPair(Q, alpha_from_f(f), beta, name), f"quintuple-type seed, t={t}",
                         f"(1-q^(2n+1))/(1-q) f_n, f_n = +-q^(({t}/3)binom(n+1,2)-n) by n mod 3", form, fseq=f)
    if name == "UNIT":
        return SeedEntry(name, BaileyPair(Q, alpha_from_f(F_UNIT), _delta_beta, name), "unit pair, x = q",
                         "(1-q^(2n+1))/(1-q) (-1)^n q^binom(n,2)", "delta_(n,0)", fseq=F_UNIT)
    if name == "SLATER_B1":
        return SeedEntry(name, BaileyPair(ONE, alpha_from_g(G_B1), _beta_product(_beta_b1), name),
                         "classical pair, x = 1", "(1+q^n) (-1)^n q^(n(3n-1)/2)", "1/(q)_n", gseq=G_B1)
    if name == "SLATER_P468":
        return SeedEntry(name, BaileyPair(ONE, alpha_from_g(G_P468), _beta_product(_beta_p468), name, den=2),
                         "classical pair with a half-integer base, x = 1", "(1+q^n) (-1)^n q^(n^2-n/2)", "1/((-q^(1/2))_n (q)_n)", gseq=G_P468)
    if name == "SLATER_CORR":
        return SeedEntry(name, BaileyPair(ONE, alpha_from_g(G_CORR), _beta_product(_beta_corr), name, den=2),
                         "classical pair with a half-integer base, x = 1, sign-free", "(1+q^n) q^binom(n,2)",
                         "(-1)_n/((-q^(1/2),q^(1/2),q)_n)", gseq=G_CORR)
    if name == "SLATER_P470":
        return SeedEntry(name, BaileyPair(ONE, _p470_alpha, _beta_product(_beta_newpair), name),
                         "classical pair, x = 1, alpha piecewise by parity", "A_n (piecewise in n mod 2)", "(-1;q^2)_n/(q)_(2n)")
    raise UnknownSeed(name)


CATALOG_NAMES = ("E3", "W44", "NEWPAIR", "QUINT_T2", "QUINT_T3", "QUINT_T4", "UNIT",
                 "SLATER_B1", "SLATER_P468", "SLATER_CORR", "SLATER_P470")


@lru_cache(maxsize=None)
def catalog_get(name: str) -> SeedEntry:
    if name not in CATALOG_NAMES:
        raise UnknownSeed(name)
    return _build(name)


def catalog() -> list[SeedEntry]:
    return [catalog_get(n) for n in CATALOG_NAMES]


# -- checks ---------------------------------------------------------------------------

def _same(x: QMonomial | None, y: QMonomial | None) -> bool:
    return (x is None and y is None) or (x is not None and y is not None and x == y)


def check_f_condition(f: IntSeq, n_range: int) -> Report:
    """``q^n f_n = -q^(-n-1) f_(-n-1)`` as monomials for |n| <= n_range."""
    cells = []
    for n in range(-n_range, n_range + 1):
        a, b = f(n), f(-n - 1)
        lhs = None if a is None else a * _q(n)
        rhs = None if b is None else -(b * _q(-n - 1))
        ok = _same(lhs, rhs)
        cells.append(Cell(order=0, passed=ok, n=n, detail="" if ok else f"{lhs!r} != {rhs!r}"))
    return Report("f-condition", Fraction(0), cells)


def check_g_condition(g: IntSeq, n_range: int) -> Report:
    """``g_0 = 1`` and ``g_(-n) = q^n g_n`` for |n| <= n_range."""
    cells = []
    for n in range(-n_range, n_range + 1):
        a, b = g(-n), g(n)
        ok = _same(a, None if b is None else b * _q(n))
        if n == 0:
            ok = ok and _same(g(0), ONE)
        cells.append(Cell(order=0, passed=ok, n=n))
    return Report("g-condition", Fraction(0), cells)


def _p470_terms(j: int) -> dict:
    if j == 0:
        return {0: 1}
    r, odd = divmod(j, 2)
    s = -1 if r % 2 else 1
    if odd:
        return {2 * r * r + r: s, 2 * r * r + 3 * r + 1: -s}
    return {2 * r * r + r: s, 2 * r * r - r: s}


def slater_partial_sum_check(n_max: int) -> Report:
    """``sum_(j<=n) q^(-j^2) A_j = (-1)^binom(n,2) q^(-binom(n+1,2))`` as Laurent polynomials."""
    acc = defaultdict(int)
    cells = []
    for n in range(n_max + 1):
        for e, c in _p470_terms(n).items():
            acc[e - n * n] += c
        poly = {e: c for e, c in acc.items() if c}
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        ok = poly == {-(n * (n + 1) // 2): sign}
        cells.append(Cell(order=0, passed=ok, n=n))
    return Report("slater-partial-sum", Fraction(0), cells)


def check_alpha_matches_f(entry: SeedEntry, n_max: int, order) -> Report:
    """``alpha_n (1-q) = (1-q^(2n+1)) f_n`` coefficientwise."""
    cells = []
    for n in range(n_max + 1):
        m = entry.fseq(n)
        lhs = entry.pair.alpha(n, order + 1).apply([Factor(1, Fraction(1))]).truncate(order)
        rhs = (QSeries.zero(order) if m is None else
               QSeries.from_terms({m.exponent: m.sign, m.exponent + 2 * n + 1: -m.sign}, order))
        bad = lhs.compare(rhs)
        cells.append(Cell(order=order, passed=bad is None, first_mismatch_exponent=bad, n=n))
    return Report(f"alpha-f:{entry.name}", Fraction(order), cells)


def check_alpha_matches_g(entry: SeedEntry, n_max: int, order) -> Report:
    cells = []
    for n in range(n_max + 1):
        rhs = alpha_from_g(entry.gseq)(n, order)
        bad = entry.pair.alpha(n, order).compare(rhs)
        cells.append(Cell(order=order, passed=bad is None, first_mismatch_exponent=bad, n=n))
    return Report(f"alpha-g:{entry.name}", Fraction(order), cells)


def verify_seed(name: str, n_max: int = 25, order=60) -> Report:
    return verify_pair(catalog_get(name).pair, n_max, order)
