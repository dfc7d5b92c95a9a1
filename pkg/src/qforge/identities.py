"""Pair-building pipelines and the catalog of identity families.

Three pipelines turn a seed pair into the pairs behind the multisum
identities:

* :func:`build_mainpair` gives the theta-function case;
* :func:`build_falsepair` gives the false-theta case;
* :func:`build_dilationpair` gives the half-integral (den 2) case.

Each output can be checked two ways: with :func:`qforge.bailey.verify_pair`,
and against closed forms for alpha and beta via :func:`pipeline_crosscheck`.

The families themselves are verified directly: the multisum side is
evaluated by :mod:`qforge.sums` and compared with the printed product or
bilateral sum.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .bailey import (
    INF,
    ZERO,
    BaileyPair,
    ParamValue,
    bailey_lattice,
    bailey_lemma,
    false_shift_plus,
    scale_pair,
    shift_up,
)
from .qcore import (
    Factor,
    ProductSpec,
    QMonomial,
    QSeries,
    dilate,
    poch_factors,
    poch_inf,
    pochhammer_inf,
    q_binomial,
)
from .report import Cell, Report
from .seeds import IntSeq, Rule, SeedEntry, check_f_condition, check_g_condition
from .sums import BilateralSpec, MultisumSpec, chain_eval, multisum_combination


class ParamOutOfRange(ValueError):
    pass


class UnknownFamily(KeyError):
    pass


HALF = Fraction(1, 2)


def _pq(e, sign=1) -> ParamValue:
    return ParamValue.q(Fraction(e), sign)


def _check_range(m: int, a: int, lo: int = 0) -> None:
    if m < 1 or not lo <= a <= m:
        raise ParamOutOfRange(f"(m, a) = ({m}, {a}) outside m >= 1, {lo} <= a <= m")


def _need_f(seed: SeedEntry) -> None:
    if seed.fseq is None:
        raise ParamOutOfRange(f"seed {seed.name} has no f_n sequence")
    if not check_f_condition(seed.fseq, 10).passed:
        raise ParamOutOfRange(f"f_n of seed {seed.name} fails q^n f_n = -q^(-n-1) f_(-n-1)")


def _iterate(p: BaileyPair, b: ParamValue, times: int, last: ParamValue | None = None) -> BaileyPair:
    for i in range(times):
        p = bailey_lemma(p, last if (last is not None and i == times - 1) else b, INF)
    return p


# -- pipelines ----------------------------------------------------------------------

def build_mainpair(seed: SeedEntry, m: int, a: int) -> BaileyPair:
    """Pair relative to q whose beta is the theta-case closed multisum."""
    _check_range(m, a)
    _need_f(seed)
    neg_q = _pq(1, -1)
    p = _iterate(seed.pair, neg_q, a)
    if a == m:
        return p.relabel(f"main[{seed.name},{m},{a}]")
    p = shift_up(p)
    p = bailey_lemma(p, _pq(2, -1), INF)
    p = scale_pair(p, [Factor(-1, Fraction(1))])          # times (1 + q)
    p = bailey_lattice(p, _pq(1), _pq(1))
    p = _iterate(p, neg_q, m - a - 1)
    return p.relabel(f"main[{seed.name},{m},{a}]")


def build_falsepair(seed: SeedEntry, m: int, a: int) -> BaileyPair:
    """Pair relative to q whose beta is the false-theta closed multisum."""
    _check_range(m, a)
    _need_f(seed)
    neg_q, pos_q = _pq(1, -1), _pq(1)
    label = f"false[{seed.name},{m},{a}]"
    if a == m:
        return _iterate(seed.pair, neg_q, a, last=pos_q).relabel(label)
    p = _iterate(seed.pair, neg_q, a)
    if a < m - 1:
        p = shift_up(p)
        p = bailey_lemma(p, _pq(2, -1), INF)
        p = scale_pair(p, [Factor(-1, Fraction(1))])      # times (1 + q)
        p = bailey_lattice(p, pos_q, pos_q)
        return _iterate(p, neg_q, m - a - 1, last=pos_q).relabel(label)
    p = false_shift_plus(p)
    p = bailey_lemma(p, _pq(2), INF)
    p = scale_pair(p, [Factor(1, Fraction(1))])           # times (1 - q)
    p = bailey_lattice(p, pos_q, pos_q)
    return p.relabel(label)


def build_dilationpair(seed: SeedEntry, m: int, a: int) -> BaileyPair:
    """Pair relative to 1 in powers of q^(1/2) for the dilated families."""
    _check_range(m, a)
    if seed.gseq is None:
        raise ParamOutOfRange(f"seed {seed.name} has no g_n sequence")
    if not check_g_condition(seed.gseq, 10).passed:
        raise ParamOutOfRange(f"g_n of seed {seed.name} fails g_0 = 1, g_(-n) = q^n g_n")
    b = _pq(HALF, -1)
    p = _iterate(seed.pair, b, a)
    p = shift_up(p)
    p = bailey_lemma(p, _pq(Fraction(3, 2), -1), INF)
    p = scale_pair(p, [Factor(-1, HALF)])                 # times (1 + q^(1/2))
    p = bailey_lattice(p, _pq(HALF), _pq(HALF))
    if a < m:
        p = _iterate(p, b, m - a - 1)
    else:
        p = bailey_lemma(p, b, ZERO)
    p.den = 2
    return p.relabel(f"dilation[{seed.name},{m},{a}]")


# -- closed forms ----------------------------------------------------------------------

def _closed_alpha_main(f: IntSeq, m: int, a: int, n: int, order, alternate: bool) -> QSeries:
    order = Fraction(order)
    sign = (-1) ** n if alternate else 1
    w = QMonomial.q(m * Fraction(n * (n + 1), 2), sign)
    inv = [Factor(1, Fraction(1), -1)]
    if a == m:
        fn = f(n)
        if fn is None:
            return QSeries.zero(order)
        body = QSeries.from_terms({0: 1, 2 * n + 1: -1}, order - w.exponent - fn.exponent + 1)
        return body.times_monomial(fn * w).apply(inv).truncate(order)
    t1, t2 = f(n + 1), f(n - 1)
    terms: dict = {}
    if t1 is not None:
        x = t1 * QMonomial.q(a * (n + 1)) * w
        terms[x.exponent] = terms.get(x.exponent, 0) + x.sign
    if t2 is not None:
        x = t2 * QMonomial.q(-a * n + 2 * n - 1) * w
        terms[x.exponent] = terms.get(x.exponent, 0) - x.sign
    return QSeries.from_terms(terms, order + 1).apply(inv).truncate(order)


def _closed_alpha_dilation(g: IntSeq, m: int, a: int, n: int, order) -> QSeries:
    order = Fraction(order)
    if n == 0:
        g1 = QMonomial.q(Fraction(a, 2)) * g(1)
        s = QSeries.from_terms({0: 1, g1.exponent: g1.sign} if g1.exponent else {0: 1 + g1.sign}, order + 1)
        return s.apply([Factor(1, HALF, -1)]).truncate(order)
    pre = QMonomial.q(Fraction(m * n * n, 2) + n)
    up = g(n + 1) * QMonomial.q(n * (a - 1) + Fraction(a, 2))
    down = g(n - 1) * QMonomial.q(-n * (a - 1) + Fraction(a - 2, 2))
    gn = g(n)
    inner = order - pre.exponent + 2
    first = QSeries.from_terms(_merge(gn, up), inner).apply([Factor(1, n + HALF, -1)])
    second = (QSeries.from_terms(_merge(gn, down), inner + 1).times_monomial(QMonomial.q(-HALF))
              .apply([Factor(1, n - HALF, -1)]))
    return (first - second).times_monomial(pre).truncate(order)


def _merge(*ms: QMonomial) -> dict:
    out: dict = {}
    for x in ms:
        out[x.exponent] = out.get(x.exponent, 0) + x.sign
    return out


def _closed_beta(kind: str, seed: SeedEntry, m: int, a: int, N: int, order) -> QSeries:
    """Closed multisum for beta'_N of the given pipeline."""
    order = Fraction(order)
    if kind == "dilation":
        spec = MultisumSpec(m, a, 1, "half_square", inner_kind="dil_beta", inner_seed=seed.name)
    else:
        spec = MultisumSpec(m, a, 1, "binom", inner_kind="pair_beta", inner_seed=seed.name)
    F = chain_eval(spec, order)
    acc = QSeries.zero(order)
    Q = QMonomial.q(1)
    for n, val in enumerate(F):
        if val.is_zero or n > N + 1:
            continue
        if kind == "main":
            fs = poch_factors(Q, Q, N - n, -1) + poch_factors(Q, Q, n, -1) if n <= N else None
            if fs is not None:
                acc = acc + val.apply(fs)
        elif kind == "false":
            if n <= N:
                fs = poch_factors(Q, Q, N - n, -1) + poch_factors(-Q, Q, n, -1)
                acc = acc + val.apply(fs, (-1) ** n)
        else:
            top = N + (1 if a == m else 0)
            acc = acc + q_binomial(top, n, Q, order) * val
    if kind == "main":
        pre = poch_factors(-Q, Q, N, -1)
    elif kind == "false":
        pre = poch_factors(Q, Q, N, -1)
    else:
        pre = poch_factors(QMonomial.q(HALF, -1), Q, N, -1) + poch_factors(Q, Q, N, -1)
    return acc.apply(pre).truncate(order)


def pipeline_crosscheck(seed: SeedEntry, m: int, a: int, n_max: int, order, mode: str = "main") -> Report:
    """Compare a pipeline's alpha'_n and beta'_n with their closed forms for n <= n_max."""
    builders = {"main": build_mainpair, "false": build_falsepair, "dilation": build_dilationpair}
    if mode not in builders:
        raise ValueError(f"unknown crosscheck mode {mode!r}")
    order = Fraction(order)
    pair = builders[mode](seed, m, a)
    cells = []
    for n in range(n_max + 1):
        t0 = time.perf_counter()
        b_pipe, a_pipe = pair.beta(n, order), pair.alpha(n, order)
        t1 = time.perf_counter()
        b_closed = _closed_beta(mode, seed, m, a, n, order)
        if mode == "dilation":
            a_closed = _closed_alpha_dilation(seed.gseq, m, a, n, order)
        else:
            a_closed = _closed_alpha_main(seed.fseq, m, a, n, order, alternate=(mode == "false"))
        t2 = time.perf_counter()
        bad_b, bad_a = b_pipe.compare(b_closed), a_pipe.compare(a_closed)
        bad = bad_b if bad_b is not None else bad_a
        detail = "" if bad is None else ("beta" if bad_b is not None else "alpha")
        cells.append(Cell(order=order, passed=bad is None, first_mismatch_exponent=bad, m=m, a=a, n=n,
                          lhs_time_ms=(t1 - t0) * 1e3, rhs_time_ms=(t2 - t1) * 1e3, detail=detail))
    return Report(f"crosscheck:{mode}:{seed.name}", order, cells)


# -- families --------------------------------------------------------------------------

@dataclass(frozen=True)
class CellSpec:
    """One (m, a) instance: signed multisum terms on the left, a product or bilateral sum on the right.

    The left side is evaluated through order / lhs_dilation and then dilated
    by q -> q^lhs_dilation.
    """

    m: int
    a: int
    lhs: tuple
    rhs: object
    lhs_dilation: int = 1

    def evaluate_lhs(self, order) -> QSeries:
        order = Fraction(order)
        k = self.lhs_dilation
        val = multisum_combination(list(self.lhs), order / k)
        return dilate(val, k) if k != 1 else val

    def evaluate_rhs(self, order) -> QSeries:
        if isinstance(self.rhs, ProductSpec):
            return pochhammer_inf(self.rhs, order)
        return self.rhs.evaluate(order)

    def to_json(self) -> dict:
        kind = "product" if isinstance(self.rhs, ProductSpec) else "bilateral"
        return {"m": self.m, "a": self.a,
                "lhs": [[c, s.to_json()] for c, s in self.lhs],
                "rhs": {"kind": kind, **self.rhs.to_json()}}

    @classmethod
    def from_json(cls, obj: dict, lhs_dilation: int = 1) -> CellSpec:
        lhs = obj["lhs"]
        if isinstance(lhs, dict):
            lhs = [[1, lhs]]
        terms = tuple((int(c), MultisumSpec.from_json(s)) for c, s in lhs)
        r = dict(obj["rhs"])
        kind = r.pop("kind", "product")
        if kind == "product":
            rhs = ProductSpec.from_json(r)
        elif kind == "bilateral":
            rhs = BilateralSpec.from_json(r)
        else:
            raise ValueError(f"unknown rhs kind {kind!r}")
        return cls(int(obj["m"]), int(obj["a"]), terms, rhs, int(obj.get("lhs_dilation", lhs_dilation)))


@dataclass(frozen=True)
class FamilySpec:
    name: str
    domain: Callable[[int], range]
    lhs: Callable[[int, int], tuple]
    rhs: Callable[[int, int], object]
    lhs_dilation: int = 1
    default_order: int = 100
    m_min: int = 1
    description: str = ""

    def cell(self, m: int, a: int) -> CellSpec:
        if m < self.m_min or a not in self.domain(m):
            raise ParamOutOfRange(f"{self.name}: (m, a) = ({m}, {a}) outside the family's domain")
        return CellSpec(m, a, self.lhs(m, a), self.rhs(m, a), self.lhs_dilation)

    def cells(self, m_max: int) -> list:
        return [self.cell(m, a) for m in range(self.m_min, m_max + 1) for a in self.domain(m)]


def _prod(*factors, coeff=1, shift=0) -> ProductSpec:
    return ProductSpec(tuple(factors), coeff, Fraction(shift))


def _triple(base, *exps, signs=None):
    signs = signs or [1] * len(exps)
    return [poch_inf(e, base, 1, a_sign=s) for e, s in zip(exps, signs)]


# (-q)_oo / (q)_oo and (-q;q^2)_oo / (q^2;q^2)_oo prefactors
_MAIN_PRE = [poch_inf(1, 1, 1, a_sign=-1), poch_inf(1, 1, -1)]
_DIL_PRE = [poch_inf(1, 2, 1, a_sign=-1), poch_inf(2, 2, -1)]


def _binom_lhs(inner: str, outer: str = "inv_poch", **kw):
    return lambda m, a: ((1, MultisumSpec(m, a, 1, "binom", outer, inner, **kw)),)


def _q2_lhs(outer: str):
    return lambda m, a: ((1, MultisumSpec(m, a, 2, "square_plus_linear", outer, "inv_neg_odd_poch")),)


def _dil_lhs(seed: str, diff: bool):
    def build(m, a):
        spec = lambda aa: MultisumSpec(m, aa, 1, "half_square", "inv_poch", "dil_beta", seed)
        return ((1, spec(a)), (-1, spec(a - 1))) if diff else ((1, spec(a)),)
    return build


def _false_seq(modulus_rules, sgn) -> BilateralSpec:
    return BilateralSpec(IntSeq(len(modulus_rules), tuple(modulus_rules)), sgn)


def _false_clsxy_rhs(m, a):
    return _false_seq([Rule(A=m + 2, B=-(m + 2) + 2 * (a + 1), den=2)], "low")


def _false_q2_rhs(m, a):
    if a < m:
        return _false_seq([Rule(A=2 * m + 3, B=-2 * m - 1 + 4 * a, den=2)], "low")
    return _false_seq([Rule(A=2 * m + 3, B=2 * m - 1, den=2)], "high")


def _false_strange_rhs(m, a):
    if a < m:
        return _false_seq([Rule(u=1, v=1, A=m + 1, B=-(m + 1) + 2 * a, den=2)], "low")
    return _false_seq([Rule(u=1, v=1, A=m + 1, B=m - 1, den=2)], "high")


def _false_quint_rhs(t):
    def build(m, a):
        A = 3 * m + t
        B = A + 6 * (a - m - 1) if a < m else A - 6
        base = Rule(v=2, A=A, B=B, den=6)
        rules = [base, None, Rule(v=2, w=2, A=A, B=B, den=6)]
        return _false_seq(rules, "low" if a < m else "high")
    return build


def _quint_rhs(t):
    def build(m, a):
        P = 3 * m + t
        if t == 4:
            pair = (m + 2 + 2 * a, 5 * m + 6 - 2 * a)
        elif t == 2:
            pair = (m + 2 * a, 5 * m + 4 - 2 * a)
        else:
            pair = (m + 2 * a + 1, 5 * m + 5 - 2 * a)
        return _prod(*_MAIN_PRE, *_triple(P, m + 1 - a, P - (m + 1 - a), P),
                     *_triple(2 * P, *pair))
    return build


upto_m_minus_1 = lambda m: range(0, m)
upto_m = lambda m: range(0, m + 1)
one_to_m = lambda m: range(1, m + 1)
ends = lambda m: sorted({0, m})
only_m = lambda m: [m]


FAMILIES = {
    "clsxy": FamilySpec(
        "clsxy", upto_m_minus_1, _binom_lhs("one"),
        lambda m, a: _prod(*_triple(m + 2, a + 1, m + 1 - a, m + 2), poch_inf(1, 1, -1), poch_inf(1, 2, -1)),
        description="binomial-chain multisum = theta product over (q)_oo (q;q^2)_oo"),
    "false-clsxy": FamilySpec(
        "false-clsxy", upto_m_minus_1, _binom_lhs("one", "alt_inv_poch"), _false_clsxy_rhs,
        default_order=100, description="alternating companion of clsxy, false theta right side"),
    "q2": FamilySpec(
        "q2", upto_m, _q2_lhs("inv_poch"),
        lambda m, a: _prod(poch_inf(2, 2, 1, a_sign=-1), poch_inf(2, 2, -1),
                           *_triple(2 * m + 3, 2 * a + 1, 2 * m - 2 * a + 2, 2 * m + 3)),
        default_order=80, description="chain in q^2 with 1/(-q;q^2) inner factor"),
    "strange": FamilySpec(
        "strange", upto_m, _binom_lhs("neg_one_poch_ratio"),
        lambda m, a: _prod(*_MAIN_PRE, *_triple(2 * m + 2, a, m + 1 + a, m + 1 - a, 2 * m + 2 - a, m + 1, 2 * m + 2,
                                                  signs=[-1, 1, 1, -1, -1, 1])),
        description="(-1;q^2)_n/(q;q^2)_n inner factor, six-factor product"),
    "quint1": FamilySpec("quint1", upto_m, _binom_lhs("inv_odd_poch"), _quint_rhs(4), default_order=80),
    "quint2": FamilySpec("quint2", upto_m, _binom_lhs("quint_extra"), _quint_rhs(2), default_order=80),
    "quint3": FamilySpec("quint3", upto_m, _binom_lhs("triple_ratio"), _quint_rhs(3), default_order=80),
    "false-q2": FamilySpec("false-q2", upto_m, _q2_lhs("alt_inv_poch"), _false_q2_rhs, default_order=80),
    "false-strange": FamilySpec("false-strange", upto_m, _binom_lhs("neg_one_poch_ratio", "alt_inv_poch"),
                                _false_strange_rhs),
    "false-quint1": FamilySpec("false-quint1", upto_m, _binom_lhs("inv_odd_poch", "alt_inv_poch"),
                               _false_quint_rhs(4), default_order=80),
    "false-quint2": FamilySpec("false-quint2", upto_m, _binom_lhs("quint_extra", "alt_inv_poch"),
                               _false_quint_rhs(2), default_order=80),
    "false-quint3": FamilySpec("false-quint3", upto_m, _binom_lhs("triple_ratio", "alt_inv_poch"),
                               _false_quint_rhs(3), default_order=80),
    "s-diff": FamilySpec(
        "s-diff", one_to_m, _dil_lhs("SLATER_P468", True),
        lambda m, a: _prod(*_DIL_PRE, *_triple(2 * m + 4, m + 1 - 2 * a, m + 3 + 2 * a, 2 * m + 4), shift=a),
        lhs_dilation=2, default_order=80),
    "s-product": FamilySpec(
        "s-product", ends, _dil_lhs("SLATER_P468", False),
        lambda m, a: _prod(*_DIL_PRE, *_triple(2 * m + 4, m + 1, m + 3, 2 * m + 4)),
        lhs_dilation=2, default_order=80),
    "r-diff": FamilySpec(
        "r-diff", one_to_m, _dil_lhs("SLATER_B1", True),
        lambda m, a: _prod(*_DIL_PRE, *_triple(2 * m + 6, m + 6 + 2 * a, m - 2 * a, 2 * m + 6), shift=a + 1),
        lhs_dilation=2, default_order=80),
    "r-product": FamilySpec(
        "r-product", only_m, _dil_lhs("SLATER_B1", False),
        lambda m, a: _prod(*_DIL_PRE, *_triple(2 * m + 6, m + 4, m + 2, 2 * m + 6)),
        lhs_dilation=2, default_order=80),
    "t-diff": FamilySpec(
        "t-diff", one_to_m, _dil_lhs("SLATER_CORR", True),
        lambda m, a: _prod(*_DIL_PRE, *_triple(2 * m + 2, m + 2 * a, m + 2 - 2 * a, 2 * m + 2, signs=[-1, -1, 1]),
                           coeff=-1, shift=a - 1),
        lhs_dilation=2, default_order=80),
    "t-product": FamilySpec(
        "t-product", only_m, _dil_lhs("SLATER_CORR", False),
        lambda m, a: _prod(*_DIL_PRE, *_triple(2 * m + 2, m, m + 2, 2 * m + 2, signs=[-1, -1, 1])),
        lhs_dilation=2, default_order=80),
    "hikami": FamilySpec(
        "hikami", upto_m_minus_1,
        lambda m, a: ((1, MultisumSpec(m - 1, a, 1, "square", linear_tail=tuple(range(a + 1, m)))),),
        lambda m, a: _prod(*_triple(2 * m + 1, a + 1, 2 * m - a, 2 * m + 1), poch_inf(1, 1, -1)),
        m_min=2),
}


def get_family(name: str) -> FamilySpec:
    try:
        return FAMILIES[name]
    except KeyError:
        raise UnknownFamily(name) from None


def run_cell(cell: CellSpec, order) -> Cell:
    order = Fraction(order)
    t0 = time.perf_counter()
    lhs = cell.evaluate_lhs(order)
    t1 = time.perf_counter()
    rhs = cell.evaluate_rhs(order)
    t2 = time.perf_counter()
    bad = lhs.compare(rhs)
    return Cell(order=order, passed=bad is None, first_mismatch_exponent=bad, m=cell.m, a=cell.a,
                lhs_time_ms=(t1 - t0) * 1e3, rhs_time_ms=(t2 - t1) * 1e3)


def _run_cell_args(args):
    return run_cell(*args)


def verify_cells(name: str, cells: list, order, jobs: int = 1) -> Report:
    order = Fraction(order)
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(cells))) as ex:
            results = list(ex.map(_run_cell_args, [(c, order) for c in cells]))
    else:
        results = [run_cell(c, order) for c in cells]
    return Report(name, order, results).sorted()


def verify_family(name: str, m_max: int, order=None, jobs: int = 1) -> Report:
    """Check every (m, a) cell of a family with m <= m_max."""
    fam = get_family(name)
    if m_max < 1:
        raise ParamOutOfRange("m_max must be >= 1")
    order = fam.default_order if order is None else order
    return verify_cells(name, fam.cells(m_max), order, jobs)


def default_jobs() -> int:
    return max(1, os.cpu_count() or 1)
