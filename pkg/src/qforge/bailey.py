"""Bailey pairs and the transformations that build new pairs from old ones.

A pair relative to ``x`` is a couple of sequences with

    beta_n = sum_{k=0}^{n} alpha_k / ((q)_{n-k} (xq)_{n+k}).

Sequences are evaluated lazily: ``pair.alpha(n, order)`` returns a series
exact through ``q**order``. Every transformation below only asks its input
for the orders it really needs, so pipelines of many steps stay cheap.

Limit specializations of the Bailey lemma (c -> oo, b = c -> oo, c -> 0)
are closed forms worked out by hand; :func:`verify_pair` is the check that
keeps them honest.
"""
from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .qcore import (
    ONE,
    Q,
    Factor,
    Number,
    QMonomial,
    QSeries,
    den_for,
    factors_shift,
    finite_product,
    poch_factors,
)
from .report import Cell, Report

SeqFn = Callable[[int, Fraction], QSeries]


class BaileyError(Exception):
    pass


class UnsupportedLimit(BaileyError):
    pass


class HypothesisViolated(BaileyError):
    pass


class WrongRelativeParameter(BaileyError):
    pass


class NoStabilization(BaileyError):
    pass


class ValuationUnbounded(BaileyError):
    pass


@dataclass(frozen=True)
class ParamValue:
    """A Bailey-lemma parameter: a monomial, or one of the limits oo / 0."""

    kind: str
    value: QMonomial | None = None

    @classmethod
    def finite(cls, m: QMonomial) -> ParamValue:
        return cls("finite", m)

    @classmethod
    def q(cls, exponent: Number = 1, sign: int = 1) -> ParamValue:
        return cls("finite", QMonomial.q(exponent, sign))

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"


INF = ParamValue("infinity")
ZERO = ParamValue("zero")


def _mono_factor(m: QMonomial) -> Factor:
    """The single factor ``1 - m``."""
    return Factor(m.sign, m.exponent, 1)


def _inv_factor(m: QMonomial) -> Factor:
    return Factor(m.sign, m.exponent, -1)


def _times(s: QSeries, factors=(), mono: QMonomial = ONE, coeff: int = 1) -> QSeries:
    out = s.apply(factors, coeff) if factors else (s.scale(coeff) if coeff != 1 else s)
    return out.times_monomial(mono) if mono != ONE else out


def _need(order: Fraction, factors=(), mono: QMonomial = ONE) -> Fraction:
    """Order an input must have so that input * multiplier is exact through ``order``."""
    return order - factors_shift(factors) - mono.exponent


def _refine(s: QSeries, order: Fraction) -> QSeries:
    """Re-express ``s`` on a finer exponent grid when ``order`` needs it.

    A series in powers of q^(1/d) known through q^N is also known (to be zero)
    at the finer exponents below q^(N + 1/d).
    """
    if s.order_q >= order:
        return s
    d = den_for(order, Fraction(1, s.den))
    return s.with_den(d) if d != s.den else s


def _sum(terms, order: Fraction, den: int | None = None) -> QSeries:
    acc = QSeries.zero(order, den)
    for t in terms:
        acc = acc + t
    return acc.truncate(order)


class BaileyPair:
    """Lazily evaluated Bailey pair relative to ``x``.

    ``alpha_fn(n, order)`` and ``beta_fn(n, order)`` must return series exact
    through ``order``. Results are cached per ``n``; a request at a higher
    order recomputes and is checked against the cached overlap. The cache is
    guarded by a lock so one pair may be shared between threads.
    """

    def __init__(self, x: QMonomial, alpha_fn: SeqFn, beta_fn: SeqFn, label: str = "", den: int = 1):
        self.x = x
        self.label = label
        self.den = den
        self._alpha_fn = alpha_fn
        self._beta_fn = beta_fn
        self._memo = {"alpha": {}, "beta": {}}
        self._lock = threading.RLock()

    def __repr__(self):
        return f"BaileyPair(x={self.x!r}, label={self.label!r})"

    def _get(self, which: str, fn: SeqFn, n: int, order: Number) -> QSeries:
        order = Fraction(order)
        if n < 0:
            return QSeries.zero(order)
        with self._lock:
            cached = self._memo[which].get(n)
            if cached is not None:
                cached = _refine(cached, order)
                if cached.order_q >= order:
                    return cached.truncate(order)
            value = _refine(fn(n, order), order)
            if value.order_q < order:
                raise AssertionError(f"{self.label}: {which}_{n} came back at order {value.order_q} < {order}")
            if cached is not None and cached.compare(value) is not None:
                raise AssertionError(f"{self.label}: {which}_{n} disagrees with its cached value")
            self._memo[which][n] = value
            return value.truncate(order)

    def alpha(self, n: int, order: Number) -> QSeries:
        return self._get("alpha", self._alpha_fn, n, order)

    def beta(self, n: int, order: Number) -> QSeries:
        return self._get("beta", self._beta_fn, n, order)

    def relabel(self, label: str) -> BaileyPair:
        return BaileyPair(self.x, self.alpha, self.beta, label, self.den)


# -- linear structure ---------------------------------------------------------

def combine(terms: list[tuple[int, BaileyPair]], label: str = "") -> BaileyPair:
    """Integer linear combination of pairs sharing the same ``x``."""
    xs = {p.x for _, p in terms}
    if len(xs) != 1:
        raise WrongRelativeParameter("linear combinations need a common relative parameter")
    x = terms[0][1].x

    def alpha(n, order):
        return _sum((p.alpha(n, order).scale(c) for c, p in terms), order)

    def beta(n, order):
        return _sum((p.beta(n, order).scale(c) for c, p in terms), order)

    label = label or " + ".join(f"{c}*{p.label}" for c, p in terms)
    return BaileyPair(x, alpha, beta, label, max(p.den for _, p in terms))


def scale_pair(p: BaileyPair, factors=(), mono: QMonomial = ONE, coeff: int = 1, label: str = "") -> BaileyPair:
    """Multiply both sequences by the same n-independent multiplier."""
    factors = tuple(factors)

    def alpha(n, order):
        return _times(p.alpha(n, _need(order, factors, mono)), factors, mono, coeff).truncate(order)

    def beta(n, order):
        return _times(p.beta(n, _need(order, factors, mono)), factors, mono, coeff).truncate(order)

    return BaileyPair(p.x, alpha, beta, label or f"scale({p.label})", p.den)


# -- the defining relation ----------------------------------------------------

def bailey_sum(alpha: Callable[[int, Fraction], QSeries], x: QMonomial, n: int, order: Number) -> QSeries:
    """``sum_{k<=n} alpha_k / ((q)_{n-k} (xq)_{n+k})`` through ``order``."""
    order = Fraction(order)
    xq = x * Q
    terms = []
    for k in range(n + 1):
        fs = poch_factors(Q, Q, n - k, -1) + poch_factors(xq, Q, n + k, -1)
        terms.append(alpha(k, _need(order, fs)).apply(fs))
    return _sum(terms, order)


def verify_pair(p: BaileyPair, n_max: int, order: Number) -> Report:
    """Check the defining relation for every ``n <= n_max``."""
    order = Fraction(order)
    cells = []
    for n in range(n_max + 1):
        t0 = time.perf_counter()
        lhs = bailey_sum(p.alpha, p.x, n, order)
        t1 = time.perf_counter()
        rhs = p.beta(n, order)
        t2 = time.perf_counter()
        bad = lhs.compare(rhs)
        cells.append(Cell(n=n, order=order, passed=bad is None, first_mismatch_exponent=bad,
                          lhs_time_ms=(t1 - t0) * 1e3, rhs_time_ms=(t2 - t1) * 1e3))
    return Report(f"pair:{p.label}", order, cells)


# -- Bailey lemma and lattice ---------------------------------------------------

def bailey_lemma(p: BaileyPair, b: ParamValue, c: ParamValue) -> BaileyPair:
    """The Bailey lemma, including the limits c -> oo, b = c -> oo and c -> 0."""
    if b.kind == "infinity" and c.is_finite:
        b, c = c, b
    if b.kind == "zero" or (b.kind == "infinity" and c.kind == "zero"):
        raise UnsupportedLimit(f"bailey_lemma with b={b.kind}, c={c.kind}")
    x = p.x
    xq = x * Q
    label = f"lemma[{b.value if b.is_finite else b.kind},{c.value if c.is_finite else c.kind}]({p.label})"

    if b.is_finite and c.is_finite:
        bv, cv = b.value, c.value
        xqb, xqc, xqbc = xq / bv, xq / cv, xq / (bv * cv)

        def alpha(n, order):
            fs = (poch_factors(bv, Q, n) + poch_factors(cv, Q, n)
                  + poch_factors(xqb, Q, n, -1) + poch_factors(xqc, Q, n, -1))
            mono = xqbc ** n
            return _times(p.alpha(n, _need(order, fs, mono)), fs, mono)

        def beta(n, order):
            pre = poch_factors(xqb, Q, n, -1) + poch_factors(xqc, Q, n, -1)
            terms = []
            for j in range(n + 1):
                fs = (pre + poch_factors(bv, Q, j) + poch_factors(cv, Q, j)
                      + poch_factors(xqbc, Q, n - j) + poch_factors(Q, Q, n - j, -1))
                mono = xqbc ** j
                terms.append(_times(p.beta(j, _need(order, fs, mono)), fs, mono))
            return _sum(terms, order)

    elif b.is_finite and c.kind == "infinity":
        bv = b.value
        xqb = xq / bv

        def weight(j):
            # (c)_j (xq/bc)^j -> (-1)^j q^binom(j,2) (xq/b)^j
            return QMonomial.q(Fraction(j * (j - 1), 2), (-1) ** j) * xqb ** j

        def alpha(n, order):
            fs = poch_factors(bv, Q, n) + poch_factors(xqb, Q, n, -1)
            mono = weight(n)
            return _times(p.alpha(n, _need(order, fs, mono)), fs, mono)

        def beta(n, order):
            pre = poch_factors(xqb, Q, n, -1)
            terms = []
            for j in range(n + 1):
                fs = pre + poch_factors(bv, Q, j) + poch_factors(Q, Q, n - j, -1)
                mono = weight(j)
                terms.append(_times(p.beta(j, _need(order, fs, mono)), fs, mono))
            return _sum(terms, order)

    elif b.kind == "infinity" and c.kind == "infinity":
        def alpha(n, order):
            mono = x ** n * QMonomial.q(n * n)
            return _times(p.alpha(n, _need(order, (), mono)), (), mono)

        def beta(n, order):
            terms = []
            for j in range(n + 1):
                fs = poch_factors(Q, Q, n - j, -1)
                mono = x ** j * QMonomial.q(j * j)
                terms.append(_times(p.beta(j, _need(order, fs, mono)), fs, mono))
            return _sum(terms, order)

    else:  # b finite, c -> 0
        bv = b.value
        xqb = xq / bv
        binv = bv.inverse()

        def alpha(n, order):
            fs = poch_factors(bv, Q, n) + poch_factors(xqb, Q, n, -1)
            mono = (-binv) ** n * QMonomial.q(-Fraction(n * (n - 1), 2))
            return _times(p.alpha(n, _need(order, fs, mono)), fs, mono)

        def beta(n, order):
            pre = poch_factors(xqb, Q, n, -1)
            terms = []
            for j in range(n + 1):
                fs = pre + poch_factors(bv, Q, j) + poch_factors(Q, Q, n - j, -1)
                e = Fraction((n - j) * (n - j - 1), 2) - Fraction(n * (n - 1), 2)
                mono = binv ** n * QMonomial.q(e, (-1) ** j)
                terms.append(_times(p.beta(j, _need(order, fs, mono)), fs, mono))
            return _sum(terms, order)

    return BaileyPair(x, alpha, beta, label, p.den)


def bailey_lattice(p: BaileyPair, b: ParamValue, c: ParamValue) -> BaileyPair:
    """The Bailey lattice: relative parameter ``x`` becomes ``x/q``."""
    if not (b.is_finite and c.is_finite):
        raise UnsupportedLimit("bailey_lattice supports finite b, c only")
    x = p.x
    bv, cv = b.value, c.value
    xb, xc, xbc = x / bv, x / cv, x / (bv * cv)

    def alpha(n, order):
        pre = ([_mono_factor(x)] + poch_factors(bv, Q, n) + poch_factors(cv, Q, n)
               + poch_factors(xb, Q, n, -1) + poch_factors(xc, Q, n, -1))
        pre_mono = xbc * xbc ** n
        inner = _need(order, pre, pre_mono)
        f1 = [_inv_factor(x * QMonomial.q(2 * n))]
        terms = [_times(p.alpha(n, _need(inner, f1)), f1)]
        if n >= 1:
            f2 = [_inv_factor(x * QMonomial.q(2 * n - 2))]
            m2 = x * QMonomial.q(2 * n - 2)
            terms.append(-_times(p.alpha(n - 1, _need(inner, f2, m2)), f2, m2))
        return _times(_sum(terms, inner), pre, pre_mono).truncate(order)

    def beta(n, order):
        pre = poch_factors(xb, Q, n, -1) + poch_factors(xc, Q, n, -1)
        terms = []
        for j in range(n + 1):
            fs = (pre + poch_factors(bv, Q, j) + poch_factors(cv, Q, j)
                  + poch_factors(xbc, Q, n - j) + poch_factors(Q, Q, n - j, -1))
            mono = xbc ** j
            terms.append(_times(p.beta(j, _need(order, fs, mono)), fs, mono))
        return _sum(terms, order)

    return BaileyPair(x / Q, alpha, beta, f"lattice[{bv},{cv}]({p.label})", p.den)


# -- x -> xq lemmas ------------------------------------------------------------

def shift_up(p: BaileyPair) -> BaileyPair:
    """Pair relative to ``xq`` with ``beta'_n = (1 - q^{n+1}) beta_{n+1}``."""
    x = p.x
    xq = x * Q

    def alpha(n, order):
        pre = [_inv_factor(xq)]
        inner = _need(order, pre)
        f1 = [_mono_factor(QMonomial.q(n + 1)), _inv_factor(x * QMonomial.q(2 * n + 2))]
        terms = [_times(p.alpha(n + 1, _need(inner, f1)), f1)]
        # (1 - x q^n) / (1 - x q^{2n}) is 1 at n = 0, even when x = 1
        f2 = [_mono_factor(x * QMonomial.q(n)), _inv_factor(x * QMonomial.q(2 * n))] if n else []
        m2 = QMonomial.q(n)
        terms.append(_times(p.alpha(n, _need(inner, f2, m2)), f2, m2))
        return _times(_sum(terms, inner), pre).truncate(order)

    def beta(n, order):
        fs = [_mono_factor(QMonomial.q(n + 1))]
        return _times(p.beta(n + 1, _need(order, fs)), fs)

    return BaileyPair(xq, alpha, beta, f"shift_up({p.label})", p.den)


def one_to_q(p: BaileyPair, b: ParamValue) -> BaileyPair:
    """Pair relative to ``xq`` with ``beta'_n = (b)_n/(bq)_n beta_n``; ``b`` may be ZERO."""
    x = p.x
    xq = x * Q

    if b.kind == "zero":
        def alpha(n, order):
            pre = [_mono_factor(x * QMonomial.q(2 * n + 1)), _inv_factor(xq)]
            pre_mono = x ** n * QMonomial.q(n * n)
            inner = _need(order, pre, pre_mono)
            terms = []
            for j in range(n + 1):
                m = x.inverse() ** j * QMonomial.q(-j * j)
                terms.append(_times(p.alpha(j, _need(inner, (), m)), (), m))
            return _times(_sum(terms, inner), pre, pre_mono).truncate(order)

        def beta(n, order):
            return p.beta(n, order)

        return BaileyPair(xq, alpha, beta, f"one_to_q[0]({p.label})", p.den)

    if not b.is_finite:
        raise UnsupportedLimit("one_to_q needs a finite b or ZERO")
    bv = b.value
    xqb = xq / bv
    mb = -bv

    def alpha(n, order):
        pre = ([_mono_factor(x * QMonomial.q(2 * n + 1)), _inv_factor(xq)]
               + poch_factors(xqb, Q, n) + poch_factors(bv * Q, Q, n, -1))
        pre_mono = mb ** n * QMonomial.q(Fraction(n * (n - 1), 2))
        inner = _need(order, pre, pre_mono)
        terms = []
        for j in range(n + 1):
            fs = poch_factors(bv, Q, j) + poch_factors(xqb, Q, j, -1)
            m = mb.inverse() ** j * QMonomial.q(-Fraction(j * (j - 1), 2))
            terms.append(_times(p.alpha(j, _need(inner, fs, m)), fs, m))
        return _times(_sum(terms, inner), pre, pre_mono).truncate(order)

    def beta(n, order):
        fs = poch_factors(bv, Q, n) + poch_factors(bv * Q, Q, n, -1)
        return _times(p.beta(n, _need(order, fs)), fs)

    return BaileyPair(xq, alpha, beta, f"one_to_q[{bv}]({p.label})", p.den)


# -- false-theta shift lemmas ---------------------------------------------------

def _unit_correction(n: int, order: Fraction, beta0: QSeries, coeff: int) -> QSeries:
    """``coeff * beta_0 (1 + q^{n+1}) (-1)^n q^binom(n+1,2) / (q)_2``."""
    fs = [Factor(-1, Fraction(n + 1), 1), Factor(1, Fraction(1), -1), Factor(1, Fraction(2), -1)]
    mono = QMonomial.q(Fraction(n * (n + 1), 2), (-1) ** n)
    return _times(beta0, fs, mono, coeff)


def false_shift(p: BaileyPair, check_order: Number = 30) -> BaileyPair:
    """Pair relative to ``xq`` with ``beta'_n = beta_{n+1}``; needs alpha_0 = beta_0 = 0."""
    if not p.alpha(0, check_order).is_zero or not p.beta(0, check_order).is_zero:
        raise HypothesisViolated("false_shift needs alpha_0 = beta_0 = 0")
    x = p.x
    xq = x * Q

    def alpha(n, order):
        pre = [_inv_factor(xq)]
        inner = _need(order, pre)
        f1 = [_inv_factor(x * QMonomial.q(2 * n + 2))]
        terms = [_times(p.alpha(n + 1, _need(inner, f1)), f1)]
        if n:  # alpha_0 = 0
            f2 = [_inv_factor(x * QMonomial.q(2 * n))]
            m2 = x * QMonomial.q(2 * n)
            terms.append(-_times(p.alpha(n, _need(inner, f2, m2)), f2, m2))
        return _times(_sum(terms, inner), pre).truncate(order)

    def beta(n, order):
        return p.beta(n + 1, order)

    return BaileyPair(xq, alpha, beta, f"false_shift({p.label})", p.den)


def _require_x_q(p: BaileyPair) -> None:
    if p.x != Q:
        raise WrongRelativeParameter(f"expected a pair relative to q, got x = {p.x!r}")


def false_shift_q(p: BaileyPair) -> BaileyPair:
    """Pair relative to ``q^2`` with ``beta'_n = beta_{n+1}``, no hypothesis on beta_0."""
    _require_x_q(p)

    def alpha(n, order):
        pre = [Factor(1, Fraction(2), -1)]
        inner = _need(order, pre)
        f1 = [Factor(1, Fraction(2 * n + 3), -1)]
        f2 = [Factor(1, Fraction(2 * n + 1), -1)]
        m2 = QMonomial.q(2 * n + 1)
        main = _sum([_times(p.alpha(n + 1, _need(inner, f1)), f1),
                     -_times(p.alpha(n, _need(inner, f2, m2)), f2, m2)], inner)
        corr_fs = [Factor(-1, Fraction(n + 1), 1), Factor(1, Fraction(1), -1), Factor(1, Fraction(2), -1)]
        corr_mono = QMonomial.q(Fraction(n * (n + 1), 2), (-1) ** n)
        beta0 = p.beta(0, _need(order, corr_fs, corr_mono))
        return _sum([_times(main, pre), _unit_correction(n, order, beta0, 1)], order)

    def beta(n, order):
        return p.beta(n + 1, order)

    return BaileyPair(Q * Q, alpha, beta, f"false_shift_q({p.label})", p.den)


def false_shift_plus(p: BaileyPair) -> BaileyPair:
    """Pair relative to ``q^2`` with ``beta'_n = (1 + q^{n+1}) beta_{n+1}``."""
    _require_x_q(p)

    def alpha(n, order):
        pre = [Factor(1, Fraction(2), -1)]
        inner = _need(order, pre)
        f1 = [Factor(-1, Fraction(n + 1), 1), Factor(1, Fraction(2 * n + 3), -1)]
        f2 = [Factor(-1, Fraction(n + 1), 1), Factor(1, Fraction(2 * n + 1), -1)]
        m2 = QMonomial.q(n)
        main = _sum([_times(p.alpha(n + 1, _need(inner, f1)), f1),
                     -_times(p.alpha(n, _need(inner, f2, m2)), f2, m2)], inner)
        corr_fs = [Factor(-1, Fraction(n + 1), 1), Factor(1, Fraction(1), -1), Factor(1, Fraction(2), -1)]
        corr_mono = QMonomial.q(Fraction(n * (n + 1), 2), (-1) ** n)
        beta0 = p.beta(0, _need(order, corr_fs, corr_mono))
        return _sum([_times(main, pre), _unit_correction(n, order, beta0, 2)], order)

    def beta(n, order):
        fs = [Factor(-1, Fraction(n + 1), 1)]
        return _times(p.beta(n + 1, _need(order, fs)), fs)

    return BaileyPair(Q * Q, alpha, beta, f"false_shift_plus({p.label})", p.den)


# -- limits ---------------------------------------------------------------------

def limit_beta(p: BaileyPair, order: Number, cap: int = 400, check: bool = True) -> QSeries:
    """``lim beta_n`` through ``order``, cross-checked against ``sum alpha_k / (q, xq)_oo``.

    The limit is detected once three consecutive ``beta_n`` agree through
    ``order``. Raises :class:`NoStabilization` if that never happens below
    ``cap``. A pair whose betas vanish for large n gives the zero series.
    """
    order = Fraction(order)
    prev = [p.beta(n, order) for n in range(3)]
    n = 2
    while not (prev[-1] == prev[-2] and prev[-2] == prev[-3]):
        n += 1
        if n > cap:
            raise NoStabilization(f"beta_n of {p.label} did not stabilize below n = {cap}")
        prev = prev[1:] + [p.beta(n, order)]
    limit = prev[-1]
    if check:
        xq = p.x * Q
        # 1/(q, xq)_oo through order: factors beyond order do not matter
        fs = []
        for k in range(int(order) + 2):
            fs.append(Factor(1, Fraction(k + 1), -1))
            fs.append(Factor(xq.sign, xq.exponent + k, -1))
        total = QSeries.zero(order)
        quiet = 0
        k = 0
        while quiet < 3:
            if k > cap:
                raise ValuationUnbounded(f"alpha_k of {p.label} keeps contributing below q^{order}")
            a = p.alpha(k, order)
            quiet = quiet + 1 if a.is_zero else 0
            total = total + a
            k += 1
        rhs = finite_product(fs, order) * total
        bad = rhs.compare(limit)
        if bad is not None:
            raise AssertionError(f"limit of beta disagrees with sum of alpha at q^{bad}")
    return limit
