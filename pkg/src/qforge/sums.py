"""Evaluators for the two sides of the identity families.

Left sides are multisums over chains n_m, ..., n_1 >= 0 glued together by
shifted q-binomials. Right sides are bilateral theta / false theta sums or
infinite products.

The multisum is evaluated as a chain rather than by enumerating tuples:

    F_1(n)     = q^w(n) * inner(n + d_0)
    F_(i+1)(n) = q^w(n) * sum_j [n + d_i; j]_(q^k) F_i(j)
    total      = sum_n outer(n) * F_m(n)

with d_i = 1 if i == a else 0. Every factor other than q^w(n) is a power
series with nonnegative valuation, so any n with w(n) > order contributes
nothing and the chain is cut there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .qcore import (
    Number,
    ProductFactor,
    ProductSpec,
    QMonomial,
    QSeries,
    finite_product,
    poch_factors,
    pochhammer_inf,
    q_binomial,
)
from .seeds import IntSeq, catalog_get


class SumsError(Exception):
    pass


class NonCoerciveExponent(SumsError):
    pass


class BadSpec(SumsError, ValueError):
    pass


WEIGHTS = {
    "binom": lambda n: Fraction(n * (n + 1), 2),
    "square": lambda n: Fraction(n * n),
    "square_plus_linear": lambda n: Fraction(n * n + n),
    "half_square": lambda n: Fraction(n * n, 2),
}

OUTER_KINDS = ("inv_poch", "alt_inv_poch")

INNER_KINDS = ("one", "inv_odd_poch", "inv_neg_odd_poch", "neg_odd_poch", "neg_one_poch_ratio",
               "quint_extra", "triple_ratio", "pair_beta", "dil_beta")


def _q(e, sign=1) -> QMonomial:
    return QMonomial.q(Fraction(e), sign)


Q1 = _q(1)
Q2 = _q(2)


def _inner_factors(kind: str, n: int) -> tuple[list, Fraction]:
    """(factors, monomial exponent) of a closed-form inner factor at index n."""
    if kind == "one":
        return [], Fraction(0)
    if kind == "inv_odd_poch":
        return poch_factors(Q1, Q2, n, -1), Fraction(0)
    if kind == "inv_neg_odd_poch":
        return poch_factors(_q(1, -1), Q2, n, -1), Fraction(0)
    if kind == "neg_odd_poch":
        return poch_factors(_q(1, -1), Q2, n), Fraction(0)
    if kind == "neg_one_poch_ratio":
        return poch_factors(_q(0, -1), Q2, n) + poch_factors(Q1, Q2, n, -1), Fraction(0)
    if kind == "quint_extra":
        return poch_factors(Q1, Q2, n, -1), Fraction(n * n - n)
    if kind == "triple_ratio":
        # (-1;q^3)_n / (-1;q)_n: the leading factors 2/2 cancel
        fs = poch_factors(Q1, Q2, n, -1)
        if n:
            fs += poch_factors(_q(3, -1), _q(3), n - 1) + poch_factors(_q(1, -1), Q1, n - 1, -1)
        return fs, Fraction(0)
    raise BadSpec(f"unknown inner kind {kind!r}")


@dataclass(frozen=True)
class MultisumSpec:
    """Declarative left side; see the module docstring for the evaluation scheme.

    ``linear_tail`` holds 1-based indices i whose n_i gets an extra q^(n_i).
    ``inner_seed`` names a catalog seed for the ``pair_beta`` / ``dil_beta`` kinds.
    """

    m: int
    a: int
    base_dilation: int = 1
    weight_kind: str = "binom"
    outer_kind: str = "inv_poch"
    inner_kind: str = "one"
    inner_seed: str | None = None
    linear_tail: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "linear_tail", tuple(sorted(set(self.linear_tail))))
        if self.m < 1:
            raise BadSpec("m must be >= 1")
        if not 0 <= self.a <= self.m:
            raise BadSpec(f"a = {self.a} outside 0..{self.m}")
        if self.base_dilation < 1:
            raise BadSpec("base_dilation must be a positive integer")
        if self.weight_kind not in WEIGHTS:
            raise BadSpec(f"unknown weight kind {self.weight_kind!r}")
        if self.outer_kind not in OUTER_KINDS:
            raise BadSpec(f"unknown outer kind {self.outer_kind!r}")
        if self.inner_kind not in INNER_KINDS:
            raise BadSpec(f"unknown inner kind {self.inner_kind!r}")
        if (self.inner_kind in ("pair_beta", "dil_beta")) != (self.inner_seed is not None):
            raise BadSpec("inner_seed goes with the pair_beta / dil_beta kinds only")
        if any(not 1 <= i <= self.m for i in self.linear_tail):
            raise BadSpec("linear_tail indices must lie in 1..m")

    def weight(self, i: int, n: int) -> Fraction:
        w = WEIGHTS[self.weight_kind](n)
        return w + n if i in self.linear_tail else w

    def delta(self, i: int) -> int:
        return 1 if self.a == i else 0

    def inner(self, n: int, order: Number) -> QSeries:
        """Inner factor at index n (already shifted), exact through order."""
        order = Fraction(order)
        if self.inner_kind == "pair_beta":
            beta = catalog_get(self.inner_seed).pair.beta
            fs = poch_factors(Q2, Q2, n)
            return beta(n, order).apply(fs).truncate(order)
        if self.inner_kind == "dil_beta":
            beta = catalog_get(self.inner_seed).pair.beta
            fs = poch_factors(_q(Fraction(1, 2), -1), Q1, n) + poch_factors(Q1, Q1, n)
            return beta(n, order).apply(fs).truncate(order)
        fs, e = _inner_factors(self.inner_kind, n)
        return finite_product(fs, order - e).shift(e)

    def outer_factors(self, n: int) -> tuple[list, int]:
        k = _q(self.base_dilation)
        if self.outer_kind == "inv_poch":
            return poch_factors(k, k, n, -1), 1
        return poch_factors(-k, k, n, -1), (-1) ** n

    def to_json(self) -> dict:
        out = {"m": self.m, "a": self.a, "base_dilation": self.base_dilation,
               "weight_kind": self.weight_kind, "outer_kind": self.outer_kind, "inner_kind": self.inner_kind}
        if self.inner_seed is not None:
            out["inner_seed"] = self.inner_seed
        if self.linear_tail:
            out["linear_tail"] = list(self.linear_tail)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> MultisumSpec:
        known = {"m", "a", "base_dilation", "weight_kind", "outer_kind", "inner_kind", "inner_seed", "linear_tail"}
        extra = set(obj) - known
        if extra:
            raise BadSpec(f"unknown MultisumSpec keys {sorted(extra)}")
        return cls(int(obj["m"]), int(obj["a"]), int(obj.get("base_dilation", 1)),
                   obj.get("weight_kind", "binom"), obj.get("outer_kind", "inv_poch"),
                   obj.get("inner_kind", "one"), obj.get("inner_seed"), tuple(obj.get("linear_tail", ())))


def _bound(spec: MultisumSpec, i: int, order: Fraction) -> int:
    n = 0
    while spec.weight(i, n + 1) <= order:
        n += 1
    return n


def chain_eval(spec: MultisumSpec, order: Number) -> list:
    """The values F_m(n) for 0 <= n <= bound; F_m(n) is zero through order beyond it."""
    order = Fraction(order)
    base = _q(spec.base_dilation)

    @lru_cache(maxsize=None)
    def binom(top: int, j: int) -> QSeries:
        return q_binomial(top, j, base, order)

    bound = _bound(spec, 1, order)
    d0 = spec.delta(0)
    F = []
    for n in range(bound + 1):
        w = spec.weight(1, n)
        val = spec.inner(n + d0, order - w)
        if not val.is_zero and val.valuation < 0:
            raise BadSpec("inner factor has negative valuation")
        F.append(val.shift(w))
    for i in range(1, spec.m):
        d = spec.delta(i)
        nxt_bound = _bound(spec, i + 1, order)
        G = []
        for n in range(nxt_bound + 1):
            w = spec.weight(i + 1, n)
            acc = QSeries.zero(order - w)
            for j in range(min(n + d, bound) + 1):
                if F[j].is_zero:
                    continue
                acc = acc + binom(n + d, j).truncate(order - w) * F[j]
            G.append(acc.shift(w).truncate(order))
        F, bound = G, nxt_bound
    return F


def multisum_eval(spec: MultisumSpec, order: Number) -> QSeries:
    """Exact value of the multisum through ``order``."""
    order = Fraction(order)
    total = QSeries.zero(order)
    for n, val in enumerate(chain_eval(spec, order)):
        if val.is_zero:
            continue
        fs, sign = spec.outer_factors(n)
        total = total + val.apply(fs, sign)
    return total.truncate(order)


def multisum_combination(terms: list, order: Number) -> QSeries:
    """``sum_i c_i * multisum_i`` for a list of (c_i, MultisumSpec)."""
    order = Fraction(order)
    acc = QSeries.zero(order)
    for c, spec in terms:
        acc = acc + multisum_eval(spec, order).scale(c)
    return acc.truncate(order)


# -- bilateral sums ---------------------------------------------------------------

def _sgn(n: int) -> int:
    return 1 if n >= 0 else -1


def bilateral_eval(seq: IntSeq, order: Number, sgn: str | None = None, margin: int = 2) -> QSeries:
    """``sum_(n in Z) s(n) seq(n)`` through ``order``.

    ``sgn`` is None, ``"low"`` for sgn(-n) or ``"high"`` for sgn(n), with sgn(0) = +1.
    Each residue class is summed outward from the vertex of its exponent
    parabola until the exponent exceeds ``order``, then ``margin`` more steps.
    """
    order = Fraction(order)
    M = seq.modulus
    terms: dict = {}
    for r, rule in enumerate(seq.rules):
        if rule is None:
            continue
        if rule.A <= 0:
            raise NonCoerciveExponent(f"exponent ({rule.A}n^2+...)/{rule.den} is not bounded below")
        # exponent in k for n = M k + r has vertex at k = -(2 A r + B) / (2 A M)
        k0 = math.floor(Fraction(-(2 * rule.A * r + rule.B), 2 * rule.A * M))
        for step in (1, -1):
            k = k0 if step == 1 else k0 - 1
            over = 0
            while over <= margin:
                n = M * k + r
                mono = rule(n)
                if mono.exponent > order:
                    over += 1
                else:
                    s = mono.sign
                    if sgn == "low":
                        s *= _sgn(-n)
                    elif sgn == "high":
                        s *= _sgn(n)
                    terms[mono.exponent] = terms.get(mono.exponent, 0) + s
                k += step
    return QSeries.from_terms({e: c for e, c in terms.items() if c}, order)


THETA_MODES = ("full", "false_low", "false_high", "gsum")


@dataclass(frozen=True)
class ThetaSpec:
    """Bilateral sums built from a sequence f (or g for ``gsum``).

    full:       sum q^(m binom(n,2) + a n) f_n
    false_low:  sum sgn(-n) (-1)^n q^(m binom(n,2) + a n) f_n
    false_high: sum sgn(n) (-1)^n q^(m binom(n+1,2)) f_n
    gsum:       sum q^((m/2) n^2 + n a - n) g_(n+1)
    """

    f: IntSeq
    m: int
    a: int
    mode: str = "full"

    def series_terms(self) -> tuple[IntSeq, str | None]:
        m, a = Fraction(self.m), Fraction(self.a)
        if self.mode == "full":
            return self.f.map(lambda r: r.plus(A=m / 2, B=a - m / 2)), None
        if self.mode == "false_low":
            return self.f.map(lambda r: r.plus(v=2, A=m / 2, B=a - m / 2)), "low"
        if self.mode == "false_high":
            return self.f.map(lambda r: r.plus(v=2, A=m / 2, B=m / 2)), "high"
        if self.mode == "gsum":
            return self.f.shifted(1).map(lambda r: r.plus(A=m / 2, B=a - 1)), None
        raise BadSpec(f"unknown theta mode {self.mode!r}")


def theta_eval(spec: ThetaSpec, order: Number) -> QSeries:
    seq, sgn = spec.series_terms()
    return bilateral_eval(seq, order, sgn)


# -- products -----------------------------------------------------------------------

def product_eval(spec: ProductSpec, order: Number) -> QSeries:
    return pochhammer_inf(spec, order)


def _check_base(base: QMonomial):
    if base.exponent <= 0:
        raise NonCoerciveExponent("the base must have a positive exponent")


def _monomial_sum(term: Callable[[int], QMonomial | None], quad: Fraction, lin: Fraction,
                  order: Fraction, margin: int = 2) -> QSeries:
    """Sum term(n) over n in Z where the exponent of term(n) is quad n^2 + lin n (+ const)."""
    if quad <= 0:
        raise NonCoerciveExponent("the exponent is not bounded below")
    n0 = math.floor(-lin / (2 * quad))
    terms: dict = {}
    for step in (1, -1):
        n = n0 if step == 1 else n0 - 1
        over = 0
        while over <= margin:
            t = term(n)
            if t is not None:
                if t.exponent > order:
                    over += 1
                else:
                    terms[t.exponent] = terms.get(t.exponent, 0) + t.sign
            n += step
    return QSeries.from_terms({e: c for e, c in terms.items() if c}, order)


def jtp_eval(z: QMonomial, base: QMonomial, order: Number, side: str) -> QSeries:
    """``sum (-1)^n z^n B^(n^2)`` or ``(B^2, zB, B/z; B^2)_oo`` for base ``B``."""
    order = Fraction(order)
    _check_base(base)
    if side == "sum":
        return _monomial_sum(lambda n: QMonomial.q(0, (-1) ** (n % 2)) * z ** n * base ** (n * n),
                             base.exponent, z.exponent, order)
    if side == "product":
        b2 = base * base
        zb, bz = z * base, base / z
        spec = ProductSpec((ProductFactor(1, b2.exponent, 1, b2.exponent),
                            ProductFactor(zb.sign, zb.exponent, 1, b2.exponent),
                            ProductFactor(bz.sign, bz.exponent, 1, b2.exponent)))
        return pochhammer_inf(spec, order)
    raise BadSpec(f"side must be 'sum' or 'product', not {side!r}")


def qtp_eval(z: QMonomial, base: QMonomial, order: Number, side: str) -> QSeries:
    """Quintuple product in base ``B = q^s``.

    sum side: (sum over n = 0 mod 3 minus sum over n = 2 mod 3) of z^n B^(binom(n+1,2)/3);
    product side: (B, zB, 1/z; B)_oo (z^2 B, B/z^2; B^2)_oo.
    """
    order = Fraction(order)
    _check_base(base)
    if base.sign != 1:
        raise BadSpec("the quintuple product needs a positive base")
    s = base.exponent
    if side == "sum":
        def term(n):
            if n % 3 == 1:
                return None
            t = z ** n * QMonomial.q(s * Fraction(n * (n + 1), 6))
            return -t if n % 3 == 2 else t
        return _monomial_sum(term, s / 6, s / 6 + z.exponent, order)
    if side == "product":
        zi = z.inverse()
        z2, zi2 = z * z, zi * zi
        f = lambda m, b: ProductFactor(m.sign, m.exponent, 1, b)
        spec = ProductSpec((f(base, s), f(z * base, s), f(zi, s), f(z2 * base, 2 * s), f(zi2 * base, 2 * s)))
        return pochhammer_inf(spec, order)
    raise BadSpec(f"side must be 'sum' or 'product', not {side!r}")


@dataclass(frozen=True)
class BilateralSpec:
    """Serializable right side ``coeff * q^shift * sum_n s(n) seq(n)``."""

    seq: IntSeq
    sgn: str | None = None
    coeff: int = 1
    shift: Fraction = Fraction(0)

    def __post_init__(self):
        if self.sgn not in (None, "low", "high"):
            raise BadSpec(f"sgn must be null, 'low' or 'high', not {self.sgn!r}")

    def evaluate(self, order: Number) -> QSeries:
        order = Fraction(order)
        return bilateral_eval(self.seq, order - self.shift, self.sgn).shift(self.shift).scale(self.coeff)

    def to_json(self) -> dict:
        return {"seq": self.seq.to_json(), "sgn": self.sgn, "coeff": self.coeff, "shift": str(self.shift)}

    @classmethod
    def from_json(cls, obj: dict) -> BilateralSpec:
        return cls(IntSeq.from_json(obj["seq"]), obj.get("sgn"), int(obj.get("coeff", 1)),
                   Fraction(obj.get("shift", 0)))
