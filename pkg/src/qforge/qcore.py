"""Exact truncated Laurent series in q^(1/den) with big-integer coefficients.

A :class:`QSeries` carries its own truncation order: coefficients are exact
for every exponent up to and including ``order / den`` and unknown above it.
Arithmetic takes the pessimistic order of its operands, so a result never
claims more precision than the inputs justify.

Exponent denominators are restricted to 1, 2 and 4.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]

ALLOWED_DENS = (1, 2, 4)


class QSeriesError(ArithmeticError):
    pass


class NonUnitLeadingCoefficient(QSeriesError):
    pass


class UnrepresentableDenominator(QSeriesError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def den_for(*values: Number) -> int:
    """Smallest allowed denominator that represents every given exponent."""
    d = 1
    for v in values:
        d = _lcm(d, _frac(v).denominator)
    if d not in ALLOWED_DENS:
        raise UnrepresentableDenominator(f"exponent denominator {d} not in {ALLOWED_DENS}")
    return d


def _units(x: Number, den: int) -> int:
    """Exponent ``x`` in units of 1/den; must be exact."""
    f = _frac(x) * den
    if f.denominator != 1:
        raise UnrepresentableDenominator(f"exponent {x} is not a multiple of 1/{den}")
    return f.numerator


def _floor_units(x: Number, den: int) -> int:
    f = _frac(x) * den
    return f.numerator // f.denominator


@dataclass(frozen=True, eq=False)
class QMonomial:
    """``sign * q**(exp_num/exp_den)``."""

    sign: int
    exp_num: int
    exp_den: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("QMonomial sign must be +1 or -1")
        if self.exp_den <= 0 or 4 % self.exp_den:
            raise UnrepresentableDenominator(f"exponent denominator {self.exp_den} must divide 4")

    @classmethod
    def q(cls, exponent: Number = 1, sign: int = 1) -> QMonomial:
        e = _frac(exponent)
        return cls(sign, e.numerator, e.denominator)

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.exp_num, self.exp_den)

    def __eq__(self, other):
        if not isinstance(other, QMonomial):
            return NotImplemented
        return self.sign == other.sign and self.exp_num * other.exp_den == other.exp_num * self.exp_den

    def __hash__(self):
        return hash((self.sign, self.exponent))

    def __mul__(self, other: QMonomial) -> QMonomial:
        return QMonomial.q(self.exponent + other.exponent, self.sign * other.sign)

    def __truediv__(self, other: QMonomial) -> QMonomial:
        return QMonomial.q(self.exponent - other.exponent, self.sign * other.sign)

    def __pow__(self, k: int) -> QMonomial:
        return QMonomial.q(self.exponent * k, self.sign ** (k % 2))

    def __neg__(self) -> QMonomial:
        return QMonomial(-self.sign, self.exp_num, self.exp_den)

    def inverse(self) -> QMonomial:
        return QMonomial.q(-self.exponent, self.sign)

    def to_series(self, order: Number) -> QSeries:
        return QSeries.monomial(self.sign, self.exponent, order)

    def __repr__(self):
        s = "-" if self.sign < 0 else ""
        return f"{s}q^({self.exponent})"


Q = QMonomial(1, 1)
ONE = QMonomial(1, 0)


@dataclass(frozen=True)
class Factor:
    """One binomial ``(1 - c*q**e)**power`` with c = +-1 and power = +-1."""

    c: int
    e: Fraction
    power: int = 1


def poch_factors(a: QMonomial, base: QMonomial, n: int, power: int = 1) -> list[Factor]:
    """Factors of ``(a; base)_n``."""
    if n < 0:
        raise ValueError("finite Pochhammer needs n >= 0")
    out = []
    term = a
    for _ in range(n):
        out.append(Factor(term.sign, term.exponent, power))
        term = term * base
    return out


def _normalize_factors(factors: Iterable[Factor]):
    """Split factors into (scalar, shift, positive-exponent factors).

    Every factor with e <= 0 is rewritten so that the remaining product is a
    power series with constant term 1.
    """
    scalar = 1
    shift = Fraction(0)
    rest = []
    for f in factors:
        e = _frac(f.e)
        if e > 0:
            rest.append((f.c, e, f.power))
        elif e == 0:
            k = 1 - f.c
            if f.power == 1:
                scalar *= k
            elif k in (1, -1):
                scalar *= k
            else:
                raise NonUnitLeadingCoefficient(f"cannot invert constant factor {k}")
        else:
            # 1 - c q^e = -c q^e (1 - c q^-e)
            scalar *= -f.c
            shift += e * f.power
            rest.append((f.c, -e, f.power))
    return scalar, shift, rest


def factors_shift(factors: Iterable[Factor]) -> Fraction:
    """Valuation of the product of ``factors`` (ignoring a possible zero scalar)."""
    return _normalize_factors(factors)[1]


def _mul_add(out: list, start: int, b: Sequence[int], scale: int) -> None:
    end = start + len(b)
    out[start:end] = map(operator.add, out[start:end], map(scale.__mul__, b))


def _convolve(a: Sequence[int], b: Sequence[int], n: int) -> list:
    """First n coefficients of a*b."""
    out = [0] * n
    if n <= 0:
        return out
    nz_a = sum(1 for v in a[:n] if v)
    nz_b = sum(1 for v in b[:n] if v)
    if nz_b < nz_a:
        a, b = b, a
    for i, ai in enumerate(a):
        if i >= n:
            break
        if ai:
            lim = min(len(b), n - i)
            _mul_add(out, i, b[:lim], ai)
    return out


class QSeries:
    """Truncated Laurent series ``sum c_e q^(e/den)`` for ``min_e <= e <= order``.

    ``min_e`` and ``order`` are integers in units of ``1/den``. After
    normalization the first coefficient is nonzero, or the series is the
    canonical zero (no coefficients, ``min_e == 0``) known through ``order``.
    Instances are immutable.
    """

    __slots__ = ("den", "min_e", "order", "coeffs")

    def __init__(self, coeffs: Sequence[int], min_e: int = 0, order: int | None = None, den: int = 1):
        if den not in ALLOWED_DENS:
            raise UnrepresentableDenominator(f"den {den} not in {ALLOWED_DENS}")
        coeffs = list(coeffs)
        if order is None:
            order = min_e + len(coeffs) - 1
        n = order - min_e + 1
        if n <= 0:
            coeffs = []
        elif len(coeffs) >= n:
            coeffs = coeffs[:n]
        else:
            coeffs.extend([0] * (n - len(coeffs)))
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        if lead == len(coeffs):
            coeffs, min_e = [], 0
        else:
            coeffs = coeffs[lead:]
            min_e += lead
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "min_e", min_e)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, order: Number = 0, den: int | None = None) -> QSeries:
        if den is None:
            den = den_for(order)
        return cls([], 0, _floor_units(order, den), den)

    @classmethod
    def one(cls, order: Number = 0) -> QSeries:
        return cls.monomial(1, 0, order)

    @classmethod
    def monomial(cls, coeff: int, exponent: Number, order: Number) -> QSeries:
        den = den_for(exponent)
        e = _units(exponent, den)
        o = _floor_units(order, den)
        return cls([coeff], e, o, den) if e <= o else cls([], 0, o, den)

    @classmethod
    def from_terms(cls, terms: dict, order: Number) -> QSeries:
        """Build from ``{exponent: coefficient}``; exponents above order are dropped."""
        den = den_for(order, *terms.keys()) if terms else den_for(order)
        o = _floor_units(order, den)
        units = {_units(e, den): c for e, c in terms.items()}
        kept = [e for e in units if e <= o]
        if not kept:
            return cls([], 0, o, den)
        lo = min(kept)
        arr = [0] * (o - lo + 1)
        for e in kept:
            arr[e - lo] += units[e]
        return cls(arr, lo, o, den)

    @classmethod
    def from_json(cls, obj: dict) -> QSeries:
        return cls([int(c) for c in obj["coeffs"]], obj["min_e"], obj["order"], obj["den"])

    # -- inspection ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def order_q(self) -> Fraction:
        """Truncation order as a q-exponent."""
        return Fraction(self.order, self.den)

    @property
    def valuation(self) -> Fraction:
        """Lowest exponent; for the zero series, a lower bound just past the order."""
        if self.is_zero:
            return Fraction(self.order + 1, self.den)
        return Fraction(self.min_e, self.den)

    def coeff(self, exponent: Number) -> int:
        e = _frac(exponent) * self.den
        if _frac(exponent) > self.order_q:
            raise ValueError(f"coefficient of q^{exponent} is beyond truncation order {self.order_q}")
        if e.denominator != 1:
            return 0
        i = e.numerator - self.min_e
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def items(self):
        """Nonzero ``(exponent, coefficient)`` pairs in increasing order."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield Fraction(self.min_e + i, self.den), c

    def dense(self, start: Number = 0) -> list[int]:
        """Coefficients of every exponent ``start, start + 1/den, ...`` through the order."""
        s = _units(start, self.den)
        return [self._at(e) for e in range(s, self.order + 1)]

    def _at(self, e_units: int) -> int:
        i = e_units - self.min_e
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def to_json(self) -> dict:
        return {"den": self.den, "min_e": self.min_e, "order": self.order,
                "coeffs": [str(c) for c in self.coeffs]}

    def __repr__(self):
        terms = []
        for e, c in list(self.items())[:8]:
            terms.append(f"{c}*q^{e}")
        more = " + ..." if len(self.coeffs) > 8 else ""
        body = " + ".join(terms) or "0"
        return f"QSeries({body}{more}, O(q^{self.order_q}))"

    # -- denominators and truncation ----------------------------------------

    def with_den(self, den: int) -> QSeries:
        if den == self.den:
            return self
        if den % self.den:
            raise UnrepresentableDenominator(f"cannot refine den {self.den} to {den}")
        f = den // self.den
        arr = [0] * ((len(self.coeffs) - 1) * f + 1) if self.coeffs else []
        arr[::f] = self.coeffs
        # exponents strictly between consecutive old units are known zeros
        return QSeries(arr, self.min_e * f, self.order * f + f - 1, den)

    def truncate(self, order: Number) -> QSeries:
        o = _floor_units(order, self.den)
        if o >= self.order:
            return self
        return QSeries(self.coeffs, self.min_e, o, self.den)

    def reduce(self) -> QSeries:
        """Lower the denominator as far as the nonzero exponents allow."""
        s = self
        while s.den > 1 and all(c == 0 or (s.min_e + i) % 2 == 0 for i, c in enumerate(s.coeffs)):
            half = s.den // 2
            arr = s.coeffs[::2] if s.min_e % 2 == 0 else ()
            s = QSeries(arr, s.min_e // 2 if s.coeffs else 0, s.order // 2, half)
        return s

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _common(a: QSeries, b: QSeries):
        d = _lcm(a.den, b.den)
        return a.with_den(d), b.with_den(d)

    def __add__(self, other):
        if isinstance(other, int):
            other = QSeries.monomial(other, 0, self.order_q) if other else QSeries.zero(self.order_q, self.den)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = QSeries._common(self, other)
        order = min(a.order, b.order)
        if a.is_zero:
            return b.truncate(Fraction(order, a.den)) if not b.is_zero else QSeries([], 0, order, a.den)
        if b.is_zero:
            return a.truncate(Fraction(order, a.den))
        lo = min(a.min_e, b.min_e)
        n = order - lo + 1
        if n <= 0:
            return QSeries([], 0, order, a.den)
        arr = [0] * n
        for s in (a, b):
            off = s.min_e - lo
            seg = s.coeffs[: max(0, n - off)]
            arr[off:off + len(seg)] = map(operator.add, arr[off:off + len(seg)], seg)
        return QSeries(arr, lo, order, a.den)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.min_e, self.order, self.den)

    def __sub__(self, other):
        if isinstance(other, int):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k: int) -> QSeries:
        return QSeries([k * c for c in self.coeffs], self.min_e, self.order, self.den)

    def shift(self, exponent: Number, sign: int = 1) -> QSeries:
        """Multiply by ``sign * q**exponent``; the order moves with it."""
        d = den_for(exponent, Fraction(1, self.den))
        s = self.with_den(d)
        e = _units(exponent, d)
        coeffs = s.coeffs if sign == 1 else [-c for c in s.coeffs]
        return QSeries(coeffs, s.min_e + e, s.order + e, d)

    def times_monomial(self, m: QMonomial) -> QSeries:
        return self.shift(m.exponent, m.sign)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, QMonomial):
            return self.times_monomial(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = QSeries._common(self, other)
        va = a.min_e if a.coeffs else a.order + 1
        vb = b.min_e if b.coeffs else b.order + 1
        order = min(a.order + vb, b.order + va)
        if a.is_zero or b.is_zero:
            return QSeries([], 0, order, a.den)
        lo = a.min_e + b.min_e
        n = order - lo + 1
        return QSeries(_convolve(a.coeffs, b.coeffs, n), lo, order, a.den)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> QSeries:
        if k < 0:
            return self.invert() ** (-k)
        out = QSeries.one(self.order_q - (k - 1) * self.valuation if k else self.order_q)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def invert(self) -> QSeries:
        if self.is_zero:
            raise NonUnitLeadingCoefficient("cannot invert the zero series")
        u0 = self.coeffs[0]
        if u0 not in (1, -1):
            raise NonUnitLeadingCoefficient(f"leading coefficient {u0} is not a unit")
        v = self.min_e
        n = self.order - v + 1  # result runs from -v through order - 2v
        if n <= 0:
            return QSeries([], 0, self.order - 2 * v, self.den)
        u = self.coeffs
        nz = [(j, u[j]) for j in range(1, min(len(u), n)) if u[j]]
        t = [0] * n
        t[0] = u0
        for k in range(1, n):
            acc = 0
            for j, uj in nz:
                if j > k:
                    break
                acc += uj * t[k - j]
            t[k] = -u0 * acc
        return QSeries(t, -v, self.order - 2 * v, self.den)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.invert()
        return NotImplemented

    def apply(self, factors: Iterable[Factor], coeff: int = 1) -> QSeries:
        """Multiply by ``coeff * prod (1 - c q^e)^power`` exactly.

        The factor product is known to all orders, so only normalization
        shifts move the truncation order.
        """
        scalar, shift, rest = _normalize_factors(factors)
        scalar *= coeff
        exps = [e for _, e, _ in rest]
        d = den_for(shift, Fraction(1, self.den), *exps)
        s = self.with_den(d)
        if scalar == 0 or s.is_zero:
            return QSeries([], 0, s.order + _units(shift, d), d)
        arr = list(s.coeffs)
        n = s.order - s.min_e + 1
        for c, e, power in rest:
            k = _units(e, d)
            if k >= n:
                continue
            if power == 1:
                for i in range(n - 1, k - 1, -1):
                    if arr[i - k]:
                        arr[i] -= c * arr[i - k]
            else:
                for i in range(k, n):
                    if arr[i - k]:
                        arr[i] += c * arr[i - k]
        if scalar != 1:
            arr = [scalar * x for x in arr]
        sh = _units(shift, d)
        return QSeries(arr, s.min_e + sh, s.order + sh, d)

    # -- comparison ---------------------------------------------------------

    def compare(self, other: QSeries) -> Fraction | None:
        """First exponent where the two disagree within the jointly valid range."""
        a, b = QSeries._common(self, other)
        order = min(a.order, b.order)
        starts = [s.min_e for s in (a, b) if s.coeffs]
        if not starts:
            return None
        for e in range(min(starts), order + 1):
            if a._at(e) != b._at(e):
                return Fraction(e, a.den)
        return None

    def __eq__(self, other):
        if isinstance(other, int):
            other = QSeries.monomial(other, 0, self.order_q) if other else QSeries.zero(self.order_q, self.den)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.compare(other) is None

    __hash__ = None


# -- free functions mirroring the operation list ------------------------------

def series_add(s1: QSeries, s2: QSeries) -> QSeries:
    return s1 + s2


def series_mul(s1: QSeries, s2: QSeries) -> QSeries:
    return s1 * s2


def series_invert(s: QSeries) -> QSeries:
    return s.invert()


def finite_product(factors: Sequence[Factor], order: Number, coeff: int = 1) -> QSeries:
    """``coeff * prod (1 - c q^e)^power`` exact through ``order``."""
    factors = list(factors)
    shift = factors_shift(factors)
    d = den_for(order, shift, *(f.e for f in factors))
    seed = QSeries([1], 0, _floor_units(_frac(order) - shift, d), d)
    return seed.apply(factors, coeff)


def pochhammer(a: QMonomial, base: QMonomial, n: int, order: Number) -> QSeries:
    """``(a; base)_n`` truncated at ``order``; ``n = 0`` gives 1."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    return finite_product(poch_factors(a, base, n), order)


def poch_quotient(numer: Sequence[tuple], denom: Sequence[tuple], order: Number) -> QSeries:
    """Quotient of finite Pochhammer symbols given as ``(a, base, n)`` triples."""
    factors = []
    for a, base, n in numer:
        factors += poch_factors(a, base, n, 1)
    for a, base, n in denom:
        factors += poch_factors(a, base, n, -1)
    return finite_product(factors, order)


@dataclass(frozen=True)
class ProductFactor:
    """``(a_sign q^a_exp; base_sign q^base_exp)_inf ** power``."""

    a_sign: int
    a_exp: Fraction
    base_sign: int
    base_exp: Fraction
    power: int = 1

    def __post_init__(self):
        object.__setattr__(self, "a_exp", _frac(self.a_exp))
        object.__setattr__(self, "base_exp", _frac(self.base_exp))
        if self.base_exp <= 0:
            raise ValueError("infinite product base must have positive exponent")
        if self.power not in (1, -1) or self.a_sign not in (1, -1) or self.base_sign not in (1, -1):
            raise ValueError("signs and power must be +-1")

    def to_json(self) -> list:
        return [self.a_sign, str(self.a_exp), self.base_sign, str(self.base_exp), self.power]

    @classmethod
    def from_json(cls, obj) -> ProductFactor:
        a_sign, a_exp, base_sign, base_exp, power = obj
        return cls(int(a_sign), _frac(a_exp), int(base_sign), _frac(base_exp), int(power))


@dataclass(frozen=True)
class ProductSpec:
    """``coeff * q^shift * prod_i (a_i; b_i)_inf ** power_i``."""

    factors: tuple = ()
    coeff: int = 1
    shift: Fraction = Fraction(0)

    def to_json(self) -> dict:
        return {"coeff": self.coeff, "shift": str(self.shift),
                "factors": [f.to_json() for f in self.factors]}

    @classmethod
    def from_json(cls, obj: dict) -> ProductSpec:
        return cls(tuple(ProductFactor.from_json(f) for f in obj.get("factors", [])),
                   int(obj.get("coeff", 1)), _frac(obj.get("shift", 0)))


def poch_inf(a: Number, base: Number, power: int = 1, a_sign: int = 1, base_sign: int = 1) -> ProductFactor:
    """Shorthand for ``(a_sign q^a; base_sign q^base)_inf ** power``."""
    return ProductFactor(a_sign, _frac(a), base_sign, _frac(base), power)


def _product_factor_terms(f: ProductFactor, limit: Fraction) -> list[Factor]:
    out = []
    k = 0
    while True:
        e = f.a_exp + k * f.base_exp
        if e > limit:
            break
        c = f.a_sign * (f.base_sign ** (k % 2))
        out.append(Factor(c, e, f.power))
        k += 1
    return out


def pochhammer_inf(spec: ProductSpec, order: Number) -> QSeries:
    """Expand a product of infinite Pochhammer symbols through ``order``."""
    order = _frac(order)
    # factors with nonpositive exponent lower the valuation; collect them first
    low = []
    for f in spec.factors:
        low += _product_factor_terms(f, Fraction(0))
    shift = factors_shift(low) + spec.shift
    limit = order - shift
    factors = []
    for f in spec.factors:
        factors += _product_factor_terms(f, limit)
    d = den_for(order, spec.shift, *(f.e for f in factors)) if factors else den_for(order, spec.shift)
    seed = QSeries([1], 0, _floor_units(limit, d), d)
    return seed.apply(factors, spec.coeff).shift(spec.shift)


def q_binomial(n: int, k: int, base: QMonomial, order: Number) -> QSeries:
    """Gaussian binomial ``[n choose k]`` in ``base``; zero outside ``0 <= k <= n``."""
    if k < 0 or k > n or n < 0:
        return QSeries.zero(order, den_for(order, base.exponent))
    k = min(k, n - k)
    factors = []
    for j in range(1, k + 1):
        factors.append(Factor(base.sign ** ((n - k + j) % 2), base.exponent * (n - k + j), 1))
        factors.append(Factor(base.sign ** (j % 2), base.exponent * j, -1))
    return finite_product(factors, order)


def dilate(s: QSeries, k: Number) -> QSeries:
    """Substitute ``q -> q**k``."""
    k = _frac(k)
    if k <= 0:
        raise ValueError("dilation factor must be positive")
    p, r = k.numerator, k.denominator
    den = s.den * r
    # between dilated exponents everything is a known zero
    order = s.order * p + p - 1
    min_e = s.min_e * p
    arr = [0] * ((len(s.coeffs) - 1) * p + 1) if s.coeffs else []
    arr[::p] = s.coeffs
    while den > 1 and den % 2 == 0 and all(c == 0 or (min_e + i) % 2 == 0 for i, c in enumerate(arr)):
        arr = arr[::2]
        min_e //= 2
        order //= 2
        den //= 2
    if den not in ALLOWED_DENS:
        raise UnrepresentableDenominator(f"dilation by {k} needs denominator {den}")
    return QSeries(arr, min_e, order, den)
