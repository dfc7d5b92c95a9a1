from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import frozen
import oracles
from qforge.qcore import ProductSpec, QMonomial, poch_inf
from qforge.seeds import F_E3, IntSeq, Rule, catalog_get
from qforge.sums import (
    BadSpec,
    BilateralSpec,
    MultisumSpec,
    NonCoerciveExponent,
    ThetaSpec,
    bilateral_eval,
    chain_eval,
    jtp_eval,
    multisum_eval,
    product_eval,
    qtp_eval,
    theta_eval,
)


def clsxy(m, a, **kw):
    return MultisumSpec(m, a, **kw)


def test_clsxy_matches_enumeration():
    assert multisum_eval(clsxy(2, 1), 30).dense() == frozen.CLSXY_2_1_30
    assert multisum_eval(clsxy(3, 0), 24).dense() == frozen.CLSXY_3_0_24


def test_false_clsxy_matches_enumeration():
    spec = clsxy(2, 0, outer_kind="alt_inv_poch")
    assert multisum_eval(spec, 30).dense() == frozen.FALSE_CLSXY_2_0_30


def test_dilated_difference_matches_enumeration():
    def s(a):
        return MultisumSpec(2, a, 2, "square")
    diff = multisum_eval(s(1), 30) - multisum_eval(s(0), 30)
    assert diff.dense() == frozen.S_2_1_MINUS_S_2_0_30


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.data(), st.sampled_from(["inv_poch", "alt_inv_poch"]))
def test_chain_matches_enumeration(m, data, outer):
    a = data.draw(st.integers(0, m))
    N = 14
    want = (oracles.clsxy_lhs if outer == "inv_poch" else oracles.false_clsxy_lhs)(m, a, N)
    assert multisum_eval(clsxy(m, a, outer_kind=outer), N).dense() == want


def test_inner_factor_enumeration():
    # (-1;q^2)_n / (q;q^2)_n as the inner factor, enumerated directly
    N = 16
    inner = lambda n: oracles.mul([2 if n else 1] + [0] * N if n else [1] + [0] * N,
                                  oracles.mul(oracles.poch(-1, 2, 2, n - 1, N) if n else [1] + [0] * N,
                                              oracles.inv(oracles.poch(1, 1, 2, n, N), N), N), N)
    want = oracles.chain_multisum(2, 1, N, lambda n: n * (n + 1) // 2,
                                  lambda n: oracles.inv(oracles.poch(1, 1, 1, n, N), N), inner)
    assert multisum_eval(clsxy(2, 1, inner_kind="neg_one_poch_ratio"), N).dense() == want


def test_clsxy_against_product():
    lhs = multisum_eval(clsxy(2, 1), 60)
    rhs = product_eval(ProductSpec((poch_inf(2, 4), poch_inf(2, 4), poch_inf(4, 4),
                                    poch_inf(1, 1, -1), poch_inf(1, 2, -1))), 60)
    assert lhs == rhs


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_clsxy_symmetry(m):
    for a in range(m + 1):
        assert multisum_eval(clsxy(m, a), 60) == multisum_eval(clsxy(m, m - a), 60)


def test_order_zero_is_one():
    assert multisum_eval(clsxy(3, 1), 0).dense() == [1]


def test_higher_order_agrees_on_overlap():
    low, high = multisum_eval(clsxy(3, 2), 20), multisum_eval(clsxy(3, 2), 40)
    assert low == high.truncate(20)


def test_pair_beta_reproduces_clsxy():
    for m in range(1, 4):
        for a in range(m + 1):
            general = MultisumSpec(m, a, inner_kind="pair_beta", inner_seed="E3")
            assert multisum_eval(general, 40) == multisum_eval(clsxy(m, a), 40), (m, a)


def test_chain_eval_last_index():
    F = chain_eval(clsxy(1, 0), 10)
    assert [f.valuation for f in F] == [0, 1, 3, 6, 10]


def test_spec_validation_and_json():
    with pytest.raises(BadSpec):
        MultisumSpec(0, 0)
    with pytest.raises(BadSpec):
        MultisumSpec(2, 3)
    with pytest.raises(BadSpec):
        MultisumSpec(2, 1, inner_kind="pair_beta")
    with pytest.raises(BadSpec):
        MultisumSpec(2, 1, weight_kind="cubic")
    spec = MultisumSpec(3, 1, weight_kind="square", linear_tail=(3, 2))
    assert MultisumSpec.from_json(spec.to_json()) == spec
    with pytest.raises(BadSpec):
        MultisumSpec.from_json({"m": 1, "a": 0, "colour": "red"})


def test_theta_full_e3_is_euler_product():
    got = theta_eval(ThetaSpec(F_E3, 1, 0, "full"), 40)
    assert got == product_eval(ProductSpec((poch_inf(1, 1),)), 40)


def test_theta_false_low_base_case():
    got = theta_eval(ThetaSpec(F_E3, 1, 0, "false_low"), 40)
    assert got.dense() == frozen.FALSE_BASE_40


def test_theta_gsum_p468():
    g = catalog_get("SLATER_P468").gseq
    got = theta_eval(ThetaSpec(g, 2, 1, "gsum"), 20)
    want = {}
    for n in range(-20, 21):
        mono = g(n + 1) * QMonomial.q(Fraction(2, 2) * n * n + n * 1 - n)
        if mono.exponent <= 20:
            want[mono.exponent] = want.get(mono.exponent, 0) + mono.sign
    assert dict(got.items()) == {e: c for e, c in want.items() if c}


@settings(max_examples=30)
@given(st.integers(1, 4), st.integers(-6, 6), st.sampled_from([None, "low", "high"]))
def test_bilateral_matches_term_sum(A, B, sgn):
    seq = IntSeq.single(Rule(v=2, A=A, B=B))
    N = 30

    def term(n):
        s = (-1) ** n
        if sgn == "low":
            s *= 1 if -n >= 0 else -1
        elif sgn == "high":
            s *= 1 if n >= 0 else -1
        return s, A * n * n + B * n

    shift = min(A * n * n + B * n for n in range(-10, 11))
    got = bilateral_eval(seq, N + shift, sgn).shift(-shift)
    want = oracles.bilateral(lambda n: (term(n)[0], term(n)[1] - shift), N)
    assert got.dense() == want


def test_bilateral_spec_round_trip():
    spec = BilateralSpec(IntSeq.single(Rule(A=3, B=1, den=2)), "low", -1, Fraction(1, 2))
    assert BilateralSpec.from_json(spec.to_json()) == spec
    with pytest.raises(BadSpec):
        BilateralSpec(spec.seq, "middle")


def test_noncoercive_rejected():
    with pytest.raises(NonCoerciveExponent):
        bilateral_eval(IntSeq.single(Rule(A=-1)), 10)
    with pytest.raises(NonCoerciveExponent):
        jtp_eval(QMonomial.q(1), QMonomial.q(-1), 10, "sum")


JTP_GRID = [(s, j) for s in (1, -1) for j in range(1, 7)]


@pytest.mark.parametrize("sign, j", JTP_GRID)
def test_jtp_grid(sign, j):
    z = QMonomial.q(Fraction(j, 2), sign)
    s = jtp_eval(z, QMonomial.q(1), 60, "sum")
    p = jtp_eval(z, QMonomial.q(1), 60, "product")
    assert s == p
    low, want = oracles.jtp_sum(sign, j, 60)
    assert s.with_den(2).truncate(60).dense(Fraction(low, 2)) == want


def test_jtp_special_values():
    assert jtp_eval(QMonomial.q(1), QMonomial.q(1), 30, "sum").is_zero
    assert jtp_eval(QMonomial.q(1), QMonomial.q(1), 30, "product").is_zero
    squares = jtp_eval(QMonomial.q(0, -1), QMonomial.q(1), 40, "sum")
    want = [0] * 41
    for n in range(-7, 8):
        if n * n <= 40:
            want[n * n] += 1
    assert squares.dense() == want


QTP_GRID = [(1, 3), (2, 3), (-1, 3), (1, 6), (-2, 6), (4, 9)]


@pytest.mark.parametrize("zexp, base", QTP_GRID)
def test_qtp_grid(zexp, base):
    z, b = QMonomial.q(zexp), QMonomial.q(base)
    assert qtp_eval(z, b, 60, "sum") == qtp_eval(z, b, 60, "product")


def test_qtp_specialisation_gives_quint_product():
    # (z, q) -> (q^(-m+a-1), q^(3m+t)) at m=1, a=0, t=4
    s = qtp_eval(QMonomial.q(-2), QMonomial.q(7), 60, "sum")
    want = product_eval(ProductSpec((poch_inf(2, 7), poch_inf(5, 7), poch_inf(7, 7),
                                     poch_inf(3, 14), poch_inf(11, 14))), 60)
    assert s == want


def test_qtp_needs_positive_base():
    with pytest.raises(BadSpec):
        qtp_eval(QMonomial.q(1), QMonomial.q(3, -1), 10, "sum")


def test_product_negative_base():
    # (-1, q, -q^2; -q^2)_oo at m=1, a=0 equals the six-factor form in base q^4
    n = ProductSpec((poch_inf(0, 2, 1, a_sign=-1, base_sign=-1), poch_inf(2, 2, 1, base_sign=-1),
                     poch_inf(2, 2, 1, a_sign=-1, base_sign=-1)))
    six = ProductSpec((poch_inf(0, 4, 1, a_sign=-1), poch_inf(2, 4), poch_inf(2, 4),
                       poch_inf(4, 4, 1, a_sign=-1), poch_inf(2, 4, 1, a_sign=-1), poch_inf(4, 4)))
    assert product_eval(n, 40) == product_eval(six, 40)
