import pytest

from qforge.seeds import (
    CATALOG_NAMES,
    F_QUINT,
    IntSeq,
    Rule,
    UnknownSeed,
    catalog,
    catalog_get,
    check_alpha_matches_f,
    check_alpha_matches_g,
    check_f_condition,
    check_g_condition,
    slater_partial_sum_check,
    verify_seed,
)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_seed_is_a_pair(name):
    assert verify_seed(name, 12, 40).passed


def test_sequence_conditions():
    for entry in catalog():
        if entry.fseq is not None:
            assert check_f_condition(entry.fseq, 50).passed, entry.name
            assert check_alpha_matches_f(entry, 12, 40).passed, entry.name
        if entry.gseq is not None:
            assert check_g_condition(entry.gseq, 50).passed, entry.name
            assert check_alpha_matches_g(entry, 12, 40).passed, entry.name


def test_partial_sum_identity():
    assert slater_partial_sum_check(40).passed


def test_quint_sequences_vanish_on_one_mod_three():
    for t, f in F_QUINT.items():
        for n in range(-30, 31):
            m = f(n)
            if n % 3 == 1:
                assert m is None
            else:
                assert m.exponent.denominator == 1, (t, n)


def test_bad_sequence_is_caught():
    bad = IntSeq.single(Rule(v=2, A=1, B=1))
    assert not check_f_condition(bad, 5).passed
    assert not check_g_condition(bad, 5).passed


def test_rule_shift_and_plus():
    r = Rule(u=1, v=1, A=3, B=-1, den=2)
    for n in range(-5, 6):
        assert r.shifted(2)(n) == r(n + 2)
    p = r.plus(v=2, A=1, B=-1)
    for n in range(-5, 6):
        assert p.exponent(n) == r.exponent(n) + n * n - n
        assert p.sign(n) == r.sign(n) * (-1) ** n


def test_intseq_json_round_trip():
    f = F_QUINT[3]
    assert IntSeq.from_json(f.to_json()) == f


def test_catalog_dump_fields():
    rows = [e.to_json() for e in catalog()]
    assert [r["name"] for r in rows] == list(CATALOG_NAMES)
    assert all(set(r) == {"name", "x", "alpha_form", "beta_form", "source"} for r in rows)


def test_unknown_seed():
    with pytest.raises(UnknownSeed):
        catalog_get("nope")
