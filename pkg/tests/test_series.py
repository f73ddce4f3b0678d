from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from crepant.errors import BadConstantTerm, OutOfTruncation, RegistryMismatch
from crepant.exact import Cyclotomic
from crepant.series import MultiSeries, Var, VarRegistry, multinomial, substitute_linear

REG = VarRegistry((Var("a"), Var("b"), Var("c")), total_cap=5)
coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=5)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))


def series(const=None):
    def build(items):
        s = MultiSeries(REG, items)
        if const is not None:
            s = s - s.constant_term() + const
        return s

    return st.lists(st.tuples(exps, coeffs), max_size=6).map(build)


def cauchy_oracle(f, g):
    """Coefficientwise product over all exponent pairs, truncated by total degree."""
    out = {}
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if sum(e) <= REG.total_cap:
                out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


@given(series(), series(), series())
def test_ring_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert f - f == MultiSeries(REG)


@given(series(), series())
def test_product_matches_cauchy_oracle(f, g):
    assert (f * g).terms == cauchy_oracle(f, g)


@given(series(const=0))
def test_exp_log_round_trip(f):
    assert f.exp().log() == f


@given(series(const=1))
def test_log_exp_round_trip(f):
    assert f.log().exp() == f


@given(series(const=0), series(const=0))
def test_exp_is_homomorphism(f, g):
    assert (f + g).exp() == f.exp() * g.exp()


def test_bad_constant_terms():
    x = MultiSeries.var(REG, "a")
    with pytest.raises(BadConstantTerm):
        (x + 1).exp()
    with pytest.raises(BadConstantTerm):
        x.log()


def test_truncation_and_lookup():
    x = MultiSeries.var(REG, "a")
    assert (x**6) == MultiSeries(REG)
    with pytest.raises(OutOfTruncation):
        x.coefficient({"a": 6})
    assert (x**5).coefficient({"a": 5}) == 1
    with pytest.raises(RegistryMismatch):
        x.coefficient({"z": 1})


def test_weight_cap():
    reg = VarRegistry.stationary(2, 2, 6)
    x0, x2 = MultiSeries.var(reg, "x1_0"), MultiSeries.var(reg, "x1_2")
    assert (x2 * x2) == MultiSeries(reg)
    assert (x0 * x2).coefficient({"x1_0": 1, "x1_2": 1}) == 1


def test_registry_mismatch():
    other = VarRegistry((Var("a"),), 3)
    with pytest.raises(RegistryMismatch):
        MultiSeries.var(REG, "a") + MultiSeries.var(other, "a")
    with pytest.raises(RegistryMismatch):
        VarRegistry((Var("a"), Var("a")), 2)


def test_cyclotomic_coefficients_and_json():
    i = Cyclotomic.root(4)
    s = MultiSeries.var(REG, "a", i) * MultiSeries.var(REG, "b", i)
    assert s.coefficient({"a": 1, "b": 1}) == -1
    js = s.to_json()
    assert js["vars"] == ["a", "b", "c"]
    assert js["terms"][0]["exp"] == {"a": 1, "b": 1}
    assert js["terms"][0]["coeff"] == {"order": 4, "coeffs": ["-1", "0"]}


LIN = {
    "a": {"a": Fraction(1), "b": Fraction(2)},
    "b": {"c": Fraction(-1)},
    "c": {"a": Fraction(1, 3), "c": Fraction(1)},
}


@given(series(), series())
def test_substitution_is_ring_homomorphism(f, g):
    assert substitute_linear(f * g, LIN) == substitute_linear(f, LIN) * substitute_linear(g, LIN)
    assert substitute_linear(f + g, LIN) == substitute_linear(f, LIN) + substitute_linear(g, LIN)


def test_substitution_into_new_registry():
    tgt = VarRegistry((Var("u"), Var("v")), 3)
    s = MultiSeries.var(REG, "a") ** 2
    out = substitute_linear(s, {"a": {"u": 1, "v": 1}, "b": {"u": 1}, "c": {"v": 1}}, tgt)
    assert out.coefficient({"u": 1, "v": 1}) == 2


def test_multinomial():
    assert multinomial([2, 1, 1]) == 12
    assert multinomial([]) == 1
