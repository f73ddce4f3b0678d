from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from crepant.crc3d import (
    CONVENTIONS,
    ChangeOfVars3D,
    Partition,
    QHalfSeries,
    closed_form_potential_3d,
    convention_name,
    orbifold_potential_3d,
    partitions,
    resolution_potential_3d_closed,
    skew_schur_principal,
    subpartitions,
    verify_crc3d,
    verify_vertex_product,
    vertex_W,
    vertex_partition_sum,
)
from crepant.crc3d import _target
from crepant.errors import PreconditionViolated
from crepant.exact import Cyclotomic
from crepant.hodge import k_coefficient

PREC = 24


def schur_hook_oracle(lam, prec):
    """s_lam(q^{1/2}, q^{3/2}, ...) = q^{|lam|/2 + n(lam)} / prod_hooks (1 - q^h), in s = q^{1/2}."""
    lam = Partition(lam)
    conj = lam.conjugate()
    shift = lam.size + 2 * sum(i * p for i, p in enumerate(lam))
    out = QHalfSeries({shift: 1}, prec)
    for i, row in enumerate(lam):
        for j in range(row):
            h = row - j + conj[j] - i - 1
            geo = QHalfSeries({2 * h * m: 1 for m in range(prec // (2 * h) + 1)}, prec)
            out = out * geo
    return out.truncate(prec)


def test_partition_basics():
    mu = Partition([3, 1])
    assert mu.size == 4
    assert mu.conjugate() == Partition([2, 1, 1])
    assert mu.kappa == 3 * (3 - 1) + 1 * (1 - 3)
    assert Partition([2, 2]).kappa == 0
    assert len(partitions(5)) == 7
    assert sorted(subpartitions(Partition([2, 1])), key=tuple) == sorted(
        [Partition(p) for p in ([], [1], [2], [1, 1], [2, 1])], key=tuple
    )
    with pytest.raises(ValueError):
        Partition([1, 2])


@given(st.integers(0, 7).flatmap(lambda k: st.sampled_from(partitions(k))))
def test_kappa_is_antisymmetric_under_conjugation(mu):
    assert mu.conjugate().kappa == -mu.kappa
    assert mu.conjugate().conjugate() == mu


@pytest.mark.parametrize("lam", [[1], [2], [1, 1], [2, 1], [3, 1], [2, 2], [3, 2, 1]])
def test_schur_matches_hook_content(lam):
    got = skew_schur_principal(lam, [], PREC)
    assert got.agrees(schur_hook_oracle(lam, PREC), PREC)


def test_skew_schur_of_non_contained_is_zero():
    assert skew_schur_principal([1], [2], PREC).is_zero()
    assert skew_schur_principal([2, 1], [2, 1], PREC).coeffs == {0: 1}


@pytest.mark.parametrize("mu", [[1], [2], [1, 1], [2, 1]])
def test_one_leg_vertex(mu):
    mu = Partition(mu)
    want = schur_hook_oracle(mu, PREC).shift(mu.kappa)
    if mu.size % 2:
        want = -want
    assert vertex_W(mu, [], PREC).agrees(want, PREC - 4)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_q_series_identity(d):
    prec = 30
    q_d = QHalfSeries({2 * d: 1}, prec)
    geo = QHalfSeries({2 * d * m: 1 for m in range(prec)}, prec)
    want = -(q_d * geo * geo)
    e = (d,)
    assert _target(2, 3, prec)[e].agrees(want.scale(Fraction(1, d)), prec)


def test_change_of_variables_windows():
    cov = ChangeOfVars3D(3)
    full = cov.window(1, 2)
    a, b = cov.window(1, 1), cov.window(2, 2)
    for k in full:
        assert full[k] == a[k] + b[k]


def test_three_d_potentials_agree_low_genus():
    rep = verify_crc3d(2, 1, 5)
    assert rep["ok"]
    assert rep["checked"] > 0


@pytest.mark.parametrize("n, g", [(2, 0), (2, 1), (3, 1), (3, 2)])
def test_closed_form_rational_from_degree_four(n, g):
    s = closed_form_potential_3d(n, g, 6)
    for e, c in s.terms.items():
        if sum(e) >= 4 and isinstance(c, Cyclotomic):
            assert c.is_rational()


def test_orbifold_spot_value():
    s = orbifold_potential_3d(2, 0, 4)
    assert s.coefficient({"u1": 4}) == Fraction(1, 4) / 24


def test_resolution_closed_form():
    res = resolution_potential_3d_closed(3, 1, 2)
    reg = res[1].registry
    assert res[1].coefficient({"Q1": 1, "Q2": 1}) == k_coefficient(1)
    assert res[0].coefficient({"Q1": 2}) == Fraction(1, 8)
    assert res[0].coefficient({"Q1": 1}) == 1
    assert reg.names == ["Q1", "Q2"]


def test_vertex_log_has_only_window_monomials():
    poly = vertex_partition_sum(3, 3, 20)
    for e, c in poly.terms.items():
        nz = [i for i, x in enumerate(e) if x]
        if c.truncate(9).is_zero():
            continue
        assert nz == list(range(nz[0], nz[-1] + 1))
        assert len({e[i] for i in nz}) == 1


def test_vertex_report_structure():
    rep = verify_vertex_product(2, 2, 6)
    assert [r["convention"] for r in rep["conventions"]] == [convention_name(*c) for c in CONVENTIONS]
    assert rep["ok"] == (len(rep["matching_conventions"]) == 1)
    assert rep["gluing_convention"] == (rep["matching_conventions"][0] if rep["ok"] else None)
    plain = rep["conventions"][0]
    assert plain["convention"] == "sign=none,conjugate=no"
    # the untwisted gluing reproduces the product with the opposite overall sign
    assert plain["matches_negated_product"]
    assert not plain["non_window_monomials"]


def test_vertex_preconditions():
    with pytest.raises(PreconditionViolated):
        verify_vertex_product(1, 2, 4)
    with pytest.raises(PreconditionViolated):
        vertex_partition_sum(2, 1, 10, ("bogus", False))
