from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from crepant.crc2d import (
    ChangeOfVars2D,
    closed_form_potential_2d,
    kernel_direct,
    kernel_window,
    potential_2d_via_kernel,
    resolution_potential_2d,
    stationary_potential_2d,
    verify_crc2d,
    xy_matrix_identity,
)
from crepant.errors import LiOrderPositive, PreconditionViolated
from crepant.exact import Cyclotomic
from crepant.series import MultiSeries, VarRegistry, substitute_linear


@pytest.mark.parametrize("n", range(2, 11))
def test_xy_matrix_identity(n):
    assert xy_matrix_identity(n)


@pytest.mark.parametrize("n", range(2, 9))
def test_change_of_variables_inverse(n):
    assert ChangeOfVars2D(n).is_inverse_pair()


@given(st.integers(2, 8), st.data())
def test_kernel_window(n, data):
    b = data.draw(st.integers(0, n - 1))
    l = data.draw(st.integers(1, n - 1))
    sigma, s, t = kernel_window(n, b, l)
    assert 1 <= s <= t <= n - 1
    assert t - s + 1 == (l if sigma == 1 else n - l)
    for j in range(1, n):
        assert kernel_direct(n, b, l, j) == (-sigma * n if s <= j <= t else 0)


def test_kernel_precondition():
    with pytest.raises(PreconditionViolated):
        kernel_direct(3, 3, 1, 1)


def test_round_trip_substitution():
    n, kmax = 3, 1
    cov = ChangeOfVars2D(n)
    xreg = VarRegistry.stationary(n, kmax, 3)
    yreg = VarRegistry.stationary(n, kmax, 3, role="y")
    s = MultiSeries.var(xreg, "x1_0") * MultiSeries.var(xreg, "x2_1") + MultiSeries.var(xreg, "x2_0") ** 3
    back = substitute_linear(substitute_linear(s, cov.x_to_y(kmax), yreg), cov.y_to_x(kmax), xreg)
    assert back == s


def test_frozen_genus_zero_coefficient():
    # <tau_0(e_1)^4>_0 = -1/2 in units of t, divided by 4!
    s = stationary_potential_2d(2, 0, 4)
    assert s.coefficient({"x1_0": 4}) == Fraction(-1, 48)
    assert s.coefficient({"x1_0": 4}) == stationary_potential_2d(2, 0, 4, closed_brackets=True).coefficient({"x1_0": 4})


def test_degree_four_coefficient_through_closed_form():
    # push the closed form back to orbifold variables and read off the four-point invariant
    n = 2
    closed = closed_form_potential_2d(n, 0, 4)
    xreg = VarRegistry.stationary(n, 0, 4)
    pulled = substitute_linear(closed, ChangeOfVars2D(n).y_to_x(0), xreg)
    assert pulled.coefficient({"x1_0": 4}) * 24 == Fraction(-1, 2)


def test_strict_gate():
    with pytest.raises(LiOrderPositive):
        closed_form_potential_2d(2, 0, 4, strict=True)
    skipped = []
    closed_form_potential_2d(2, 0, 4, skipped)
    assert {s["reason"] for s in skipped} == {"li_order_positive"}


@pytest.mark.parametrize("n, g", [(2, 0), (2, 1), (3, 0), (3, 1), (4, 0)])
def test_routes_agree(n, g):
    rep = verify_crc2d(n, g, 5)
    assert rep["ok"], rep["failed"][:3]
    assert rep["checked"] > 0
    assert rep["routes"] == ["stationary", "kernel", "resolution"]


def test_kernel_route_equals_closed_route_directly():
    n, g, D = 3, 1, 5
    k = potential_2d_via_kernel(n, g, D)
    c = closed_form_potential_2d(n, g, D)
    r = resolution_potential_2d(n, g, D)
    for e in set(k.terms) | set(c.terms) | set(r.terms):
        if sum(e) >= 4:
            assert k.terms.get(e, 0) == c.terms.get(e, 0) == r.terms.get(e, 0)


def test_single_route_selection():
    rep = verify_crc2d(2, 0, 4, route="kernel")
    assert rep["routes"] == ["kernel"]
    with pytest.raises(PreconditionViolated):
        verify_crc2d(2, 0, 3)
    with pytest.raises(PreconditionViolated):
        verify_crc2d(2, 0, 4, route="bogus")


def test_window_linear_forms_add_up():
    # kernel window y_s + ... + y_t summed over the full range equals the all-ones form
    n = 5
    for b in range(n):
        for l in range(1, n):
            sigma, s, t = kernel_window(n, b, l)
            total = sum((kernel_direct(n, b, l, j) for j in range(s, t + 1)), Cyclotomic.rational(0))
            assert total == -sigma * n * (t - s + 1)
