from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from crepant import tau
from crepant.errors import OutOfClosedFormDomain, PreconditionViolated
from crepant.tau import (
    TauKey,
    curly_bracket_bruteforce,
    curly_bracket_closed,
    square_bracket_bruteforce,
    square_bracket_closed,
    tau_correlator,
)


@pytest.mark.parametrize(
    "g, ds, want",
    [
        (0, [0, 0, 0], Fraction(1)),
        (1, [1], Fraction(1, 24)),
        (2, [4], Fraction(1, 1152)),
        (2, [2, 3], Fraction(29, 5760)),
        (2, [2, 2, 2], Fraction(7, 240)),
        (3, [7], Fraction(1, 82944)),
        (0, [-2], Fraction(1)),
        (0, [3, -4], Fraction(-1)),
        (0, [0, -1], Fraction(1)),
        (1, [0], Fraction(0)),
        (0, [-3], Fraction(0)),
        (1, [-2, 5], Fraction(0)),
    ],
)
def test_frozen_values(g, ds, want):
    assert tau_correlator(g, ds) == want


def test_taukey_accepted():
    assert tau_correlator(TauKey.make(2, [3, 2])) == Fraction(29, 5760)


@given(st.lists(st.integers(0, 4), min_size=3, max_size=7))
def test_genus_zero_multinomial_oracle(ds):
    n = len(ds)
    if sum(ds) != n - 3:
        assert tau_correlator(0, ds) == 0
        return
    want = Fraction(factorial(n - 3))
    for d in ds:
        want /= factorial(d)
    assert tau_correlator(0, ds) == want


@pytest.mark.parametrize("g", range(1, 5))
def test_one_point_oracle(g):
    assert tau_correlator(g, [3 * g - 2]) == Fraction(1, 24**g * factorial(g))


@pytest.mark.parametrize("n", range(1, 7))
def test_genus_one_dilaton_chain(n):
    assert tau_correlator(1, [1] * n) == Fraction(factorial(n - 1), 24)


@st.composite
def stable_keys(draw):
    g = draw(st.integers(0, 3))
    n = draw(st.integers(max(1, 3 - 2 * g), 6))
    total = 3 * g - 2 + n
    cuts = sorted(draw(st.lists(st.integers(0, total), min_size=n - 1, max_size=n - 1)))
    b = [0] + cuts + [total]
    return g, [y - x for x, y in zip(b, b[1:])]


@given(stable_keys())
def test_string_equation(key):
    g, ds = key
    rhs = sum(
        (tau_correlator(g, ds[:j] + [ds[j] - 1] + ds[j + 1 :]) for j in range(len(ds)) if ds[j] > 0),
        Fraction(0),
    )
    assert tau_correlator(g, [0] + ds) == rhs


@given(stable_keys())
def test_dilaton_equation(key):
    g, ds = key
    ds = ds[:]
    ds[0] -= 1
    if ds[0] < 0:
        return
    assert tau_correlator(g, [1] + ds) == (2 * g - 2 + len(ds)) * tau_correlator(g, ds)


def test_order_independence():
    keys = [(g, ds) for g in range(3) for ds in ([1, 1, 2, 2], [3 * g - 2 + 1, 0], [2, 2, 2], [4, 1])]
    tau.clear_cache()
    first = [tau_correlator(g, ds) for g, ds in keys]
    tau.clear_cache()
    rng = random.Random(3)
    order = list(range(len(keys)))
    rng.shuffle(order)
    second = {i: tau_correlator(*keys[i]) for i in order}
    assert first == [second[i] for i in range(len(keys))]
    assert tau_correlator(2, [2, 1, 2, 1]) == tau_correlator(2, [1, 1, 2, 2])


# -- brackets ---------------------------------------------------------------


def test_curly_examples():
    assert curly_bracket_bruteforce(0, [0, 0], []) == 1
    assert curly_bracket_bruteforce(1, [1], [0]) == Fraction(1, 12)
    assert curly_bracket_bruteforce(1, [0], [1]) == Fraction(1, 12)
    assert curly_bracket_closed(0, [0, 0]) == 1
    assert curly_bracket_closed(1, [1, 0]) == Fraction(1, 12)
    assert curly_bracket_closed(2, [1, 1, 0]) == Fraction(1, 144)
    assert curly_bracket_bruteforce(2, [1], [1, 0]) == Fraction(1, 144)


def test_curly_precondition():
    with pytest.raises(PreconditionViolated):
        curly_bracket_closed(2, [1, 0])


@given(st.integers(0, 3), st.data())
def test_curly_split_independence(g, data):
    m = data.draw(st.integers(1, 5))
    ks = data.draw(st.lists(st.integers(0, g), min_size=m, max_size=m).filter(lambda x: sum(x) == g))
    mask = data.draw(st.lists(st.booleans(), min_size=m, max_size=m))
    kI = [k for k, b in zip(ks, mask) if b]
    kJ = [k for k, b in zip(ks, mask) if not b]
    assert curly_bracket_bruteforce(g, kI, kJ) == curly_bracket_closed(g, ks)


def test_square_examples():
    assert square_bracket_bruteforce(2, [1, 1], 2) == Fraction(1, 4)
    assert square_bracket_closed(2, [1, 1], 2) == Fraction(1, 4)
    assert square_bracket_bruteforce(1, [0], 0) == 1
    assert square_bracket_bruteforce(2, [1, 1], -1) == 0
    assert square_bracket_bruteforce(0, [1, 1], 2) == 0


def test_square_dimension_violation_is_zero():
    # sum k = 2 but g - 2 + m = 3
    assert square_bracket_bruteforce(2, [0, 0, 2], 2) == 0
    assert square_bracket_closed(2, [0, 0, 2], 2) == 0


def test_square_genus_one_single_point_outside_closed_form():
    with pytest.raises(OutOfClosedFormDomain):
        square_bracket_closed(1, [0], 0)


@pytest.mark.parametrize("g", [2, 3])
def test_square_with_tau0_insertions(g):
    # a > 0 insertions of tau_0, including cases where a positive index is below a
    for ks in ([0, 0, 1, 3], [0, 0, 2, 2], [0, 0, 0, 1, 4], [0, 0, 0, 2, 3]):
        if sum(ks) != g - 2 + len(ks):
            continue
        assert square_bracket_closed(g, ks, 2 * g - 2) == square_bracket_bruteforce(g, ks, 2 * g - 2)


@given(st.sampled_from([2, 3]), st.integers(3, 5), st.data())
def test_square_vanishing_beyond_two_twisted_points(g, m, data):
    p = data.draw(st.integers(0, m - 3))
    K = 2 * g - 4 + m - p
    total = 3 * g - 4 + m - K
    ks = data.draw(st.lists(st.integers(0, total), min_size=m, max_size=m).filter(lambda x: sum(x) == total))
    assert square_bracket_bruteforce(g, ks, K) == 0
    assert square_bracket_closed(g, ks, K) == 0


# -- persistence ------------------------------------------------------------


def test_cache_round_trip(tmp_path):
    tau.clear_cache()
    want = tau_correlator(3, [2, 3, 4])
    assert want != 0
    assert tau.save_cache(tmp_path) > 0
    size = tau.cache_size()
    tau.clear_cache()
    assert tau.load_cache(tmp_path) == size
    assert tau.cache_size() == size
    assert tau_correlator(3, [2, 3, 4]) == want
    assert tau.save_cache(tmp_path) == 0


def test_corrupt_cache_discarded(tmp_path):
    tau.clear_cache()
    tau_correlator(2, [4])
    tau.save_cache(tmp_path)
    path = tmp_path / "tau_cache.txt"
    lines = path.read_text().splitlines()
    g, ds, _ = lines[0].split("|")
    lines[0] = f"{g}|{ds}|12345/7"
    path.write_text("\n".join(lines) + "\n")
    tau.clear_cache()
    assert tau.load_cache(tmp_path) == 0
    assert not path.exists()
    assert tau_correlator(2, [4]) == Fraction(1, 1152)


def test_garbage_cache_discarded(tmp_path):
    (tmp_path / "tau_cache.txt").write_text("not a cache line\n")
    tau.clear_cache()
    assert tau.load_cache(tmp_path) == 0
