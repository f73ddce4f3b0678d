"""Hurwitz-Hodge integrals and orbifold correlators of [C^2/Z_n] and
[C^2/Z_n] x C.

2D correlators are returned as the coefficient of the equivariant parameter t;
3D correlators are plain numbers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Sequence

from .errors import (
    DegenerateDegree,
    DegenerateRank,
    MonodromyViolation,
    NontrivialMonodromyRequired,
    PreconditionViolated,
)
from .exact import Cyclotomic, bernoulli_poly
from .tau import (
    curly_bracket_bruteforce,
    curly_bracket_closed,
    square_bracket_bruteforce,
    square_bracket_closed,
)

__all__ = [
    "OrbKey",
    "ranks",
    "hh_ch_integral_2d",
    "orbifold_correlator_2d",
    "b_coefficient",
    "k_coefficient",
    "lambda_ch_integral_3d",
    "orbifold_correlator_3d",
]


@dataclass(frozen=True)
class OrbKey:
    """Insertions tau_{k_i}(e_{a_i}) at genus g on [C^2/Z_n]."""

    n: int
    g: int
    a: tuple[int, ...]
    k: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        k = tuple(self.k) if self.k else (0,) * len(self.a)
        object.__setattr__(self, "k", k)
        if len(k) != len(self.a):
            raise PreconditionViolated("a and k must have the same length")
        if self.n < 2 or self.g < 0:
            raise PreconditionViolated("need n >= 2 and g >= 0")
        if any(not 0 <= x < self.n for x in self.a) or any(x < 0 for x in k):
            raise PreconditionViolated("monodromies lie in 0..n-1 and psi powers are >= 0")

    @property
    def m(self) -> int:
        return len(self.a)

    @property
    def p(self) -> int:
        return self.a.count(0)


def ranks(n: int, g: int, a: Sequence[int]) -> tuple[int, int, int]:
    """(r1, r1bar, p) for monodromies a; the monodromy sum must vanish mod n."""
    s = sum(a)
    if s % n:
        raise MonodromyViolation(f"sum of monodromies {s} is not divisible by {n}")
    r1 = g - 1 + s // n
    r1bar = g - 1 + sum(n - x for x in a if x) // n
    return r1, r1bar, sum(1 for x in a if x == 0)


def _bern_over(N: int, c: int, n: int) -> Fraction:
    return bernoulli_poly(N, Fraction(c, n)) / factorial(N)


def hh_ch_integral_2d(key: OrbKey, closed: bool = False) -> Fraction:
    """The Hurwitz-Hodge integral of ch_{r1+r1bar-1} against psi-bar powers.

    Reduced to tau brackets: one split term per I | J and a self-node term
    through the square bracket.  With ``closed`` and no untwisted insertions
    the bracket closed forms are used instead of brute force.
    """
    n, g, a, k = key.n, key.g, key.a, key.k
    r1, r1bar, p = ranks(n, g, a)
    m = key.m
    if p >= m:
        raise PreconditionViolated("at least one twisted insertion is required")
    N = r1 + r1bar
    if N < 1:
        raise DegenerateRank("r1 + r1bar must be >= 1")
    use_closed = closed and p == 0 and sum(k) == g
    idx = range(m)
    split = Fraction(0)
    for size in range(m + 1):
        for I in combinations(idx, size):
            Iset = set(I)
            J = [i for i in idx if i not in Iset]
            c = (-sum(a[i] for i in I)) % n
            kI = [k[i] for i in I]
            kJ = [k[i] for i in J]
            br = curly_bracket_closed(g, kI + kJ) if use_closed else curly_bracket_bruteforce(g, kI, kJ)
            if br:
                term = _bern_over(N, c, n) * br
                split += -term if len(J) % 2 else term
    node = Fraction(0)
    K = 2 * g - 4 + m - p
    if g >= 1:
        br = square_bracket_closed(g, k, K) if use_closed else square_bracket_bruteforce(g, k, K)
        if br:
            node = sum((_bern_over(N, c, n) for c in range(n)), Fraction(0)) * br
    return -(Fraction(n) ** (2 * g - 1)) / 2 * (split + node)


def orbifold_correlator_2d(key: OrbKey, closed: bool = False) -> Fraction:
    """<prod tau_{k_i}(e_{a_i})>_g of [C^2/Z_n], as the coefficient of t."""
    r1, r1bar, p = ranks(key.n, key.g, key.a)
    if p >= key.m:
        raise PreconditionViolated("at least one twisted insertion is required")
    if sum(key.k) != key.g + p:
        return Fraction(0)
    N = r1 + r1bar
    if N < 1:
        raise DegenerateRank("r1 + r1bar = 0")
    sign = -1 if (r1 - 1) % 2 else 1
    return sign * 2 * factorial(N - 1) * hh_ch_integral_2d(key, closed=closed)


# ---------------------------------------------------------------------------
# lambda_g series


@lru_cache(maxsize=None)
def _b_series(G: int) -> tuple[Fraction, ...]:
    # invert sin(x/2)/(x/2) = sum_j (-1)^j x^{2j} / (4^j (2j+1)!)
    s = [Fraction((-1) ** j, 4**j * factorial(2 * j + 1)) for j in range(G + 1)]
    b = [Fraction(1)]
    for g in range(1, G + 1):
        b.append(-sum((s[j] * b[g - j] for j in range(1, g + 1)), Fraction(0)))
    return tuple(b)


def b_coefficient(g: int) -> Fraction:
    """Coefficient of lambda^{2g} in (lambda/2)/sin(lambda/2)."""
    if g < 0:
        raise PreconditionViolated("g must be >= 0")
    return _b_series(g)[g]


def k_coefficient(g: int) -> Fraction:
    """Coefficient of lambda^{2g} in ((lambda/2)/sin(lambda/2))^2."""
    if g < 0:
        raise PreconditionViolated("g must be >= 0")
    b = _b_series(g)
    return sum((b[i] * b[g - i] for i in range(g + 1)), Fraction(0))


def _check_3d(n: int, a: Sequence[int]) -> None:
    if sum(a) % n:
        raise MonodromyViolation(f"sum of monodromies {sum(a)} is not divisible by {n}")
    if any(x % n == 0 for x in a):
        raise NontrivialMonodromyRequired("3D insertions must be twisted")
    if len(a) < 2:
        raise PreconditionViolated("need at least two insertions")


def lambda_ch_integral_3d(n: int, g: int, a: Sequence[int]) -> Fraction:
    """The lambda_g-weighted Hurwitz-Hodge integral feeding the 3D correlator."""
    _check_3d(n, a)
    m = len(a)
    N = 2 * g - 2 + m
    total = Cyclotomic.rational(0, n)
    for l in range(n):
        prod = Cyclotomic.rational(1, n)
        for x in a:
            prod = prod * (Cyclotomic.root(n, x * l) - 1)
        if prod.is_zero():
            continue
        inner = Cyclotomic.rational(0, n)
        for c in range(n):
            inner = inner + Cyclotomic.root(n, c * l) * _bern_over(N, c, n)
        total = total + prod * inner
    # the character sum is Galois-stable
    value = total.to_fraction()
    scale = Fraction(n) ** (2 * g - 2)
    return -scale * k_coefficient(g) * value / 2


def orbifold_correlator_3d(n: int, g: int, a: Sequence[int]) -> Fraction:
    """<prod 1_{a_i}>_g of [C^2/Z_n] x C."""
    _check_3d(n, a)
    deg = 2 * g - 3 + len(a)
    if deg < 0:
        raise DegenerateDegree(f"(2g-3+m)! with 2g-3+m = {deg}")
    sign = -1 if (sum(a) // n - 1) % 2 else 1
    return sign * factorial(deg) * lambda_ch_integral_3d(n, g, a)
