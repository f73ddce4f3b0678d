"""Exact scalars: rationals, cyclotomic field elements, Bernoulli numbers and
negative-order polylogarithms at roots of unity.

Rationals are plain :class:`fractions.Fraction`.  A :class:`Cyclotomic` is an
element of Q(xi_N) stored as an integer vector over a common denominator in the
power basis 1, xi, ..., xi^(phi(N)-1), reduced modulo the N-th cyclotomic
polynomial, so equality is coefficientwise.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Iterable, Sequence, Union

from .errors import DegeneratePole, PreconditionViolated

Rational = Fraction
Scalar = Union[int, Fraction, "Cyclotomic"]

__all__ = [
    "Rational",
    "Cyclotomic",
    "cyclotomic_poly",
    "cyclo_root",
    "bernoulli_number",
    "bernoulli_poly",
    "polylog_neg",
    "polylog_via_bernoulli",
    "double_factorial",
    "parse_rational",
    "format_rational",
]


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficient lists, low degree first)


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division by a monic integer polynomial."""
    num = list(num)
    dd = len(den) - 1
    assert den[-1] == 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            out[i - dd] = c
            for j, d in enumerate(den):
                num[i - dd + j] -= c * d
    if any(num[:dd]):
        raise ArithmeticError("division is not exact")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, computed by dividing x^n - 1 by Phi_d for d | n, d < n."""
    if n < 1:
        raise PreconditionViolated("cyclotomic order must be >= 1")
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p = _poly_divexact(p, list(cyclotomic_poly(d)))
    return tuple(p)


class _Field:
    """Reduction tables for Q(xi_N)."""

    __slots__ = ("order", "phi", "powers")

    def __init__(self, order: int):
        self.order = order
        phi_poly = cyclotomic_poly(order)
        self.phi = phi = len(phi_poly) - 1
        # powers[e] = x^e mod Phi_N for 0 <= e < N; x^N = 1 in the field
        powers = []
        cur = [1] + [0] * (phi - 1)
        for _ in range(order):
            powers.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(phi):
                    cur[j] -= top * phi_poly[j]
        self.powers = tuple(powers)

    def reduce(self, vec: Sequence[int]) -> list[int]:
        phi, n = self.phi, self.order
        out = list(vec[:phi]) + [0] * max(0, phi - len(vec))
        for e in range(phi, len(vec)):
            c = vec[e]
            if c:
                pw = self.powers[e % n]
                for j in range(phi):
                    if pw[j]:
                        out[j] += c * pw[j]
        return out


@lru_cache(maxsize=None)
def _field(order: int) -> _Field:
    return _Field(order)


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = den
    for c in num:
        if c:
            g = gcd(g, c)
            if g == 1:
                break
    if g != 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


class Cyclotomic:
    """Element of Q(xi_N), xi_N = exp(2 pi i / N).

    Elements of different orders combine by embedding into Q(xi_lcm).
    """

    __slots__ = ("order", "num", "den")

    def __init__(self, order: int, coeffs: Iterable[Union[int, Fraction]] = ()):
        F = _field(order)
        fr = [Fraction(c) for c in coeffs]
        if len(fr) > F.phi:
            raise PreconditionViolated(
                f"expected at most {F.phi} coefficients for order {order}"
            )
        fr += [Fraction(0)] * (F.phi - len(fr))
        den = 1
        for c in fr:
            den = _lcm(den, c.denominator)
        num = [c.numerator * (den // c.denominator) for c in fr]
        self.order = order
        self.num, self.den = _normalize(num, den)

    @classmethod
    def _raw(cls, order: int, num: Sequence[int], den: int) -> Cyclotomic:
        obj = cls.__new__(cls)
        obj.order = order
        obj.num, obj.den = _normalize(list(num), den)
        return obj

    @classmethod
    def rational(cls, value: Union[int, Fraction], order: int = 1) -> Cyclotomic:
        v = Fraction(value)
        F = _field(order)
        return cls._raw(order, [v.numerator] + [0] * (F.phi - 1), v.denominator)

    @classmethod
    def root(cls, order: int, exponent: int = 1) -> Cyclotomic:
        F = _field(order)
        return cls._raw(order, F.powers[exponent % order], 1)

    # -- inspection ---------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num[0], self.den)

    def lift(self, order: int) -> Cyclotomic:
        """Embed into Q(xi_order); ``order`` must be a multiple of self.order."""
        if order == self.order:
            return self
        if order % self.order:
            raise PreconditionViolated(f"cannot embed order {self.order} into {order}")
        k = order // self.order
        F = _field(order)
        out = [0] * F.phi
        for i, c in enumerate(self.num):
            if c:
                pw = F.powers[(i * k) % order]
                for j in range(F.phi):
                    if pw[j]:
                        out[j] += c * pw[j]
        return Cyclotomic._raw(order, out, self.den)

    def conjugate(self) -> Cyclotomic:
        """Complex conjugation xi -> xi^-1."""
        F = _field(self.order)
        out = [0] * F.phi
        for i, c in enumerate(self.num):
            if c:
                pw = F.powers[(-i) % self.order]
                for j in range(F.phi):
                    out[j] += c * pw[j]
        return Cyclotomic._raw(self.order, out, self.den)

    # -- coercion -----------------------------------------------------------

    def _pair(self, other) -> tuple[Cyclotomic, Cyclotomic]:
        if isinstance(other, Cyclotomic):
            if other.order == self.order:
                return self, other
            m = _lcm(self.order, other.order)
            return self.lift(m), other.lift(m)
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.rational(other, self.order)
        return NotImplemented  # type: ignore[return-value]

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            v = Fraction(other)
            num = list(self.num)
            num[0] = num[0] * v.denominator + v.numerator * self.den
            num[1:] = [c * v.denominator for c in num[1:]]
            return Cyclotomic._raw(self.order, num, self.den * v.denominator)
        pair = self._pair(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
        return Cyclotomic._raw(a.order, num, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.order, [-c for c in self.num], self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            v = Fraction(other)
            return Cyclotomic._raw(
                self.order, [c * v.numerator for c in self.num], self.den * v.denominator
            )
        pair = self._pair(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        F = _field(a.order)
        phi = F.phi
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        conv[i + j] += x * y
        return Cyclotomic._raw(a.order, F.reduce(conv), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> Cyclotomic:
        if self.is_zero():
            raise DegeneratePole("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return Cyclotomic.rational(1 / self.to_fraction(), self.order)
        # extended Euclid in Q[x]: find s with s * p = 1 mod Phi_N
        modulus = [Fraction(c) for c in cyclotomic_poly(self.order)]
        p = [Fraction(c, self.den) for c in self.num]
        r0, r1 = modulus, _trim(p)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] == 0:
            q, r = _qdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _qsub(s0, _qmul(q, s1))
        # r1 is a nonzero constant
        c = r1[0]
        s = [x / c for x in s1]
        F = _field(self.order)
        den = 1
        for x in s:
            den = _lcm(den, x.denominator)
        ints = [x.numerator * (den // x.denominator) for x in s]
        return Cyclotomic._raw(self.order, F.reduce(ints), den)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DegeneratePole("division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic.rational(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        if isinstance(other, Cyclotomic):
            a, b = self._pair(other)
            return a.num == b.num and a.den == b.den
        return NotImplemented

    def __hash__(self):
        # elements of different orders only hash consistently when rational
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.order, self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    # -- output -------------------------------------------------------------

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> Cyclotomic:
        return cls(int(data["order"]), [parse_rational(s) for s in data["coeffs"]])

    def __repr__(self):
        return f"Cyclotomic({self.order}, [{', '.join(map(format_rational, self.coeffs))}])"

    def __str__(self):
        if self.is_rational():
            return format_rational(self.to_fraction())
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else (f"z{self.order}" + (f"^{i}" if i > 1 else ""))
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"({format_rational(c)})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _trim(p: list[Fraction]) -> list[Fraction]:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [Fraction(0)]


def _qdivmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [Fraction(0)], _trim(a)
    q = [Fraction(0)] * (len(a) - db)
    lead = b[-1]
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lead
        q[i - db] = c
        if c:
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    return _trim(q), _trim(a[:db] if db > 0 else [Fraction(0)])


def _qmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _qsub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def cyclo_root(N: int, a: int) -> Cyclotomic:
    """xi_N^a in canonical form."""
    if N < 1:
        raise PreconditionViolated("N must be >= 1")
    return Cyclotomic.root(N, a)


# ---------------------------------------------------------------------------
# rationals as text


def format_rational(x: Union[int, Fraction]) -> str:
    x = Fraction(x)
    return str(x)


def parse_rational(s: Union[str, int, Fraction]) -> Fraction:
    return Fraction(s)


# ---------------------------------------------------------------------------
# Bernoulli numbers and polynomials

_bern_lock = threading.Lock()
_bern: list[Fraction] = [Fraction(1)]


def bernoulli_number(m: int) -> Fraction:
    """B_m with B_1 = -1/2 (coefficients of t/(e^t - 1))."""
    if m < 0:
        raise PreconditionViolated("m must be >= 0")
    if m < len(_bern):
        return _bern[m]
    with _bern_lock:
        while len(_bern) <= m:
            k = len(_bern)
            # sum_{j=0}^{k} C(k+1, j) B_j = 0
            s = sum(comb(k + 1, j) * _bern[j] for j in range(k))
            _bern.append(-s / (k + 1))
    return _bern[m]


def bernoulli_poly(m: int, x: Union[int, Fraction]) -> Fraction:
    """B_m(x) = sum_j C(m, j) B_j x^(m-j)."""
    if m < 0:
        raise PreconditionViolated("m must be >= 0")
    x = Fraction(x)
    return sum(
        (comb(m, j) * bernoulli_number(j) * x ** (m - j) for j in range(m + 1)),
        Fraction(0),
    )


def double_factorial(n: int) -> int:
    """n!! for n >= -1, with (-1)!! = 0!! = 1."""
    if n < -1:
        raise PreconditionViolated("double factorial needs n >= -1")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


# ---------------------------------------------------------------------------
# polylogarithms of non-positive order


@lru_cache(maxsize=None)
def _euler_numerator(k: int) -> tuple[int, ...]:
    """A_k with (x d/dx)^k [x/(1-x)] = A_k(x) / (1-x)^(k+1)."""
    a = [0, 1]
    for j in range(1, k + 1):
        # x d/dx [A/(1-x)^j] = (x A' (1-x) + j x A) / (1-x)^(j+1)
        da = [i * c for i, c in enumerate(a)][1:]
        out = [0] * (len(a) + 1)
        for i, c in enumerate(da):  # x * A' * (1 - x)
            out[i + 1] += c
            out[i + 2] -= c
        for i, c in enumerate(a):  # j * x * A
            out[i + 1] += j * c
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        a = out
    return tuple(a)


def polylog_neg(k: int, z: Scalar) -> Cyclotomic:
    """Li_{-k}(z) as the rational function (x d/dx)^k [x/(1-x)] evaluated at z."""
    if k < 0:
        raise PreconditionViolated("k must be >= 0")
    if not isinstance(z, Cyclotomic):
        z = Cyclotomic.rational(z)
    one_minus = 1 - z
    if one_minus.is_zero():
        raise DegeneratePole("Li_{-k} has a pole at z = 1")
    numer = Cyclotomic.rational(0, z.order)
    for c in reversed(_euler_numerator(k)):
        numer = numer * z + c
    return numer * one_minus.inverse() ** (k + 1)


def polylog_via_bernoulli(k: int, N: int, l: int) -> Cyclotomic:
    """-N^k/(k+1) * sum_{c=1}^{N} xi_N^(lc) B_{k+1}(c/N), which equals Li_{-k}(xi_N^l).

    The c = N endpoint stands for zeta(-k, 1) = zeta(-k); it agrees with
    B_{k+1}(0) except at k = 0, where B_1(1) - B_1(0) = 1.
    """
    if k < 0 or N < 1:
        raise PreconditionViolated("need k >= 0 and N >= 1")
    if l % N == 0:
        raise PreconditionViolated("l must not be divisible by N")
    acc = Cyclotomic.rational(0, N)
    for c in range(1, N + 1):
        acc = acc + Cyclotomic.root(N, l * c) * bernoulli_poly(k + 1, Fraction(c, N))
    return acc * Fraction(-(N**k), k + 1)
