"""Stationary genus-g potentials of [C^2/Z_n] and of its crepant resolution,
computed along four independent routes and compared coefficientwise.

Routes, all in the y-coordinates of the resolution side:

* ``stationary``: orbifold correlators summed over insertion multisets, then
  pushed through the exact inverse change of variables;
* ``kernel``: Bernoulli-polynomial sums over contiguous windows y_{s->t};
* ``closed``: negative-order polylogarithms Li_{-(2g-3+m)} at roots of unity;
* ``resolution``: the same polylog weights enumerated over ordered insertions
  l_i in a window [a, b], as on the resolution side.

The orbifold variable x_{a,k} u_a is stored as a single fused variable.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import factorial
from typing import Iterable

from .errors import DegenerateRank, LiOrderPositive, PreconditionViolated
from .exact import Cyclotomic, bernoulli_poly, double_factorial, polylog_neg
from .hodge import OrbKey, orbifold_correlator_2d
from .series import MultiSeries, VarRegistry, coeff_json, substitute_linear, x_name, y_name

log = logging.getLogger(__name__)

__all__ = [
    "ChangeOfVars2D",
    "kernel_direct",
    "kernel_window",
    "xy_matrix_identity",
    "stationary_potential_2d",
    "potential_2d_via_kernel",
    "closed_form_potential_2d",
    "resolution_potential_2d",
    "verify_crc2d",
]

MIN_DEGREE = 4


class ChangeOfVars2D:
    """y_a = sum_b F[a][b] X_b and its exact inverse X_a = sum_j G[a][j] y_j,
    with X_b = x_b u_b and indices running over 1..n-1."""

    def __init__(self, n: int):
        if n < 2:
            raise PreconditionViolated("n must be >= 2")
        self.n = n
        N2 = 2 * n
        r = range(1, n)
        self.forward = {
            (a, b): (Cyclotomic.root(N2, b) - Cyclotomic.root(N2, -b)) * Cyclotomic.root(N2, 2 * a * b) * Fraction(1, n)
            for a in r
            for b in r
        }
        self.inverse = {
            (a, j): (Cyclotomic.root(N2, -2 * a * j) - 1) / (Cyclotomic.root(N2, a) - Cyclotomic.root(N2, -a))
            for a in r
            for j in r
        }

    def composed(self) -> dict[tuple[int, int], Cyclotomic]:
        """forward . inverse; the identity matrix when the inverse is right."""
        r = range(1, self.n)
        return {
            (a, j): sum((self.forward[(a, b)] * self.inverse[(b, j)] for b in r), Cyclotomic.rational(0, 2 * self.n))
            for a in r
            for j in r
        }

    def is_inverse_pair(self) -> bool:
        return all(v == (1 if a == j else 0) for (a, j), v in self.composed().items())

    def x_to_y(self, kmax: int) -> dict[str, dict[str, Cyclotomic]]:
        """Substitution map X_{a,k} -> sum_j G[a][j] y_{j,k}."""
        r = range(1, self.n)
        return {
            x_name(a, k): {y_name(j, k): self.inverse[(a, j)] for j in r}
            for a in r
            for k in range(kmax + 1)
        }

    def y_to_x(self, kmax: int) -> dict[str, dict[str, Cyclotomic]]:
        r = range(1, self.n)
        return {
            y_name(a, k): {x_name(b, k): self.forward[(a, b)] for b in r}
            for a in r
            for k in range(kmax + 1)
        }


def xy_matrix_identity(n: int) -> bool:
    """(n I - J) (I + J) / n = I on (n-1) x (n-1) matrices, J all-ones."""
    size = n - 1
    for i in range(size):
        for j in range(size):
            s = Fraction(0)
            for k in range(size):
                left = n - 1 if i == k else -1
                right = 2 if k == j else 1
                s += left * right
            if s / n != (1 if i == j else 0):
                return False
    return True


# ---------------------------------------------------------------------------
# window kernel


def kernel_direct(n: int, b: int, l: int, j: int) -> Cyclotomic:
    """K(b,l,j) = sum_k xi^{bk} xi_{2n}^k (xi^{kl}-1) (-1/(xi_{2n}^k - xi_{2n}^{-k})) (xi^{-jk}-1)."""
    if not (0 <= b < n and 1 <= l < n and 1 <= j < n):
        raise PreconditionViolated("need 0 <= b < n and 1 <= l, j < n")
    N2 = 2 * n
    total = Cyclotomic.rational(0, N2)
    for k in range(1, n):
        num = Cyclotomic.root(N2, 2 * b * k + k) * (Cyclotomic.root(N2, 2 * k * l) - 1)
        num = num * (Cyclotomic.root(N2, -2 * j * k) - 1)
        total = total - num / (Cyclotomic.root(N2, k) - Cyclotomic.root(N2, -k))
    return total


def kernel_window(n: int, b: int, l: int) -> tuple[int, int, int]:
    """(sigma, s, t) with -sum_j K(b,l,j) y_j = sigma * n * (y_s + ... + y_t)."""
    if not (0 <= b < n and 1 <= l < n):
        raise PreconditionViolated("need 0 <= b < n and 1 <= l < n")
    if b + l < n:
        return 1, b + 1, b + l
    return -1, b + l - n + 1, b


# ---------------------------------------------------------------------------
# potentials


def _multisets(n: int, g: int, D: int) -> Iterable[tuple[tuple[int, int], ...]]:
    """Multisets of twisted stationary insertions (a, k), sum k = g, sum a = 0 mod n."""
    slots = [(a, k) for a in range(1, n) for k in range(g + 1)]
    for m in range(1, D + 1):
        for ms in combinations_with_replacement(slots, m):
            if sum(k for _, k in ms) == g and sum(a for a, _ in ms) % n == 0:
                yield ms


def _xreg(n: int, g: int, D: int) -> VarRegistry:
    return VarRegistry.stationary(n, g, D, role="x")


def _yreg(n: int, g: int, D: int) -> VarRegistry:
    return VarRegistry.stationary(n, g, D, role="y")


def stationary_potential_2d(n: int, g: int, D: int, skipped: list | None = None, closed_brackets: bool = False) -> MultiSeries:
    """Genus-g stationary orbifold potential in the fused variables x_{a,k} u_a."""
    if n < 2 or g < 0 or D < 2:
        raise PreconditionViolated("need n >= 2, g >= 0, D >= 2")
    reg = _xreg(n, g, D)
    terms = {}
    for ms in _multisets(n, g, D):
        a = tuple(x for x, _ in ms)
        k = tuple(y for _, y in ms)
        try:
            corr = orbifold_correlator_2d(OrbKey(n, g, a, k), closed=closed_brackets)
        except DegenerateRank:
            if skipped is not None:
                skipped.append({"route": "stationary", "reason": "degenerate_rank", "insertions": _ins_name(ms)})
            continue
        if not corr:
            continue
        sym = 1
        for item in set(ms):
            sym *= factorial(ms.count(item))
        e = reg.exponent({x_name(*item): ms.count(item) for item in set(ms)})
        terms[e] = corr / sym
    return MultiSeries(reg, terms)


def _ins_name(ms) -> str:
    return " ".join(f"tau{k}(e{a})" for a, k in ms)


def _weight_factor(k: int) -> Fraction:
    return Fraction(1, 4**k * double_factorial(2 * k + 1))


def _window_form(reg: VarRegistry, s: int, t: int, g: int) -> MultiSeries:
    """L_{s,t} = sum_k y_{s->t,k} / (4^k (2k+1)!!)."""
    out = MultiSeries(reg)
    for a in range(s, t + 1):
        for k in range(g + 1):
            out = out + MultiSeries.var(reg, y_name(a, k), _weight_factor(k))
    return out


def _weight_exact(s: MultiSeries, g: int) -> MultiSeries:
    ws = [v.weight for v in s.registry.variables]
    return MultiSeries(s.registry, {e: c for e, c in s.terms.items() if sum(x * w for x, w in zip(e, ws)) == g})


def _li_gate(g: int, m: int, route: str, skipped: list | None, strict: bool) -> bool:
    if 2 * g - 3 + m >= 0:
        return True
    if strict:
        raise LiOrderPositive(f"Li_{{{3 - 2 * g - m}}} at g={g}, m={m} is transcendental")
    if skipped is not None:
        skipped.append({"route": route, "reason": "li_order_positive", "degree": m})
    return False


def potential_2d_via_kernel(n: int, g: int, D: int, skipped: list | None = None) -> MultiSeries:
    """Genus-g potential from Bernoulli sums over contiguous windows."""
    reg = _yreg(n, g, D)
    total = MultiSeries(reg)
    sign = -1 if (g - 1) % 2 else 1
    windows = [(s, t) for s in range(1, n) for t in range(s, n)]
    forms = {w: _window_form(reg, *w, g) for w in windows}
    powers = {w: MultiSeries.constant(reg) for w in windows}
    for m in range(1, D + 1):
        for w in windows:
            powers[w] = powers[w] * forms[w]
        N = 2 * g - 2 + m
        if N < 1:
            if skipped is not None:
                skipped.append({"route": "kernel", "reason": "nonpositive_bernoulli_index", "degree": m})
            continue
        for s, t in windows:
            acc = Cyclotomic.rational(0, n)
            for c in range(n):
                acc = acc + Cyclotomic.root(n, c * (t - s + 1)) * bernoulli_poly(N, Fraction(c, n))
            coef = acc * (Fraction(sign * 2) * Fraction(n) ** (2 * g - 3 + m) / (N * factorial(m)))
            total = total + powers[(s, t)].scale(coef)
    return _weight_exact(total, g)


def closed_form_potential_2d(n: int, g: int, D: int, skipped: list | None = None, strict: bool = False) -> MultiSeries:
    """(-1)^g 2 sum_{s<=t} Li_{-(2g-3+m)}(xi_n^{t-s+1}) L_{s,t}^m / m!, weight g part."""
    reg = _yreg(n, g, D)
    total = MultiSeries(reg)
    sign = -1 if g % 2 else 1
    windows = [(s, t) for s in range(1, n) for t in range(s, n)]
    forms = {w: _window_form(reg, *w, g) for w in windows}
    powers = {w: MultiSeries.constant(reg) for w in windows}
    for m in range(1, D + 1):
        for w in windows:
            powers[w] = powers[w] * forms[w]
        if not _li_gate(g, m, "closed", skipped, strict):
            continue
        for s, t in windows:
            li = polylog_neg(2 * g - 3 + m, Cyclotomic.root(n, t - s + 1))
            total = total + powers[(s, t)].scale(li * Fraction(2 * sign, factorial(m)))
    return _weight_exact(total, g)


def _profiles(m: int, g: int) -> Iterable[tuple[int, ...]]:
    """Ordered k-tuples of length m with sum g."""
    if m == 0:
        if g == 0:
            yield ()
        return
    for k in range(g + 1):
        for rest in _profiles(m - 1, g - k):
            yield (k,) + rest


def resolution_potential_2d(n: int, g: int, D: int, skipped: list | None = None, strict: bool = False) -> MultiSeries:
    """Resolution-side potential: ordered insertions y_{l_i,k_i} with all l_i in a
    window [a, b], weighted by the regularized degree sum Li_{-(2g-3+m)}."""
    reg = _yreg(n, g, D)
    sign = -1 if g % 2 else 1
    out: dict = {}
    for m in range(1, D + 1):
        if not _li_gate(g, m, "resolution", skipped, strict):
            continue
        for a in range(1, n):
            for b in range(a, n):
                li = polylog_neg(2 * g - 3 + m, Cyclotomic.root(n, b - a + 1))
                weights: dict = {}
                for ks in _profiles(m, g):
                    w = Fraction(1)
                    for k in ks:
                        w *= _weight_factor(k)
                    for ls in product(range(a, b + 1), repeat=m):
                        e = [0] * len(reg)
                        for l, k in zip(ls, ks):
                            e[reg.index(y_name(l, k))] += 1
                        e = tuple(e)
                        weights[e] = weights.get(e, 0) + w
                scale = li * Fraction(2 * sign, factorial(m))
                for e, w in weights.items():
                    out[e] = out.get(e, 0) + scale * w
    return MultiSeries(reg, out)


# ---------------------------------------------------------------------------
# comparison report


def _compare(lhs: MultiSeries, rhs: MultiSeries, route: str, lo: int, hi: int, report: dict) -> None:
    keys = sorted(set(lhs.terms) | set(rhs.terms))
    reg = rhs.registry
    for e in keys:
        d = sum(e)
        if d < lo:
            report["skipped_low_degree"] += 1
            continue
        if d > hi:
            continue
        left = lhs.terms.get(e, 0)
        right = rhs.terms.get(e, 0)
        report["checked"] += 1
        if left == right:
            report["passed"] += 1
        else:
            report["failed"].append(
                {"route": route, "monomial": reg.monomial_name(e), "lhs": coeff_json(left), "rhs": coeff_json(right)}
            )


def verify_crc2d(n: int, g: int, D: int, route: str = "all") -> dict:
    """Compare every route against the polylog closed form on degrees MIN_DEGREE..D."""
    if D < MIN_DEGREE:
        raise PreconditionViolated(f"max degree must be >= {MIN_DEGREE}")
    if route not in ("all", "stationary", "kernel", "closed", "resolution"):
        raise PreconditionViolated(f"unknown route {route!r}")
    skipped: list = []
    closed = closed_form_potential_2d(n, g, D, skipped)
    report = {
        "config": {"n": n, "g": g, "max_degree": D, "route": route, "min_degree": MIN_DEGREE},
        "checked": 0,
        "passed": 0,
        "failed": [],
        "skipped_low_degree": 0,
        "skipped_terms": skipped,
        "reference_route": "closed",
        "routes": [],
    }
    yreg = closed.registry
    if route in ("all", "stationary", "closed"):
        orb = stationary_potential_2d(n, g, D, skipped)
        cov = ChangeOfVars2D(n)
        pushed = substitute_linear(orb, cov.x_to_y(g), yreg)
        _compare(pushed, closed, "stationary", MIN_DEGREE, D, report)
        report["routes"].append("stationary")
    if route in ("all", "kernel"):
        _compare(potential_2d_via_kernel(n, g, D, skipped), closed, "kernel", MIN_DEGREE, D, report)
        report["routes"].append("kernel")
    if route in ("all", "resolution"):
        _compare(resolution_potential_2d(n, g, D, skipped), closed, "resolution", MIN_DEGREE, D, report)
        report["routes"].append("resolution")
    report["ok"] = not report["failed"]
    return report
