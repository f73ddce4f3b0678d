"""Truncated quotient-ring model for Chern classes of two bundles tied by a
Mumford-type relation c(F) c(F') = 1 (with the second bundle's classes
sign-twisted).

Elements are polynomials in c_1..c_r (deg c_i = i) with Fraction
coefficients, stored as ``{exponent tuple: Fraction}`` and truncated at a
weighted degree cap.  The relation is imposed through the ideal generated by
c'_j for j > rbar, where sum_j c'_j (-u)^j = (sum_i c_i u^i)^{-1}.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product as _cartesian
from math import factorial

__all__ = ["ChernRing", "build_ring", "ch_from_chern", "verify_mumford_consequences"]

Poly = dict  # exponent tuple -> Fraction


def _weight(e: tuple[int, ...]) -> int:
    return sum((i + 1) * x for i, x in enumerate(e))


def _monomials_of_degree(r: int, d: int):
    """All exponent vectors over c_1..c_r of weighted degree d."""
    if r == 0:
        if d == 0:
            yield ()
        return

    def rec(i, left, acc):
        if i == 0:
            if left == 0:
                yield tuple(reversed(acc))
            return
        # i is the generator index (1-based), filled from the top down
        for x in range(left // i + 1):
            yield from rec(i - 1, left - i * x, acc + [x])

    # build c_r .. c_1 then reverse so position 0 is c_1
    yield from rec(r, d, [])


class ChernRing:
    def __init__(self, r1: int, r1bar: int, degree_cap: int):
        if r1 < 0 or r1bar < 0:
            raise ValueError("ranks must be nonnegative")
        self.r1 = r1
        self.r1bar = r1bar
        self.degree_cap = degree_cap
        self.one: Poly = {(0,) * r1: Fraction(1)}
        self.c = [self.one] + [self._gen(i) for i in range(1, r1 + 1)]
        self.cprime = self._invert()
        self.ideal_generators = list(range(r1bar + 1, degree_cap + 1))
        self._echelon: dict[int, list[tuple[tuple, Poly]]] = {}

    # -- arithmetic ---------------------------------------------------------

    def _gen(self, i: int) -> Poly:
        e = [0] * self.r1
        e[i - 1] = 1
        return {tuple(e): Fraction(1)}

    def chern(self, i: int) -> Poly:
        """c_i, with c_0 = 1 and c_i = 0 outside 0..r1."""
        if 0 <= i <= self.r1:
            return self.c[i]
        return {}

    def chern_prime(self, j: int) -> Poly:
        if 0 <= j <= self.degree_cap:
            return self.cprime[j]
        return {}

    def add(self, *ps: Poly) -> Poly:
        out: Poly = {}
        for p in ps:
            for e, v in p.items():
                w = out.get(e, 0) + v
                if w:
                    out[e] = w
                else:
                    out.pop(e, None)
        return out

    def scale(self, p: Poly, s) -> Poly:
        s = Fraction(s)
        if not s:
            return {}
        return {e: v * s for e, v in p.items()}

    def mul(self, p: Poly, q: Poly) -> Poly:
        out: Poly = {}
        for e1, v1 in p.items():
            for e2, v2 in q.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if _weight(e) > self.degree_cap:
                    continue
                w = out.get(e, 0) + v1 * v2
                if w:
                    out[e] = w
                else:
                    out.pop(e, None)
        return out

    def _invert(self) -> list[Poly]:
        # s_j with (sum c_i u^i)(sum s_j u^j) = 1, then c'_j = (-1)^j s_j
        s: list[Poly] = [self.one]
        for j in range(1, self.degree_cap + 1):
            acc: Poly = {}
            for i in range(1, min(j, self.r1) + 1):
                acc = self.add(acc, self.mul(self.c[i], s[j - i]))
            s.append(self.scale(acc, -1))
        return [self.scale(sj, (-1) ** j) for j, sj in enumerate(s)]

    # -- ideal membership ---------------------------------------------------

    def _basis(self, d: int) -> list[tuple[tuple, Poly]]:
        """Reduced echelon basis of the degree-d part of the ideal."""
        if d in self._echelon:
            return self._echelon[d]
        rows: list[tuple[tuple, Poly]] = []
        for j in self.ideal_generators:
            if j > d:
                break
            for mono in _monomials_of_degree(self.r1, d - j):
                v = self.mul({mono: Fraction(1)}, self.cprime[j])
                v = self._reduce_with(v, rows)
                if v:
                    piv = max(v)
                    v = self.scale(v, 1 / v[piv])
                    rows = [(p, self.add(r, self.scale(v, -r.get(piv, 0)))) if piv in r else (p, r) for p, r in rows]
                    rows.append((piv, v))
        self._echelon[d] = rows
        return rows

    @staticmethod
    def _reduce_with(p: Poly, rows) -> Poly:
        out = dict(p)
        for piv, r in rows:
            c = out.get(piv)
            if c:
                for e, v in r.items():
                    w = out.get(e, 0) - c * v
                    if w:
                        out[e] = w
                    else:
                        out.pop(e, None)
        return out

    def reduce(self, p: Poly) -> Poly:
        """Normal form modulo the ideal (homogeneous pieces reduced separately)."""
        by_deg: dict[int, Poly] = {}
        for e, v in p.items():
            by_deg.setdefault(_weight(e), {})[e] = v
        out: Poly = {}
        for d, part in sorted(by_deg.items()):
            out.update(self._reduce_with(part, self._basis(d)))
        return out

    def is_zero_mod(self, p: Poly) -> bool:
        return not self.reduce(p)

    def format(self, p: Poly) -> str:
        if not p:
            return "0"
        terms = []
        for e in sorted(p):
            mono = "*".join(f"c{i + 1}" + (f"^{x}" if x > 1 else "") for i, x in enumerate(e) if x)
            terms.append(f"{p[e]}" + (f"*{mono}" if mono else ""))
        return " + ".join(terms)

    def monomial_name(self, e: tuple) -> str:
        s = "*".join(f"c{i + 1}" + (f"^{x}" if x > 1 else "") for i, x in enumerate(e) if x)
        return s or "1"


def build_ring(r1: int, r1bar: int, degree_cap: int) -> ChernRing:
    return ChernRing(r1, r1bar, degree_cap)


def ch_from_chern(ring: ChernRing, k: int) -> Poly:
    """ch_k via Newton's identities: ch_k = p_k / k!, ch_0 = rank."""
    if k == 0:
        return ring.scale(ring.one, ring.r1)
    p: list[Poly] = [{}]
    for j in range(1, k + 1):
        acc = ring.scale(ring.chern(j), (-1) ** (j - 1) * j)
        for i in range(1, j):
            acc = ring.add(acc, ring.scale(ring.mul(ring.chern(i), p[j - i]), (-1) ** (i - 1)))
        p.append(acc)
    return ring.scale(p[k], Fraction(1, factorial(k)))


def verify_mumford_consequences(r1: int, r1bar: int, degree_cap: int | None = None) -> dict:
    """Check the Newton/Mumford consequences up to degree r1 + r1bar.

    Returns a report whose ``failed`` list carries a witness monomial (the
    leading surviving monomial of the reduced difference) for each failure.
    """
    top = r1 + r1bar
    if top < 1:
        raise ValueError("need r1 + r1bar >= 1")
    ring = build_ring(r1, r1bar, degree_cap if degree_cap is not None else top)
    sign = (-1) ** (r1 - 1)
    c, cp = ring.chern, ring.chern_prime
    checks: list[tuple[str, int, Poly, bool]] = []  # (name, degree, difference, free-ring?)

    for k in range(top + 1):
        lhs = ring.scale(ch_from_chern(ring, k), factorial(k))
        rhs: Poly = {}
        for i in range(1, k + 1):
            rhs = ring.add(rhs, ring.scale(ring.mul(c(i), cp(k - i)), (-1) ** (i - 1) * i))
        if k == 0:
            continue  # ch_0 is the rank, not a Newton sum
        checks.append((f"newton_k{k}", k, ring.add(lhs, ring.scale(rhs, -1)), True))

    checks.append(("top_product_vanishes", top, ring.mul(c(r1), cp(r1bar)), False))
    checks.append(
        (
            "shifted_products_agree",
            top - 1,
            ring.add(ring.mul(c(r1 - 1), cp(r1bar)), ring.scale(ring.mul(c(r1), cp(r1bar - 1)), -1)),
            False,
        )
    )
    lead = ring.scale(ch_from_chern(ring, top - 1), factorial(top - 1))
    checks.append(
        ("leading_ch_equals_product", top - 1, ring.add(lead, ring.scale(ring.mul(c(r1 - 1), cp(r1bar)), -sign)), False)
    )
    checks.append(("ch_top_vanishes", top, ch_from_chern(ring, top), False))

    # equivariant product (sum c_i t1^{r1-i})(sum_{j<=r1bar} c'_j t2^{r1bar-j}), degree top-1 part
    t1_coef: Poly = {}
    t2_coef: Poly = {}
    for i, j in _cartesian(range(r1 + 1), range(r1bar + 1)):
        if i + j != top - 1:
            continue
        term = ring.mul(c(i), cp(j))
        if r1 - i == 1:
            t1_coef = ring.add(t1_coef, term)
        else:
            t2_coef = ring.add(t2_coef, term)
    target = ring.scale(lead, sign)
    checks.append(("product_t1_coefficient", top - 1, ring.add(t1_coef, ring.scale(target, -1)), False))
    checks.append(("product_t2_coefficient", top - 1, ring.add(t2_coef, ring.scale(target, -1)), False))

    results = []
    failed = []
    for name, deg, diff, free in checks:
        residue = diff if free else ring.reduce(diff)
        ok = not residue
        entry = {"name": name, "degree": deg, "passed": ok}
        if not ok:
            witness = max(residue)
            entry["witness"] = {"monomial": ring.monomial_name(witness), "coefficient": str(residue[witness])}
            failed.append(entry)
        results.append(entry)
    return {
        "r1": r1,
        "r1bar": r1bar,
        "degree_cap": ring.degree_cap,
        "checked": len(results),
        "checks": results,
        "failed": failed,
        "passed": not failed,
    }
