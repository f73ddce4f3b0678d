"""Genus-g potentials of [C^2/Z_n] x C and of its crepant resolution.

Orbifold side: lambda_g Hurwitz-Hodge correlators summed over twisted
insertions, or the polylog closed form in v_{s->t}.  Resolution side: the
closed k_g d^{2g-3} formula, and the two-leg topological vertex glued along
the chain of exceptional curves, expanded as q^{1/2}-series.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial
from typing import Iterable, Iterator, Sequence

from .errors import DegenerateDegree, LiOrderPositive, PreconditionViolated
from .exact import Cyclotomic, polylog_neg
from .hodge import k_coefficient, orbifold_correlator_3d
from .series import MultiSeries, Var, VarRegistry, coeff_json, q_name, substitute_linear, u_name

log = logging.getLogger(__name__)

__all__ = [
    "ChangeOfVars3D",
    "Partition",
    "partitions",
    "QHalfSeries",
    "orbifold_potential_3d",
    "closed_form_potential_3d",
    "resolution_potential_3d_closed",
    "skew_schur_principal",
    "vertex_W",
    "vertex_partition_sum",
    "CONVENTIONS",
    "verify_vertex_product",
    "verify_crc3d",
]

MIN_DEGREE = 4


class ChangeOfVars3D:
    """v_j = sum_k C[j][k] u_k with C[j][k] = (xi_{2n}^k - xi_{2n}^{-k}) xi_n^{jk} / n."""

    def __init__(self, n: int):
        if n < 2:
            raise PreconditionViolated("n must be >= 2")
        self.n = n
        N2 = 2 * n
        self.coeff = {
            (j, k): (Cyclotomic.root(N2, k) - Cyclotomic.root(N2, -k)) * Cyclotomic.root(N2, 2 * j * k) * Fraction(1, n)
            for j in range(1, n)
            for k in range(1, n)
        }

    def window(self, s: int, t: int) -> dict[str, Cyclotomic]:
        """v_{s->t} = v_s + ... + v_t as a linear form in the u_k."""
        out = {}
        for k in range(1, self.n):
            out[u_name(k)] = sum((self.coeff[(j, k)] for j in range(s, t + 1)), Cyclotomic.rational(0, 2 * self.n))
        return out


# ---------------------------------------------------------------------------
# partitions


class Partition(tuple):
    """Weakly decreasing positive parts."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(p for p in parts if p)
        if any(p < 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"not a partition: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def kappa(self) -> int:
        return sum(p * (p - 2 * i + 1) for i, p in enumerate(self, start=1))

    def conjugate(self) -> "Partition":
        if not self:
            return self
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def contains(self, other: "Partition") -> bool:
        return len(other) <= len(self) and all(a >= b for a, b in zip(self, other))

    def __repr__(self):
        return f"Partition({list(self)})"


@lru_cache(maxsize=None)
def partitions(size: int, max_part: int | None = None) -> tuple[Partition, ...]:
    if max_part is None:
        max_part = size
    if size == 0:
        return (Partition(),)
    out = []
    for first in range(min(size, max_part), 0, -1):
        for rest in partitions(size - first, first):
            out.append(Partition((first,) + tuple(rest)))
    return tuple(out)


def subpartitions(mu: Partition) -> Iterator[Partition]:
    def rec(i, bound):
        if i == len(mu):
            yield ()
            return
        for p in range(min(mu[i], bound), -1, -1):
            for rest in rec(i + 1, p):
                yield (p,) + rest

    for parts in rec(0, mu[0] if mu else 0):
        yield Partition(parts)


# ---------------------------------------------------------------------------
# q^{1/2}-series


class QHalfSeries:
    """Truncated Laurent series in s = q^{1/2}.

    ``coeffs`` maps integer exponents of s to Fractions; every exponent below
    ``prec`` is exact and nothing at or above it is known.
    """

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: dict[int, Fraction] | None = None, prec: int = 0):
        self.prec = prec
        self.coeffs = {e: Fraction(c) for e, c in (coeffs or {}).items() if c and e < prec}

    @classmethod
    def one(cls, prec: int) -> "QHalfSeries":
        return cls({0: 1}, prec)

    def valuation(self) -> int:
        return min(self.coeffs) if self.coeffs else self.prec

    def __add__(self, other: "QHalfSeries") -> "QHalfSeries":
        prec = min(self.prec, other.prec)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return QHalfSeries(out, prec)

    def __neg__(self):
        return QHalfSeries({e: -c for e, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "QHalfSeries":
        return QHalfSeries({e: c * s for e, c in self.coeffs.items()}, self.prec)

    def shift(self, k: int) -> "QHalfSeries":
        """Multiply by s^k."""
        return QHalfSeries({e + k: c for e, c in self.coeffs.items()}, self.prec + k)

    def __mul__(self, other):
        if not isinstance(other, QHalfSeries):
            return self.scale(other)
        prec = min(self.prec + other.valuation(), other.prec + self.valuation())
        out: dict[int, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e < prec:
                    out[e] = out.get(e, 0) + c1 * c2
        return QHalfSeries(out, prec)

    __rmul__ = __mul__

    def truncate(self, prec: int) -> "QHalfSeries":
        if prec > self.prec:
            raise PreconditionViolated(f"series only known below s^{self.prec}")
        return QHalfSeries(self.coeffs, prec)

    def is_zero(self) -> bool:
        return not self.coeffs

    def agrees(self, other: "QHalfSeries", prec: int) -> bool:
        if prec > min(self.prec, other.prec):
            return False
        keys = {e for e in self.coeffs if e < prec} | {e for e in other.coeffs if e < prec}
        return all(self.coeffs.get(e, 0) == other.coeffs.get(e, 0) for e in keys)

    def to_json(self) -> dict:
        return {"half_exponents": {str(e): str(c) for e, c in sorted(self.coeffs.items())}, "prec": self.prec}

    def __repr__(self):
        body = " + ".join(f"({c})*s^{e}" for e, c in sorted(self.coeffs.items()))
        return f"QHalfSeries({body or '0'} + O(s^{self.prec}))"


@lru_cache(maxsize=None)
def _h_principal(k: int, prec: int) -> QHalfSeries:
    """h_k(q^{-rho}) = q^{k/2} / prod_{j<=k}(1-q^j)."""
    if k < 0:
        return QHalfSeries({}, prec)
    if k == 0:
        return QHalfSeries.one(prec)
    # partitions of N into parts <= k, N up to the precision
    top = max((prec - k + 1) // 2, 0)
    counts = [1] + [0] * top
    for part in range(1, k + 1):
        for N in range(part, top + 1):
            counts[N] += counts[N - part]
    return QHalfSeries({k + 2 * N: c for N, c in enumerate(counts)}, prec)


def _det(matrix: list[list[QHalfSeries]], prec: int) -> QHalfSeries:
    size = len(matrix)
    if size == 0:
        return QHalfSeries.one(prec)
    if size == 1:
        return matrix[0][0]
    total = QHalfSeries({}, prec)
    for j in range(size):
        entry = matrix[0][j]
        if entry.is_zero() and entry.prec >= prec:
            continue
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = entry * _det(minor, prec)
        total = total + (term if j % 2 == 0 else -term)
    return total


def skew_schur_principal(mu: Sequence[int], eta: Sequence[int], prec: int) -> QHalfSeries:
    """s_{mu/eta}(q^{-rho}) by Jacobi-Trudi, exact below s^prec (s = q^{1/2})."""
    mu, eta = Partition(mu), Partition(eta)
    if not mu.contains(eta):
        return QHalfSeries({}, prec)
    ell = len(mu)
    et = list(eta) + [0] * (ell - len(eta))
    matrix = [[_h_principal(mu[i] - et[j] - i + j, prec) for j in range(ell)] for i in range(ell)]
    return _det(matrix, prec)


def vertex_W(mu: Sequence[int], nu: Sequence[int], prec: int, eta_sign: bool = False) -> QHalfSeries:
    """(-1)^{|mu|+|nu|} q^{(kappa_mu + kappa_nu)/2} sum_eta s_{mu/eta} s_{nu/eta} at q^{-rho}.

    Exact below s^prec before the framing shift is applied; the returned
    precision accounts for the shift.  ``eta_sign`` weights each eta by (-1)^{|eta|}.
    """
    mu, nu = Partition(mu), Partition(nu)
    total = QHalfSeries({}, prec)
    for eta in subpartitions(mu):
        if not nu.contains(eta):
            continue
        term = skew_schur_principal(mu, eta, prec) * skew_schur_principal(nu, eta, prec)
        if eta_sign and eta.size % 2:
            term = -term
        total = total + term
    if (mu.size + nu.size) % 2:
        total = -total
    return total.shift(mu.kappa + nu.kappa)


# ---------------------------------------------------------------------------
# orbifold side


def _umultisets(n: int, D: int) -> Iterable[tuple[int, ...]]:
    for m in range(1, D + 1):
        for ms in combinations_with_replacement(range(1, n), m):
            if sum(ms) % n == 0:
                yield ms


def _ureg(n: int, D: int) -> VarRegistry:
    return VarRegistry.sectors(n, D)


def orbifold_potential_3d(n: int, g: int, D: int, skipped: list | None = None) -> MultiSeries:
    """Genus-g orbifold potential in u_1..u_{n-1}."""
    reg = _ureg(n, D)
    terms = {}
    for ms in _umultisets(n, D):
        try:
            corr = orbifold_correlator_3d(n, g, ms)
        except DegenerateDegree:
            if skipped is not None:
                skipped.append({"route": "orbifold", "reason": "degenerate_degree", "insertions": list(ms)})
            continue
        except PreconditionViolated:
            continue  # fewer than two insertions
        if not corr:
            continue
        sym = 1
        for a in set(ms):
            sym *= factorial(ms.count(a))
        terms[reg.exponent({u_name(a): ms.count(a) for a in set(ms)})] = corr / sym
    return MultiSeries(reg, terms)


def closed_form_potential_3d(n: int, g: int, D: int, skipped: list | None = None, strict: bool = False) -> MultiSeries:
    """-k_g sum_{s<=t} Li_{-(2g-3+m)}(xi_n^{t-s+1}) v_{s->t}^m / m!, expanded in u.

    The overall minus sign is what the lambda_g integrals produce; the
    resolution-side closed formula below carries the opposite sign.
    """
    return _closed_3d(n, g, D, -1, skipped, strict)


def _closed_3d(n: int, g: int, D: int, sign: int, skipped, strict) -> MultiSeries:
    ureg = _ureg(n, D)
    vreg = VarRegistry((Var("v", "v"),), D)
    cov = ChangeOfVars3D(n)
    kg = k_coefficient(g)
    total = MultiSeries(ureg)
    v = MultiSeries.var(vreg, "v")
    for m in range(1, D + 1):
        if 2 * g - 3 + m < 0:
            if strict:
                raise LiOrderPositive(f"Li order {3 - 2 * g - m} > 0 at g={g}, m={m}")
            if skipped is not None:
                skipped.append({"route": "closed", "reason": "li_order_positive", "degree": m})
            continue
        vm = v ** m
        for s in range(1, n):
            for t in range(s, n):
                li = polylog_neg(2 * g - 3 + m, Cyclotomic.root(n, t - s + 1))
                piece = substitute_linear(vm, {"v": cov.window(s, t)}, ureg)
                total = total + piece.scale(li * Fraction(sign, factorial(m)) * kg)
    return total


def resolution_potential_3d_closed(n: int, g_max: int, D_Q: int) -> dict[int, MultiSeries]:
    """Per genus: sum_{a<=b} sum_d k_g d^{2g-3} prod_{i=a}^b Q_i^d, Q-degree <= D_Q."""
    reg = VarRegistry(tuple(Var(q_name(i), "Q", (i,)) for i in range(1, n)), D_Q)
    out = {}
    for g in range(g_max + 1):
        kg = k_coefficient(g)
        terms = {}
        for a in range(1, n):
            for b in range(a, n):
                w = b - a + 1
                for d in range(1, D_Q // w + 1):
                    e = reg.exponent({q_name(i): d for i in range(a, b + 1)})
                    terms[e] = kg * Fraction(d) ** (2 * g - 3)
        out[g] = MultiSeries(reg, terms)
    return out


# ---------------------------------------------------------------------------
# vertex side

CONVENTIONS = tuple(
    (sign, conj) for sign in ("none", "mu", "mu_eta") for conj in (False, True)
)


FRAMINGS = ("kappa", "none")


def convention_name(sign: str, conjugate: bool, framing: str = "kappa") -> str:
    name = f"sign={sign},conjugate={'yes' if conjugate else 'no'}"
    return name if framing == "kappa" else f"{name},framing={framing}"


class _QPoly:
    """Truncated series in Q_1..Q_{n-1} with QHalfSeries coefficients."""

    def __init__(self, nvars: int, cap: int, terms: dict | None = None):
        self.nvars = nvars
        self.cap = cap
        self.terms: dict[tuple[int, ...], QHalfSeries] = terms or {}

    def mul(self, other: "_QPoly") -> "_QPoly":
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if sum(e) > self.cap:
                    continue
                prod = c1 * c2
                out[e] = out[e] + prod if e in out else prod
        return _QPoly(self.nvars, self.cap, out)

    def add(self, other: "_QPoly", scale: Fraction = Fraction(1)) -> "_QPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            c = c.scale(scale)
            out[e] = out[e] + c if e in out else c
        return _QPoly(self.nvars, self.cap, out)

    def log(self) -> "_QPoly":
        zero = (0,) * self.nvars
        const = self.terms.get(zero)
        if const is None or const.coeffs != {0: 1}:
            raise PreconditionViolated("log needs constant term 1")
        t = _QPoly(self.nvars, self.cap, {e: c for e, c in self.terms.items() if e != zero})
        out = _QPoly(self.nvars, self.cap)
        power = _QPoly(self.nvars, self.cap, {zero: const})
        for j in range(1, self.cap + 1):
            power = power.mul(t)
            if not power.terms:
                break
            out = out.add(power, Fraction((-1) ** (j + 1), j))
        return out


def _chains(n: int, D_Q: int) -> Iterator[tuple[Partition, ...]]:
    """(n-1)-tuples of partitions with total size <= D_Q."""

    def rec(i, left):
        if i == n - 1:
            yield ()
            return
        for size in range(left + 1):
            for mu in partitions(size):
                for rest in rec(i + 1, left - size):
                    yield (mu,) + rest

    yield from rec(0, D_Q)


def vertex_partition_sum(
    n: int, D_Q: int, prec: int, convention: tuple[str, bool] = ("none", False), framing: str = "kappa"
) -> _QPoly:
    """log of sum over chains of prod W_{mu^{i-1}, mu^i} q^{-kappa_{mu^i}} Q_i^{|mu^i|}.

    ``prec`` is the working precision in powers of q^{1/2}.  Conventions:
    sign "mu" weights each chain by (-1)^{sum |mu^i|}, "mu_eta" additionally
    weights each eta in W by (-1)^{|eta|}; ``conjugate`` glues the incoming
    leg of every vertex with the conjugate partition.  ``framing="none"``
    drops the q^{-kappa} edge factors.
    """
    sign, conj = convention
    if sign not in ("none", "mu", "mu_eta"):
        raise PreconditionViolated(f"unknown sign convention {sign!r}")
    if framing not in FRAMINGS:
        raise PreconditionViolated(f"unknown framing {framing!r}")
    eta_sign = sign == "mu_eta"
    poly = _QPoly(n - 1, D_Q)
    empty = Partition()
    for chain in _chains(n, D_Q):
        legs = (empty,) + chain + (empty,)
        term = QHalfSeries.one(prec)
        for i in range(1, n + 1):
            left = legs[i - 1].conjugate() if conj else legs[i - 1]
            term = term * _vertex_cached(left, legs[i], prec, eta_sign)
        if framing == "kappa":
            for mu in chain:
                term = term.shift(-2 * mu.kappa)
        if sign in ("mu", "mu_eta") and sum(mu.size for mu in chain) % 2:
            term = -term
        e = tuple(mu.size for mu in chain)
        poly.terms[e] = poly.terms[e] + term if e in poly.terms else term
    return poly.log()


@lru_cache(maxsize=None)
def _vertex_cached(mu: Partition, nu: Partition, prec: int, eta_sign: bool) -> QHalfSeries:
    return vertex_W(mu, nu, prec, eta_sign)


def _target(n: int, D_Q: int, prec: int, negate: bool = False) -> dict[tuple[int, ...], QHalfSeries]:
    """sum_{a<=b} sum_d prod_{k=a}^b Q_k^d / d * (-q^d/(1-q^d)^2)."""
    out = {}
    for a in range(1, n):
        for b in range(a, n):
            w = b - a + 1
            for d in range(1, D_Q // w + 1):
                e = tuple(d if a <= i + 1 <= b else 0 for i in range(n - 1))
                coeffs = {}
                m = 1
                while 2 * m * d < prec:
                    coeffs[2 * m * d] = Fraction(-m, d) * (-1 if negate else 1)
                    m += 1
                out[e] = QHalfSeries(coeffs, prec)
    return out


def _is_window(e: tuple[int, ...]) -> bool:
    nz = [i for i, x in enumerate(e) if x]
    if not nz:
        return False
    return nz == list(range(nz[0], nz[-1] + 1)) and len({e[i] for i in nz}) == 1


def _vertex_log(n: int, D_Q: int, O_q: int, convention, framing: str) -> tuple[_QPoly, int]:
    """Log of the vertex sum, exact through q^{O_q}; the working precision grows until it is."""
    want = 2 * O_q + 1
    extra = 4 * D_Q * D_Q + 4
    while True:
        poly = vertex_partition_sum(n, D_Q, want + extra, convention, framing)
        if all(c.prec >= want for c in poly.terms.values()):
            return poly, want
        extra *= 2


def verify_vertex_product(n: int, D_Q: int, O_q: int, framings: Sequence[str] = ("kappa",)) -> dict:
    """Compare the glued vertex sum with the closed product formula under each convention.

    The target is sum_{a<=b} sum_d prod Q_k^d / d * (-q^d/(1-q^d)^2).  Every
    convention is also compared with the negated target, which is what the
    untwisted gluing produces.  Passing ``framings=("kappa", "none")``
    widens the search to gluings without the q^{-kappa} edge factors.
    """
    if n < 2 or D_Q < 1 or O_q < 1:
        raise PreconditionViolated("need n >= 2, D_Q >= 1, O_q >= 1")
    rows = []
    matching = []
    matching_negated = []
    for framing, convention in ((f, c) for f in framings for c in CONVENTIONS):
        poly, want = _vertex_log(n, D_Q, O_q, convention, framing)
        target = _target(n, D_Q, want)
        negated = _target(n, D_Q, want, negate=True)
        keys = sorted(set(poly.terms) | set(target))
        non_window = []
        mism = []
        neg_ok = True
        for e in keys:
            lhs = poly.terms.get(e, QHalfSeries({}, want)).truncate(want)
            if not _is_window(e):
                if not lhs.is_zero():
                    non_window.append(_qmono(e))
                continue
            rhs = target.get(e, QHalfSeries({}, want))
            if not lhs.agrees(rhs, want):
                mism.append(_qmono(e))
            if not lhs.agrees(negated.get(e, QHalfSeries({}, want)), want):
                neg_ok = False
        name = convention_name(*convention, framing)
        ok = not mism and not non_window
        if neg_ok and not non_window:
            matching_negated.append(name)
        rows.append(
            {
                "convention": name,
                "matches_product": ok,
                "matches_negated_product": neg_ok and not non_window,
                "mismatched_monomials": mism,
                "non_window_monomials": non_window,
                "log_monomials": [_qmono(e) for e in sorted(poly.terms) if not poly.terms[e].truncate(want).is_zero()],
            }
        )
        if ok:
            matching.append(name)
    if not matching:
        failed = [
            {"convention": r["convention"], "mismatched": r["mismatched_monomials"], "non_window": r["non_window_monomials"]}
            for r in rows
        ]
    elif len(matching) > 1:
        failed = [{"reason": "ambiguous_convention", "conventions": matching}]
    else:
        failed = []
    return {
        "config": {"n": n, "Q_degree": D_Q, "q_order": O_q, "framings": list(framings)},
        "checked": len(rows),
        "passed": len(matching),
        "failed": failed,
        "conventions": rows,
        "matching_conventions": matching,
        "matching_negated_conventions": matching_negated,
        "gluing_convention": matching[0] if len(matching) == 1 else None,
        "ok": len(matching) == 1,
    }


def _qmono(e: tuple[int, ...]) -> str:
    return "*".join(q_name(i + 1) + (f"^{x}" if x > 1 else "") for i, x in enumerate(e) if x) or "1"


# ---------------------------------------------------------------------------
# CRC-3D report


def verify_crc3d(n: int, g_max: int, D: int) -> dict:
    """Orbifold potential against the polylog closed form, genus by genus, degrees MIN_DEGREE..D."""
    if D < MIN_DEGREE:
        raise PreconditionViolated(f"max degree must be >= {MIN_DEGREE}")
    skipped: list = []
    report = {
        "config": {"n": n, "gmax": g_max, "max_degree": D, "min_degree": MIN_DEGREE},
        "checked": 0,
        "passed": 0,
        "failed": [],
        "skipped_low_degree": 0,
        "skipped_terms": skipped,
        "opposite_to_resolution_sign": 0,
        "rational": True,
    }
    for g in range(g_max + 1):
        orb = orbifold_potential_3d(n, g, D, skipped)
        closed = closed_form_potential_3d(n, g, D, skipped)
        reg = closed.registry
        for e in sorted(set(orb.terms) | set(closed.terms)):
            d = sum(e)
            if d < MIN_DEGREE:
                report["skipped_low_degree"] += 1
                continue
            lhs = orb.terms.get(e, Fraction(0))
            rhs = closed.terms.get(e, 0)
            if isinstance(rhs, Cyclotomic) and not rhs.is_rational():
                report["rational"] = False
            report["checked"] += 1
            if lhs == rhs:
                report["passed"] += 1
                if lhs:
                    report["opposite_to_resolution_sign"] += 1
            else:
                report["failed"].append(
                    {"genus": g, "monomial": reg.monomial_name(e), "lhs": coeff_json(lhs), "rhs": coeff_json(rhs)}
                )
    report["ok"] = not report["failed"] and report["rational"]
    return report
