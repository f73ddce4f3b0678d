"""Truncated sparse multivariate power series with exact coefficients.

A series lives over a :class:`VarRegistry` (ordered variable names, each with
a role and an integer weight) and is truncated by total degree, by optional
per-variable caps and by an optional cap on the total weight.  Coefficients
are Fractions or Cyclotomics; the two mix freely.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence

from .errors import BadConstantTerm, OutOfTruncation, RegistryMismatch
from .exact import Cyclotomic

__all__ = ["Var", "VarRegistry", "MultiSeries", "substitute_linear", "coefficient"]


@dataclass(frozen=True)
class Var:
    name: str
    role: str = "x"
    index: tuple = ()
    weight: int = 0


def x_name(a: int, k: int) -> str:
    return f"x{a}_{k}"


def y_name(a: int, k: int) -> str:
    return f"y{a}_{k}"


def u_name(a: int) -> str:
    return f"u{a}"


def q_name(i: int) -> str:
    return f"Q{i}"


@dataclass(frozen=True)
class VarRegistry:
    variables: tuple[Var, ...]
    total_cap: int
    weight_cap: int | None = None
    var_caps: tuple[tuple[str, int], ...] = ()
    _pos: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise RegistryMismatch("variable names must be unique")
        object.__setattr__(self, "_pos", {nm: i for i, nm in enumerate(names)})

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    def index(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise RegistryMismatch(f"unknown variable {name!r}") from None

    def __len__(self):
        return len(self.variables)

    # -- common registries --------------------------------------------------

    @classmethod
    def stationary(cls, n: int, kmax: int, total_cap: int, role: str = "x") -> "VarRegistry":
        """Variables (a, k), a = 1..n-1, k = 0..kmax, weighted by k.

        Role "x" is the fused product x_{a,k} u_a; role "y" the resolution side.
        """
        mk = x_name if role == "x" else y_name
        vs = tuple(Var(mk(a, k), role, (a, k), k) for a in range(1, n) for k in range(kmax + 1))
        return cls(vs, total_cap, kmax)

    @classmethod
    def sectors(cls, n: int, total_cap: int, role: str = "u") -> "VarRegistry":
        mk = u_name if role == "u" else (lambda a: f"v{a}")
        return cls(tuple(Var(mk(a), role, (a,)) for a in range(1, n)), total_cap)

    def admits(self, e: Sequence[int]) -> bool:
        if sum(e) > self.total_cap:
            return False
        if self.weight_cap is not None:
            w = sum(x * v.weight for x, v in zip(e, self.variables) if x)
            if w > self.weight_cap:
                return False
        for nm, cap in self.var_caps:
            if e[self._pos[nm]] > cap:
                return False
        return True

    def monomial_name(self, e: Sequence[int]) -> str:
        parts = [(v.name, x) for v, x in zip(self.variables, e) if x]
        parts.sort()
        return "*".join(nm if x == 1 else f"{nm}^{x}" for nm, x in parts) or "1"

    def exponent(self, mono: Mapping[str, int] | Sequence[int]) -> tuple[int, ...]:
        if isinstance(mono, Mapping):
            e = [0] * len(self.variables)
            for nm, x in mono.items():
                e[self.index(nm)] = x
            return tuple(e)
        e = tuple(mono)
        if len(e) != len(self.variables):
            raise RegistryMismatch("exponent vector has the wrong length")
        return e


def _is_zero(c) -> bool:
    return not c


class MultiSeries:
    """Immutable truncated series: ``{exponent tuple: coefficient}``."""

    __slots__ = ("registry", "terms")

    def __init__(self, registry: VarRegistry, terms: Mapping | Iterable = ()):
        self.registry = registry
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: dict = {}
        for e, c in items:
            e = registry.exponent(e)
            if not registry.admits(e):
                continue
            s = out.get(e, 0) + c
            if _is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        self.terms = out

    @classmethod
    def _trusted(cls, registry: VarRegistry, terms: dict) -> "MultiSeries":
        obj = cls.__new__(cls)
        obj.registry = registry
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, registry: VarRegistry, c=1) -> "MultiSeries":
        return cls(registry, {(0,) * len(registry): c})

    @classmethod
    def var(cls, registry: VarRegistry, name: str, c=1) -> "MultiSeries":
        e = [0] * len(registry)
        e[registry.index(name)] = 1
        return cls(registry, {tuple(e): c})

    def _check(self, other: "MultiSeries") -> None:
        if other.registry != self.registry:
            raise RegistryMismatch("series live over different registries")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, MultiSeries):
            other = MultiSeries.constant(self.registry, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if _is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return MultiSeries._trusted(self.registry, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiSeries._trusted(self.registry, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, MultiSeries) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "MultiSeries":
        if _is_zero(s):
            return MultiSeries._trusted(self.registry, {})
        out = {}
        for e, c in self.terms.items():
            v = c * s
            if not _is_zero(v):
                out[e] = v
        return MultiSeries._trusted(self.registry, out)

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            return self.scale(other)
        self._check(other)
        reg = self.registry
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if not reg.admits(e):
                    continue
                s = out.get(e, 0) + c1 * c2
                if _is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return MultiSeries._trusted(reg, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> "MultiSeries":
        out = MultiSeries.constant(self.registry)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        if self.registry != other.registry or self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    def __bool__(self):
        return bool(self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.registry), 0)

    def homogeneous(self, degree: int) -> "MultiSeries":
        return MultiSeries._trusted(self.registry, {e: c for e, c in self.terms.items() if sum(e) == degree})

    def exp(self) -> "MultiSeries":
        if not _is_zero(self.constant_term()):
            raise BadConstantTerm("exp needs a zero constant term")
        out = MultiSeries.constant(self.registry)
        term = MultiSeries.constant(self.registry)
        for j in range(1, self.registry.total_cap + 1):
            term = (term * self).scale(Fraction(1, j))
            if not term:
                break
            out = out + term
        return out

    def log(self) -> "MultiSeries":
        if self.constant_term() != 1:
            raise BadConstantTerm("log needs constant term 1")
        t = self - 1
        out = MultiSeries._trusted(self.registry, {})
        power = MultiSeries.constant(self.registry)
        for j in range(1, self.registry.total_cap + 1):
            power = power * t
            if not power:
                break
            out = out + power.scale(Fraction((-1) ** (j + 1), j))
        return out

    # -- extraction and output ---------------------------------------------

    def coefficient(self, mono: Mapping[str, int] | Sequence[int]):
        e = self.registry.exponent(mono)
        if not self.registry.admits(e):
            raise OutOfTruncation(f"{self.registry.monomial_name(e)} lies beyond the truncation")
        return self.terms.get(e, Fraction(0))

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        names = self.registry.names

        def key(e):
            return sorted((names[i], x) for i, x in enumerate(e) if x)

        return sorted(self.terms.items(), key=lambda kv: key(kv[0]))

    def to_json(self) -> dict:
        names = self.registry.names
        terms = []
        for e, c in self.sorted_terms():
            terms.append({"exp": {names[i]: x for i, x in sorted(enumerate(e), key=lambda p: names[p[0]]) if x}, "coeff": coeff_json(c)})
        return {"vars": sorted(names), "terms": terms}

    def __repr__(self):
        body = " + ".join(f"({c})*{self.registry.monomial_name(e)}" for e, c in self.sorted_terms())
        return f"MultiSeries({body or '0'})"


def coeff_json(c) -> dict:
    if isinstance(c, Cyclotomic):
        return c.to_json()
    return Cyclotomic.rational(Fraction(c)).to_json()


def coefficient(s: MultiSeries, mono) -> object:
    return s.coefficient(mono)


def _linear_power(form: dict[int, object], e: int, nvars: int) -> dict[tuple, object]:
    """(sum_j c_j z_j)^e expanded as {exponent: coefficient}."""
    out: dict[tuple, object] = {(0,) * nvars: Fraction(1)}
    items = list(form.items())
    for _ in range(e):
        nxt: dict = {}
        for ex, c in out.items():
            for j, cj in items:
                ex2 = list(ex)
                ex2[j] += 1
                ex2 = tuple(ex2)
                s = nxt.get(ex2, 0) + c * cj
                if _is_zero(s):
                    nxt.pop(ex2, None)
                else:
                    nxt[ex2] = s
        out = nxt
    return out


def substitute_linear(
    s: MultiSeries, mapping: Mapping[str, Mapping[str, object]], target: VarRegistry | None = None
) -> MultiSeries:
    """Replace each source variable by a linear form in target variables.

    Source variables absent from ``mapping`` must exist in the target and map
    to themselves.
    """
    target = target or s.registry
    src = s.registry
    forms: list[dict[int, object]] = []
    for v in src.variables:
        if v.name in mapping:
            forms.append({target.index(t): c for t, c in mapping[v.name].items() if not _is_zero(c)})
        else:
            forms.append({target.index(v.name): Fraction(1)})
    nt = len(target)
    cache: dict[tuple[int, int], dict] = {}

    def power(i: int, e: int) -> dict:
        key = (i, e)
        if key not in cache:
            cache[key] = _linear_power(forms[i], e, nt)
        return cache[key]

    out: dict = {}
    for e, c in s.terms.items():
        acc: dict = {(0,) * nt: c}
        for i, x in enumerate(e):
            if not x:
                continue
            nxt: dict = {}
            for ex1, c1 in acc.items():
                for ex2, c2 in power(i, x).items():
                    ex = tuple(a + b for a, b in zip(ex1, ex2))
                    if not target.admits(ex):
                        continue
                    v = nxt.get(ex, 0) + c1 * c2
                    if _is_zero(v):
                        nxt.pop(ex, None)
                    else:
                        nxt[ex] = v
            acc = nxt
        for ex, v in acc.items():
            t = out.get(ex, 0) + v
            if _is_zero(t):
                out.pop(ex, None)
            else:
                out[ex] = t
    return MultiSeries._trusted(target, out)


def multinomial(counts: Iterable[int]) -> int:
    counts = list(counts)
    out = factorial(sum(counts))
    for c in counts:
        out //= factorial(c)
    return out
