"""Witten-Kontsevich psi-intersection numbers and the bracket combinators built
from them.

``tau_correlator(g, ds)`` is total: stable correlators come from the
string/dilaton equations plus the DVV (Virasoro) recursion; unstable genus-0
one- and two-point correlators with a negative index follow the extended
conventions <tau_{-2}>_0 = 1 and <tau_k tau_{-k-1}>_0 = (-1)^k.
"""
from __future__ import annotations

import logging
import os
import threading
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Iterable, NamedTuple, Sequence

from .errors import OutOfClosedFormDomain, PreconditionViolated
from .exact import double_factorial, format_rational

log = logging.getLogger(__name__)

__all__ = [
    "TauKey",
    "tau_correlator",
    "curly_bracket_bruteforce",
    "curly_bracket_closed",
    "square_bracket_bruteforce",
    "square_bracket_closed",
    "square_bracket_product_formula",
    "load_cache",
    "save_cache",
    "cache_size",
    "clear_cache",
]

class TauKey(NamedTuple):
    """Genus plus a canonically sorted multiset of tau indices."""

    g: int
    indices: tuple[int, ...]

    @classmethod
    def make(cls, g: int, indices: Iterable[int]) -> "TauKey":
        return cls(g, tuple(sorted(indices)))

_cache: dict[tuple[int, tuple[int, ...]], Fraction] = {}
_cache_lock = threading.Lock()


def tau_correlator(g, indices: Iterable[int] | None = None) -> Fraction:
    """<tau_{d_1} ... tau_{d_n}>_g on the extended domain.

    Accepts either ``(g, indices)`` or a single TauKey.
    """
    if indices is None:
        g, indices = g
    ds = tuple(sorted(indices))
    n = len(ds)
    if g < 0:
        return Fraction(0)
    if ds and ds[0] < 0:
        if g != 0:
            return Fraction(0)
        if n == 1:
            return Fraction(1) if ds[0] == -2 else Fraction(0)
        if n == 2:
            neg, k = ds
            if k >= 0 and neg == -k - 1:
                return Fraction(-1 if k % 2 else 1)
        return Fraction(0)
    return _wk(g, ds)


def _wk(g: int, ds: tuple[int, ...]) -> Fraction:
    n = len(ds)
    if 2 * g - 2 + n <= 0 or sum(ds) != 3 * g - 3 + n:
        return Fraction(0)
    key = (g, ds)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    value = _wk_compute(g, ds)
    with _cache_lock:
        _cache.setdefault(key, value)
    return value


def _drop(ds: tuple[int, ...], i: int) -> tuple[int, ...]:
    return ds[:i] + ds[i + 1 :]


def _wk_compute(g: int, ds: tuple[int, ...]) -> Fraction:
    n = len(ds)
    if g == 0 and n == 3:
        return Fraction(1)
    if g == 1 and n == 1:
        return Fraction(1, 24)
    if ds[0] == 0:
        # string equation
        rest = ds[1:]
        total = Fraction(0)
        for j, d in enumerate(rest):
            if d > 0:
                total += _wk(g, tuple(sorted(rest[:j] + (d - 1,) + rest[j + 1 :])))
        return total
    if ds[0] == 1:
        # dilaton equation
        return (2 * g - 2 + n - 1) * _wk(g, ds[1:])
    return _dvv(g, ds)


def _dvv(g: int, ds: tuple[int, ...]) -> Fraction:
    """DVV recursion on the largest index, which is >= 2 here."""
    k = ds[-1] - 1
    S = ds[:-1]
    total = Fraction(0)
    for j, d in enumerate(S):
        coef = Fraction(double_factorial(2 * k + 2 * d + 1), double_factorial(2 * d - 1))
        total += coef * _wk(g, tuple(sorted(_drop(S, j) + (k + d,))))
    half = Fraction(0)
    for r in range(k):
        s = k - 1 - r
        w = double_factorial(2 * r + 1) * double_factorial(2 * s + 1)
        half += w * _wk(g - 1, tuple(sorted(S + (r, s))))
        idx = range(len(S))
        for size in range(len(S) + 1):
            for I in combinations(idx, size):
                Iset = set(I)
                SI = tuple(S[i] for i in I)
                SJ = tuple(S[i] for i in idx if i not in Iset)
                for g1 in range(g + 1):
                    a = _wk(g1, tuple(sorted(SI + (r,))))
                    if a:
                        half += w * a * _wk(g - g1, tuple(sorted(SJ + (s,))))
    total += half / 2
    return total / double_factorial(2 * k + 3)


# ---------------------------------------------------------------------------
# brackets


def curly_bracket_bruteforce(g: int, ks_I: Sequence[int], ks_J: Sequence[int]) -> Fraction:
    """{prod_I tau_k | prod_J tau_k}_g, summed over genus splits."""
    ks_I, ks_J = list(ks_I), list(ks_J)
    sign = -1 if sum(ks_J) % 2 else 1
    total = Fraction(0)
    for g1 in range(g + 1):
        g2 = g - g1
        left = tau_correlator(g1, ks_I + [3 * g1 - 2 + len(ks_I) - sum(ks_I)])
        if not left:
            continue
        right = tau_correlator(g2, ks_J + [3 * g2 - 2 + len(ks_J) - sum(ks_J)])
        total += (-1) ** g2 * left * right
    return sign * total


def curly_bracket_closed(g: int, ks: Sequence[int]) -> Fraction:
    """1 / (4^g prod (2k+1)!!), valid when sum(ks) == g, for any split."""
    if any(k < 0 for k in ks) or sum(ks) != g:
        raise PreconditionViolated("closed curly bracket needs k_i >= 0 and sum(k) == g")
    den = 4**g
    for k in ks:
        den *= double_factorial(2 * k + 1)
    return Fraction(1, den)


def square_bracket_bruteforce(g: int, ks: Sequence[int], K: int) -> Fraction:
    """[prod tau_k]^K_{g-1} = sum_{l=0}^K (-1)^l <prod tau_k tau_{K-l} tau_l>_{g-1}."""
    if g < 1 or K < 0:
        return Fraction(0)
    ks = list(ks)
    total = Fraction(0)
    for l in range(K + 1):
        v = tau_correlator(g - 1, ks + [K - l, l])
        total += -v if l % 2 else v
    return total


def square_bracket_closed(g: int, ks: Sequence[int], K: int) -> Fraction:
    """Closed forms for the square bracket.

    K == 2g-2 is the two-twisted-point case; K > 2g-2 (more twisted points)
    vanishes.  A bracket that fails the dimension count is 0 term by term.

    With a insertions of tau_0, the one-line product formula holds only while
    every positive k_i >= a (no index can reach zero while the tau_0's are
    stripped off).  Otherwise the tau_0's are removed by the multinomial form
    of the string equation and the pieces are evaluated in closed form.
    """
    ks = list(ks)
    m = len(ks)
    if g < 1 or any(k < 0 for k in ks):
        raise OutOfClosedFormDomain("closed square bracket needs g >= 1 and k_i >= 0")
    if sum(ks) + K != 3 * g - 4 + m:
        return Fraction(0)
    if K > 2 * g - 2:
        return Fraction(0)
    if K != 2 * g - 2:
        raise OutOfClosedFormDomain(f"no closed form for K={K} at g={g}")
    a = ks.count(0)
    pos = tuple(sorted(k for k in ks if k > 0))
    if all(k >= a for k in pos):
        return _square_product(g, m, a, pos)
    return _square_strip(g, a, pos)


def square_bracket_product_formula(g: int, ks: Sequence[int]) -> Fraction:
    """The one-line tau_0^a product formula at K = 2g-2, with no domain check
    beyond nonnegative factorials.  Exact only when every positive k_i >= #zeros."""
    ks = list(ks)
    return _square_product(g, len(ks), ks.count(0), tuple(sorted(k for k in ks if k > 0)))


def _square_product(g: int, m: int, a: int, pos: tuple[int, ...]) -> Fraction:
    top = 2 * g - 3 + m - a
    if top < 0:
        raise OutOfClosedFormDomain(f"negative factorial argument {top}")
    num = factorial(top)
    for j in range(1, a + 1):
        num *= 2 * g - 4 + m - a + 2 * j
    den = 4 ** (g - 1) * factorial(2 * g - 1)
    for k in pos:
        den *= double_factorial(2 * k - 1)
    return Fraction(num, den)


def _square_strip(g: int, a: int, pos: tuple[int, ...]) -> Fraction:
    # <tau_0^a prod tau_k> = sum_j a!/prod j_i! <prod tau_{k_i - j_i}>
    total = Fraction(0)
    for js in _compositions(a, pos):
        rest = [k - j for k, j in zip(pos, js)]
        weight = factorial(a)
        for j in js:
            weight //= factorial(j)
        zeros = rest.count(0)
        nz = tuple(sorted(r for r in rest if r))
        if zeros and not all(k >= zeros for k in nz):
            total += weight * _square_strip(g, zeros, nz)
        else:
            total += weight * _square_product(g, len(rest), zeros, nz)
    return total


def _compositions(a: int, caps: tuple[int, ...]):
    if not caps:
        if a == 0:
            yield ()
        return
    for j in range(min(a, caps[0]) + 1):
        for tail in _compositions(a - j, caps[1:]):
            yield (j,) + tail


# ---------------------------------------------------------------------------
# cache persistence: one "g|d1,d2,...|p/q" line per entry

_CACHE_FILE = "tau_cache.txt"


def cache_size() -> int:
    return len(_cache)


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


def _parse_line(line: str) -> tuple[tuple[int, tuple[int, ...]], Fraction]:
    g_s, ds_s, v_s = line.split("|")
    ds = tuple(int(x) for x in ds_s.split(",")) if ds_s else ()
    if list(ds) != sorted(ds):
        raise ValueError("unsorted key")
    return (int(g_s), ds), Fraction(v_s)


def load_cache(directory: str | os.PathLike) -> int:
    """Load persisted entries; a file that fails to parse or spot-check is discarded."""
    path = os.path.join(directory, _CACHE_FILE)
    if not os.path.exists(path):
        return 0
    try:
        with open(path, encoding="utf-8") as fh:
            entries = [_parse_line(line.rstrip("\n")) for line in fh if line.strip()]
    except (ValueError, OSError) as exc:
        log.warning("discarding unreadable tau cache %s: %s", path, exc)
        _discard(path)
        return 0
    # recompute a deterministic sample before trusting anything
    sample = sorted(entries)[:3] + sorted(entries)[-3:]
    for (g, ds), v in sample:
        if _wk_compute_fresh(g, ds) != v:
            log.warning("discarding tau cache %s: entry %s fails recomputation", path, (g, ds))
            _discard(path)
            return 0
    with _cache_lock:
        for key, v in entries:
            _cache.setdefault(key, v)
    return len(entries)


def _wk_compute_fresh(g: int, ds: tuple[int, ...]) -> Fraction:
    if 2 * g - 2 + len(ds) <= 0 or sum(ds) != 3 * g - 3 + len(ds) or any(d < 0 for d in ds):
        return Fraction(0)
    return _wk_compute(g, ds)


def _discard(path: str) -> None:
    try:
        os.remove(path)
    except OSError:
        pass


def save_cache(directory: str | os.PathLike) -> int:
    """Append entries not yet on disk."""
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, _CACHE_FILE)
    known: set = set()
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                try:
                    known.add(_parse_line(line.rstrip("\n"))[0])
                except ValueError:
                    pass
    with _cache_lock:
        items = sorted(_cache.items())
    added = 0
    with open(path, "a", encoding="utf-8") as fh:
        for (g, ds), v in items:
            if (g, ds) not in known:
                fh.write(f"{g}|{','.join(map(str, ds))}|{format_rational(v)}\n")
                added += 1
    return added
