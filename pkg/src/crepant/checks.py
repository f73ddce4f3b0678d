"""Verification sweeps shared by the command line and the acceptance suite.

Each function returns a JSON-ready report dict with ``config``, ``checked``,
``failed`` and ``ok``.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .chern import verify_mumford_consequences
from .crc2d import ChangeOfVars2D, kernel_direct, kernel_window, xy_matrix_identity
from .exact import Cyclotomic, polylog_neg, polylog_via_bernoulli
from .hodge import b_coefficient, k_coefficient
from .tau import (
    curly_bracket_bruteforce,
    curly_bracket_closed,
    square_bracket_bruteforce,
    square_bracket_closed,
    square_bracket_product_formula,
    tau_correlator,
)

__all__ = [
    "tau_sweep",
    "curly_sweep",
    "square_sweep",
    "brackets_report",
    "polylog_sweep",
    "kernel_sweep",
    "identities_report",
    "chern_report",
    "series_spot_values",
]


def _report(config: dict, checked: int, failed: list, **extra) -> dict:
    out = {"config": config, "checked": checked, "passed": checked - len(failed), "failed": failed}
    out.update(extra)
    out["ok"] = not failed
    return out


def _composition(rng: random.Random, total: int, parts: int) -> list[int]:
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    bounds = [0] + cuts + [total]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def tau_sweep(seed: int = 0, samples: int = 200, gmax: int = 3, nmax: int = 7) -> dict:
    """Known values plus string and dilaton equations on random admissible keys."""
    rng = random.Random(seed)
    failed = []
    checked = 0
    for g, ds, want in [(0, [0, 0, 0], "1"), (1, [1], "1/24"), (2, [4], "1/1152")]:
        checked += 1
        got = tau_correlator(g, ds)
        if str(got) != want:
            failed.append({"check": "value", "key": [g, ds], "lhs": str(got), "rhs": want})
    done = 0
    while done < samples:
        g = rng.randint(0, gmax)
        n = rng.randint(1, nmax - 1)  # points besides the tau_0 / tau_1
        if 2 * g - 2 + n <= 0:
            continue
        kind = rng.choice(("string", "dilaton"))
        if kind == "string":
            ds = _composition(rng, 3 * g - 2 + n, n)
            lhs = tau_correlator(g, [0] + ds)
            rhs = sum(
                (tau_correlator(g, ds[:j] + [ds[j] - 1] + ds[j + 1 :]) for j in range(n) if ds[j] > 0),
                Fraction(0),
            )
        else:
            ds = _composition(rng, 3 * g - 3 + n, n)
            lhs = tau_correlator(g, [1] + ds)
            rhs = (2 * g - 2 + n) * tau_correlator(g, ds)
        done += 1
        checked += 1
        if lhs != rhs:
            failed.append({"check": kind, "key": [g, sorted(ds)], "lhs": str(lhs), "rhs": str(rhs)})
    return _report({"check": "tau", "seed": seed, "samples": samples, "gmax": gmax, "nmax": nmax}, checked, failed)


def curly_sweep(gmax: int = 3, mmax: int = 5) -> dict:
    """Brute force = closed form for every multiset with sum g and every split."""
    failed = []
    checked = 0
    for g in range(gmax + 1):
        for m in range(1, mmax + 1):
            for ks in combinations_with_replacement(range(g + 1), m):
                if sum(ks) != g:
                    continue
                closed = curly_bracket_closed(g, ks)
                for size in range(m + 1):
                    for I in combinations(range(m), size):
                        kI = [ks[i] for i in I]
                        kJ = [ks[i] for i in range(m) if i not in I]
                        checked += 1
                        brute = curly_bracket_bruteforce(g, kI, kJ)
                        if brute != closed:
                            failed.append({"g": g, "I": kI, "J": kJ, "lhs": str(brute), "rhs": str(closed)})
    return _report({"check": "curly", "gmax": gmax, "mmax": mmax}, checked, failed)


def square_sweep(genera=(2, 3), mmax: int = 5) -> dict:
    """Two-twisted-point closed form against brute force, and vanishing beyond it."""
    failed = []
    checked = 0
    product_misses = []
    vanishing = 0
    for g in genera:
        for m in range(1, mmax + 1):
            for ks in combinations_with_replacement(range(3 * g), m):
                if sum(ks) == g - 2 + m:
                    checked += 1
                    brute = square_bracket_bruteforce(g, ks, 2 * g - 2)
                    closed = square_bracket_closed(g, ks, 2 * g - 2)
                    if brute != closed:
                        failed.append({"g": g, "ks": list(ks), "K": 2 * g - 2, "lhs": str(brute), "rhs": str(closed)})
                    if square_bracket_product_formula(g, ks) != brute:
                        product_misses.append({"g": g, "ks": list(ks)})
                # m - p > 2 twisted points: K = 2g-4+m-p
                for p in range(0, m - 2):
                    K = 2 * g - 4 + m - p
                    if sum(ks) + K != 3 * g - 4 + m:
                        continue
                    checked += 1
                    vanishing += 1
                    brute = square_bracket_bruteforce(g, ks, K)
                    closed = square_bracket_closed(g, ks, K)
                    if brute or closed:
                        failed.append({"g": g, "ks": list(ks), "K": K, "lhs": str(brute), "rhs": str(closed)})
    return _report(
        {"check": "square", "genera": list(genera), "mmax": mmax},
        checked,
        failed,
        vanishing_cases=vanishing,
        product_formula_misses=product_misses,
    )


def brackets_report(seed: int = 0) -> dict:
    parts = {"tau": tau_sweep(seed), "curly": curly_sweep(), "square": square_sweep()}
    failed = [dict(f, part=name) for name, r in parts.items() for f in r["failed"]]
    checked = sum(r["checked"] for r in parts.values())
    return _report({"check": "brackets", "seed": seed}, checked, failed, parts=parts)


def polylog_sweep(Nmax: int = 12, kmax: int = 10) -> dict:
    failed = []
    checked = 0
    for N in range(2, Nmax + 1):
        for l in range(1, N):
            z = Cyclotomic.root(N, l)
            for k in range(kmax + 1):
                checked += 1
                a = polylog_neg(k, z)
                b = polylog_via_bernoulli(k, N, l)
                if a != b:
                    failed.append({"N": N, "l": l, "k": k, "lhs": a.to_json(), "rhs": b.to_json()})
    return _report({"check": "polylog", "Nmax": Nmax, "kmax": kmax}, checked, failed)


def kernel_sweep(nmax: int = 8) -> dict:
    failed = []
    checked = 0
    for n in range(2, nmax + 1):
        for b in range(n):
            for l in range(1, n):
                sigma, s, t = kernel_window(n, b, l)
                for j in range(1, n):
                    checked += 1
                    want = -sigma * n if s <= j <= t else 0
                    got = kernel_direct(n, b, l, j)
                    if got != want:
                        failed.append({"n": n, "b": b, "l": l, "j": j, "lhs": got.to_json(), "rhs": str(want)})
    return _report({"check": "kernel", "nmax": nmax}, checked, failed)


def identities_report() -> dict:
    parts = {"polylog": polylog_sweep(), "kernel": kernel_sweep()}
    failed = [dict(f, part=name) for name, r in parts.items() for f in r["failed"]]
    checked = sum(r["checked"] for r in parts.values())
    extra_checked = 0
    for n in range(2, 11):
        extra_checked += 1
        if not xy_matrix_identity(n):
            failed.append({"part": "xy_matrix", "n": n})
    for n in range(2, 9):
        extra_checked += 1
        if not ChangeOfVars2D(n).is_inverse_pair():
            failed.append({"part": "change_of_variables", "n": n})
    return _report({"check": "identities"}, checked + extra_checked, failed, parts=parts)


def chern_report(max_rank_sum: int = 6) -> dict:
    runs = []
    failed = []
    for total in range(1, max_rank_sum + 1):
        for r1 in range(total + 1):
            rep = verify_mumford_consequences(r1, total - r1)
            runs.append(rep)
            for f in rep["failed"]:
                failed.append(dict(f, r1=r1, r1bar=total - r1))
    checked = sum(r["checked"] for r in runs)
    return _report({"check": "chern", "max_rank_sum": max_rank_sum}, checked, failed, runs=runs)


def series_spot_values() -> dict:
    return {
        "b1": str(b_coefficient(1)),
        "b2": str(b_coefficient(2)),
        "k1": str(k_coefficient(1)),
        "k2": str(k_coefficient(2)),
    }
