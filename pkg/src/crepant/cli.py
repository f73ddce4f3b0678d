"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a verification mismatch, 2 on a
usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from typing import Sequence

from . import checks
from .crc2d import closed_form_potential_2d, stationary_potential_2d, verify_crc2d
from .crc3d import closed_form_potential_3d, orbifold_potential_3d, verify_crc3d, verify_vertex_product
from .errors import CrepantError
from .exact import format_rational
from .hodge import OrbKey, orbifold_correlator_2d, orbifold_correlator_3d
from .series import coeff_json
from .tau import load_cache, save_cache, tau_correlator

log = logging.getLogger("crepant")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the output here instead of stdout")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="crepant", description="Exact orbifold Gromov-Witten computations.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tau", parents=[common], help="psi-intersection number <tau_d1 ... tau_dn>_g")
    t.add_argument("g", type=int)
    t.add_argument("indices", type=int, nargs="*")

    for name in ("corr2d", "corr3d"):
        c = sub.add_parser(name, parents=[common], help=f"{name[-2:].upper()} orbifold correlator")
        c.add_argument("--n", type=int, required=True)
        c.add_argument("--g", type=int, required=True)
        c.add_argument("--a", type=_ints, required=True, help="monodromies, e.g. 1,1,1,1")
        if name == "corr2d":
            c.add_argument("--k", type=_ints, default=None, help="psi powers, e.g. 0,0,0,0")

    pot = sub.add_parser("potential", parents=[common], help="dump a genus-g potential")
    pot.add_argument("kind", choices=("2d", "3d", "closed2d", "closed3d"))
    pot.add_argument("--n", type=int, required=True)
    pot.add_argument("--g", type=int, required=True)
    pot.add_argument("--max-degree", type=int, default=4)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=("crc2d", "crc3d", "vertex", "chern", "identities", "brackets"))
    v.add_argument("--n", type=int, default=2)
    v.add_argument("--g", type=int, default=0)
    v.add_argument("--gmax", type=int, default=1)
    v.add_argument("--max-degree", type=int, default=4)
    v.add_argument("--route", choices=("all", "stationary", "kernel", "closed", "resolution"), default="all")
    v.add_argument("--q-order", "--qmax", dest="q_order", type=int, default=12)
    v.add_argument("--Q-degree", "--Qmax", dest="Q_degree", type=int, default=3)
    v.add_argument("--max-rank-sum", type=int, default=6)
    v.add_argument(
        "--framings", choices=("printed", "all"), default="printed", help="vertex: also try gluings without edge framing"
    )
    return p


def _config(args: argparse.Namespace) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("out", "format")}
    return dict(sorted(cfg.items()))


def _emit(payload: dict, args: argparse.Namespace, rows: list[list[str]] | None = None) -> None:
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if rows is None:
            rows = [["field", "value"]] + [
                [k, v if isinstance(v, str) else json.dumps(v, sort_keys=True)] for k, v in sorted(payload.items())
            ]
        w.writerows(rows)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _coeff_text(c) -> str:
    j = coeff_json(c)
    return f"{j['order']}:" + ";".join(j["coeffs"])


def _potential(args) -> tuple[dict, list[list[str]]]:
    n, g, D = args.n, args.g, args.max_degree
    skipped: list = []
    if args.kind == "2d":
        s = stationary_potential_2d(n, g, D, skipped)
    elif args.kind == "closed2d":
        s = closed_form_potential_2d(n, g, D, skipped)
    elif args.kind == "3d":
        s = orbifold_potential_3d(n, g, D, skipped)
    else:
        s = closed_form_potential_3d(n, g, D, skipped)
    payload = {"config": _config(args), "series": s.to_json(), "skipped_terms": skipped}
    rows = [["monomial", "coefficient"]]
    for e, c in s.sorted_terms():
        rows.append([s.registry.monomial_name(e), _coeff_text(c)])
    return payload, rows


def _verify(args) -> dict:
    if args.suite == "crc2d":
        rep = verify_crc2d(args.n, args.g, args.max_degree, args.route)
    elif args.suite == "crc3d":
        rep = verify_crc3d(args.n, args.gmax, args.max_degree)
    elif args.suite == "vertex":
        framings = ("kappa",) if args.framings == "printed" else ("kappa", "none")
        rep = verify_vertex_product(args.n, args.Q_degree, args.q_order, framings)
    elif args.suite == "chern":
        rep = checks.chern_report(args.max_rank_sum)
    elif args.suite == "identities":
        rep = checks.identities_report()
    else:
        rep = checks.brackets_report(args.seed)
    rep = dict(rep)
    rep["config"] = dict(rep.get("config", {}), command="verify", suite=args.suite, seed=args.seed)
    rep["suite"] = args.suite
    return rep


def run(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cache_dir = os.environ.get("CREPANT_CACHE_DIR")
    if cache_dir:
        load_cache(cache_dir)
    try:
        code = _dispatch(args)
    except CrepantError as exc:
        print(f"crepant: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"crepant: {exc}", file=sys.stderr)
        return 2
    if cache_dir:
        save_cache(cache_dir)
    return code


def _dispatch(args) -> int:
    if args.command == "tau":
        _emit({"value": format_rational(tau_correlator(args.g, args.indices))}, args)
        return 0
    if args.command == "corr2d":
        key = OrbKey(args.n, args.g, tuple(args.a), tuple(args.k) if args.k else ())
        _emit({"value": format_rational(orbifold_correlator_2d(key)), "unit": "t"}, args)
        return 0
    if args.command == "corr3d":
        _emit({"value": format_rational(orbifold_correlator_3d(args.n, args.g, args.a)), "unit": "1"}, args)
        return 0
    if args.command == "potential":
        payload, rows = _potential(args)
        _emit(payload, args, rows)
        return 0
    rep = _verify(args)
    _emit(rep, args)
    return 0 if rep["ok"] else 1


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
