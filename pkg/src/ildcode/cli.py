"""Command line front end.

Subcommands produce the figure CSVs, dump partitions, run encode and
decode round trips, sweep the typical-set construction, and tabulate
the inequality toolbox.  Validation problems exit with status 2 and a
message on standard error; success exits 0.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from math import log2

from .analysis import (
    assemble,
    decode as _decode,
    encode as _encode,
    fig4_rows,
    fig5_rows,
    full_divergence,
    theorem2_experiment,
)
from .bounds import (
    binomial_coefficient_bounds,
    binomial_midpoint_identity,
    binomial_prefix_sum_bounds,
    rate_region_check,
)
from .codebook import from_json as book_from_json
from .errors import IldError
from .info import Pmf, SymbolString, entropy
from .partition import (
    llf_partition,
    llf_round_robin,
    mlf_partition,
    partition_to_json,
)

_ALGOS = {"mlf": mlf_partition, "llf": llf_partition, "rr": llf_round_robin}
_MAX_SEED = (1 << 64) - 1


def _fmt(x) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, ".15g")
    return str(x)


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _write_csv(path: str, header: list[str], rows) -> None:
    out, close = _open_out(path)
    try:
        writer = csv.writer(out)
        writer.writerow(header)
        for r in rows:
            writer.writerow([_fmt(v) for v in r])
    finally:
        if close:
            out.close()


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t != ""]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t != ""]


def _load_book(path: str):
    with open(path) as fh:
        return book_from_json(fh.read())


def _seed_arg(value: int) -> int:
    if value < 0 or value > _MAX_SEED:
        raise IldError("seed must be an unsigned 64-bit value")
    return value


def _cmd_fig4(args) -> int:
    rows = fig4_rows(tuple(_floats(args.q)), args.n)
    _write_csv(args.out, ["q", "n", "K", "divergence_bits"], rows)
    return 0


def _cmd_fig5(args) -> int:
    rows, notes = fig5_rows(
        q=args.q,
        ns=tuple(_ints(args.n)),
        algos=tuple(a for a in args.algos.split(",") if a),
        lb_n=args.lb_n,
    )
    for note in notes:
        print(note, file=sys.stderr)
    header = [
        "series",
        "algo",
        "n",
        "q",
        "r_info",
        "K",
        "selection_div_bits",
        "lower_bound_bits",
    ]
    _write_csv(args.out, header, ([r[h] for h in header] for r in rows))
    return 0


def _cmd_partition(args) -> int:
    book = _load_book(args.spec)
    part = _ALGOS[args.algo](book, args.k)
    text = partition_to_json(part)
    if args.dump == "-":
        sys.stdout.write(text + "\n")
    else:
        with open(args.dump, "w") as fh:
            fh.write(text)
    return 0


def _cmd_encode(args) -> int:
    book = _load_book(args.spec)
    enc = assemble(book, args.k, algo=args.algo, rng_mode=args.rng, B=args.b)
    seed = _seed_arg(args.seed)
    a = _encode(enc, args.w, seed)
    print(a)
    return 0


def _cmd_decode(args) -> int:
    book = _load_book(args.spec)
    enc = assemble(book, args.k, algo=args.algo, rng_mode=args.rng, B=args.b)
    w = _decode(enc, SymbolString.from_text(args.string))
    print(w)
    return 0


def _cmd_theorem2(args) -> int:
    q = Pmf.binary(args.q)
    rows = []
    for n in _ints(args.n_list):
        r = theorem2_experiment(q, n, args.eps, args.delta, B=args.b)
        rows.append(
            [
                r.n,
                r.eps,
                r.delta,
                r.book_size,
                r.K,
                r.clamped,
                r.B,
                r.report.r_info,
                r.r_info_target,
                r.report.total,
                r.report.selection_term,
                r.report.rng_term,
                r.report.h_rng,
                r.report.r_rng,
                r.sw_bound_ok,
            ]
        )
    header = [
        "n",
        "eps",
        "delta",
        "book_size",
        "K",
        "clamped",
        "B",
        "r_info",
        "r_info_target",
        "total_bits",
        "selection_bits",
        "rng_bits",
        "h_rng",
        "r_rng",
        "sw_bound_ok",
    ]
    _write_csv(args.out, header, rows)
    return 0


def _cmd_bounds(args) -> int:
    n = args.n
    q = Pmf.binary(args.q)
    h = entropy(q)
    rows = []
    prefix = 0
    for k in range(n + 1):
        exact = math.comb(n, k)
        prefix += exact
        if 0 < k < n:
            b = binomial_coefficient_bounds(n, k)
            rows.append(
                [
                    "binom",
                    n,
                    k,
                    "",
                    b.lower,
                    float(exact),
                    b.upper,
                    (not b.applicable) or b.lower <= exact <= b.upper,
                ]
            )
        if 2 * k < n:
            pb = binomial_prefix_sum_bounds(n, k)
            rows.append(
                [
                    "prefix",
                    n,
                    k,
                    "",
                    pb.lower,
                    float(prefix),
                    pb.upper,
                    (not pb.applicable) or pb.lower <= prefix <= pb.upper,
                ]
            )
        if k < n:
            m = binomial_midpoint_identity(n, k)
            rows.append(
                [
                    "midpoint",
                    n,
                    k,
                    "",
                    float(m.twice_forward),
                    float(m.twice_sum),
                    float(m.twice_backward),
                    m.twice_sum == m.twice_forward == m.twice_backward,
                ]
            )
    for xi in _floats(args.xi_grid):
        rep = rate_region_check(h * (1.0 - xi), h * xi, q, xi)
        rows.append(
            [
                "rate_region",
                n,
                "",
                xi,
                rep.lower_limit,
                h,
                rep.upper_limit,
                rep.upper_ok and rep.lower_ok,
            ]
        )
    header = ["kind", "n", "k", "xi", "lower", "value", "upper", "ok"]
    _write_csv(args.out, header, rows)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ildc",
        description="invertible low-divergence coding toolkit",
    )
    sub = p.add_subparsers(dest="command", required=True)

    f4 = sub.add_parser("fig4", help="optimal DM divergence vs codebook size")
    f4.add_argument("--q", default="0.05,0.15,0.23")
    f4.add_argument("--n", type=int, default=4)
    f4.add_argument("--out", default="-")
    f4.set_defaults(func=_cmd_fig4)

    f5 = sub.add_parser("fig5", help="rate vs divergence series with bounds")
    f5.add_argument("--q", type=float, default=0.11)
    f5.add_argument("--n", default="10,16,20")
    f5.add_argument("--algos", default="mlf,llf")
    f5.add_argument("--lb-n", type=int, default=10000, dest="lb_n")
    f5.add_argument("--out", default="-")
    f5.set_defaults(func=_cmd_fig5)

    pa = sub.add_parser("partition", help="partition a codebook from JSON")
    pa.add_argument("--spec", required=True)
    pa.add_argument("--k", type=int, required=True)
    pa.add_argument("--algo", choices=sorted(_ALGOS), default="mlf")
    pa.add_argument("--dump", default="-")
    pa.set_defaults(func=_cmd_partition)

    for name, fn in (("encode", _cmd_encode), ("decode", _cmd_decode)):
        sp = sub.add_parser(name, help=f"{name} one message")
        sp.add_argument("--spec", required=True)
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--algo", choices=sorted(_ALGOS), default="mlf")
        sp.add_argument("--rng", choices=("ideal", "mtype"), default="mtype")
        sp.add_argument("--b", type=int, default=None)
        if name == "encode":
            sp.add_argument("--w", type=int, required=True)
            sp.add_argument("--seed", type=int, default=0)
        else:
            sp.add_argument("--string", required=True)
        sp.set_defaults(func=fn)

    t2 = sub.add_parser("theorem2", help="typical-set construction sweep")
    t2.add_argument("--q", type=float, default=0.11)
    t2.add_argument("--eps", type=float, required=True)
    t2.add_argument("--delta", type=float, required=True)
    t2.add_argument("--n-list", required=True, dest="n_list")
    t2.add_argument("--b", type=int, default=None)
    t2.add_argument("--out", default="-")
    t2.set_defaults(func=_cmd_theorem2)

    bo = sub.add_parser("bounds", help="inequality and rate-region sweeps")
    bo.add_argument("--q", type=float, default=0.11)
    bo.add_argument("--n", type=int, default=20)
    bo.add_argument("--xi-grid", default="0.01,0.05,0.1,0.2,0.3,0.4,0.5",
                    dest="xi_grid")
    bo.add_argument("--out", default="-")
    bo.set_defaults(func=_cmd_bounds)

    return p


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except IldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())
