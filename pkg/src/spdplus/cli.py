"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 unreadable input or
output, 3 dimension order violated, 4 definiteness violated, 5 duplicate
matrix names.
"""

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, geometry, oracle
from .errors import NotPositiveDefinite, NotPSD, SpdPlusError
from .matrixio import (
    dumps,
    encode_float,
    load_matrix,
    matrix_to_dict,
    save_matrix,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_ORDER = 3
EXIT_DEFINITENESS = 4
EXIT_DUPLICATE = 5


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _load(path):
    try:
        return load_matrix(path)
    except SpdPlusError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from exc


def _float_list(values):
    return [encode_float(v) for v in values]


def _witness_payload(A, B):
    m = A.data.shape[0]
    _, w_minus = geometry.dist_to_contained_set(A, B)
    _, w_plus = geometry.dist_to_containing_set(A, B)
    H0, G0 = w_minus.optimum, w_plus.optimum
    return {
        "contained": {
            "optimum": matrix_to_dict("H0", H0),
            "achieved": encode_float(w_minus.achieved),
            # lambda_min(H0 - B11); nonnegative up to rounding
            "membership_residual": float(np.linalg.eigvalsh(H0 - B.data[:m, :m])[0]),
        },
        "containing": {
            "optimum": matrix_to_dict("G0", G0),
            "achieved": encode_float(w_plus.achieved),
            # lambda_min(A - G0_11) and lambda_min(G0)
            "membership_residual": float(np.linalg.eigvalsh(A.data - G0[:m, :m])[0]),
            "min_eigenvalue": float(np.linalg.eigvalsh(G0)[0]),
        },
    }


def cmd_dist(args, out):
    name_a, A = _load(args.a)
    name_b, B = _load(args.b)
    swapped = False
    if A.dim > B.dim:
        if not args.allow_swap:
            raise CliError(
                f"dim({name_a}) = {A.dim} exceeds dim({name_b}) = {B.dim}; "
                "pass --allow-swap to reorder",
                EXIT_ORDER,
            )
        (name_a, A), (name_b, B) = (name_b, B), (name_a, A)
        swapped = True

    payload = {"a": name_a, "b": name_b, "swapped": swapped}
    try:
        if args.extended:
            ext = geometry.delta2_plus_extended(A, B)
            payload.update(
                value=encode_float(ext.lower_set_value),
                lower_set_value=encode_float(ext.lower_set_value),
                upper_set_value=encode_float(ext.upper_set_value),
                finite=math.isfinite(ext.upper_set_value),
            )
            if not math.isfinite(ext.upper_set_value):
                out.write(dumps(payload))
                return EXIT_OK
        result = geometry.delta2_plus(A, B)
    except (NotPositiveDefinite, NotPSD) as exc:
        raise CliError(str(exc), EXIT_DEFINITENESS) from exc

    payload.update(
        value=result.value,
        pencil_eigenvalues=_float_list(result.pencil_eigenvalues),
        k=result.contributing_count,
        finite=result.finite,
    )
    if args.witness:
        payload["witnesses"] = _witness_payload(A, B)
    out.write(dumps(payload))
    return EXIT_OK


def _collect(source):
    source = Path(source)
    if source.is_dir():
        paths = sorted(
            p for p in source.iterdir() if p.suffix.lower() in (".json", ".csv")
        )
    elif source.is_file():
        try:
            listing = json.loads(source.read_text())
        except ValueError as exc:
            raise CliError(f"{source}: bad manifest: {exc}", EXIT_PARSE) from exc
        if isinstance(listing, dict):
            listing = listing.get("matrices", [])
        paths = [source.parent / p for p in listing]
    else:
        raise CliError(f"{source}: no such file or directory", EXIT_PARSE)

    named = {}
    for path in paths:
        name, M = _load(path)
        if name in named:
            raise CliError(f"duplicate matrix name {name!r}", EXIT_DUPLICATE)
        named[name] = M
    if len(named) < 2:
        raise CliError("pairwise needs at least two matrices", EXIT_PARSE)
    return sorted(named.items())


def _pair_value(A, B, extended):
    if extended:
        ext = geometry.delta2_plus_extended(A, B)
        return ext.lower_set_value, ext.upper_set_value
    value = geometry.delta2_plus(A, B).value
    return value, value


def pairwise_result(items, extended=False):
    """Distance entries for every ordered pair of a named collection.

    Entry ``(i, j)`` is ``delta2_plus(M_i, M_j)`` when ``dim_i <= dim_j``
    ("forward") and ``delta2_plus(M_j, M_i)`` otherwise ("mirrored").
    """
    names = [name for name, _ in items]
    mats = [M for _, M in items]
    dims = [M.dim for M in mats]
    entries = []
    for i, Mi in enumerate(mats):
        for j, Mj in enumerate(mats):
            if dims[i] <= dims[j]:
                orientation, (lo, hi) = "forward", _pair_value(Mi, Mj, extended)
            else:
                orientation, (lo, hi) = "mirrored", _pair_value(Mj, Mi, extended)
            entry = {
                "i": i,
                "j": j,
                "value": encode_float(lo),
                "orientation": orientation,
                "finite": math.isfinite(lo),
            }
            if extended:
                entry["containing_value"] = encode_float(hi)
            entries.append(entry)
    return {"names": names, "dims": dims, "entries": entries}


def pairwise_csv(result):
    n = len(result["names"])
    grid = [[None] * n for _ in range(n)]
    for e in result["entries"]:
        grid[e["i"]][e["j"]] = e["value"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + result["names"])
    for name, row in zip(result["names"], grid):
        writer.writerow([name] + [v if isinstance(v, str) else repr(v) for v in row])
    return buf.getvalue()


def cmd_pairwise(args, out):
    items = _collect(args.source)
    try:
        result = pairwise_result(items, args.extended)
    except (NotPositiveDefinite, NotPSD) as exc:
        raise CliError(str(exc), EXIT_DEFINITENESS) from exc
    text = dumps(result)
    try:
        if args.out:
            Path(args.out).write_text(text)
        else:
            out.write(text)
        if args.csv:
            Path(args.csv).write_text(pairwise_csv(result))
    except OSError as exc:
        raise CliError(f"cannot write output: {exc}", EXIT_PARSE) from exc
    return EXIT_OK


def cmd_check(args, out):
    report = oracle.run_suite(
        seed=args.seed,
        pairs=args.pairs,
        samples=args.samples,
        max_dim=args.max_dim,
        cond=args.cond,
        self_test=args.self_test,
    )
    text = dumps(report)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise CliError(f"cannot write output: {exc}", EXIT_PARSE) from exc
    else:
        out.write(text)
    if report["violations"]:
        print(f"{report['violations']} check(s) failed", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _dims(text):
    try:
        dims = [int(d) for d in text.split(",") if d.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}")
    if not dims or min(dims) < 1:
        raise argparse.ArgumentTypeError("dimensions must be positive integers")
    return dims


def cmd_gen(args, out):
    if args.cond < 1:
        raise CliError("--cond must be at least 1", EXIT_PARSE)
    root = oracle.SeededRng(args.seed)
    target = Path(args.out)
    written = []
    try:
        target.mkdir(parents=True, exist_ok=True)
        for i in range(args.count):
            gen = root.child(i).generator()
            n = args.dims[i % len(args.dims)]
            M = oracle.random_pd(gen, n, args.cond, args.field == "complex")
            name = f"m{i:03d}"
            save_matrix(target / f"{name}.json", name, M)
            written.append(name)
    except OSError as exc:
        raise CliError(f"cannot write to {target}: {exc}", EXIT_PARSE) from exc
    out.write(dumps({"out": str(target), "written": written}))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spdplus",
        description="Geometric distance between positive definite matrices "
        "of possibly different dimensions.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="distance between two matrix files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--allow-swap", action="store_true")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--extended", action="store_true",
                   help="accept positive semidefinite inputs")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("pairwise", help="distance matrix over a collection")
    p.add_argument("source", help="directory of matrix files or JSON manifest")
    p.add_argument("--out")
    p.add_argument("--csv")
    p.add_argument("--extended", action="store_true")
    p.set_defaults(func=cmd_pairwise)

    p = sub.add_parser("check", help="run the randomized verification suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--max-dim", type=int, default=6)
    p.add_argument("--cond", type=float, default=1e4)
    p.add_argument("--self-test", action="store_true",
                   help="feed the oracle the min(0, log) reading; must fail")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="write seeded random positive definite matrices")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--dims", type=_dims, default=[2, 3])
    p.add_argument("--cond", type=float, default=1e3)
    p.add_argument("--field", choices=("real", "complex"), default="real")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"spdplus {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
