"""Command-line interface.

Subcommands operate on set documents (JSON text, see `documents`) given as a
file path or `-` for stdin.  Exit codes: 0 success/pass, 1 check failure
(non-convex input or a failed identity), 2 usage or parse errors.  Reports
print as text by default or as JSON with --json.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from ._util import as_fraction, frac_str
from .convexity import convexify, is_l1_convex
from .documents import ParseError, SetDocument, from_object, parse_set, print_set, to_object
from .generators import MODES, gen_random_convex
from .integral_geometry import (
    crofton_profile,
    kinematic_higher_mc,
    kinematic_principal,
    kubota_profile,
    steiner_profile,
)
from .lattice import BoxUnion, CellSet, RatBox
from .pixellation import BoxUnionShape, L1Ball, outer_pixellate
from .suites import (
    SUITES,
    CheckRecord,
    Report,
    VerifyConfig,
    exact_record,
    mc_record,
    verify,
)
from .valuations import (
    ball_intrinsic_volumes,
    cellset_product,
    intrinsic_volumes_boxunion,
    intrinsic_volumes_cellset,
    product_rhs,
)


class CliError(Exception):
    """Usage-level failure: bad input document, bad flags, bad file."""


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_document(path: str) -> tuple[SetDocument, str]:
    text = _read_text(path)
    try:
        return parse_set(text), text
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _load_cellset(path: str) -> tuple[CellSet, str]:
    doc, text = _load_document(path)
    if doc.kind != "cellset":
        raise CliError(f"{path}: expected a cellset document, got kind={doc.kind!r}")
    return to_object(doc), text


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _parse_rational_flag(value: str, flag: str) -> Fraction:
    try:
        return as_fraction(value)
    except (ValueError, TypeError) as exc:
        raise CliError(f"{flag}: {exc}") from None


def _parse_vector_flag(value: str, n: int, flag: str) -> tuple[Fraction, ...]:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != n:
        raise CliError(f"{flag}: expected {n} comma-separated rationals")
    return tuple(_parse_rational_flag(p, flag) for p in parts)


def _report(command: str, text: str, seed: int, records, started: float) -> Report:
    return Report(
        command=command,
        digest=_digest(text),
        seed=seed,
        records=tuple(records),
        runtime_seconds=time.perf_counter() - started,
    )


def _emit_report(report: Report, as_json: bool) -> int:
    sys.stdout.write(report.to_json() if as_json else report.to_text())
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_check_convex(args) -> int:
    x, _ = _load_cellset(args.file)
    verdict = is_l1_convex(x)
    if args.json:
        payload = {
            "convex": bool(verdict),
            "witness": [list(c) for c in verdict.witness] if verdict.witness else None,
        }
        print(json.dumps(payload, indent=2))
    elif verdict:
        print("convex")
    else:
        a, b = verdict.witness
        print(f"not convex: cells {list(a)} and {list(b)} have no third cell between them")
    return 0 if verdict else 1


def _cmd_volumes(args) -> int:
    doc, _ = _load_document(args.file)
    obj = to_object(doc)
    if isinstance(obj, CellSet):
        iv = intrinsic_volumes_cellset(obj)
    elif isinstance(obj, BoxUnion):
        iv = intrinsic_volumes_boxunion(obj)
    else:
        iv = ball_intrinsic_volumes(obj.dimension, obj.radius)
    if args.json:
        print(json.dumps({"intrinsic_volumes": [frac_str(v) for v in iv]}, indent=2))
    else:
        for i, v in enumerate(iv):
            print(f"V'_{i} = {frac_str(v)}")
    return 0


def _cmd_pixellate(args) -> int:
    doc, _ = _load_document(args.file)
    resolution = _parse_rational_flag(args.resolution, "--resolution")
    obj = to_object(doc)
    if isinstance(obj, L1Ball):
        shape = obj
    elif isinstance(obj, BoxUnion):
        if obj.is_empty:
            raise CliError("cannot pixellate an empty box union")
        shape = BoxUnionShape(obj)
    else:
        raise CliError("pixellate expects a shape or boxunion document")
    sys.stdout.write(print_set(from_object(outer_pixellate(shape, resolution))))
    return 0


def _cmd_convexify(args) -> int:
    x, _ = _load_cellset(args.file)
    sys.stdout.write(print_set(from_object(convexify(x))))
    return 0


def _cmd_steiner(args) -> int:
    x, text = _load_cellset(args.file)
    started = time.perf_counter()
    records = []
    for m in range(1, args.max_dilation + 1):
        lhs, rhs = steiner_profile(x, m)
        records.append(exact_record(f"steiner[m={m}]", lhs.values, rhs.values))
    return _emit_report(_report("steiner", text, args.seed, records, started), args.json)


def _cmd_crofton(args) -> int:
    x, text = _load_cellset(args.file)
    started = time.perf_counter()
    ks = [args.k] if args.k is not None else list(range(x.dimension + 1))
    records = []
    for k in ks:
        if not 0 <= k <= x.dimension:
            raise CliError(f"--k must lie in 0..{x.dimension}")
        lhs, rhs = crofton_profile(x, k)
        records.append(exact_record(f"crofton[k={k}]", lhs, rhs))
    return _emit_report(_report("crofton", text, args.seed, records, started), args.json)


def _cmd_kubota(args) -> int:
    x, text = _load_cellset(args.file)
    started = time.perf_counter()
    ks = [args.k] if args.k is not None else list(range(x.dimension + 1))
    records = []
    for k in ks:
        if not 0 <= k <= x.dimension:
            raise CliError(f"--k must lie in 0..{x.dimension}")
        lhs, rhs = kubota_profile(x, k)
        records.append(exact_record(f"kubota[k={k}]", lhs, rhs))
    return _emit_report(_report("kubota", text, args.seed, records, started), args.json)


def _cmd_kinematic(args) -> int:
    x, text = _load_cellset(args.file)
    n = x.dimension
    if args.box_min or args.box_max:
        if not (args.box_min and args.box_max):
            raise CliError("--box-min and --box-max must be given together")
        mins = _parse_vector_flag(args.box_min, n, "--box-min")
        maxs = _parse_vector_flag(args.box_max, n, "--box-max")
        if any(a > b for a, b in zip(mins, maxs)):
            raise CliError("--box-min must be <= --box-max componentwise")
        box = RatBox(mins, maxs)
    else:
        box = RatBox((Fraction(0),) * n, (Fraction(1),) * n)
    started = time.perf_counter()
    if args.degree == 0:
        lhs, rhs = kinematic_principal(x, box)
        records = [exact_record("kinematic[k=0]", lhs, rhs)]
    else:
        if not 1 <= args.degree <= n:
            raise CliError(f"--degree must lie in 0..{n}")
        est = kinematic_higher_mc(x, box, args.degree, args.samples, args.seed)
        records = [mc_record(f"kinematic-mc[k={args.degree}]", est)]
    return _emit_report(_report("kinematic", text, args.seed, records, started), args.json)


def _cmd_product(args) -> int:
    x, text_x = _load_cellset(args.file)
    y, text_y = _load_cellset(args.other)
    if x.resolution != y.resolution:
        raise CliError("product factors must share a resolution")
    started = time.perf_counter()
    prod = cellset_product(x, y)
    lhs = intrinsic_volumes_cellset(prod)
    rhs = product_rhs(intrinsic_volumes_cellset(x), intrinsic_volumes_cellset(y))
    records = [exact_record("product", lhs.values, rhs.values)]
    return _emit_report(
        _report("product", text_x + text_y, args.seed, records, started), args.json
    )


def _cmd_gen(args) -> int:
    n = args.dimension[0] if args.dimension else 2
    resolution = _parse_rational_flag(args.resolution, "--resolution")
    try:
        x = gen_random_convex(
            n, args.bound, args.density, args.seed, mode=args.mode, resolution=resolution
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    sys.stdout.write(print_set(from_object(x)))
    return 0


def _cmd_verify(args) -> int:
    dims = tuple(args.dimension) if args.dimension else (2, 3)
    try:
        cfg = VerifyConfig(
            dimensions=dims,
            instances=args.instances,
            seed=args.seed,
            samples=args.samples,
            mc_cases=args.mc_cases,
            bound=args.bound,
            density=args.density,
            resolution=as_fraction(args.resolution),
            threads=args.threads,
        )
        report = verify(args.suite, cfg)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return _emit_report(report, args.json)


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument(
        "--samples", type=int, default=20000, help="Monte Carlo samples per group element"
    )
    common.add_argument(
        "--dimension",
        type=int,
        action="append",
        help="ambient dimension (repeatable where several apply)",
    )

    parser = argparse.ArgumentParser(
        prog="l1geo",
        description="Exact convexity, intrinsic volumes and integral-geometry "
        "checks for pixellated sets under the taxicab metric.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-convex", parents=[common], help="decide convexity of a cellset")
    p.add_argument("file", help="cellset document path or -")
    p.set_defaults(func=_cmd_check_convex)

    p = sub.add_parser("volumes", parents=[common], help="intrinsic volumes of a document")
    p.add_argument("file")
    p.set_defaults(func=_cmd_volumes)

    p = sub.add_parser("pixellate", parents=[common], help="outer pixellation of a shape")
    p.add_argument("file")
    p.add_argument("--resolution", default="1", help="grid resolution, e.g. 1/4")
    p.set_defaults(func=_cmd_pixellate)

    p = sub.add_parser("convexify", parents=[common], help="minimal-ish convex repair")
    p.add_argument("file")
    p.set_defaults(func=_cmd_convexify)

    p = sub.add_parser("steiner", parents=[common], help="cube-dilation identity check")
    p.add_argument("file")
    p.add_argument("--max-dilation", type=int, default=3)
    p.set_defaults(func=_cmd_steiner)

    p = sub.add_parser("crofton", parents=[common], help="flat-integral identity check")
    p.add_argument("file")
    p.add_argument("--k", type=int, default=None, help="flat dimension (default: all)")
    p.set_defaults(func=_cmd_crofton)

    p = sub.add_parser("kubota", parents=[common], help="projection-sum identity check")
    p.add_argument("file")
    p.add_argument("--k", type=int, default=None, help="subspace dimension (default: all)")
    p.set_defaults(func=_cmd_kubota)

    p = sub.add_parser("kinematic", parents=[common], help="collision-measure identity check")
    p.add_argument("file")
    p.add_argument("--degree", type=int, default=0, help="0 = exact; >0 = Monte Carlo")
    p.add_argument("--box-min", default=None, help="interval corner, e.g. 0,0")
    p.add_argument("--box-max", default=None, help="interval corner, e.g. 3/2,2")
    p.set_defaults(func=_cmd_kinematic)

    p = sub.add_parser("product", parents=[common], help="product-of-sets valuation check")
    p.add_argument("file")
    p.add_argument("other")
    p.set_defaults(func=_cmd_product)

    p = sub.add_parser("gen", parents=[common], help="generate a random convex cellset")
    p.add_argument("--bound", type=int, default=5)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--mode", choices=MODES, default="blob")
    p.add_argument("--resolution", default="1")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("verify", parents=[common], help="run a named verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--instances", type=int, default=20)
    p.add_argument("--mc-cases", type=int, default=3)
    p.add_argument("--bound", type=int, default=5)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--resolution", default="1")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
