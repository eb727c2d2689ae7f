"""``pmds`` command-line front end.

Exit codes: 0 success, 1 usage or parameter error, 2 decode or
verification failure, 3 budget exhausted or inconclusive ring rank.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from pmds.algebra import AlgebraSpec
from pmds.codec import DecodeFailure
from pmds.construction import CodeParams, Variant, build_parity_check
from pmds.container import ContainerError, HeaderMismatch, StripeDecodeFailure, corrupt, shard, unshard
from pmds.verifier import (BudgetExceeded, InconclusiveRank, Mode, Property,
                           find_sd_pmds_separator, verify)

EXIT_OK, EXIT_USAGE, EXIT_FAILURE, EXIT_RESOURCE = 0, 1, 2, 3

EXAMPLES = {
    "ex2_1a": ("C0(3, 5) over GF(16), x^4+x+1", Variant.SD_C0, 3, 5, "gf2:4"),
    "ex2_1b": ("C0(5, 3) over GF(16), x^4+x+1", Variant.SD_C0, 5, 3, "gf2:4"),
    "ex2_2": ("C0(4, 4) over GF(2)[x]/M_17(x)", Variant.SD_C0, 4, 4, "ring:17"),
    "ex2_3": ("C1(2, 4) over GF(2)[x]/M_17(x)", Variant.PMDS_C1, 2, 4, "ring:17"),
}

EX2_3_NOTE = ("# note: block 0 of the last row is a^(4in-j) = 1 a^16 a^15 a^14; the commonly\n"
              "# printed version of this matrix shows 1 a^15 a^14 a^13 there instead.")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def show_example(name: str) -> str:
    title, variant, m, n, algebra = EXAMPLES[name]
    params = CodeParams(m, n, variant, AlgebraSpec.parse(algebra))
    lines = [f"# {name}: {title}", build_parity_check(params).format()]
    if name == "ex2_3":
        lines.append(EX2_3_NOTE)
    return "\n".join(lines)


def _add_code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", required=True, choices=["sd", "pmds"])
    p.add_argument("--m", type=int, required=True, help="rows per stripe")
    p.add_argument("--n", type=int, required=True, help="devices (columns)")
    p.add_argument("--algebra", required=True, help="gf2:B[:MODULUS_HEX] or ring:P")


def _params(args) -> CodeParams:
    return CodeParams(args.m, args.n, Variant.parse(args.variant), AlgebraSpec.parse(args.algebra))


def _cell(text: str) -> tuple[int, int, int]:
    try:
        s, r, c = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected STRIPE,ROW,COL, got {text!r}") from None
    return s, r, c


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pmds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="print a parity-check matrix")
    _add_code_args(p)

    p = sub.add_parser("show-example", help="print one of the reference example matrices")
    p.add_argument("name", choices=sorted(EXAMPLES))

    p = sub.add_parser("shard", help="encode a file into n device files")
    p.add_argument("--in", dest="input", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    _add_code_args(p)

    p = sub.add_parser("unshard", help="decode device files back into the original file")
    p.add_argument("--dir", required=True, type=Path)
    p.add_argument("--erasures", type=Path, help="sidecar listing erased cells/devices")
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("corrupt", help="record (and optionally zero) erasures")
    p.add_argument("--dir", required=True, type=Path)
    p.add_argument("--device", type=int, action="append", default=[])
    p.add_argument("--cell", type=_cell, action="append", default=[], metavar="S,R,C")
    p.add_argument("--random", type=int, default=0, metavar="K", help="erase patterns in K random stripes")
    p.add_argument("--per-stripe-profile", choices=["sd", "pmds"], default="sd")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--zero-fill", action="store_true", help="also overwrite the erased bytes with zeros")
    p.add_argument("--sidecar", type=Path, help="sidecar path (default DIR/erasures.txt)")
    p.add_argument("--append", action="store_true")

    p = sub.add_parser("verify", help="exhaustively check the SD or PMDS property")
    _add_code_args(p)
    p.add_argument("--property", required=True, choices=["sd", "pmds"])
    p.add_argument("--mode", choices=["rank", "decode"], default="rank")
    p.add_argument("--budget", type=int, default=10 ** 7)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("separator", help="find a 2+2 pattern the SD code cannot correct")
    _add_code_args(p)
    return parser


def _run(args) -> int:
    if args.command == "build":
        print(build_parity_check(_params(args)).format())
    elif args.command == "show-example":
        print(show_example(args.name))
    elif args.command == "shard":
        paths = shard(args.input.read_bytes(), _params(args), args.out)
        print(f"wrote {len(paths)} device files to {args.out}")
    elif args.command == "unshard":
        sidecar = args.erasures.read_text() if args.erasures else None
        data = unshard(args.dir, sidecar)
        args.out.write_bytes(data)
        print(f"recovered {len(data)} bytes to {args.out}")
    elif args.command == "corrupt":
        if not (args.device or args.cell or args.random):
            raise ContainerError("nothing to corrupt: give --device, --cell or --random")
        path = corrupt(args.dir, devices=args.device, cells=args.cell, random=args.random,
                       profile=args.per_stripe_profile, seed=args.seed, zero_fill=args.zero_fill,
                       sidecar=args.sidecar, append=args.append)
        print(f"wrote sidecar {path}")
    elif args.command == "verify":
        report = verify(_params(args), Property(args.property), Mode(args.mode),
                        budget=args.budget, jobs=args.jobs, seed=args.seed)
        print(report.format())
        return EXIT_OK if report.passed else EXIT_FAILURE
    elif args.command == "separator":
        pattern = find_sd_pmds_separator(_params(args))
        if pattern is None:
            print("NotFound")
            return EXIT_OK
        print(f"FOUND {pattern}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (StripeDecodeFailure, DecodeFailure, HeaderMismatch) as exc:
        print(f"pmds: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (BudgetExceeded, InconclusiveRank, OSError) as exc:
        print(f"pmds: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ContainerError, ValueError) as exc:
        print(f"pmds: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
