"""Sweep SD/PMDS verification over a grid of small codes.

    python scripts/verify_grid.py [--jobs 4] [--mode rank|decode]

Prints one line per (code, property) with the verdict, pattern count and time.
C0 should pass SD everywhere and fail PMDS whenever n >= 4 and m >= 2;
C1 should pass both.
"""
import argparse
import time

from pmds.algebra import AlgebraSpec
from pmds.construction import CodeParams, ParameterViolation, Variant
from pmds.verifier import Mode, Property, verify

ALGEBRAS = ["gf2:4", "gf2:5", "gf2:6", "gf2:7", "ring:17", "ring:37"]
SHAPES = [(1, 4), (2, 3), (2, 4), (3, 3), (3, 5), (4, 4), (5, 3)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--mode", choices=["rank", "decode"], default="rank")
    args = ap.parse_args()
    mode = Mode(args.mode)

    for text in ALGEBRAS:
        alg = AlgebraSpec.parse(text)
        for m, n in SHAPES:
            for variant in Variant:
                try:
                    params = CodeParams(m, n, variant, alg)
                except ParameterViolation:
                    continue
                for prop in Property:
                    t0 = time.perf_counter()
                    report = verify(params, prop, mode, jobs=args.jobs)
                    dt = time.perf_counter() - t0
                    verdict = "PASS" if report.passed else f"FAIL({len(report.failures)})"
                    print(f"{str(params):28s} {prop.value:5s} {verdict:10s} "
                          f"patterns={report.patterns_checked:6d} {dt:6.2f}s")


if __name__ == "__main__":
    main()
