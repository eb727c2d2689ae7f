"""Time shard and unshard of a random file with erasures in some stripes.

    python scripts/throughput.py [--mib 4] [--algebra ring:17] [--variant sd]
"""
import argparse
import tempfile
import time
from pathlib import Path

import numpy as np

from pmds.algebra import AlgebraSpec
from pmds.construction import CodeParams, Variant
from pmds.container import corrupt, shard, unshard


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mib", type=float, default=4)
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--variant", choices=["sd", "pmds"], default="sd")
    ap.add_argument("--algebra", default="ring:17")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    params = CodeParams(args.m, args.n, Variant.parse(args.variant), AlgebraSpec.parse(args.algebra))
    data = np.random.default_rng(args.seed).bytes(int(args.mib * (1 << 20)))
    with tempfile.TemporaryDirectory() as tmp:
        d = Path(tmp)
        t0 = time.perf_counter()
        shard(data, params, d)
        t1 = time.perf_counter()
        side = corrupt(d, random=100, profile=args.variant, seed=args.seed, zero_fill=True)
        t2 = time.perf_counter()
        out = unshard(d, side.read_text())
        t3 = time.perf_counter()
    assert out == data
    mb = len(data) / 1e6
    print(f"{params}: shard {mb / (t1 - t0):.1f} MB/s, unshard with 100 erased stripes {mb / (t3 - t2):.1f} MB/s")


if __name__ == "__main__":
    main()
