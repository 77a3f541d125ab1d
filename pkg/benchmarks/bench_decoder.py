#!/usr/bin/env python3
"""Benchmark the SPA decoder kernels: numba @njit vs pure numpy.

Builds the (215, 258) lattice, generates a fixed batch of noisy frames in
the waterfall region, and times both kernel paths on identical inputs.
The numpy path is the one selected by QCLATTICE_NO_NUMBA=1.

Usage: python benchmarks/bench_decoder.py [--frames N] [--vnr-db X]
"""

import argparse
import time

import numpy as np

from qclattice._kernels import HAVE_NUMBA, USE_NUMBA
from qclattice.decoder import DecoderConfig, decode
from qclattice.errors import DecodeFailure
from qclattice.lattice import LatticeCtx
from qclattice.rdfcode import rdf_search


def run_path(ctx, cfg, frames, sigma, force_numpy):
    outs = []
    t0 = time.perf_counter()
    for r in frames:
        try:
            outs.append(decode(ctx, cfg, r, sigma, force_numpy=force_numpy))
        except DecodeFailure:
            outs.append(None)
    return time.perf_counter() - t0, outs


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--frames", type=int, default=400)
    ap.add_argument("--vnr-db", type=float, default=2.5)
    args = ap.parse_args()

    ctx = LatticeCtx.from_code(rdf_search(43, 6, 3, rng_seed=1), 16)
    cfg = DecoderConfig()
    sigma = ctx.vnr_sigma(args.vnr_db)
    rng = np.random.default_rng(0)
    frames = []
    for _ in range(args.frames):
        lam = ctx.encode(rng.integers(0, 2, size=ctx.n))
        frames.append(lam + rng.normal(0, sigma, ctx.n))

    print(f"lattice (k, n) = ({ctx.k}, {ctx.n}), VNR {args.vnr_db} dB, "
          f"sigma {sigma:.4f}, {args.frames} frames")
    print(f"numba available: {HAVE_NUMBA}; env-selected path: "
          f"{'numba' if USE_NUMBA else 'numpy'}")

    t_np, out_np = run_path(ctx, cfg, frames, sigma, force_numpy=True)
    print(f"numpy kernel:  {t_np:8.3f} s total   {1000 * t_np / args.frames:7.3f} ms/frame")

    if HAVE_NUMBA:
        decode(ctx, cfg, frames[0], sigma)  # JIT warmup outside the timer
        t_nb, out_nb = run_path(ctx, cfg, frames, sigma, force_numpy=False)
        print(f"numba kernel:  {t_nb:8.3f} s total   {1000 * t_nb / args.frames:7.3f} ms/frame")
        print(f"speedup: {t_np / t_nb:.1f}x")
        same = sum(
            1 for a, b in zip(out_np, out_nb)
            if (a is None and b is None)
            or (a is not None and b is not None and np.array_equal(a, b))
        )
        print(f"identical decodes: {same}/{args.frames}")


if __name__ == "__main__":
    main()
