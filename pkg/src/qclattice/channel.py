"""AWGN simulation: noise injection, VNR sweeps, CSV output.

Per-trial randomness comes from a counter-based Philox generator keyed by
(seed, point index, trial index), so results are independent of execution
order and identical for any worker count.
"""

from __future__ import annotations

import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cipher import CipherSession, SecretKey
from .decoder import DecoderConfig, decode
from .errors import DecodeFailure, InvalidParams, NotInLattice, NotLatticePoint
from .lattice import LatticeCtx

WORKERS_ENV = "QCLATTICE_WORKERS"


@dataclass(frozen=True)
class SweepSpec:
    vnr_db_start: float
    vnr_db_stop: float
    vnr_db_step: float
    trials_per_point: int
    rng_seed: int

    def __post_init__(self):
        if self.vnr_db_step <= 0:
            raise InvalidParams("step must be positive")
        if self.trials_per_point < 1:
            raise InvalidParams("trials must be >= 1")

    def points(self):
        out = []
        v = self.vnr_db_start
        while v <= self.vnr_db_stop + 1e-9:
            out.append(round(v, 9))
            v += self.vnr_db_step
        return out


def add_awgn(x, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """x + N(0, sigma^2) noise; sigma = 0 returns x exactly."""
    if sigma < 0:
        raise InvalidParams("sigma must be nonnegative")
    x = np.asarray(x, dtype=np.float64)
    if sigma == 0:
        return x.copy()
    return x + rng.normal(0.0, sigma, size=x.shape)


def _trial_rng(seed: int, point: int, trial: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, (point << 32) ^ trial], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _random_message(rng: np.random.Generator, n: int, L: int) -> np.ndarray:
    m = np.empty(n, dtype=np.int64)
    m[0::2] = rng.integers(0, L, size=n // 2)
    m[1::2] = rng.integers(-L, 0, size=n // 2)
    return m


def _run_point_chunk(key, spec, point_idx, vnr_db, start_trial, count):
    """Sequential chunk of trials at one sweep point; deterministic."""
    p = key.params
    tx = CipherSession(key)
    rx = CipherSession(key)
    # material stream restarts per point; trial t uses frame t of the stream,
    # so chunked execution reproduces the serial result exactly
    tx.advance_to(start_trial)
    rx.advance_to(start_trial)
    sigma = tx.lattice.vnr_sigma(vnr_db)
    sym_err = 0
    frame_err = 0
    for t in range(start_trial, start_trial + count):
        rng = _trial_rng(spec.rng_seed, point_idx, t)
        m = _random_message(rng, p.n, p.L)
        ct = tx.encrypt_joint(m)
        r = add_awgn(ct.y, sigma, rng)
        try:
            m_hat = rx.decrypt_joint(r, sigma)
            errs = int((m_hat != m).sum())
        except (DecodeFailure, NotLatticePoint, NotInLattice):
            errs = p.n
        sym_err += errs
        frame_err += 1 if errs else 0
    return sym_err, frame_err


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run_sweep(key: SecretKey, spec: SweepSpec, workers: int | None = None, progress=None):
    """Monte-Carlo SER/FER sweep over the VNR grid.

    Returns rows (vnr_db, ser, fer, trials, seed).  Deterministic for a
    fixed spec regardless of the worker count.
    """
    workers = workers if workers is not None else default_workers()
    pts = spec.points()
    rows = []
    n = key.params.n
    for idx, vnr_db in enumerate(pts):
        trials = spec.trials_per_point
        if workers <= 1:
            tot = [_run_point_chunk(key, spec, idx, vnr_db, 0, trials)]
        else:
            per = (trials + workers - 1) // workers
            jobs = []
            with ProcessPoolExecutor(max_workers=workers) as pool:
                start = 0
                while start < trials:
                    cnt = min(per, trials - start)
                    jobs.append(
                        pool.submit(_run_point_chunk, key, spec, idx, vnr_db, start, cnt)
                    )
                    start += cnt
                tot = [j.result() for j in jobs]
        sym_err = sum(t[0] for t in tot)
        frame_err = sum(t[1] for t in tot)
        rows.append(
            (vnr_db, sym_err / (trials * n), frame_err / trials, trials, spec.rng_seed)
        )
        if progress:
            progress(f"vnr {vnr_db:+.2f} dB: ser={rows[-1][1]:.3e} fer={rows[-1][2]:.3e}")
    return rows


def lattice_sweep(ctx: LatticeCtx, cfg: DecoderConfig, spec: SweepSpec, progress=None):
    """SER/FER of bare lattice decoding (no cipher layer) over a VNR grid.

    Used for decoder-level comparisons between lattices whose parameters
    are not admissible cipher keys.
    """
    rows = []
    for idx, vnr_db in enumerate(spec.points()):
        sigma = ctx.vnr_sigma(vnr_db)
        sym_err = 0
        frame_err = 0
        for t in range(spec.trials_per_point):
            rng = _trial_rng(spec.rng_seed, idx, t)
            xi = rng.integers(0, 2, size=ctx.n)
            lam = ctx.encode(xi)
            r = add_awgn(lam, sigma, rng)
            try:
                lam_hat = decode(ctx, cfg, r, sigma)
                errs = int((lam_hat != lam).sum())
            except DecodeFailure:
                errs = ctx.n
            sym_err += errs
            frame_err += 1 if errs else 0
        rows.append(
            (vnr_db, sym_err / (spec.trials_per_point * ctx.n),
             frame_err / spec.trials_per_point, spec.trials_per_point, spec.rng_seed)
        )
        if progress:
            progress(f"vnr {vnr_db:+.2f} dB: ser={rows[-1][1]:.3e}")
    return rows


def wilson_interval(successes: int, trials: int, z: float = 1.96):
    """Wilson score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * np.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


CSV_HEADER = "vnr_db,ser,fer,trials,seed"


def rows_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    for vnr_db, ser, fer, trials, seed in rows:
        lines.append(f"{vnr_db:g},{ser:.10g},{fer:.10g},{trials},{seed}")
    return "\n".join(lines) + "\n"


def write_csv(rows, fh=None) -> str:
    text = rows_to_csv(rows)
    if fh is None:
        sys.stdout.write(text)
    else:
        fh.write(text)
    return text
