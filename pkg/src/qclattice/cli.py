"""Command-line surface: keygen, encrypt, decrypt, simulate, analyze.

Exit codes: 0 success, 1 runtime failure, 2 usage error.  Frame processing
streams with bounded memory; simulate writes CSV and reports progress on
standard error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analysis, channel
from .cipher import (
    CipherParams,
    CipherSession,
    frame_capacity_bytes,
    keygen,
    load_key,
    pack_bits,
    save_key,
    unpack_bits,
)
from .errors import QclatticeError
from .formats import FrameReader, FrameWriter


class UsageError(Exception):
    """Usage error signalled from command bodies; maps to exit code 2."""


def _params_from_args(args) -> CipherParams:
    if args.b is None or args.n0 is None or args.dv is None or args.L is None:
        raise UsageError("--b, --n0, --dv and --L are required")
    q = args.q if args.q is not None else args.b
    d = args.d if args.d is not None else analysis.default_l2(args.b * args.n0)
    return CipherParams(b=args.b, n0=args.n0, dv=args.dv, q=q, L=args.L, d=d)


def cmd_keygen(args) -> int:
    params = _params_from_args(args)
    key = keygen(params, args.seed)
    text = save_key(key)
    with open(args.output, "w") as fh:
        fh.write(text)
    print(f"key size: {analysis.key_size_bits(params)} bits")
    return 0


def _load_key_file(path):
    with open(path) as fh:
        return load_key(fh.read())


def cmd_encrypt(args) -> int:
    key = _load_key_file(args.key)
    session = CipherSession(key)
    p = key.params
    cap = frame_capacity_bytes(p.n, p.L)
    with open(args.input, "rb") as fin, open(args.output, "wb") as fout:
        writer = FrameWriter(fout, p.n, key.digest(), observations=False)
        while True:
            chunk = fin.read(cap)
            if not chunk:
                break
            for m, payload in pack_bits(chunk, p.n, p.L):
                ct = session.encrypt_joint(m)
                writer.write_frame(ct.frame[0], payload, ct.y)
    return 0


def cmd_decrypt(args) -> int:
    key = _load_key_file(args.key)
    session = CipherSession(key)
    p = key.params
    with open(args.input, "rb") as fin, open(args.output, "wb") as fout:
        reader = FrameReader(fin)
        if reader.digest != key.digest():
            print("warning: ciphertext digest does not match key params",
                  file=sys.stderr)
        if reader.n != p.n:
            print(f"error: frame length {reader.n} != n {p.n}", file=sys.stderr)
            return 1
        sigma = args.sigma if args.sigma is not None else 0.0
        if reader.observations and sigma <= 0:
            print("error: observation file needs --sigma > 0", file=sys.stderr)
            return 1
        for counter, payload, coords in reader:
            session.advance_to(counter)
            try:
                m = session.decrypt_joint(coords.astype(np.float64), sigma)
            except QclatticeError as e:
                if args.on_fail == "abort":
                    print(f"error: frame {counter}: {e}", file=sys.stderr)
                    return 1
                print(f"warning: frame {counter}: {e}; emitting zeros",
                      file=sys.stderr)
                fout.write(b"\x00" * payload)
                continue
            fout.write(unpack_bits([(m, payload)], p.n, p.L))
    return 0


def cmd_simulate(args) -> int:
    key = _load_key_file(args.key)
    try:
        start, step, stop = (float(x) for x in args.vnr_db.split(":"))
    except ValueError:
        raise UsageError("--vnr-db must be start:step:stop")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if step <= 0:
        raise UsageError("--vnr-db step must be positive")
    spec = channel.SweepSpec(
        vnr_db_start=start, vnr_db_stop=stop, vnr_db_step=step,
        trials_per_point=args.trials, rng_seed=args.seed,
    )
    rows = channel.run_sweep(
        key, spec, workers=args.workers,
        progress=lambda msg: print(msg, file=sys.stderr),
    )
    if args.output:
        with open(args.output, "w", newline="") as fh:
            channel.write_csv(rows, fh)
    else:
        channel.write_csv(rows)
    return 0


def cmd_analyze(args) -> int:
    if args.key:
        params = _load_key_file(args.key).params
    else:
        params = _params_from_args(args)
    report = analysis.build_report(params)
    if args.json:
        payload = dict(item.split("=", 1) for item in report.kv_lines())
        print(json.dumps(payload))
    else:
        for line in report.text_lines():
            print(line)
        print()
        for line in report.kv_lines():
            print(line)
    return 0


def _add_param_flags(sp):
    sp.add_argument("--b", type=int, help="circulant block size")
    sp.add_argument("--n0", type=int, help="number of circulant blocks")
    sp.add_argument("--dv", type=int, help="circulant column weight (odd)")
    sp.add_argument("--q", type=int, help="permutation block size (default b)")
    sp.add_argument("--L", type=int, help="constellation limit, power of two")
    sp.add_argument("--d", type=int,
                    help="control-line width (default 7*ceil(log2 n))")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qclattice",
        description="QC-LDPC-lattice joint encryption, coding and modulation",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    kg = sub.add_parser("keygen", help="generate a key file")
    _add_param_flags(kg)
    kg.add_argument("--seed", type=int, required=True, help="64-bit master seed")
    kg.add_argument("-o", "--output", required=True, help="key file path")
    kg.set_defaults(func=cmd_keygen)

    enc = sub.add_parser("encrypt", help="encrypt a file (joint mode)")
    enc.add_argument("--key", required=True)
    enc.add_argument("-i", "--input", required=True)
    enc.add_argument("-o", "--output", required=True)
    enc.set_defaults(func=cmd_encrypt)

    dec = sub.add_parser("decrypt", help="decrypt a ciphertext or observation file")
    dec.add_argument("--key", required=True)
    dec.add_argument("-i", "--input", required=True)
    dec.add_argument("-o", "--output", required=True)
    dec.add_argument("--sigma", type=float, default=None,
                     help="noise std for observation files")
    dec.add_argument("--on-fail", choices=("abort", "skip"), default="abort")
    dec.set_defaults(func=cmd_decrypt)

    sim = sub.add_parser("simulate", help="Monte-Carlo SER/FER sweep to CSV")
    sim.add_argument("--key", required=True)
    sim.add_argument("--vnr-db", required=True, help="start:step:stop in dB")
    sim.add_argument("--trials", type=int, required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--workers", type=int, default=None,
                     help=f"parallel workers (default ${channel.WORKERS_ENV} or 1)")
    sim.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
    sim.set_defaults(func=cmd_simulate)

    an = sub.add_parser("analyze", help="closed-form scheme report")
    an.add_argument("--key", default=None, help="read params from a key file")
    _add_param_flags(an)
    an.add_argument("--json", action="store_true", help="machine-readable JSON")
    an.set_defaults(func=cmd_analyze)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except QclatticeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
