"""Key generation, sessions, and the encrypt/decrypt pipelines.

Two modes share the machinery: raw mode masks an unrestricted integer
message (noiseless channel), joint mode restricts messages to the transmit
constellation and adds hypercube shaping so the ciphertext doubles as a
power-constrained channel codeword.  A session owns the rotating material
(error vector, control line, block permutation); transmitter and receiver
stay synchronized by consuming frames in counter order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import formats, primitives
from .decoder import DecoderConfig, decode
from .errors import (
    ConstellationViolation,
    FormatError,
    InvalidParams,
    NotLatticePoint,
)
from .keystream import (
    BlockPermutation,
    PermutationStream,
    ReseedingLfsr,
    next_error_vector,
    seed_slices,
)
from .lattice import LatticeCtx
from .nlf import NlfContext
from .rdfcode import QcCode, rdf_search


@dataclass(frozen=True)
class CipherParams:
    """Public parameter set; everything else derives from these six."""

    b: int
    n0: int
    dv: int
    q: int
    L: int
    d: int

    @property
    def n(self) -> int:
        return self.b * self.n0

    @property
    def k(self) -> int:
        return self.b * (self.n0 - 1)

    @property
    def v(self) -> int:
        return self.n // self.q

    @property
    def l1(self) -> int:
        # ceil(log2 n), exactly
        return max(1, (self.n - 1).bit_length())

    @property
    def l2(self) -> int:
        return self.d

    @property
    def gamma(self) -> int:
        return max(1, (self.q - 1).bit_length())

    def validate(self):
        if self.dv % 2 == 0:
            raise InvalidParams("dv must be odd")
        if self.q != self.b:
            raise InvalidParams("q must equal b so permutation blocks stay aligned")
        if self.n % 2 != 0:
            raise InvalidParams("n must be even (constellation works in pairs)")
        if self.L < 2 or self.L & (self.L - 1):
            raise InvalidParams("L must be a power of two >= 2")
        if not 2 <= self.d <= 80:
            raise InvalidParams("control width d must be in [2, 80]")
        if self.q > 1 and self.q > (1 << self.gamma) - 1:
            raise InvalidParams("q must not be a power of two")

    def digest(self) -> str:
        return formats.params_digest(self.b, self.n0, self.dv, self.q, self.L, self.d)


@dataclass(frozen=True)
class SecretKey:
    params: CipherParams
    code: QcCode
    s: int  # l1-bit error-LFSR seed
    h_seed: int  # d-bit control-LFSR seed
    t_bits: tuple  # v*gamma permutation seed bits
    nlf_poly: int
    e_poly: int
    h_poly: int
    perm_poly: int

    def digest(self) -> str:
        return self.params.digest()

    def secret_bit_count(self) -> int:
        """Bits of serialized secret material: supports + s + h_seed + t."""
        p = self.params
        support_bits = p.dv * max(1, (p.b - 1).bit_length()) * p.n0
        return support_bits + p.l1 + p.d + len(self.t_bits)


@dataclass(frozen=True)
class Ciphertext:
    y: np.ndarray
    frame: tuple  # (counter, params digest)


def _draw_bits(rng: random.Random, nbits: int, nonzero: bool) -> int:
    while True:
        v = rng.getrandbits(nbits) if nbits else 0
        if not nonzero or v != 0:
            return v


def keygen(params: CipherParams, master_seed: int) -> SecretKey:
    """Deterministic key generation from a 64-bit master seed."""
    params.validate()
    rng = random.Random(master_seed)
    code = rdf_search(params.b, params.n0, params.dv, rng.getrandbits(64))
    s = _draw_bits(rng, params.l1, nonzero=True)
    h_seed = _draw_bits(rng, params.d, nonzero=True)
    t = []
    for _ in range(params.v):
        slice_val = _draw_bits(rng, params.gamma, nonzero=True)
        t.extend((slice_val >> j) & 1 for j in range(params.gamma))
    nlf_poly = primitives.nlf_poly(params.n)
    e_poly = primitives.poly(params.l1)
    h_poly = primitives.poly(params.d)
    perm_poly = primitives.poly(params.gamma)
    return SecretKey(
        params=params,
        code=code,
        s=s,
        h_seed=h_seed,
        t_bits=tuple(t),
        nlf_poly=nlf_poly,
        e_poly=e_poly,
        h_poly=h_poly,
        perm_poly=perm_poly,
    )


class CipherSession:
    """Stateful encrypt/decrypt context; frames advance the material."""

    def __init__(self, key: SecretKey, decoder_config: DecoderConfig | None = None):
        p = key.params
        self.key = key
        self.params = p
        self.lattice = LatticeCtx.from_code(key.code, p.L)
        self.nlf = NlfContext(key.nlf_poly, p.d)
        self.decoder_config = decoder_config or DecoderConfig()
        self.e_lfsr = ReseedingLfsr(
            p.l1, key.e_poly, primitives.reciprocal(p.l1), key.s
        )
        self.h_lfsr = ReseedingLfsr(
            p.d, key.h_poly, primitives.reciprocal(p.d), key.h_seed
        )
        seeds, gamma = seed_slices(np.array(key.t_bits, dtype=np.uint8), p.q, p.v)
        self.perm_streams = [
            PermutationStream(p.q, sd, gamma=gamma, poly=key.perm_poly)
            for sd in seeds
        ]
        self.counter = 0

    # --- rotating material -------------------------------------------------

    def _frame_material(self):
        j = self.counter
        e = next_error_vector(self.e_lfsr, self.params.n).astype(np.int64)
        h = self.h_lfsr.next_bits(self.params.d)
        perm = BlockPermutation(
            self.params.q, [st.next_perm() for st in self.perm_streams]
        )
        self.counter += 1
        return j, e, h, perm

    def advance_to(self, frame: int):
        """Fast-forward the material streams to a later frame counter."""
        if frame < self.counter:
            raise InvalidParams("cannot rewind a session")
        while self.counter < frame:
            self._frame_material()

    # --- constellation -----------------------------------------------------

    def check_constellation(self, m: np.ndarray):
        """Pairwise ranges: even 0-indexed coords in [0, L-1], odd in [-L, -1]."""
        L = self.params.L
        even = m[0::2]
        odd = m[1::2]
        if (even < 0).any() or (even > L - 1).any():
            raise ConstellationViolation("even-pair coordinate outside [0, L-1]")
        if (odd < -L).any() or (odd > -1).any():
            raise ConstellationViolation("odd-pair coordinate outside [-L, -1]")

    # --- joint mode ----------------------------------------------------------

    def encrypt_joint(self, m) -> Ciphertext:
        m = np.asarray(m, dtype=np.int64)
        if m.shape != (self.params.n,):
            raise InvalidParams("message length mismatch")
        self.check_constellation(m)
        j, e, h, perm = self._frame_material()
        ebar = 1 - e
        x = self.nlf.apply_f(m + ebar, h)
        shaped = self.lattice.shape(x)
        y = perm.apply(2 * shaped.lambda_prime - 1 + 2 * e)
        return Ciphertext(y=y, frame=(j, self.key.digest()))

    def decrypt_joint(self, r, sigma: float) -> np.ndarray:
        r = np.asarray(r, dtype=np.float64)
        if r.shape != (self.params.n,):
            raise InvalidParams("observation length mismatch")
        j, e, h, perm = self._frame_material()
        ebar = 1 - e
        r1 = perm.apply_inverse(r)
        r2 = r1 - 2 * e
        if sigma <= 0:
            lam = np.rint(r2).astype(np.int64)
            if not self.lattice.syndrome_ok(lam):
                raise NotLatticePoint("noiseless input is not a lattice translate point")
        else:
            lam = decode(self.lattice, self.decoder_config, r2, sigma)
        x = self.lattice.mod_recover(lam)
        m_prime = self.nlf.invert_f(x, h)
        return m_prime - ebar

    # --- raw mode -------------------------------------------------------------

    def encrypt_raw(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=np.int64)
        if m.shape != (self.params.n,):
            raise InvalidParams("message length mismatch")
        _, e, h, perm = self._frame_material()
        x = self.nlf.apply_f(m + (1 - e), h)
        lam = self.lattice.g_apply(x)
        return perm.apply(2 * lam - 1 + 2 * e)

    def decrypt_raw(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.int64)
        if y.shape != (self.params.n,):
            raise InvalidParams("ciphertext length mismatch")
        _, e, h, perm = self._frame_material()
        y1 = perm.apply_inverse(y) - 2 * e
        if ((y1 & 1) == 0).any():
            raise NotLatticePoint("ciphertext coordinates must be odd")
        x = self.lattice.g_inverse_apply((y1 + 1) >> 1)
        return self.nlf.invert_f(x, h) - (1 - e)


# --- bit framing --------------------------------------------------------------


def frame_capacity_bytes(n: int, L: int) -> int:
    """Whole bytes carried per frame: floor(n * log2(L) / 8)."""
    return (n * (L.bit_length() - 1)) // 8


def pack_bits(data: bytes, n: int, L: int):
    """Map a byte stream onto constellation vectors.

    Yields (message_vector, payload_byte_count); the final partial frame is
    zero-padded.  Empty input yields one zero-padded frame.
    """
    if L < 2 or L & (L - 1):
        raise InvalidParams("L must be a power of two >= 2")
    bits_per = L.bit_length() - 1
    cap = frame_capacity_bytes(n, L)
    if cap == 0:
        raise InvalidParams("frame too small to carry a byte")
    chunks = [data[i : i + cap] for i in range(0, len(data), cap)] or [b""]
    weights = 1 << np.arange(bits_per, dtype=np.int64)
    for chunk in chunks:
        padded = chunk.ljust(cap, b"\x00")
        bits = np.unpackbits(np.frombuffer(padded, dtype=np.uint8), bitorder="little")
        fields = np.zeros(n * bits_per, dtype=np.uint8)
        fields[: cap * 8] = bits
        vals = fields.reshape(n, bits_per).astype(np.int64) @ weights
        m = vals.copy()
        m[1::2] = -1 - vals[1::2]
        yield m, len(chunk)


def unpack_bits(frames, n: int, L: int) -> bytes:
    """Invert pack_bits; frames is an iterable of (vector, payload_len)."""
    bits_per = L.bit_length() - 1
    cap = frame_capacity_bytes(n, L)
    out = bytearray()
    for m, payload_len in frames:
        m = np.asarray(m, dtype=np.int64)
        vals = m.copy()
        vals[1::2] = -1 - m[1::2]
        if (vals < 0).any() or (vals >= L).any():
            raise FormatError("vector outside the constellation")
        bits = ((vals[:, None] >> np.arange(bits_per)) & 1).astype(np.uint8)
        raw = np.packbits(bits.reshape(-1)[: cap * 8], bitorder="little").tobytes()
        if payload_len > cap:
            raise FormatError("payload length exceeds frame capacity")
        out.extend(raw[:payload_len])
    return bytes(out)


# --- key file -----------------------------------------------------------------


def save_key(key: SecretKey) -> str:
    p = key.params
    support_idx_bits = max(1, (p.b - 1).bit_length())
    sup_bits = []
    for block in key.code.supports:
        for idx in block:
            sup_bits.extend((idx >> j) & 1 for j in range(support_idx_bits))
    fields = {
        "version": formats.KEY_VERSION,
        "b": p.b,
        "n0": p.n0,
        "dv": p.dv,
        "q": p.q,
        "L": p.L,
        "d": p.d,
        "poly_nlf": formats.poly_id(key.nlf_poly),
        "poly_e": formats.poly_id(key.e_poly),
        "poly_h": formats.poly_id(key.h_poly),
        "poly_perm": formats.poly_id(key.perm_poly),
        "supports": formats.bits_to_hex(np.array(sup_bits, dtype=np.uint8)),
        "s": formats.int_to_hex(key.s, p.l1),
        "h_seed": formats.int_to_hex(key.h_seed, p.d),
        "t": formats.bits_to_hex(np.array(key.t_bits, dtype=np.uint8)),
        "digest": key.digest(),
    }
    return formats.write_key_text(fields)


def load_key(text: str) -> SecretKey:
    f = formats.read_key_text(text)
    try:
        params = CipherParams(
            b=int(f["b"]), n0=int(f["n0"]), dv=int(f["dv"]),
            q=int(f["q"]), L=int(f["L"]), d=int(f["d"]),
        )
    except KeyError as e:
        raise FormatError(f"missing key field {e}") from e
    params.validate()
    if f["digest"] != params.digest():
        raise FormatError("params digest mismatch")
    support_idx_bits = max(1, (params.b - 1).bit_length())
    nsup = params.dv * params.n0
    bits = formats.hex_to_bits(f["supports"], nsup * support_idx_bits)
    supports = []
    pos = 0
    for _ in range(params.n0):
        block = []
        for _ in range(params.dv):
            sl = bits[pos : pos + support_idx_bits]
            block.append(int(sum(int(x) << j for j, x in enumerate(sl))))
            pos += support_idx_bits
        supports.append(tuple(sorted(block)))
    code = QcCode(params.b, params.n0, params.dv, tuple(supports))
    t_bits = formats.hex_to_bits(f["t"], params.v * params.gamma)
    return SecretKey(
        params=params,
        code=code,
        s=formats.hex_to_int(f["s"], params.l1),
        h_seed=formats.hex_to_int(f["h_seed"], params.d),
        t_bits=tuple(int(x) for x in t_bits),
        nlf_poly=formats.poly_from_id(f["poly_nlf"]),
        e_poly=formats.poly_from_id(f["poly_e"]),
        h_poly=formats.poly_from_id(f["poly_h"]),
        perm_poly=formats.poly_from_id(f["poly_perm"]),
    )
