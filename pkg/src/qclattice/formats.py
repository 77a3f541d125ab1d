"""Key, ciphertext and observation file formats.

Key files are text-framed hex with a fixed field order.  Ciphertext and
observation files are binary: a file header (magic, version, params digest,
frame length n) followed by frames of [counter u64 LE, payload byte count
u32 LE, n coordinates] with int32 LE coordinates for exact ciphertexts and
float64 LE for channel observations.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np

from .errors import FormatError

KEY_MAGIC = "qclattice-key"
KEY_VERSION = 1
CT_MAGIC = b"QCLC"
OBS_MAGIC = b"QCLO"
FILE_VERSION = 1

_FRAME_HEAD = struct.Struct("<QI")


def params_digest(b: int, n0: int, dv: int, q: int, L: int, d: int) -> str:
    """8-byte hex digest binding ciphertexts to the generating parameters."""
    text = f"b={b},n0={n0},dv={dv},q={q},L={L},d={d}"
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def bits_to_hex(bits: np.ndarray) -> str:
    """Pack a bit vector (LSB-first within bytes) into hex; '-' if empty."""
    bits = np.asarray(bits, dtype=np.uint8) % 2
    if bits.size == 0:
        return "-"
    return np.packbits(bits, bitorder="little").tobytes().hex()


def hex_to_bits(text: str, nbits: int) -> np.ndarray:
    if text == "-":
        if nbits != 0:
            raise FormatError("empty field for nonzero bit count")
        return np.zeros(0, dtype=np.uint8)
    raw = np.frombuffer(bytes.fromhex(text), dtype=np.uint8)
    if raw.size * 8 < nbits:
        raise FormatError("hex field shorter than declared bit count")
    bits = np.unpackbits(raw, bitorder="little")
    if bits[nbits:].any():
        raise FormatError("nonzero padding bits in hex field")
    return bits[:nbits]


def int_to_hex(value: int, nbits: int) -> str:
    return value.to_bytes((nbits + 7) // 8, "little").hex()


def hex_to_int(text: str, nbits: int) -> int:
    v = int.from_bytes(bytes.fromhex(text), "little")
    if v >> nbits:
        raise FormatError("value exceeds declared bit width")
    return v


def poly_id(poly: int) -> str:
    """Canonical 'degree:tap,tap,...' identifier of a monic polynomial."""
    deg = poly.bit_length() - 1
    taps = [str(i) for i in range(deg - 1, 0, -1) if (poly >> i) & 1]
    return f"{deg}:{','.join(taps) if taps else '0'}"


def poly_from_id(text: str) -> int:
    try:
        deg_s, taps_s = text.split(":")
        deg = int(deg_s)
        v = (1 << deg) | 1
        if taps_s != "0":
            for t in taps_s.split(","):
                v |= 1 << int(t)
        return v
    except (ValueError, AttributeError) as e:
        raise FormatError(f"bad polynomial id {text!r}") from e


def write_key_text(fields: dict) -> str:
    """Render the key file; field order is part of the format."""
    order = [
        "version", "b", "n0", "dv", "q", "L", "d",
        "poly_nlf", "poly_e", "poly_h", "poly_perm",
        "supports", "s", "h_seed", "t", "digest",
    ]
    missing = [f for f in order if f not in fields]
    if missing:
        raise FormatError(f"missing key fields: {missing}")
    lines = [KEY_MAGIC] + [f"{name} = {fields[name]}" for name in order]
    return "\n".join(lines) + "\n"


def read_key_text(text: str) -> dict:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0] != KEY_MAGIC:
        raise FormatError("not a key file")
    fields = {}
    for ln in lines[1:]:
        if "=" not in ln:
            raise FormatError(f"bad key line {ln!r}")
        name, _, value = ln.partition("=")
        fields[name.strip()] = value.strip()
    if fields.get("version") != str(KEY_VERSION):
        raise FormatError("unsupported key version")
    return fields


class FrameWriter:
    """Streaming writer for ciphertext/observation files."""

    def __init__(self, fh, n: int, digest: str, observations: bool = False):
        self.fh = fh
        self.n = n
        self.observations = observations
        magic = OBS_MAGIC if observations else CT_MAGIC
        fh.write(magic)
        fh.write(struct.pack("<B", FILE_VERSION))
        fh.write(bytes.fromhex(digest))
        fh.write(struct.pack("<I", n))

    def write_frame(self, counter: int, payload_len: int, coords: np.ndarray):
        self.fh.write(_FRAME_HEAD.pack(counter, payload_len))
        if self.observations:
            arr = np.asarray(coords, dtype="<f8")
        else:
            arr = np.asarray(coords, dtype=np.int64)
            if (np.abs(arr) > np.iinfo(np.int32).max).any():
                raise FormatError("coordinate exceeds int32 range")
            arr = arr.astype("<i4")
        if arr.shape != (self.n,):
            raise FormatError("frame length mismatch")
        self.fh.write(arr.tobytes())


class FrameReader:
    """Streaming reader; iterates (counter, payload_len, coords)."""

    def __init__(self, fh):
        self.fh = fh
        magic = fh.read(4)
        if magic == CT_MAGIC:
            self.observations = False
        elif magic == OBS_MAGIC:
            self.observations = True
        else:
            raise FormatError("not a ciphertext or observation file")
        ver = fh.read(1)
        if len(ver) != 1 or ver[0] != FILE_VERSION:
            raise FormatError("unsupported file version")
        self.digest = fh.read(8).hex()
        (self.n,) = struct.unpack("<I", fh.read(4))
        self._coord_bytes = 8 * self.n if self.observations else 4 * self.n

    def __iter__(self):
        return self

    def __next__(self):
        head = self.fh.read(_FRAME_HEAD.size)
        if len(head) == 0:
            raise StopIteration
        if len(head) != _FRAME_HEAD.size:
            raise FormatError("truncated frame header")
        counter, payload_len = _FRAME_HEAD.unpack(head)
        raw = self.fh.read(self._coord_bytes)
        if len(raw) != self._coord_bytes:
            raise FormatError("truncated frame body")
        if self.observations:
            coords = np.frombuffer(raw, dtype="<f8").astype(np.float64)
        else:
            coords = np.frombuffer(raw, dtype="<i4").astype(np.int64)
        return counter, payload_len, coords
