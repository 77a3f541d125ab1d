"""Key-schedule material: reseeding LFSR streams and block permutations.

Bit-order format constants (fixed for interoperability): LFSR state is an
unsigned integer of gamma bits, the output bit is the least significant
state bit, and the feedback taps are the low-degree coefficients of the
feedback polynomial.  Seed slices inside the key vector t are consumed
least-significant-slice first.
"""

from __future__ import annotations

import numpy as np

from . import primitives
from .errors import InvalidParams, ZeroSeedSlice


class Lfsr:
    """Fibonacci LFSR over GF(2) with integer state.

    step(): output = state & 1; feedback = parity(state & taps);
    next state = (state >> 1) | (feedback << (length - 1)).
    A primitive feedback polynomial gives period 2^length - 1 through all
    nonzero states.
    """

    __slots__ = ("length", "poly", "taps", "state")

    def __init__(self, length: int, poly: int, seed: int):
        if length < 1:
            raise InvalidParams("LFSR length must be >= 1")
        mask = (1 << length) - 1
        if seed & mask == 0:
            raise InvalidParams("LFSR seed must be nonzero")
        self.length = length
        self.poly = poly
        self.taps = poly & mask
        self.state = seed & mask

    def step(self) -> int:
        out = self.state & 1
        fb = bin(self.state & self.taps).count("1") & 1
        self.state = (self.state >> 1) | (fb << (self.length - 1))
        return out


class ReseedingLfsr:
    """LFSR whose seed is refreshed from a companion LFSR each period.

    The main register (polynomial q) emits bits; after every 2^l1 - 1
    output bits the companion register (polynomial p) steps once and its
    state replaces the main state.  With q and p primitive the companion
    walks the main register through all 2^l1 - 1 nonzero seeds, so the
    joint state first recurs after exactly (2^l1 - 1)^2 output bits.
    """

    def __init__(self, length: int, q_poly: int, p_poly: int, seed: int):
        self.length = length
        self.main = Lfsr(length, q_poly, seed)
        self.companion = Lfsr(length, p_poly, seed)
        self.segment = (1 << length) - 1
        self.phase = 0

    @classmethod
    def from_degree(cls, length: int, seed: int) -> "ReseedingLfsr":
        return cls(length, primitives.poly(length), primitives.reciprocal(length), seed)

    def joint_state(self):
        return (self.main.state, self.companion.state, self.phase)

    def next_bit(self) -> int:
        out = self.main.step()
        self.phase += 1
        if self.phase == self.segment:
            self.phase = 0
            self.companion.step()
            self.main.state = self.companion.state
        return out

    def next_bits(self, count: int) -> np.ndarray:
        out = np.empty(count, dtype=np.uint8)
        for i in range(count):
            out[i] = self.next_bit()
        return out

    def skip(self, count: int) -> None:
        for _ in range(count):
            self.next_bit()


def next_error_vector(lfsr: ReseedingLfsr, n: int) -> np.ndarray:
    """Next n keystream bits as the intentional error vector."""
    return lfsr.next_bits(n)


class PermutationStream:
    """Stream of permutations of {0..q-1}, one per LFSR initial value.

    A draw runs a throwaway LFSR from the current initial value and maps
    visited states to values s - 1, discarding those >= q; one period of a
    primitive gamma-bit LFSR visits every nonzero state once, so exactly q
    values are accepted within 2^gamma - 1 steps, duplicates cannot occur,
    and the accepted order defines the permutation.  After each draw the
    persistent register steps once, so consecutive frames use consecutive
    initial values and the permutation sequence has period 2^gamma - 1.
    """

    def __init__(self, q: int, seed: int, gamma: int | None = None, poly: int | None = None):
        if q < 1:
            raise InvalidParams("q must be >= 1")
        self.q = q
        if q == 1:
            self.lfsr = None
            return
        gamma = gamma if gamma is not None else max(1, (q - 1).bit_length())
        if q > (1 << gamma) - 1:
            raise InvalidParams(
                f"q={q} exceeds the LFSR state range 2^{gamma}-1; "
                "q must not be a power of two"
            )
        if seed & ((1 << gamma) - 1) == 0:
            raise ZeroSeedSlice("permutation seed slice is all-zero")
        self.gamma = gamma
        self.poly = poly if poly is not None else primitives.poly(gamma)
        self.lfsr = Lfsr(gamma, self.poly, seed)

    def next_perm(self) -> np.ndarray:
        if self.q == 1:
            return np.zeros(1, dtype=np.int64)
        walker = Lfsr(self.gamma, self.poly, self.lfsr.state)
        out = np.empty(self.q, dtype=np.int64)
        got = 0
        while got < self.q:
            v = walker.state - 1
            walker.step()
            if v < self.q:
                out[got] = v
                got += 1
        self.lfsr.step()  # next frame draws from the next initial value
        return out


def next_permutation(stream: PermutationStream) -> np.ndarray:
    """Draw the next permutation from a stream (bijection on {0..q-1})."""
    return stream.next_perm()


class BlockPermutation:
    """Block-diagonal permutation: v independent q-blocks."""

    def __init__(self, q: int, perms):
        self.q = q
        self.perms = [np.asarray(p, dtype=np.int64) for p in perms]
        self.v = len(self.perms)
        self.n = self.q * self.v
        for p in self.perms:
            if sorted(p.tolist()) != list(range(q)):
                raise InvalidParams("block is not a permutation")
        self._fwd = np.concatenate(
            [p + i * q for i, p in enumerate(self.perms)]
        )
        self._inv = np.argsort(self._fwd)

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape != (self.n,):
            raise InvalidParams("vector length mismatch")
        return x[self._fwd]

    def apply_inverse(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y)
        if y.shape != (self.n,):
            raise InvalidParams("vector length mismatch")
        return y[self._inv]

    def to_matrix(self) -> np.ndarray:
        """Dense 0/1 matrix P with apply(x) = x @ P."""
        p = np.zeros((self.n, self.n), dtype=np.uint8)
        # apply(x)[j] = x[fwd[j]]  =>  P[fwd[j], j] = 1
        p[self._fwd, np.arange(self.n)] = 1
        return p


def seed_slices(t_bits: np.ndarray, q: int, v: int):
    """Split the key vector t into v LFSR initial values (gamma bits each).

    Slice i occupies bits [i*gamma, (i+1)*gamma), least significant bit
    first within a slice.  All-zero slices are rejected.
    """
    gamma = max(1, (q - 1).bit_length()) if q > 1 else 0
    t_bits = np.asarray(t_bits, dtype=np.uint8) % 2
    if t_bits.shape != (v * gamma,):
        raise InvalidParams(f"t must carry {v}*{gamma} bits")
    seeds = []
    for i in range(v):
        sl = t_bits[i * gamma : (i + 1) * gamma]
        val = int(sum(int(b) << j for j, b in enumerate(sl)))
        if q > 1 and val == 0:
            raise ZeroSeedSlice(f"seed slice {i} is all-zero")
        seeds.append(val)
    return seeds, gamma


def build_block_permutation(t_bits, q: int, v: int) -> BlockPermutation:
    """First permutation drawn from each seed slice of t."""
    seeds, _ = seed_slices(t_bits, q, v)
    perms = [PermutationStream(q, s).next_perm() for s in seeds]
    return BlockPermutation(q, perms)
