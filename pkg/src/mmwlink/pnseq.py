"""Maximal-length PN sequences, the sync preamble, and the byte scrambler.

Bit order is MSB-first everywhere a bit stream meets a byte stream; this is
the one place that convention is defined (np.packbits/np.unpackbits share
it).  Both PN words carry one extra 0 bit after the natural period so they
pack into whole bytes: 31+1 bits of preamble, 63+1 bits of scrambler.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LfsrSpec:
    """Fibonacci LFSR: taps are the exponents of the feedback polynomial."""

    order: int
    taps: tuple[int, ...]
    seed: int

    def __post_init__(self):
        if not 0 < self.seed < (1 << self.order):
            raise ValueError("seed must be a nonzero state of `order` bits")
        if any(t < 1 or t > self.order for t in self.taps):
            raise ValueError("tap exponents must be in 1..order")


# x^5 + x^2 + 1, all-ones start: 31-bit preamble sequence
PREAMBLE_LFSR = LfsrSpec(order=5, taps=(5, 2), seed=0b11111)
# x^6 + x^5 + 1, all-ones start: 63-bit scrambler sequence
SCRAMBLER_LFSR = LfsrSpec(order=6, taps=(6, 5), seed=0b111111)


def lfsr_run(spec: LfsrSpec, nbits: int) -> np.ndarray:
    """First nbits output bits of the register.

    State is a list of stages s[0..order-1]; the output is taken from the
    last stage and the feedback (XOR of the tapped stages, 1-indexed from
    the input end) shifts in at the front.
    """
    if nbits < 0:
        raise ValueError("nbits must be non-negative")
    state = [(spec.seed >> (spec.order - 1 - i)) & 1 for i in range(spec.order)]
    out = np.empty(nbits, dtype=np.uint8)
    for n in range(nbits):
        out[n] = state[-1]
        fb = 0
        for t in spec.taps:
            fb ^= state[t - 1]
        state = [fb] + state[:-1]
    return out


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Bits (0/1) to bytes, MSB first; length must be a multiple of 8."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size % 8:
        raise ValueError("bit count must be a multiple of 8")
    return np.packbits(bits)

def unpack_bits(data: bytes | np.ndarray) -> np.ndarray:
    """Bytes to bits (0/1), MSB first."""
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8)
                         if isinstance(data, (bytes, bytearray)) else
                         np.asarray(data, dtype=np.uint8))


def _padded_word(spec: LfsrSpec, period: int) -> bytes:
    bits = np.concatenate([lfsr_run(spec, period), np.zeros(1, dtype=np.uint8)])
    return pack_bits(bits).tobytes()


def preamble_word() -> bytes:
    """4-byte frame sync word: 31-bit PN sequence plus a 0 pad bit."""
    return _padded_word(PREAMBLE_LFSR, 31)


def scrambler_word() -> bytes:
    """8-byte scrambler pattern: 63-bit PN sequence plus a 0 pad bit."""
    return _padded_word(SCRAMBLER_LFSR, 63)


_SCRAMBLER = np.frombuffer(scrambler_word(), dtype=np.uint8)


def scramble(data: bytes | np.ndarray, offset: int = 0) -> bytes | np.ndarray:
    """XOR data with the repeating 8-byte scrambler word.

    `offset` is the byte index within the word where the data starts.  The
    operation is its own inverse at the same offset.  A 2-D array is
    scrambled row by row, each row starting at the same offset.
    """
    arr = np.frombuffer(bytes(data), dtype=np.uint8) if isinstance(data, (bytes, bytearray)) \
        else np.asarray(data, dtype=np.uint8)
    idx = (np.arange(arr.shape[-1]) + offset) % 8
    out = arr ^ _SCRAMBLER[idx]
    return out.tobytes() if isinstance(data, (bytes, bytearray)) else out


def preamble_scrambler_agreement() -> int:
    """Worst-case bit agreement between the preamble and any 32-bit window
    of the repeating scrambler stream (all 64 cyclic phases)."""
    pre = unpack_bits(preamble_word())
    stream = np.tile(unpack_bits(scrambler_word()), 2)
    best = 0
    for off in range(64):
        window = stream[off:off + 32]
        best = max(best, int(np.sum(window == pre)))
    return best
