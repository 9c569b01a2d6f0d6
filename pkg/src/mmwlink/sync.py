"""Frame synchronization: correlator bank, periodicity check, stream lock.

The detector slides a 32-bit agreement correlator over the bit stream at
every byte position and bit shift (8 correlators, one per shift), flags
scores at or above the threshold, and only trusts a candidate once a second
one appears exactly one frame later on the same correlator.  Byte alignment
falls out of the winning shift.
"""

from dataclasses import dataclass

import numpy as np

from . import pnseq
from .framing import FRAME_BITS, FRAME_LEN

PREAMBLE_NBITS = 32
SCAN_WINDOW_NBITS = PREAMBLE_NBITS + 7  # all 8 shifts of one byte position
DEFAULT_THRESHOLD = 29

_PREAMBLE_BITS = pnseq.unpack_bits(pnseq.preamble_word())
_PREAMBLE_U32 = int.from_bytes(pnseq.preamble_word(), "big")


def correlate32(window: np.ndarray) -> int:
    """Number of agreeing bits (0..32) between a 32-bit window and the preamble."""
    window = np.asarray(window, dtype=np.uint8)
    if window.shape != (PREAMBLE_NBITS,):
        raise ValueError("window must be exactly 32 bits")
    return int(np.sum(window == _PREAMBLE_BITS))


def bank_scan(window39: np.ndarray) -> np.ndarray:
    """Scores of the 8 shifted correlators over one 39-bit window."""
    w = np.asarray(window39, dtype=np.uint8)
    if w.shape != (SCAN_WINDOW_NBITS,):
        raise ValueError("window must be exactly 39 bits")
    return np.array([correlate32(w[s:s + PREAMBLE_NBITS]) for s in range(8)], dtype=np.int64)


def scan_scores(bits: np.ndarray) -> np.ndarray:
    """Correlator scores for every bit offset of a stream.

    Returns scores[i] for window starting at bit i (byte position i//8,
    shift i%8), length len(bits) - 39 + 1 rounded down to whole byte
    positions.  Vectorized: 32-bit windows are assembled per shift from a
    packed byte view and scored with popcounts.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    n_pos = (len(bits) - SCAN_WINDOW_NBITS) // 8 + 1
    if n_pos < 1:
        return np.zeros(0, dtype=np.uint8)
    packed = np.packbits(bits[: n_pos * 8 + 32]).astype(np.uint64)
    b = [packed[i: i + n_pos] for i in range(5)]
    base = (b[0] << 24) | (b[1] << 16) | (b[2] << 8) | b[3]
    out = np.empty((n_pos, 8), dtype=np.uint8)
    for shift in range(8):
        if shift == 0:
            w = base
        else:
            w = ((base << np.uint64(shift)) | (b[4] >> np.uint64(8 - shift))) & np.uint64(0xFFFFFFFF)
        out[:, shift] = 32 - np.bitwise_count(w ^ np.uint64(_PREAMBLE_U32))
    return out.reshape(-1)


@dataclass(frozen=True)
class SyncCandidate:
    bit_index: int
    byte_position: int
    shift: int
    correlator_id: int
    score: int


@dataclass(frozen=True)
class SyncDecision:
    frame_start_bit: int
    shift: int
    correlator_id: int
    score: int
    validated: bool


def find_candidates(bits: np.ndarray, threshold: int = DEFAULT_THRESHOLD) -> list[SyncCandidate]:
    """Every window meeting the threshold, in stream order."""
    scores = scan_scores(bits)
    hits = np.flatnonzero(scores >= threshold)
    return [SyncCandidate(bit_index=int(i), byte_position=int(i) // 8, shift=int(i) % 8,
                          correlator_id=int(i) % 8, score=int(scores[i]))
            for i in hits]


def validate_periodicity(candidates: list[SyncCandidate]) -> SyncDecision | None:
    """First candidate confirmed by a hit exactly one frame later.

    Confirmation must match to the bit: same correlator (same shift), frame
    spacing of exactly 2080 bits.  One bit off does not count.
    """
    by_index = {c.bit_index: c for c in candidates}
    for cand in sorted(candidates, key=lambda c: c.bit_index):
        mate = by_index.get(cand.bit_index + FRAME_BITS)
        if mate is not None and mate.correlator_id == cand.correlator_id:
            return SyncDecision(frame_start_bit=cand.bit_index, shift=cand.shift,
                                correlator_id=cand.correlator_id, score=cand.score,
                                validated=True)
    return None


def descramble_align(body: bytes, expected_head: bytes | None = None) -> tuple[bytes, int | None]:
    """Descramble the 256 post-preamble bytes of a frame (word offset 0).

    When the true leading bytes are known (instrumented runs), also report
    the 64-bit agreement between the received scrambled head and what that
    data would have produced; 64 means a clean head, each errored bit in
    the first 64 drops it by one.
    """
    if len(body) != FRAME_LEN - 4:
        raise ValueError(f"frame body must be {FRAME_LEN - 4} bytes, got {len(body)}")
    clear = pnseq.scramble(body, 0)
    diag = None
    if expected_head is not None:
        if len(expected_head) != 8:
            raise ValueError("expected_head must be 8 bytes")
        want = pnseq.unpack_bits(pnseq.scramble(expected_head, 0))
        got = pnseq.unpack_bits(body[:8])
        diag = int(np.sum(want == got))
    return clear, diag


@dataclass
class LockState:
    """Tracking state once a validated decision exists.

    Re-verifies the preamble at each expected frame start; two consecutive
    sub-threshold checks drop the lock.
    """

    next_start_bit: int
    threshold: int = DEFAULT_THRESHOLD
    misses: int = 0
    locked: bool = True

    def check(self, score: int) -> bool:
        """Advance one frame; returns True while the lock holds."""
        if score >= self.threshold:
            self.misses = 0
        else:
            self.misses += 1
            if self.misses >= 2:
                self.locked = False
        self.next_start_bit += FRAME_BITS
        return self.locked


@dataclass
class StreamSyncReport:
    frames: list[bytes]
    frame_start_bits: list[int]
    decisions: list[SyncDecision]
    sync_losses: int
    preamble_scores: list[int]


def recover_frames(bits: np.ndarray, threshold: int = DEFAULT_THRESHOLD,
                   max_frames: int | None = None) -> StreamSyncReport:
    """Acquire, validate, then track frame sync over a demodulated bit stream.

    Acquisition scans for a periodicity-validated candidate pair; tracking
    then extracts one frame per 2080 bits, re-scoring the preamble each
    time.  A dropped lock (two consecutive misses) restarts acquisition
    after the last good frame.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    frames: list[bytes] = []
    start_bits: list[int] = []
    decisions: list[SyncDecision] = []
    scores_seen: list[int] = []
    sync_losses = 0
    pos = 0
    locked_from: int | None = None

    while True:
        if locked_from is None:
            region = bits[pos:]
            decision = validate_periodicity(find_candidates(region, threshold))
            if decision is None:
                break
            locked_from = pos + decision.frame_start_bit
            decisions.append(SyncDecision(frame_start_bit=locked_from,
                                          shift=decision.shift,
                                          correlator_id=decision.correlator_id,
                                          score=decision.score, validated=True))
            if len(decisions) > 1:
                sync_losses += 1
            lock = LockState(next_start_bit=locked_from, threshold=threshold)
        start = lock.next_start_bit
        if start + FRAME_BITS > len(bits) or (max_frames is not None
                                              and len(frames) >= max_frames):
            break
        window = bits[start:start + PREAMBLE_NBITS]
        score = correlate32(window)
        scores_seen.append(score)
        frame_bits = bits[start:start + FRAME_BITS]
        frames.append(pnseq.pack_bits(frame_bits).tobytes())
        start_bits.append(start)
        if not lock.check(score):
            locked_from = None
            pos = start + FRAME_BITS
    return StreamSyncReport(frames=frames, frame_start_bits=start_bits,
                            decisions=decisions, sync_losses=sync_losses,
                            preamble_scores=scores_seen)
