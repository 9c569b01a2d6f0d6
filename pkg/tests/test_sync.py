"""Correlator bank, candidate validation, lock tracking, frame recovery."""

import numpy as np
import pytest

from mmwlink import framing, pnseq
from mmwlink.sync import (DEFAULT_THRESHOLD, PREAMBLE_NBITS, LockState,
                          SyncCandidate, bank_scan, correlate32,
                          descramble_align, find_candidates, recover_frames,
                          scan_scores, validate_periodicity)

PREAMBLE_BITS = pnseq.unpack_bits(pnseq.preamble_word())


def _noise_bits(n, seed):
    return np.random.default_rng(seed).integers(0, 2, n, dtype=np.uint8)


def _frame_stream(n_frames, offset_bits, seed=0):
    rng = np.random.default_rng(seed)
    images = []
    for i in range(n_frames):
        payload = rng.integers(0, 256, framing.PAYLOAD_LEN, dtype=np.uint8).tobytes()
        images.append(framing.build_frame(payload, i).serialize())
    bits = np.concatenate([rng.integers(0, 2, offset_bits, dtype=np.uint8),
                           pnseq.unpack_bits(b"".join(images))])
    return bits, images


class TestCorrelator:
    def test_perfect_match_scores_32(self):
        assert correlate32(PREAMBLE_BITS) == 32

    def test_inverted_scores_zero(self):
        assert correlate32(1 - PREAMBLE_BITS) == 0

    def test_each_flip_costs_one(self):
        for k in (1, 3, 5):
            window = PREAMBLE_BITS.copy()
            window[:k] ^= 1
            assert correlate32(window) == 32 - k

    def test_bank_hits_every_shift(self):
        for shift in range(8):
            window = np.zeros(39, dtype=np.uint8)
            window[shift:shift + 32] = PREAMBLE_BITS
            scores = bank_scan(window)
            assert scores[shift] == 32

    def test_scan_matches_brute_force(self):
        bits = _noise_bits(4096, 1)
        scores = scan_scores(bits)
        for i in range(0, len(scores), 37):
            assert scores[i] == correlate32(bits[i:i + PREAMBLE_NBITS])

    def test_scan_covers_whole_stream(self):
        bits = _noise_bits(1024, 2)
        assert len(scan_scores(bits)) >= len(bits) - 39


class TestCandidates:
    def test_planted_preamble_found_at_exact_offset(self):
        bits = _noise_bits(4000, 3)
        bits[777:809] = PREAMBLE_BITS
        hits = [c for c in find_candidates(bits) if c.bit_index == 777]
        assert len(hits) == 1
        assert hits[0].score == 32
        assert hits[0].correlator_id == 777 % 8

    def test_three_flips_still_detected(self):
        bits = _noise_bits(2000, 4)
        damaged = PREAMBLE_BITS.copy()
        damaged[[2, 9, 30]] ^= 1
        bits[500:532] = damaged
        assert any(c.bit_index == 500 and c.score == 29
                   for c in find_candidates(bits))

    def test_four_flips_below_default_threshold(self):
        bits = np.zeros(2000, dtype=np.uint8)
        damaged = PREAMBLE_BITS.copy()
        damaged[[2, 9, 17, 30]] ^= 1
        bits[500:532] = damaged
        assert not any(c.bit_index == 500 for c in find_candidates(bits))


class TestValidation:
    @staticmethod
    def _cand(index, score=32):
        return SyncCandidate(bit_index=index, byte_position=index // 8,
                             shift=index % 8, correlator_id=index % 8,
                             score=score)

    def test_exact_frame_spacing_validates(self):
        decision = validate_periodicity([self._cand(100),
                                         self._cand(100 + framing.FRAME_BITS)])
        assert decision is not None
        assert decision.validated
        assert decision.frame_start_bit == 100
        assert decision.correlator_id == 100 % 8

    def test_off_by_one_spacing_rejected(self):
        for wrong in (framing.FRAME_BITS - 1, framing.FRAME_BITS + 1):
            assert validate_periodicity([self._cand(100),
                                         self._cand(100 + wrong)]) is None

    def test_lone_candidate_rejected(self):
        assert validate_periodicity([self._cand(64)]) is None

    def test_earliest_validated_pair_wins(self):
        cands = [self._cand(40), self._cand(40 + framing.FRAME_BITS),
                 self._cand(9), self._cand(9 + framing.FRAME_BITS)]
        assert validate_periodicity(cands).frame_start_bit == 9


class TestDescramble:
    def test_inverse_of_scramble(self):
        rng = np.random.default_rng(5)
        clear = rng.integers(0, 256, 256, dtype=np.uint8).tobytes()
        got, diag = descramble_align(pnseq.scramble(clear))
        assert got == clear
        assert diag is None

    def test_head_diagnostic_counts_agreement(self):
        clear = bytes(256)
        body = pnseq.scramble(clear)
        _, diag = descramble_align(body, expected_head=clear[:8])
        assert diag == 64
        corrupted = bytes([body[0] ^ 0x0F]) + body[1:]
        _, diag = descramble_align(corrupted, expected_head=clear[:8])
        assert diag == 60


class TestLockState:
    def test_two_misses_drop_lock(self):
        lock = LockState(next_start_bit=0)
        assert lock.check(32)
        assert lock.check(DEFAULT_THRESHOLD)
        assert lock.check(28)
        assert lock.locked
        assert not lock.check(27)
        assert not lock.locked

    def test_good_score_resets_miss_count(self):
        lock = LockState(next_start_bit=0)
        lock.check(10)
        lock.check(32)
        lock.check(10)
        assert lock.locked

    def test_tracks_expected_position(self):
        lock = LockState(next_start_bit=500)
        lock.check(32)
        assert lock.next_start_bit == 500 + framing.FRAME_BITS


class TestRecovery:
    def test_recovers_all_frames_from_offset(self):
        for offset in (0, 1, 13, 2079):
            bits, images = _frame_stream(12, offset, seed=offset)
            report = recover_frames(bits)
            assert len(report.frames) == 12
            assert report.sync_losses == 0
            starts = np.array(report.frame_start_bits)
            assert np.all(np.diff(starts) == framing.FRAME_BITS)
            assert starts[0] == offset
            for raw, image in zip(report.frames, images):
                assert raw == image

    def test_recovered_frames_parse(self):
        bits, _ = _frame_stream(6, 37, seed=11)
        report = recover_frames(bits)
        for i, raw in enumerate(report.frames):
            res = framing.parse_frame(raw)
            assert res.ok
            assert res.header == i

    def test_single_ruined_preamble_keeps_lock(self):
        bits, images = _frame_stream(10, 50, seed=12)
        third = 50 + 3 * framing.FRAME_BITS
        bits[third:third + 32] ^= 1
        report = recover_frames(bits)
        assert report.sync_losses == 0
        assert len(report.frames) == 10
        assert report.frames[4] == images[4]

    def test_two_ruined_preambles_force_reacquisition(self):
        # the flywheel still clocks out both frames whose preambles were
        # ruined, then declares loss of sync and re-acquires downstream
        bits, images = _frame_stream(14, 50, seed=13)
        for k in (5, 6):
            start = 50 + k * framing.FRAME_BITS
            bits[start:start + 32] ^= 1
        report = recover_frames(bits)
        assert report.sync_losses == 1
        assert report.preamble_scores[5] == 0
        assert report.preamble_scores[6] == 0
        assert len(report.frames) == 14
        assert report.frames[7] == images[7]

    def test_max_frames_limit(self):
        bits, _ = _frame_stream(9, 0, seed=14)
        report = recover_frames(bits, max_frames=4)
        assert len(report.frames) == 4

    def test_pure_noise_yields_nothing(self):
        report = recover_frames(_noise_bits(60_000, 15))
        assert report.frames == []
        assert report.sync_losses == 0
