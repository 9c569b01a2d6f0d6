"""Reed-Solomon (255, 239) codec against long-division and fixture oracles."""

import pathlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmwlink.gf256 import EXP
from mmwlink.rs import (FCR, GENERATOR, K, N, NROOTS, T, rs_decode, rs_encode,
                        rs_encode_batch, syndromes, syndromes_batch)
from oracles import poly_eval_peasant, rs_generator_oracle, rs_parity_longdiv

FIXTURES = pathlib.Path(__file__).parent / "fixtures"

payloads = st.binary(min_size=K, max_size=K)


def _corrupt(codeword: np.ndarray, positions, rng) -> np.ndarray:
    out = codeword.copy()
    for p in positions:
        out[p] ^= int(rng.integers(1, 256))
    return out


class TestGenerator:
    def test_matches_long_multiplication_oracle(self):
        assert list(GENERATOR) == rs_generator_oracle(NROOTS, FCR)

    def test_monic_degree_sixteen(self):
        assert len(GENERATOR) == NROOTS + 1
        assert GENERATOR[0] == 1

    def test_vanishes_at_all_sixteen_roots(self):
        for j in range(NROOTS):
            assert poly_eval_peasant(list(GENERATOR), EXP[FCR + j]) == 0

    def test_code_dimensions(self):
        assert (N, K, NROOTS, T) == (255, 239, 16, 8)


class TestEncode:
    def test_golden_fixture_records(self):
        blob = (FIXTURES / "rs_golden.bin").read_bytes()
        assert len(blob) % N == 0
        for i in range(len(blob) // N):
            rec = blob[i * N:(i + 1) * N]
            msg, parity = rec[:K], rec[K:]
            assert rs_encode(msg) == parity
            assert rs_parity_longdiv(msg) == parity

    def test_against_long_division_oracle_random(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            msg = rng.integers(0, 256, K, dtype=np.uint8).tobytes()
            assert rs_encode(msg) == rs_parity_longdiv(msg)

    def test_linear_in_the_message(self):
        rng = np.random.default_rng(12)
        a = rng.integers(0, 256, K, dtype=np.uint8)
        b = rng.integers(0, 256, K, dtype=np.uint8)
        pa = np.frombuffer(rs_encode(a.tobytes()), dtype=np.uint8)
        pb = np.frombuffer(rs_encode(b.tobytes()), dtype=np.uint8)
        pab = np.frombuffer(rs_encode((a ^ b).tobytes()), dtype=np.uint8)
        assert np.array_equal(pab, pa ^ pb)

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(13)
        msgs = rng.integers(0, 256, (50, K), dtype=np.uint8)
        batch = rs_encode_batch(msgs)
        for row, msg in zip(batch, msgs):
            assert row.tobytes() == rs_encode(msg.tobytes())

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            rs_encode(bytes(K - 1))


class TestSyndromes:
    def test_clean_codewords_have_zero_syndromes(self):
        rng = np.random.default_rng(14)
        for _ in range(10):
            msg = rng.integers(0, 256, K, dtype=np.uint8)
            cw = np.concatenate([msg, np.frombuffer(rs_encode(msg.tobytes()),
                                                    dtype=np.uint8)])
            assert not syndromes(cw).any()

    def test_single_error_gives_nonzero_syndromes(self):
        msg = bytes(K)
        cw = np.frombuffer(msg + rs_encode(msg), dtype=np.uint8).copy()
        cw[100] ^= 0x41
        assert syndromes(cw).any()

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(15)
        words = rng.integers(0, 256, (30, N), dtype=np.uint8)
        batch = syndromes_batch(words)
        for row, w in zip(batch, words):
            assert np.array_equal(row, syndromes(w))


class TestDecode:
    def test_clean_word_fast_path(self):
        msg = bytes(range(200)) + bytes(39)
        cw = np.frombuffer(msg + rs_encode(msg), dtype=np.uint8)
        res = rs_decode(cw)
        assert res.ok
        assert res.message == msg
        assert res.corrected == 0
        assert res.error_positions == ()

    @pytest.mark.parametrize("weight", range(1, T + 1))
    def test_corrects_every_weight_up_to_eight(self, weight):
        rng = np.random.default_rng(100 + weight)
        for _ in range(20):
            msg = rng.integers(0, 256, K, dtype=np.uint8).tobytes()
            cw = np.frombuffer(msg + rs_encode(msg), dtype=np.uint8)
            positions = rng.choice(N, size=weight, replace=False)
            res = rs_decode(_corrupt(cw, positions, rng))
            assert res.ok
            assert res.message == msg
            assert res.corrected == weight
            assert sorted(res.error_positions) == sorted(int(p) for p in positions)

    def test_parity_only_errors(self):
        rng = np.random.default_rng(16)
        msg = rng.integers(0, 256, K, dtype=np.uint8).tobytes()
        cw = np.frombuffer(msg + rs_encode(msg), dtype=np.uint8)
        res = rs_decode(_corrupt(cw, [K, K + 5, N - 1], rng))
        assert res.ok
        assert res.message == msg
        assert res.corrected == 3

    def test_beyond_capacity_is_flagged_not_invented(self):
        rng = np.random.default_rng(17)
        rejected = 0
        for _ in range(40):
            msg = rng.integers(0, 256, K, dtype=np.uint8).tobytes()
            cw = np.frombuffer(msg + rs_encode(msg), dtype=np.uint8)
            weight = int(rng.integers(T + 1, 2 * T + 1))
            positions = rng.choice(N, size=weight, replace=False)
            res = rs_decode(_corrupt(cw, positions, rng))
            if res.ok:
                # a rare miscorrection must still be a valid nearby codeword
                assert res.corrected <= T
                assert not syndromes(np.frombuffer(
                    res.message + rs_encode(res.message), dtype=np.uint8)).any()
            else:
                rejected += 1
        assert rejected >= 38

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            rs_decode(bytes(N - 1))

    @settings(max_examples=40, deadline=None)
    @given(payloads, st.integers(min_value=0, max_value=T),
           st.randoms(use_true_random=False))
    def test_roundtrip_property(self, msg, weight, pyrng):
        cw = np.frombuffer(msg + rs_encode(msg), dtype=np.uint8)
        positions = pyrng.sample(range(N), weight)
        bad = cw.copy()
        for p in positions:
            bad[p] ^= pyrng.randint(1, 255)
        res = rs_decode(bad)
        assert res.ok
        assert res.message == msg
        assert res.corrected == weight
