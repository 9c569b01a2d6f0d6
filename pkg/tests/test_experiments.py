"""Experiment runners: stop rules, determinism, and cross-layer consistency."""

import numpy as np
import pytest

from mmwlink.channel import ANTENNAS, LinkBudget
from mmwlink.experiments import (ChainOptions, run_ber_point,
                                 run_distance_sweep, run_ebn0_sweep, run_eye,
                                 run_fifo, run_frame_roundtrip, run_response)
from mmwlink.framing import FRAME_LEN, PAYLOAD_LEN

QUICK = ChainOptions(min_errors=50, max_bits=2_000_000)


class TestUncodedPoint:
    def test_same_seed_reproduces_exactly(self):
        a = run_ber_point(8.0, seed=42, opts=QUICK)
        b = run_ber_point(8.0, seed=42, opts=QUICK)
        assert (a.bit_errors, a.bits_sent) == (b.bit_errors, b.bits_sent)

    def test_different_seed_differs(self):
        a = run_ber_point(8.0, seed=1, opts=QUICK)
        b = run_ber_point(8.0, seed=2, opts=QUICK)
        assert a.bit_errors != b.bit_errors

    def test_tracks_differential_theory(self):
        point = run_ber_point(8.0, seed=3, opts=QUICK)
        theory = 0.5 * np.exp(-10 ** 0.8)
        assert point.ber == pytest.approx(theory, rel=0.3)

    def test_min_errors_stop_rule(self):
        point = run_ber_point(4.0, seed=4, opts=QUICK)
        assert point.bit_errors >= 50
        assert not point.at_floor

    def test_max_bits_stop_rule_flags_floor(self):
        opts = ChainOptions(min_errors=100, max_bits=200_000)
        point = run_ber_point(None, seed=5, opts=opts)
        assert point.bits_sent == 200_000
        assert point.bit_errors == 0
        assert point.at_floor
        assert point.ber == 0.0

    def test_confidence_interval_brackets_estimate(self):
        point = run_ber_point(6.0, seed=6, opts=QUICK)
        low, high = point.ci
        assert low <= point.ber <= high
        assert high - low < point.ber


class TestCodedPoint:
    def test_full_chain_delivers_frames(self):
        point = run_ber_point(9.0, seed=7, coding=True,
                              opts=ChainOptions(min_errors=30, max_bits=500_000))
        assert point.coding
        assert point.frames > 0
        assert point.post_fec_bits == sum(
            v for v in point.fec_corrected.values()) * PAYLOAD_LEN * 8
        assert point.sync_losses == 0

    def test_fec_cleans_residual_errors_at_high_snr(self):
        point = run_ber_point(10.0, seed=8, coding=True,
                              opts=ChainOptions(min_errors=40, max_bits=800_000))
        assert point.bit_errors > 0
        assert point.post_fec_errors == 0
        assert point.frame_errors == 0


class TestSweeps:
    def test_ebn0_sweep_is_monotone(self):
        points = run_ebn0_sweep([4.0, 7.0], seed=9, opts=QUICK)
        assert points[0].ber > points[1].ber

    def test_distance_sweep_maps_the_link_budget(self):
        budget = LinkBudget(tx_antenna=ANTENNAS["patch"],
                            rx_antenna=ANTENNAS["patch"])
        points = run_distance_sweep([2.0, 8.0], budget=budget, seed=10,
                                    opts=QUICK)
        assert points[0].ebn0_db > points[1].ebn0_db
        assert points[0].ber <= points[1].ber
        assert points[0].distance_m == 2.0
        assert points[0].snr_db is not None


class TestFrameRoundtrip:
    def test_error_free_channel_is_transparent(self):
        point = run_frame_roundtrip(300, 0.0, seed=11)
        assert point.frames == 300
        assert point.bit_errors == 0
        assert point.frame_errors == 0
        assert point.fec_corrected == {0: 300}
        assert point.post_fec_bits == 300 * PAYLOAD_LEN * 8

    def test_moderate_byte_errors_all_corrected(self):
        point = run_frame_roundtrip(2000, 8e-4, seed=12)
        assert point.frames == 2000
        assert point.frame_errors == 0
        assert point.post_fec_errors == 0
        assert point.bit_errors > 0
        assert sum(point.fec_corrected.values()) == 2000

    def test_heavy_corruption_fails_frames(self):
        point = run_frame_roundtrip(200, 0.08, seed=13)
        assert point.frame_errors > 0

    def test_determinism(self):
        a = run_frame_roundtrip(500, 1e-3, seed=14)
        b = run_frame_roundtrip(500, 1e-3, seed=14)
        assert a.bit_errors == b.bit_errors
        assert a.fec_corrected == b.fec_corrected

    def test_bad_probability_rejected(self):
        with pytest.raises(ValueError):
            run_frame_roundtrip(10, 1.5)


class TestSignalRunners:
    def test_eye_record_shape(self):
        record = run_eye(20.0, seed=15, n_traces=60, n_symbols=500)
        assert record.traces.shape[0] == 60
        assert record.height > 0

    def test_eye_noiseless_beats_noisy(self):
        clean = run_eye(None, seed=16, n_traces=60, n_symbols=500)
        noisy = run_eye(12.0, seed=16, n_traces=60, n_symbols=500)
        assert noisy.height < clean.height

    def test_response_runner(self):
        record = run_response()
        assert 1.8e9 <= record.passband_3db_hz <= 2.2e9

    def test_fifo_runner_steady_state(self):
        trace = run_fifo(capacity_frames=2, n_events=100_000)
        assert trace.capacity == 2 * FRAME_LEN
        assert not trace.underflow
        assert not trace.overflow
        assert 0 < trace.min_occupancy <= trace.max_occupancy < trace.capacity
