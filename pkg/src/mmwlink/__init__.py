"""Desk-scale simulator of a 60 GHz single-carrier gigabit radio link.

The pieces mirror the hardware they stand in for: a Reed-Solomon
(255, 239) codec, LFSR preamble and scrambler words, 260-byte framing
with dual-clock FIFO rate adaptation, a differential BPSK modem, channel
and link-budget models, correlator-bank frame synchronization, and
experiment runners with CSV reporting behind a command line front end.
"""

from .channel import (ANTENNAS, AntennaModel, ChannelProfile, ChannelTap,
                      LinkBudget, add_awgn, corridor_like, ebn0_at_distance,
                      fspl_db, link_snr_db, load_profile, los_only,
                      phase_noise_apply, probe_response, tdl_apply, two_ray)
from .experiments import (ChainOptions, run_ber_point, run_distance_sweep,
                          run_ebn0_sweep, run_eye, run_fifo,
                          run_frame_roundtrip, run_response)
from .framing import (FRAME_BITS, FRAME_LEN, PAYLOAD_LEN, ByteFrame, ClockPlan,
                      FifoTrace, FrameResult, build_frame, net_rate,
                      parse_frame, simulate_fifo)
from .modem import (REFERENCE_MODEM, ModemConfig, SampleStream, agc,
                    dbpsk_modulate, delay_line_demod, demod_symbols,
                    diff_encode, eye_capture, slice_bits)
from .pnseq import (PREAMBLE_LFSR, SCRAMBLER_LFSR, LfsrSpec, lfsr_run,
                    pack_bits, preamble_word, scramble, scrambler_word,
                    unpack_bits)
from .reports import BerPoint, ber_confidence, emit_ber_csv
from .rs import RsDecodeResult, rs_decode, rs_encode, rs_encode_batch
from .sync import (DEFAULT_THRESHOLD, LockState, SyncDecision, bank_scan,
                   correlate32, find_candidates, recover_frames, scan_scores,
                   validate_periodicity)

__version__ = "0.1.0"

__all__ = [
    "ANTENNAS", "AntennaModel", "BerPoint", "ByteFrame", "ChainOptions",
    "ChannelProfile", "ChannelTap", "ClockPlan", "DEFAULT_THRESHOLD",
    "FifoTrace", "FrameResult", "FRAME_BITS", "FRAME_LEN", "LfsrSpec",
    "LinkBudget", "LockState", "ModemConfig", "PAYLOAD_LEN", "PREAMBLE_LFSR",
    "REFERENCE_MODEM", "RsDecodeResult", "SampleStream", "SCRAMBLER_LFSR",
    "SyncDecision", "add_awgn", "agc", "bank_scan", "ber_confidence",
    "build_frame", "corridor_like", "correlate32", "dbpsk_modulate",
    "delay_line_demod", "demod_symbols", "diff_encode", "ebn0_at_distance",
    "emit_ber_csv", "eye_capture", "find_candidates", "fspl_db",
    "lfsr_run", "link_snr_db", "load_profile", "los_only", "net_rate",
    "pack_bits", "parse_frame", "phase_noise_apply", "preamble_word",
    "probe_response", "recover_frames", "rs_decode", "rs_encode",
    "rs_encode_batch", "run_ber_point", "run_distance_sweep",
    "run_ebn0_sweep", "run_eye", "run_fifo", "run_frame_roundtrip",
    "run_response", "scan_scores", "scramble", "scrambler_word",
    "simulate_fifo", "slice_bits", "tdl_apply", "two_ray", "unpack_bits",
    "validate_periodicity",
]
