"""Monte-Carlo experiments over the full transmit/receive chain.

Seeding policy: every experiment builds its generator as
np.random.default_rng(seed), so a run is reproducible bit for bit, and
sweep points that share a seed also share their data and unit-variance
noise draws (common random numbers, which keeps sweeps paired and
monotone trends clean).
"""

from dataclasses import dataclass

import numpy as np

from . import framing, pnseq, rs, sync
from .channel import (ChannelProfile, LinkBudget, ResponseRecord, add_awgn,
                      ebn0_at_distance, link_snr_db, los_only,
                      phase_noise_apply, probe_response, tdl_apply)
from .framing import FifoTrace, simulate_fifo
from .modem import (REFERENCE_MODEM, EyeRecord, ModemConfig, agc, dbpsk_modulate,
                    delay_line_demod, demod_symbols, diff_encode, eye_capture,
                    slice_bits)
from .reports import BerPoint

UNCODED_CHUNK_BITS = 1_000_000
CODED_CHUNK_FRAMES = 40
ROUNDTRIP_CHUNK_FRAMES = 5_000


@dataclass(frozen=True)
class ChainOptions:
    """Waveform-chain knobs shared by the BER experiments."""

    modem: ModemConfig = REFERENCE_MODEM
    profile: ChannelProfile = los_only()
    phase_noise_var: float = 0.0
    use_agc: bool = True
    min_errors: int = 100
    max_bits: int = 10_000_000


def _through_channel(tx, opts: ChainOptions, ebn0_db, rng):
    y = tx
    if len(opts.profile.taps) > 1 or opts.profile.taps[0].delay_s != 0.0 \
            or opts.profile.taps[0].gain_db != 0.0:
        y = tdl_apply(y, opts.profile)
    if opts.phase_noise_var > 0.0:
        y = phase_noise_apply(y, opts.phase_noise_var, rng)
    y = add_awgn(y, ebn0_db, rng, opts.modem.samples_per_symbol)
    if opts.use_agc:
        y = agc(y).stream
    return y


def run_ber_point(ebn0_db: float | None, *, seed: int = 0, coding: bool = False,
                  opts: ChainOptions = ChainOptions(),
                  distance_m: float | None = None,
                  snr_db: float | None = None) -> BerPoint:
    """One BER measurement at a fixed operating point.

    Uncoded: continuous random pattern with known timing (generator and
    error-counter style).  Coded: real frames through the full chain with
    sync acquisition from a random stream offset; pre-FEC errors are
    counted on the recovered frame images, post-FEC on delivered payloads,
    and sync losses are reported separately.  Stops at min_errors pre-FEC
    bit errors or max_bits, whichever comes first.
    """
    point = BerPoint(ebn0_db=ebn0_db, distance_m=distance_m, snr_db=snr_db, coding=coding)
    rng = np.random.default_rng(seed)
    if not coding:
        _run_uncoded(point, ebn0_db, rng, opts)
    else:
        _run_coded(point, ebn0_db, rng, opts)
    point.at_floor = point.bit_errors < opts.min_errors
    return point


def _run_uncoded(point: BerPoint, ebn0_db, rng, opts: ChainOptions) -> None:
    cfg = opts.modem
    while point.bit_errors < opts.min_errors and point.bits_sent < opts.max_bits:
        n = int(min(UNCODED_CHUNK_BITS, opts.max_bits - point.bits_sent + 1))
        bits = rng.integers(0, 2, n, dtype=np.uint8)
        tx = dbpsk_modulate(diff_encode(bits, cfg.init_bit), cfg)
        rx = _through_channel(tx, opts, ebn0_db, rng)
        decided = slice_bits(demod_symbols(rx, cfg))
        point.bit_errors += int(np.sum(decided != bits[1:]))
        point.bits_sent += n - 1


def _run_coded(point: BerPoint, ebn0_db, rng, opts: ChainOptions) -> None:
    cfg = opts.modem
    attempted_bits = 0
    while point.bit_errors < opts.min_errors and point.bits_sent < opts.max_bits \
            and attempted_bits < 2 * opts.max_bits:
        attempted_bits += CODED_CHUNK_FRAMES * framing.FRAME_BITS
        payloads = rng.integers(0, 256, (CODED_CHUNK_FRAMES, framing.PAYLOAD_LEN),
                                dtype=np.uint8)
        parity = rs.rs_encode_batch(payloads)
        seq0 = point.frames
        wire = np.empty((CODED_CHUNK_FRAMES, framing.FRAME_LEN), dtype=np.uint8)
        wire[:, :4] = np.frombuffer(pnseq.preamble_word(), dtype=np.uint8)
        body = np.concatenate([
            payloads,
            (np.arange(seq0, seq0 + CODED_CHUNK_FRAMES, dtype=np.int64)[:, None] % 256
             ).astype(np.uint8),
            parity,
        ], axis=1)
        wire[:, 4:] = pnseq.scramble(body)
        offset = int(rng.integers(1, framing.FRAME_BITS))
        stream_bits = np.concatenate([rng.integers(0, 2, offset, dtype=np.uint8),
                                      pnseq.unpack_bits(wire.reshape(-1))])
        tx = dbpsk_modulate(diff_encode(stream_bits, cfg.init_bit), cfg)
        rx = _through_channel(tx, opts, ebn0_db, rng)
        decided = slice_bits(delay_line_demod(rx, cfg), cfg)
        report = sync.recover_frames(decided)
        point.sync_losses += report.sync_losses

        for raw, start in zip(report.frames, report.frame_start_bits):
            idx = round((start - (offset - 1)) / framing.FRAME_BITS)
            if not 0 <= idx < CODED_CHUNK_FRAMES:
                continue
            truth_img = wire[idx]
            got = np.frombuffer(raw, dtype=np.uint8)
            # pre-FEC errors over the 255 codeword bytes (scrambling is
            # transparent to XOR so the wire image comparison is exact)
            cw_cols = np.r_[4:243, 244:260]
            diff = np.bitwise_count(got[cw_cols] ^ truth_img[cw_cols])
            point.bit_errors += int(diff.sum())
            point.bits_sent += 255 * 8
            res = framing.parse_frame(raw)
            point.frames += 1
            if res.ok:
                point.fec_corrected[res.fec_corrected] = \
                    point.fec_corrected.get(res.fec_corrected, 0) + 1
                pay_err = int(np.bitwise_count(
                    np.frombuffer(res.payload, dtype=np.uint8) ^ payloads[idx]).sum())
                if pay_err:
                    point.frame_errors += 1
                point.post_fec_errors += pay_err
                point.post_fec_bits += framing.PAYLOAD_LEN * 8
            else:
                point.frame_errors += 1


def run_ebn0_sweep(ebn0_list, *, seed: int = 0, coding: bool = False,
                   opts: ChainOptions = ChainOptions()) -> list[BerPoint]:
    return [run_ber_point(e, seed=seed, coding=coding, opts=opts) for e in ebn0_list]


def run_distance_sweep(distances_m, *, budget: LinkBudget = LinkBudget(),
                       bit_rate_hz: float = float(framing.LINE_RATE_HZ),
                       seed: int = 0, coding: bool = False,
                       opts: ChainOptions = ChainOptions()) -> list[BerPoint]:
    """Map each distance through the link budget, then measure BER there."""
    points = []
    for d in distances_m:
        snr = link_snr_db(budget, d)
        ebn0 = ebn0_at_distance(budget, d, bit_rate_hz)
        points.append(run_ber_point(ebn0, seed=seed, coding=coding, opts=opts,
                                    distance_m=d, snr_db=snr))
    return points


def run_frame_roundtrip(n_frames: int, byte_error_prob: float, *,
                        seed: int = 0) -> BerPoint:
    """Frame-level coded run against an iid byte-error channel.

    Builds real frames, corrupts each wire byte independently with the
    given probability (uniform wrong value), then descrambles and decodes.
    Pre-FEC errors are counted over codeword bits, failures are frames the
    decoder rejects or mends into the wrong payload.
    """
    if not 0.0 <= byte_error_prob < 1.0:
        raise ValueError("byte_error_prob must be in [0, 1)")
    rng = np.random.default_rng(seed)
    point = BerPoint(byte_error_prob=byte_error_prob, coding=True)
    preamble = np.frombuffer(pnseq.preamble_word(), dtype=np.uint8)
    done = 0
    while done < n_frames:
        n = int(min(ROUNDTRIP_CHUNK_FRAMES, n_frames - done))
        payloads = rng.integers(0, 256, (n, framing.PAYLOAD_LEN), dtype=np.uint8)
        parity = rs.rs_encode_batch(payloads)
        headers = (np.arange(done, done + n, dtype=np.int64)[:, None] % 256).astype(np.uint8)
        wire = np.empty((n, framing.FRAME_LEN), dtype=np.uint8)
        wire[:, :4] = preamble
        wire[:, 4:] = pnseq.scramble(np.concatenate([payloads, headers, parity], axis=1))

        hit = rng.random((n, framing.FRAME_LEN)) < byte_error_prob
        flips = rng.integers(1, 256, (n, framing.FRAME_LEN), dtype=np.uint8)
        received = wire ^ (hit * flips)

        body = pnseq.scramble(received[:, 4:])
        codewords = np.concatenate([body[:, :framing.PAYLOAD_LEN],
                                    body[:, framing.PAYLOAD_LEN + 1:]], axis=1)
        truth = np.concatenate([payloads, parity], axis=1)
        point.bit_errors += int(np.bitwise_count(codewords ^ truth).sum())
        point.bits_sent += n * rs.N * 8

        synd = rs.syndromes_batch(codewords)
        dirty = np.flatnonzero(synd.any(axis=1))
        clean = n - len(dirty)
        if clean:
            point.fec_corrected[0] = point.fec_corrected.get(0, 0) + clean
            point.post_fec_bits += clean * framing.PAYLOAD_LEN * 8
        for i in dirty:
            res = rs.rs_decode(codewords[i])
            if res.ok:
                point.fec_corrected[res.corrected] = \
                    point.fec_corrected.get(res.corrected, 0) + 1
                errs = int(np.bitwise_count(
                    np.frombuffer(res.message, dtype=np.uint8) ^ payloads[i]).sum())
                point.post_fec_errors += errs
                point.post_fec_bits += framing.PAYLOAD_LEN * 8
                if errs:
                    point.frame_errors += 1
            else:
                point.frame_errors += 1
        point.frames += n
        done += n
    return point


def run_eye(ebn0_db: float | None = 20.0, *, seed: int = 0,
            modem_cfg: ModemConfig = ModemConfig(),
            profile: ChannelProfile = los_only(),
            n_traces: int = 100, n_symbols: int = 3000) -> EyeRecord:
    """Eye capture on the filtered chain at one operating point."""
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, n_symbols, dtype=np.uint8)
    tx = dbpsk_modulate(diff_encode(bits, modem_cfg.init_bit), modem_cfg)
    y = tdl_apply(tx, profile)
    y = add_awgn(y, ebn0_db, rng, modem_cfg.samples_per_symbol)
    soft = delay_line_demod(y, modem_cfg)
    return eye_capture(soft, modem_cfg, n_traces=n_traces)


def run_response(profile: ChannelProfile = los_only(),
                 modem_cfg: ModemConfig = ModemConfig()) -> ResponseRecord:
    return probe_response(modem_cfg, profile)


def run_fifo(capacity_frames: int = 2, n_events: int = 1_000_000, *,
             start_half: bool = True) -> FifoTrace:
    cap = capacity_frames * framing.FRAME_LEN
    start = cap // 2 if start_half else None
    return simulate_fifo(cap, n_events, start_occupancy=start,
                         release_at_half=not start_half)
