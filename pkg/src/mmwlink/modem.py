"""DBPSK modem: differential coding, NRZ modulation, delay-line detection.

The waveform is the complex envelope referenced to the IF carrier; the
default configuration puts exactly 4 carrier cycles in each symbol, which
is what makes the envelope model and a real-IF model interchangeable.

Alignment convention used throughout: a stream starts on a symbol boundary,
symbol k occupies samples [k*sps, (k+1)*sps), and the decision instant for
a symbol sits at its mid sample (k*sps + sps//2).  The demodulator output
drops the first symbol (no differential reference) and keeps that grid, so
consumers never re-derive group delays.
"""

from dataclasses import dataclass

import numpy as np
from scipy.signal import firwin


@dataclass
class SampleStream:
    """A block of complex (or demodulated real) samples plus its clock."""

    samples: np.ndarray
    sample_rate_hz: float
    stage: str = ""

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def power(self) -> float:
        return float(np.mean(np.abs(self.samples) ** 2))


@dataclass(frozen=True)
class ModemConfig:
    symbol_rate_hz: int = 875_000_000
    samples_per_symbol: int = 8
    carrier_freq_hz: int = 3_500_000_000
    tx_band_limit_hz: float | None = 1e9   # one-sided envelope limit, 2 GHz passband
    lpf_cutoff_hz: float | None = 1e9      # post-detection low-pass
    rx_frontend: str = "matched"           # "matched" | "band" | "none"
    filter_taps: int = 63
    init_bit: int = 0                      # differential reference state

    def __post_init__(self):
        if self.samples_per_symbol < 4:
            raise ValueError("samples_per_symbol must be at least 4")
        if self.carrier_freq_hz % self.symbol_rate_hz:
            raise ValueError("carrier must be an integer number of cycles per symbol")
        if self.rx_frontend not in ("matched", "band", "none"):
            raise ValueError(f"unknown rx_frontend {self.rx_frontend!r}")
        if self.filter_taps % 2 == 0:
            raise ValueError("filter_taps must be odd (linear phase, exact centring)")
        nyq = self.sample_rate_hz / 2
        for cut in (self.tx_band_limit_hz, self.lpf_cutoff_hz):
            if cut is not None and not 0 < cut < nyq:
                raise ValueError(f"filter cutoff {cut} outside (0, {nyq})")

    @property
    def sample_rate_hz(self) -> float:
        return float(self.symbol_rate_hz * self.samples_per_symbol)

    @property
    def ts_s(self) -> float:
        return 1.0 / self.symbol_rate_hz

    @property
    def carrier_cycles_per_symbol(self) -> int:
        return self.carrier_freq_hz // self.symbol_rate_hz

    @property
    def mid_offset(self) -> int:
        return self.samples_per_symbol // 2


# Reference configuration for BER-against-theory runs: no band limiting, no
# post-detection filter, matched front end.  This is the ideal differential
# detector; the filtered default has an implementation penalty and is meant
# for eye/response work.
REFERENCE_MODEM = ModemConfig(tx_band_limit_hz=None, lpf_cutoff_hz=None,
                              rx_frontend="matched", samples_per_symbol=4)


def lowpass_taps(cutoff_hz: float, sample_rate_hz: float, ntaps: int) -> np.ndarray:
    """Windowed-sinc linear-phase lowpass (Hamming)."""
    return firwin(ntaps, cutoff_hz, fs=sample_rate_hz)


def diff_encode(bits: np.ndarray, init: int = 0) -> np.ndarray:
    """d[k] = b[k] xor d[k-1], d[-1] = init."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size and bits.max() > 1:
        raise ValueError("bits must be 0/1")
    return np.bitwise_xor.accumulate(bits) ^ np.uint8(init)


def dbpsk_modulate(encoded_bits: np.ndarray, cfg: ModemConfig) -> SampleStream:
    """NRZ DBPSK envelope: bit 0 -> +1, bit 1 -> -1, sps samples each."""
    bits = np.asarray(encoded_bits, dtype=np.uint8)
    symbols = 1.0 - 2.0 * bits.astype(np.float64)
    x = np.repeat(symbols, cfg.samples_per_symbol).astype(np.complex128)
    if cfg.tx_band_limit_hz is not None:
        h = lowpass_taps(cfg.tx_band_limit_hz, cfg.sample_rate_hz, cfg.filter_taps)
        x = np.convolve(x, h, mode="same")
    return SampleStream(x, cfg.sample_rate_hz, stage="tx")


def _rx_frontend(r: np.ndarray, cfg: ModemConfig) -> np.ndarray:
    sps = cfg.samples_per_symbol
    if cfg.rx_frontend == "matched":
        # causal boxcar over one symbol, then advanced so the full-window
        # instant lands on the mid-sample grid
        y = np.convolve(r, np.full(sps, 1.0 / sps))
        lead = sps - 1 - cfg.mid_offset
        return y[lead:lead + len(r)]
    if cfg.rx_frontend == "band" and cfg.tx_band_limit_hz is not None:
        h = lowpass_taps(cfg.tx_band_limit_hz, cfg.sample_rate_hz, cfg.filter_taps)
        return np.convolve(r, h, mode="same")
    return r


def delay_line_demod(stream: SampleStream, cfg: ModemConfig) -> SampleStream:
    """Soft decisions from the one-symbol delay line.

    soft[n] = Re(y[n+sps] * conj(y[n])) after the front end, optionally
    smoothed by the post-detection low-pass.  The output stream covers
    symbols 1..N-1 of the input on the same sample grid.
    """
    r = np.asarray(stream.samples)
    sps = cfg.samples_per_symbol
    if len(r) < 2 * sps:
        raise ValueError("stream shorter than two symbols")
    y = _rx_frontend(r, cfg)
    soft = (y[sps:] * np.conj(y[:-sps])).real
    if cfg.lpf_cutoff_hz is not None:
        h = lowpass_taps(cfg.lpf_cutoff_hz, cfg.sample_rate_hz, cfg.filter_taps)
        soft = np.convolve(soft, h, mode="same")
    return SampleStream(soft, stream.sample_rate_hz, stage="demod_soft")


def demod_symbols(stream: SampleStream, cfg: ModemConfig) -> np.ndarray:
    """One soft value per recovered symbol (mid-sample of the soft stream).

    For the matched/no-post-filter configuration this takes the direct
    per-symbol route; it is numerically the same statistic either way.
    """
    sps = cfg.samples_per_symbol
    if cfg.rx_frontend == "matched" and cfg.lpf_cutoff_hz is None:
        r = np.asarray(stream.samples)
        n_sym = len(r) // sps
        m = r[: n_sym * sps].reshape(n_sym, sps).mean(axis=1)
        return (m[1:] * np.conj(m[:-1])).real
    soft = delay_line_demod(stream, cfg).samples
    n_out = len(soft) // sps
    return soft[np.arange(n_out) * sps + cfg.mid_offset]


def slice_bits(soft: SampleStream | np.ndarray, cfg: ModemConfig | None = None) -> np.ndarray:
    """Hard decisions: negative soft -> 1, non-negative (ties) -> 0."""
    if isinstance(soft, SampleStream):
        if cfg is None:
            raise ValueError("cfg required to slice a sample-rate stream")
        sps = cfg.samples_per_symbol
        vals = soft.samples
        n_out = len(vals) // sps
        vals = vals[np.arange(n_out) * sps + cfg.mid_offset]
    else:
        vals = np.asarray(soft)
    return (vals < 0).astype(np.uint8)


@dataclass
class AgcResult:
    stream: SampleStream
    gain_db: np.ndarray
    degenerate: bool


def agc(stream: SampleStream, target_power: float = 1.0,
        dynamic_range_db: float = 20.0, block_len: int = 1024) -> AgcResult:
    """Block power normalizer with gain clamped to +-range/2 around unity.

    Zero-power blocks are degenerate: the gain pins at the clamp and the
    result is flagged.
    """
    x = np.asarray(stream.samples)
    half = dynamic_range_db / 2.0
    gains_db = []
    out = np.empty_like(x)
    degenerate = False
    for start in range(0, len(x), block_len):
        blk = x[start:start + block_len]
        p = float(np.mean(np.abs(blk) ** 2))
        if p == 0.0:
            degenerate = True
            g_db = half
        else:
            g_db = min(half, max(-half, 10.0 * np.log10(target_power / p)))
        g = 10.0 ** (g_db / 20.0)
        out[start:start + block_len] = blk * g
        gains_db.append(g_db)
    return AgcResult(SampleStream(out, stream.sample_rate_hz, stage="agc"),
                     np.array(gains_db), degenerate)


@dataclass
class EyeRecord:
    traces: np.ndarray        # (n_traces, 2*sps), columns are sample offsets
    sample_period_s: float
    mid_col: int
    height: float
    width_s: float


def eye_capture(soft: SampleStream, cfg: ModemConfig, n_traces: int = 200) -> EyeRecord:
    """Overlay two-symbol-wide slices of the soft stream.

    Each trace is centred on a decision instant (mid column = sps).  Height
    is the vertical opening at the mid column, rails split by slicer sign;
    width is the contiguous span of columns around mid whose opening stays
    positive, in seconds.
    """
    sps = cfg.samples_per_symbol
    vals = np.asarray(soft.samples)
    width_cols = 2 * sps
    first = 1  # symbol 0's window would start before the stream
    n_avail = (len(vals) - cfg.mid_offset - sps) // sps - first
    n = min(n_traces, n_avail)
    if n < 2:
        raise ValueError("stream too short for an eye capture")
    starts = (np.arange(first, first + n) * sps) + cfg.mid_offset - sps
    traces = vals[starts[:, None] + np.arange(width_cols)[None, :]]

    def opening(col: np.ndarray) -> float:
        pos = col[col >= 0]
        neg = col[col < 0]
        if pos.size == 0 or neg.size == 0:
            return 0.0
        return float(pos.min() - neg.max())

    mid = sps
    height = opening(traces[:, mid])
    open_cols = np.array([opening(traces[:, c]) > 0 for c in range(width_cols)])
    lo = mid
    while lo > 0 and open_cols[lo - 1]:
        lo -= 1
    hi = mid
    while hi < width_cols - 1 and open_cols[hi + 1]:
        hi += 1
    width_s = (hi - lo + 1) / soft.sample_rate_hz if open_cols[mid] else 0.0
    return EyeRecord(traces=traces, sample_period_s=1.0 / soft.sample_rate_hz,
                     mid_col=mid, height=height, width_s=width_s)
