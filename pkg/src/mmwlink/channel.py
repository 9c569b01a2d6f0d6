"""Channel and link-budget models for the 60 GHz indoor link.

Multipath is a tapped delay line on the complex envelope, noise is AWGN
calibrated against measured stream power, and the budget follows the usual
free-space form: received power from antenna gains and spreading loss,
noise floor from bandwidth and noise figure, an implementation-loss term,
then Eb/N0 via the bandwidth-to-bit-rate ratio.
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .modem import ModemConfig, SampleStream, lowpass_taps


@dataclass(frozen=True)
class ChannelTap:
    delay_s: float
    gain_db: float
    phase_deg: float

    @property
    def gain_complex(self) -> complex:
        return 10.0 ** (self.gain_db / 20.0) * np.exp(1j * np.deg2rad(self.phase_deg))


@dataclass(frozen=True)
class ChannelProfile:
    name: str
    taps: tuple[ChannelTap, ...]

    def quantized(self, sample_rate_hz: float) -> list[tuple[int, complex, float]]:
        """Taps as (sample_delay, complex gain, rounding error in s)."""
        out = []
        for tap in self.taps:
            n = round(tap.delay_s * sample_rate_hz)
            out.append((n, tap.gain_complex, n / sample_rate_hz - tap.delay_s))
        return out


def los_only() -> ChannelProfile:
    return ChannelProfile("los-only", (ChannelTap(0.0, 0.0, 0.0),))


def two_ray(echo_delay_s: float = 1.0 / 875e6, echo_gain_db: float = -3.0,
            echo_phase_deg: float = 0.0) -> ChannelProfile:
    return ChannelProfile("two-ray", (ChannelTap(0.0, 0.0, 0.0),
                                      ChannelTap(echo_delay_s, echo_gain_db, echo_phase_deg)))


def corridor_like() -> ChannelProfile:
    """A short cluster of wall bounces behind the direct ray."""
    ts = 1.0 / 875e6
    return ChannelProfile("corridor-like", (
        ChannelTap(0.0, 0.0, 0.0),
        ChannelTap(0.55 * ts, -6.0, 40.0),
        ChannelTap(1.3 * ts, -9.0, 160.0),
        ChannelTap(2.6 * ts, -14.0, 250.0),
    ))


_PRESETS = {"los-only": los_only, "two-ray": two_ray, "corridor-like": corridor_like}


def load_profile(name_or_path: str) -> ChannelProfile:
    """A preset name, or a JSON file with {"name", "taps": [{delay_ns, gain_db, phase_deg}]}."""
    if name_or_path in _PRESETS:
        return _PRESETS[name_or_path]()
    with open(name_or_path) as f:
        doc = json.load(f)
    taps = tuple(ChannelTap(delay_s=t["delay_ns"] * 1e-9,
                            gain_db=t["gain_db"],
                            phase_deg=t.get("phase_deg", 0.0)) for t in doc["taps"])
    if not taps:
        raise ValueError("channel profile needs at least one tap")
    return ChannelProfile(doc.get("name", "custom"), taps)


def tdl_apply(stream: SampleStream, profile: ChannelProfile) -> SampleStream:
    """y[n] = sum_i g_i x[n - d_i], delays rounded to the sample grid."""
    x = np.asarray(stream.samples)
    y = np.zeros_like(x)
    for n, g, _ in profile.quantized(stream.sample_rate_hz):
        if n >= len(x):
            continue
        if n == 0:
            y += g * x
        else:
            y[n:] += g * x[:-n]
    return SampleStream(y, stream.sample_rate_hz, stage="channel")


def add_awgn(stream: SampleStream, ebn0_db: float | None, rng: np.random.Generator,
             samples_per_symbol: int, bits_per_symbol: int = 1) -> SampleStream:
    """Complex AWGN at a target Eb/N0 against the stream's measured power.

    Per-sample noise variance is P * sps / (bits_per_symbol * Eb/N0); None
    means a noiseless pass-through.
    """
    if ebn0_db is None:
        return SampleStream(np.array(stream.samples, copy=True),
                            stream.sample_rate_hz, stage="awgn")
    x = np.asarray(stream.samples)
    p = float(np.mean(np.abs(x) ** 2))
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    sigma2 = p * samples_per_symbol / (bits_per_symbol * ebn0)
    scale = np.sqrt(sigma2 / 2.0)
    noise = rng.standard_normal(len(x)) * scale + 1j * rng.standard_normal(len(x)) * scale
    return SampleStream(x + noise, stream.sample_rate_hz, stage="awgn")


def phase_noise_apply(stream: SampleStream, increment_var_rad2: float,
                      rng: np.random.Generator) -> SampleStream:
    """Wiener phase walk: theta accumulates N(0, increment_var) per sample."""
    if increment_var_rad2 < 0:
        raise ValueError("increment variance must be non-negative")
    x = np.asarray(stream.samples)
    if increment_var_rad2 == 0.0:
        return SampleStream(np.array(x, copy=True), stream.sample_rate_hz, stage="phase_noise")
    theta = np.cumsum(rng.standard_normal(len(x)) * np.sqrt(increment_var_rad2))
    return SampleStream(x * np.exp(1j * theta), stream.sample_rate_hz, stage="phase_noise")


@dataclass(frozen=True)
class AntennaModel:
    name: str
    gain_dbi: float
    hpbw_deg: float


ANTENNAS = {
    "horn": AntennaModel("horn", gain_dbi=22.4, hpbw_deg=12.0),
    "patch": AntennaModel("patch", gain_dbi=8.0, hpbw_deg=30.0),
}


@dataclass(frozen=True)
class LinkBudget:
    tx_power_dbm: float = 0.0
    carrier_hz: float = 60e9
    tx_antenna: AntennaModel = ANTENNAS["horn"]
    rx_antenna: AntennaModel = ANTENNAS["horn"]
    noise_figure_db: float = 10.0
    impl_loss_db: float = 5.0
    noise_bandwidth_hz: float = 2e9

    @property
    def noise_floor_dbm(self) -> float:
        return -174.0 + 10.0 * np.log10(self.noise_bandwidth_hz) + self.noise_figure_db


def fspl_db(distance_m: float, carrier_hz: float) -> float:
    """Free-space path loss 20 log10(4 pi d / lambda)."""
    if distance_m <= 0:
        raise ValueError("distance must be positive")
    lam = SPEED_OF_LIGHT / carrier_hz
    return 20.0 * np.log10(4.0 * np.pi * distance_m / lam)


def received_power_dbm(budget: LinkBudget, distance_m: float) -> float:
    return (budget.tx_power_dbm + budget.tx_antenna.gain_dbi + budget.rx_antenna.gain_dbi
            - fspl_db(distance_m, budget.carrier_hz))


def link_snr_db(budget: LinkBudget, distance_m: float) -> float:
    """SNR in the noise bandwidth, implementation loss included."""
    return received_power_dbm(budget, distance_m) - budget.noise_floor_dbm - budget.impl_loss_db


def snr_to_ebn0_db(snr_db: float, noise_bandwidth_hz: float, bit_rate_hz: float) -> float:
    return snr_db + 10.0 * np.log10(noise_bandwidth_hz / bit_rate_hz)


def ebn0_at_distance(budget: LinkBudget, distance_m: float, bit_rate_hz: float) -> float:
    return snr_to_ebn0_db(link_snr_db(budget, distance_m),
                          budget.noise_bandwidth_hz, bit_rate_hz)


@dataclass
class ResponseRecord:
    freq_hz: np.ndarray
    magnitude_db: np.ndarray
    impulse_t_s: np.ndarray
    impulse_mag: np.ndarray
    passband_3db_hz: float


def probe_response(cfg: ModemConfig, profile: ChannelProfile,
                   n_fft: int = 8192) -> ResponseRecord:
    """Impulse and frequency response of the linear part of the chain.

    Tx band filter -> tapped delay line -> receive-side low-pass, probed
    with a unit impulse.  The passband figure is twice the positive
    frequency where the magnitude first falls 3 dB below its DC value
    (the envelope covers half the RF passband).
    """
    fs = cfg.sample_rate_hz
    x = np.zeros(n_fft, dtype=np.complex128)
    x[n_fft // 4] = 1.0  # room for filter tails on both sides
    if cfg.tx_band_limit_hz is not None:
        x = np.convolve(x, lowpass_taps(cfg.tx_band_limit_hz, fs, cfg.filter_taps), mode="same")
    y = tdl_apply(SampleStream(x, fs, "tx"), profile).samples
    if cfg.lpf_cutoff_hz is not None:
        y = np.convolve(y, lowpass_taps(cfg.lpf_cutoff_hz, fs, cfg.filter_taps), mode="same")

    spec = np.fft.fft(y)
    freq = np.fft.fftfreq(n_fft, d=1.0 / fs)
    pos = freq >= 0  # fftfreq lists the non-negative bins first, ascending
    f_pos = freq[pos]
    mag = np.abs(spec[pos])
    ref = max(float(mag[0]), 1e-300)
    mag_db = 20.0 * np.log10(np.maximum(mag, 1e-300) / ref)
    half_power = -3.0103
    below = np.flatnonzero(mag_db < half_power)
    if below.size == 0:
        f3 = float(fs / 2)
    elif below[0] == 0:
        f3 = 0.0
    else:
        i = below[0]  # interpolate between the straddling bins
        f3 = float(f_pos[i - 1] + (f_pos[i] - f_pos[i - 1])
                   * (half_power - mag_db[i - 1]) / (mag_db[i] - mag_db[i - 1]))
    t = np.arange(n_fft) / fs
    return ResponseRecord(freq_hz=f_pos, magnitude_db=mag_db,
                          impulse_t_s=t, impulse_mag=np.abs(y),
                          passband_3db_hz=2.0 * f3)
