"""Result records and deterministic CSV emitters.

Column orders are fixed and floats go through one formatter, so a repeated
run with the same seed produces byte-identical files.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .channel import ResponseRecord
from .framing import FifoTrace
from .modem import EyeRecord

Z95 = 1.959963984540054  # two-sided 95% normal quantile


def fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    return f"{float(x):.10g}"


def ber_confidence(errors: int, n: int) -> tuple[float, float]:
    """Normal-approximation 95% interval for an error ratio, clamped to [0, 1].

    Degenerates to a point at 0 when no errors were seen; such points are
    published as upper bounds (at_floor flag).
    """
    if n <= 0:
        return (0.0, 1.0)
    p = errors / n
    half = Z95 * np.sqrt(p * (1.0 - p) / n)
    return (max(0.0, p - half), min(1.0, p + half))


@dataclass
class BerPoint:
    ebn0_db: float | None = None
    distance_m: float | None = None
    snr_db: float | None = None
    byte_error_prob: float | None = None
    coding: bool = False
    bits_sent: int = 0
    bit_errors: int = 0
    frames: int = 0
    frame_errors: int = 0
    post_fec_bits: int = 0
    post_fec_errors: int = 0
    sync_losses: int = 0
    fec_corrected: dict[int, int] = field(default_factory=dict)
    at_floor: bool = False

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_sent if self.bits_sent else 0.0

    @property
    def ci(self) -> tuple[float, float]:
        return ber_confidence(self.bit_errors, self.bits_sent)

    @property
    def post_fec_ber(self) -> float:
        return self.post_fec_errors / self.post_fec_bits if self.post_fec_bits else 0.0

    def hist_str(self) -> str:
        return ";".join(f"{w}:{self.fec_corrected[w]}" for w in sorted(self.fec_corrected))


_COMMON_COLS = ["coding", "bits_sent", "bit_errors", "ber", "ci_low", "ci_high",
                "frames", "frame_errors", "post_fec_bits", "post_fec_errors",
                "post_fec_ber", "sync_losses", "fec_corrected_hist", "at_floor"]

_LEAD_COLS = {
    "ber-ebn0": ["ebn0_db"],
    "ber-distance": ["distance_m", "snr_db", "ebn0_db"],
    "frame-roundtrip": ["byte_error_prob"],
}


def _point_row(p: BerPoint, lead: list[str]) -> list[str]:
    ci_low, ci_high = p.ci
    by_name = {
        "ebn0_db": p.ebn0_db, "distance_m": p.distance_m, "snr_db": p.snr_db,
        "byte_error_prob": p.byte_error_prob, "coding": p.coding,
        "bits_sent": p.bits_sent, "bit_errors": p.bit_errors, "ber": p.ber,
        "ci_low": ci_low, "ci_high": ci_high, "frames": p.frames,
        "frame_errors": p.frame_errors, "post_fec_bits": p.post_fec_bits,
        "post_fec_errors": p.post_fec_errors, "post_fec_ber": p.post_fec_ber,
        "sync_losses": p.sync_losses, "fec_corrected_hist": p.hist_str(),
        "at_floor": p.at_floor,
    }
    return [by_name[c] if c == "fec_corrected_hist" else fmt(by_name[c])
            for c in lead + _COMMON_COLS]


def emit_ber_csv(points: list[BerPoint], path: str, mode: str) -> None:
    lead = _LEAD_COLS[mode]
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(lead + _COMMON_COLS)
        for p in points:
            w.writerow(_point_row(p, lead))


def emit_eye_csv(record: EyeRecord, path: str) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["trace_id", "sample_index", "value"])
        for t in range(record.traces.shape[0]):
            for s in range(record.traces.shape[1]):
                w.writerow([t, s, fmt(record.traces[t, s])])


def emit_response_csv(record: ResponseRecord, path: str) -> None:
    """Both curves in one file: (curve, x, value) rows, frequency then time."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["curve", "x", "value"])
        for fr, m in zip(record.freq_hz, record.magnitude_db):
            w.writerow(["freq_db", fmt(fr), fmt(m)])
        for t, m in zip(record.impulse_t_s, record.impulse_mag):
            w.writerow(["impulse_mag", fmt(t), fmt(m)])


def emit_fifo_csv(trace: FifoTrace, path: str, stride: int = 1) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["event_index", "time_s", "occupancy"])
        for i in range(0, len(trace.occupancy), stride):
            w.writerow([i, fmt(trace.times_s[i]), int(trace.occupancy[i])])
