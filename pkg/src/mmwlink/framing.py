"""260-byte frame assembly, the 239/260 clock plan, and the rate-adapting FIFO.

Frame layout on the wire: 4 preamble bytes, then 239 payload bytes, 1
header byte (sequence counter) and 16 parity bytes.  Everything after the
preamble is scrambled with the 8-byte PN word starting at offset 0.  The
parity covers payload only; the header rides outside the code.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import pnseq, rs

PREAMBLE_LEN = 4
PAYLOAD_LEN = 239
HEADER_LEN = 1
PARITY_LEN = 16
FRAME_LEN = PREAMBLE_LEN + PAYLOAD_LEN + HEADER_LEN + PARITY_LEN  # 260
FRAME_BITS = FRAME_LEN * 8
RATE_RATIO = Fraction(PAYLOAD_LEN, FRAME_LEN)  # 239/260 net-to-line

LINE_RATE_HZ = 875_000_000  # serial bit clock F2


@dataclass(frozen=True)
class ByteFrame:
    payload: bytes
    header: int
    parity: bytes

    def serialize(self) -> bytes:
        """Wire image: preamble plus scrambled payload|header|parity."""
        body = self.payload + bytes([self.header]) + self.parity
        return pnseq.preamble_word() + pnseq.scramble(body, 0)


@dataclass(frozen=True)
class FrameResult:
    ok: bool
    payload: bytes | None
    header: int
    fec_corrected: int


def build_frame(payload: bytes, seq: int) -> ByteFrame:
    if len(payload) != PAYLOAD_LEN:
        raise ValueError(f"payload must be {PAYLOAD_LEN} bytes, got {len(payload)}")
    return ByteFrame(payload=bytes(payload), header=seq % 256, parity=rs.rs_encode(payload))


def parse_frame(raw: bytes | np.ndarray) -> FrameResult:
    """Recover the payload from a received 260-byte frame image.

    The preamble bytes are not inspected here (sync owns them); the body is
    descrambled and the RS word decoded.
    """
    raw = bytes(bytearray(raw)) if not isinstance(raw, bytes) else raw
    if len(raw) != FRAME_LEN:
        raise ValueError(f"frame must be {FRAME_LEN} bytes, got {len(raw)}")
    body = pnseq.scramble(raw[PREAMBLE_LEN:], 0)
    payload = body[:PAYLOAD_LEN]
    header = body[PAYLOAD_LEN]
    parity = body[PAYLOAD_LEN + HEADER_LEN:]
    res = rs.rs_decode(payload + parity)
    if not res.ok:
        return FrameResult(ok=False, payload=None, header=header, fec_corrected=0)
    return FrameResult(ok=True, payload=res.message, header=header, fec_corrected=res.corrected)


@dataclass(frozen=True)
class ClockPlan:
    """Exact clock relationships for one line rate, all Fractions."""

    line_rate: Fraction    # F2, coded serial bit rate
    net_rate: Fraction     # F1 = F2 * 239/260, user bit rate
    read_byte_clock: Fraction   # f2 = F2/8, framer side
    write_byte_clock: Fraction  # f1 = F1/8, user side

    @classmethod
    def for_line_rate(cls, line_rate_hz: int | Fraction = LINE_RATE_HZ) -> "ClockPlan":
        f2 = Fraction(line_rate_hz)
        f1 = f2 * RATE_RATIO
        return cls(line_rate=f2, net_rate=f1,
                   read_byte_clock=f2 / 8, write_byte_clock=f1 / 8)


def net_rate(line_rate_hz: int | Fraction = LINE_RATE_HZ) -> Fraction:
    """User data rate carried by a line rate, exact."""
    return Fraction(line_rate_hz) * RATE_RATIO


# Read-side gating over one 260-cycle frame: reads pause while the 4
# preamble bytes go out, run for the 239 payload bytes, then pause again
# for header+parity (17 cycles).  21 idle cycles per frame in total.
_READ_ACTIVE = np.zeros(FRAME_LEN, dtype=bool)
_READ_ACTIVE[PREAMBLE_LEN:PREAMBLE_LEN + PAYLOAD_LEN] = True


@dataclass
class FifoTrace:
    capacity: int
    occupancy: np.ndarray          # after each event
    times_s: np.ndarray            # event times (float view of exact ticks)
    underflow: bool
    overflow: bool
    read_started_at: float | None
    min_occupancy: int = field(init=False)
    max_occupancy: int = field(init=False)

    def __post_init__(self):
        self.min_occupancy = int(self.occupancy.min()) if self.occupancy.size else 0
        self.max_occupancy = int(self.occupancy.max()) if self.occupancy.size else 0


def simulate_fifo(capacity_bytes: int,
                  n_events: int,
                  plan: ClockPlan | None = None,
                  start_occupancy: int | None = None,
                  release_at_half: bool = True) -> FifoTrace:
    """Event-driven occupancy trace of the dual-clock FIFO.

    Writes tick at f1 from t=0 and always deposit a byte.  The read clock
    ticks at f2; it is held off until the fill first reaches half capacity
    (unless release_at_half is False, which models reading from the start)
    and is gated by the per-frame schedule: 239 pops per 260 cycles.
    Coincident edges process the write first.  Passing start_occupancy
    begins in steady state at that fill with reads already enabled,
    skipping the initial ramp.
    """
    if capacity_bytes < 2:
        raise ValueError("capacity must be at least 2 bytes")
    if n_events < 1:
        raise ValueError("n_events must be positive")
    if start_occupancy is not None and not 0 <= start_occupancy <= capacity_bytes:
        raise ValueError("start_occupancy outside capacity")
    plan = plan or ClockPlan.for_line_rate()
    t_write = Fraction(1) / plan.write_byte_clock
    t_read = Fraction(1) / plan.read_byte_clock
    # run the event loop on an exact integer grid: both periods are whole
    # numbers of 1/den second ticks, so ordering never sees float error
    den = np.lcm(t_write.denominator, t_read.denominator)
    w_step = int(t_write * den)
    r_step = int(t_read * den)
    tick = 1.0 / float(den)

    occ = start_occupancy or 0
    released = (start_occupancy is not None) or not release_at_half
    next_write = 0
    next_read = 0 if released else None
    read_phase = 0
    read_started_at = 0.0 if released else None

    occupancy = np.empty(n_events, dtype=np.int64)
    times = np.empty(n_events, dtype=np.int64)
    underflow = False
    overflow = False

    for i in range(n_events):
        if next_read is None or next_write <= next_read:
            t = next_write
            next_write += w_step
            occ += 1
            if occ > capacity_bytes:
                overflow = True
                occ = capacity_bytes
            if not released and occ * 2 >= capacity_bytes:
                released = True
                next_read = t  # first read edge may fire from here on
                read_started_at = t * tick
        else:
            t = next_read
            next_read += r_step
            if _READ_ACTIVE[read_phase]:
                if occ == 0:
                    underflow = True
                else:
                    occ -= 1
            read_phase = (read_phase + 1) % FRAME_LEN
        occupancy[i] = occ
        times[i] = t

    return FifoTrace(capacity=capacity_bytes, occupancy=occupancy,
                     times_s=times * tick,
                     underflow=underflow, overflow=overflow,
                     read_started_at=read_started_at)
