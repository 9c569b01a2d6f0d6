"""Command line front end for the link experiments.

Every option can also be supplied through a JSON config file passed with
--config; keys mirror the long option names (dashes or underscores both
work).  Explicit command line values win over the config file, which wins
over the built-in defaults.
"""

import argparse
import json
import sys

from .channel import ANTENNAS, LinkBudget, load_profile
from .experiments import (ChainOptions, run_distance_sweep, run_ebn0_sweep,
                          run_eye, run_fifo, run_frame_roundtrip, run_response)
from .modem import REFERENCE_MODEM, ModemConfig
from .reports import emit_ber_csv, emit_eye_csv, emit_fifo_csv, emit_response_csv

_CHAINS = {"reference": REFERENCE_MODEM, "filtered": ModemConfig()}


def _as_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("on", "true", "yes", "1"):
        return True
    if text in ("off", "false", "no", "0"):
        return False
    raise ValueError(f"expected on/off, got {value!r}")


def _merge(args: argparse.Namespace, defaults: dict) -> dict:
    """CLI > config file > defaults, per option."""
    file_cfg = {}
    if args.config:
        with open(args.config) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a JSON object")
        file_cfg = {str(k).replace("-", "_"): v for k, v in raw.items()}
    unknown = set(file_cfg) - set(defaults)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    merged = {}
    for key, fallback in defaults.items():
        value = getattr(args, key, None)
        if value is None:
            value = file_cfg.get(key, fallback)
        merged[key] = value
    merged["coding"] = _as_bool(merged.get("coding", False))
    return merged


def _chain_options(cfg: dict) -> ChainOptions:
    return ChainOptions(modem=_CHAINS[cfg["chain"]],
                        profile=load_profile(cfg["channel"]),
                        min_errors=int(cfg["min_errors"]),
                        max_bits=int(cfg["max_bits"]))


def _budget(cfg: dict) -> LinkBudget:
    ant = ANTENNAS[cfg["antennas"]]
    return LinkBudget(tx_antenna=ant, rx_antenna=ant)


_BER_DEFAULTS = {"seed": 0, "coding": False, "channel": "los-only", "chain": "reference",
                 "min_errors": 100, "max_bits": 10_000_000, "antennas": "horn"}


def _cmd_ber_ebn0(args) -> int:
    cfg = _merge(args, {**_BER_DEFAULTS, "ebn0": [4.0, 6.0, 8.0, 10.0],
                        "out": "ber_ebn0.csv"})
    points = run_ebn0_sweep([float(e) for e in cfg["ebn0"]], seed=int(cfg["seed"]),
                            coding=cfg["coding"], opts=_chain_options(cfg))
    emit_ber_csv(points, cfg["out"], "ber-ebn0")
    for p in points:
        print(f"ebn0={p.ebn0_db:g} dB ber={p.ber:.3e} "
              f"({p.bit_errors}/{p.bits_sent} bits)")
    print(f"wrote {cfg['out']}")
    return 0


def _cmd_ber_distance(args) -> int:
    cfg = _merge(args, {**_BER_DEFAULTS,
                        "distances": [1.0, 2.0, 3.0, 5.0, 7.0, 10.0],
                        "out": "ber_distance.csv"})
    points = run_distance_sweep([float(d) for d in cfg["distances"]],
                                budget=_budget(cfg), seed=int(cfg["seed"]),
                                coding=cfg["coding"], opts=_chain_options(cfg))
    emit_ber_csv(points, cfg["out"], "ber-distance")
    for p in points:
        print(f"d={p.distance_m:g} m ebn0={p.ebn0_db:.2f} dB ber={p.ber:.3e}")
    print(f"wrote {cfg['out']}")
    return 0


def _cmd_eye(args) -> int:
    cfg = _merge(args, {"seed": 0, "coding": False, "channel": "los-only",
                        "chain": "filtered", "ebn0": 20.0, "traces": 100,
                        "symbols": 3000, "out": "eye.csv"})
    record = run_eye(float(cfg["ebn0"]), seed=int(cfg["seed"]),
                     modem_cfg=_CHAINS[cfg["chain"]],
                     profile=load_profile(cfg["channel"]),
                     n_traces=int(cfg["traces"]), n_symbols=int(cfg["symbols"]))
    emit_eye_csv(record, cfg["out"])
    print(f"eye height={record.height:.4f} width={record.width_s * 1e12:.1f} ps")
    print(f"wrote {cfg['out']}")
    return 0


def _cmd_response(args) -> int:
    cfg = _merge(args, {"seed": 0, "coding": False, "channel": "los-only",
                        "chain": "filtered", "out": "response.csv"})
    record = run_response(load_profile(cfg["channel"]), _CHAINS[cfg["chain"]])
    emit_response_csv(record, cfg["out"])
    print(f"passband(-3 dB)={record.passband_3db_hz / 1e9:.3f} GHz")
    print(f"wrote {cfg['out']}")
    return 0


def _cmd_frame_roundtrip(args) -> int:
    cfg = _merge(args, {"seed": 0, "coding": True, "frames": 10_000,
                        "byte_error_prob": 8e-4, "out": "frame_roundtrip.csv"})
    point = run_frame_roundtrip(int(cfg["frames"]), float(cfg["byte_error_prob"]),
                                seed=int(cfg["seed"]))
    emit_ber_csv([point], cfg["out"], "frame-roundtrip")
    print(f"frames={point.frames} failures={point.frame_errors} "
          f"pre_fec_ber={point.ber:.3e} post_fec_ber={point.post_fec_ber:.3e}")
    print(f"corrections: {point.hist_str()}")
    print(f"wrote {cfg['out']}")
    return 0


def _cmd_fifo_sim(args) -> int:
    cfg = _merge(args, {"seed": 0, "coding": False, "capacity_frames": 2,
                        "events": 1_000_000, "start": "half", "out": "fifo.csv"})
    if cfg["start"] not in ("half", "empty"):
        raise ValueError("start must be half or empty")
    trace = run_fifo(int(cfg["capacity_frames"]), int(cfg["events"]),
                     start_half=cfg["start"] == "half")
    stride = max(1, len(trace.occupancy) // 20_000)
    emit_fifo_csv(trace, cfg["out"], stride=stride)
    print(f"capacity={trace.capacity} occupancy range "
          f"[{trace.min_occupancy}, {trace.max_occupancy}] "
          f"underflow={int(trace.underflow)} overflow={int(trace.overflow)}")
    print(f"wrote {cfg['out']}")
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmwlink",
        description="Simulations of a 60 GHz single-carrier gigabit link.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="random seed (default 0)")
    common.add_argument("--config", help="JSON file of option values")
    common.add_argument("--out", help="output CSV path")
    common.add_argument("--channel", help="channel profile name or JSON path")
    common.add_argument("--coding", choices=["on", "off"],
                        help="Reed-Solomon coding on or off")

    ber_common = argparse.ArgumentParser(add_help=False)
    ber_common.add_argument("--chain", choices=sorted(_CHAINS),
                            help="receiver chain (default reference)")
    ber_common.add_argument("--min-errors", type=int, dest="min_errors",
                            help="stop after this many bit errors (default 100)")
    ber_common.add_argument("--max-bits", type=int, dest="max_bits",
                            help="hard bit budget per point (default 1e7)")
    ber_common.add_argument("--antennas", choices=sorted(ANTENNAS),
                            help="antenna model at both ends (default horn)")

    p = sub.add_parser("ber-ebn0", parents=[common, ber_common],
                       help="BER versus Eb/N0 sweep")
    p.add_argument("--ebn0", type=float, nargs="+", help="Eb/N0 points in dB")
    p.set_defaults(func=_cmd_ber_ebn0)

    p = sub.add_parser("ber-distance", parents=[common, ber_common],
                       help="BER versus distance through the link budget")
    p.add_argument("--distances", type=float, nargs="+", help="distances in m")
    p.set_defaults(func=_cmd_ber_distance)

    p = sub.add_parser("eye", parents=[common],
                       help="eye diagram capture on the filtered chain")
    p.add_argument("--chain", choices=sorted(_CHAINS))
    p.add_argument("--ebn0", type=float, help="operating Eb/N0 in dB (default 20)")
    p.add_argument("--traces", type=int, help="eye traces to keep (default 100)")
    p.add_argument("--symbols", type=int, help="symbols to simulate (default 3000)")
    p.set_defaults(func=_cmd_eye)

    p = sub.add_parser("response", parents=[common],
                       help="frequency and impulse response of the chain")
    p.add_argument("--chain", choices=sorted(_CHAINS))
    p.set_defaults(func=_cmd_response)

    p = sub.add_parser("frame-roundtrip", parents=[common],
                       help="framed codec run against an iid byte-error channel")
    p.add_argument("--frames", type=int, help="frames to push (default 10000)")
    p.add_argument("--byte-error-prob", type=float, dest="byte_error_prob",
                   help="per-byte corruption probability (default 8e-4)")
    p.set_defaults(func=_cmd_frame_roundtrip)

    p = sub.add_parser("fifo-sim", parents=[common],
                       help="dual-clock FIFO occupancy simulation")
    p.add_argument("--capacity-frames", type=int, dest="capacity_frames",
                   help="FIFO capacity in frames (default 2)")
    p.add_argument("--events", type=int, help="events to simulate (default 1e6)")
    p.add_argument("--start", choices=["half", "empty"],
                   help="initial occupancy (default half)")
    p.set_defaults(func=_cmd_fifo_sim)
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
