"""Command-line front end: ``seccost <subcommand> [options]``.

Exit status is 0 on success, 1 on a usage error and 2 when the inputs parse
but the models reject them (unstable queue, unknown profile, bad capture...).
Reports go to stdout (or ``--out``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import re
import sys
from dataclasses import dataclass, field

from . import __version__
from .config import Config, load_config
from .delaymodel import (LinkSpec, frame_delay, max_load_for_delta, propagation_delay, queuing_delay,
                         queuing_delta, rates_from_bits, rtt_estimate, transmission_delay)
from .errors import SeccostError
from .feasibility import SecurityDelayAssumptions, classify_table, load_table, wg4_table
from .mtu import ECPRI_HEADER_LEN, Strategy, mtu_sweep
from .overhead import Protocol, SecurityConfig, secure_frame
from .perfmodel import achieved_throughput, cpu_utilization, load_latency

log = logging.getLogger("seccost")

REFERENCE_MAX_LOAD_BPS = 9.78e9
RATE_RE = re.compile(r"([0-9.]+(?:e[+-]?[0-9]+)?)\s*([kmgt]?)(?:b/s|bps)?")
UNITS = {"": 1.0, "k": 1e3, "m": 1e6, "g": 1e9, "t": 1e12}

INTERFACE_DEFAULTS = {
    # protocol, cipher, secured profile, plaintext baseline profile
    "e2": ("esp-tunnel", "AES256-CBC", "e2-aes256cbc", "e2-pt"),
    "fronthaul": ("macsec", None, "fh-macsec-enc", "fh-pt"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so ``run`` owns the exit code."""

    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class Report:
    """One command's output in all three renderings."""

    record: dict
    rows: list = field(default_factory=list)
    table: str = ""

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.record, indent=2, default=_jsonable) + "\n"
        if fmt == "csv":
            return _csv(self.rows or [_flat(self.record)])
        return self.table if self.table.endswith("\n") else self.table + "\n"


def _jsonable(obj):
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _flat(d: dict, prefix="") -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            out.update(_flat(v, f"{prefix}{k}."))
        elif not isinstance(v, (list, tuple)):
            out[prefix + k] = v
    return out


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    cols = list(dict.fromkeys(k for r in rows for k in r))
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if v is None else repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def _us(x) -> str:
    return "-" if x is None else f"{x:.4f}"


def _kv(pairs) -> str:
    width = max(len(k) for k, _ in pairs)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in pairs)


# --- argument types ---------------------------------------------------------


def rate(text: str) -> float:
    """Bits/s with an optional k/M/G/T suffix, e.g. ``10G`` or ``2.5e9``."""
    m = RATE_RE.fullmatch(text.strip().lower())
    if not m:
        raise argparse.ArgumentTypeError(f"bad rate {text!r}")
    val = float(m.group(1)) * UNITS[m.group(2)]
    if not math.isfinite(val) or val < 0:
        raise argparse.ArgumentTypeError(f"rate must be finite and >= 0: {text!r}")
    return val


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return v


def mtu_range(text: str) -> range:
    try:
        lo, hi, step = (int(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI:STEP, got {text!r}") from None
    if step <= 0 or hi < lo or lo <= 0:
        raise argparse.ArgumentTypeError(f"empty or invalid MTU range {text!r}")
    return range(lo, hi + 1, step)


def _security(args) -> SecurityConfig:
    kw = {}
    if getattr(args, "no_encrypt", False):
        kw["macsec_encrypt"] = False
    if getattr(args, "tls_overhead", None) is not None:
        kw["tls_record_overhead"] = args.tls_overhead
    return SecurityConfig.build(args.protocol, args.cipher, **kw)


def _link(args) -> LinkSpec:
    return LinkSpec(rate=args.rate, length=args.distance)


# --- subcommands ------------------------------------------------------------


def cmd_overhead(args, conf: Config) -> Report:
    cfg = _security(args)
    b = secure_frame(args.frame_len, cfg)
    rec = b.to_dict()
    rec["cipher"] = cfg.cipher.label if cfg.cipher else None
    table = _kv([(n, f"{v} B") for n, v in b.layers] +
                [("pt_frame_len", f"{b.pt_frame_len} B"), ("ct_frame_len", f"{b.ct_frame_len} B"),
                 ("overhead", f"{b.overhead_total} B")])
    return Report(rec, b.csv_rows(), table)


def _delay_inputs(args, conf):
    cfg = _security(args)
    ct = secure_frame(args.frame_len, cfg).ct_frame_len
    return ct, conf.profile(args.profile), _link(args)


def cmd_delay(args, conf: Config) -> Report:
    ct, profile, link = _delay_inputs(args, conf)
    d = frame_delay(ct, link, profile, queuing=args.queuing, hops=args.hops)
    rec = {"frame_len": ct, "profile": profile.name, **d.to_dict()}
    table = _kv([("frame_len", f"{ct} B"), ("profile", profile.name)] +
                [(k, f"{_us(v)} µs") for k, v in d.to_dict().items()])
    return Report(rec, [rec], table)


def cmd_rtt(args, conf: Config) -> Report:
    ct, profile, link = _delay_inputs(args, conf)
    rec = {"frame_len": ct, "profile": profile.name,
           "processing": profile(ct), "transmission": transmission_delay(ct, link),
           "propagation": propagation_delay(link), "rtt": rtt_estimate(ct, link, profile)}
    table = _kv([("frame_len", f"{ct} B"), ("profile", profile.name)] +
                [(k, f"{_us(rec[k])} µs") for k in ("processing", "transmission", "propagation", "rtt")])
    return Report(rec, [rec], table)


def cmd_queuing(args, conf: Config) -> Report:
    q = rates_from_bits(args.link_rate, args.load, args.mean_frame, args.overhead)
    max_load = max_load_for_delta(args.link_rate, args.mean_frame, args.overhead, args.max_delta)
    rec = {
        "service_rate_pps": q.service_rate,
        "arrival_rate_pps": q.arrival_rate,
        "overhead_rate_pps": q.overhead_rate,
        "queuing_us": queuing_delay(q),
        "queuing_delta_us": queuing_delta(q),
        "max_delta_us": args.max_delta,
        "max_load_bps": max_load,
        "reference_max_load_bps": args.reference_load,
        "max_load_deviation_bps": max_load - args.reference_load,
    }
    table = _kv([
        ("service rate", f"{q.service_rate:.6g} pkt/s"),
        ("arrival rate", f"{q.arrival_rate:.6g} pkt/s"),
        ("overhead rate", f"{q.overhead_rate:.6g} pkt/s"),
        ("queuing delay", f"{_us(rec['queuing_us'])} µs"),
        ("security delta", f"{_us(rec['queuing_delta_us'])} µs"),
        (f"max load (delta <= {args.max_delta:g} µs)", f"{max_load / 1e9:.4f} Gb/s"),
        ("reference max load", f"{args.reference_load / 1e9:.4f} Gb/s"),
        ("deviation", f"{rec['max_load_deviation_bps'] / 1e9:+.4f} Gb/s"),
    ])
    return Report(rec, [rec], table)


def cmd_throughput(args, conf: Config) -> Report:
    got = achieved_throughput(args.attempted, args.cipher, conf.caps)
    rec = {
        "cipher": args.cipher.upper(),
        "attempted_mbps": args.attempted,
        "cap_mbps": conf.caps.cap(args.cipher),
        "achieved_mbps": got,
        "cpu_plaintext": cpu_utilization(got, False, conf.cpu),
        "cpu_encrypted": cpu_utilization(got, True, conf.cpu),
    }
    pairs = [("cipher", rec["cipher"]), ("attempted", f"{args.attempted:g} Mb/s"),
             ("cap", f"{rec['cap_mbps']:g} Mb/s"), ("achieved", f"{got:g} Mb/s"),
             ("cpu plaintext", f"{rec['cpu_plaintext']:.2%}"),
             ("cpu encrypted", f"{rec['cpu_encrypted']:.2%}")]
    if args.load_profile:
        try:
            prof = conf.load_profiles[args.load_profile]
        except KeyError:
            raise SeccostError(f"unknown load-latency profile {args.load_profile!r}") from None
        pt = load_latency(args.attempted, prof)
        rec.update(load_profile=prof.name, load_delay_us=pt.delay_us, saturated=pt.saturated)
        pairs += [("added delay under load", f"{_us(pt.delay_us)} µs"), ("saturated", str(pt.saturated))]
    return Report(rec, [rec], _kv(pairs))


def cmd_mtu_sweep(args, conf: Config) -> Report:
    cfg = _security(args)
    profile = conf.profile(args.profile)
    points = mtu_sweep(args.payload, args.mtu, cfg, profile, _link(args), args.strategy,
                       per_fragment_header=args.header, strict=args.strict, pipelined=args.pipelined)
    rows = [p.row() for p in points]
    best = min(points, key=lambda p: (p.total_delay_us, -p.mtu))
    rec = {"payload": args.payload, "profile": profile.name, "strategy": Strategy.parse(args.strategy).value,
           "optimal_mtu": best.mtu, "optimal_delay_us": best.total_delay_us, "points": rows}
    lines = [f"{'mtu':>6} {'frags':>5} {'delay_us':>12} {'mbps':>12}"]
    lines += [f"{p.mtu:>6} {p.fragments:>5} {_us(p.total_delay_us):>12} {p.throughput_mbps:>12.4f}"
              + ("  *" if p is best else "") for p in points]
    lines.append(f"optimal MTU {best.mtu} ({_us(best.total_delay_us)} µs)")
    if args.figure:
        from .plotting import plot_mtu_sweep
        plot_mtu_sweep(points, args.figure, title=f"{args.payload} B over {profile.name}")
    return Report(rec, rows, "\n".join(lines))


def cmd_feasibility(args, conf: Config) -> Report:
    table = load_table(args.table) if args.table else wg4_table()
    a = SecurityDelayAssumptions(args.baseline, args.delta_noenc, args.delta_enc)
    c = classify_table(table, a)
    counts = {r.short: n for r, n in c.counts.items()}
    rec = {"baseline_us": a.baseline_oneway, "delta_noenc_us": a.delta_macsec,
           "delta_enc_us": a.delta_macsec_enc, "counts": counts, "grid": c.grid(), "cells": c.rows()}
    header = "   " + "".join(table.du_categories)
    lines = [header] + [f"{ru}  {g}" for ru, g in zip(table.ru_categories, c.grid())]
    lines.append("E=secure with encryption  M=MACsec without encryption only  "
                 "P=plaintext only  .=infeasible")
    lines.append("counts " + "/".join(str(n) for n in counts.values()) +
                 " (" + ", ".join(f"{k} {v}" for k, v in counts.items()) + ")")
    if args.figure:
        from .plotting import plot_feasibility
        plot_feasibility(c, args.figure)
    return Report(rec, c.rows(), "\n".join(lines))


def cmd_analyze(args, conf: Config) -> Report:
    from .traceio import (classify_e2, classify_fronthaul, empirical_cdf, project_secured, read_csv_trace,
                          read_pcap, summarize)

    proto, cipher, prof, base = INTERFACE_DEFAULTS[args.interface]
    args.protocol = args.protocol or proto
    args.cipher = args.cipher or cipher
    if args.pcap:
        trace = read_pcap(args.pcap)
        if args.interface == "e2":
            trace = classify_e2(trace, args.threshold)
        else:
            trace = classify_fronthaul(trace)
    else:
        trace = read_csv_trace(args.csv)
    cfg = _security(args)
    profile = conf.profile(args.profile or prof)
    baseline = conf.profile(args.baseline_profile or base)
    summary = summarize(trace)
    proj = project_secured(trace, cfg, profile, baseline, _link(args))
    rec = {"interface": args.interface, "summary": summary, "projection": proj.to_dict()}
    if args.cdf_out or args.figure:
        cdf = empirical_cdf(trace)
        if args.cdf_out:
            with open(args.cdf_out, "w", newline="") as fh:
                fh.write(cdf.csv())
        if args.figure:
            from .plotting import plot_cdfs
            plot_cdfs({"all packets": cdf}, args.figure)
    lines = [f"{summary['count']} packets, {summary['bytes']} B over {summary['duration_s']:.6f} s",
             f"offered load {summary['offered_load_bps'] or 0:.6g} b/s; projected {proj.protocol} load "
             f"{proj.ct_load_bps or 0:.6g} b/s",
             f"{'class':<16} {'count':>7} {'pt_mean':>9} {'ct_mean':>9} {'added_proc_us':>14}"]
    for r in proj.rows():
        lines.append(f"{r['class']:<16} {r['count']:>7} {r['pt_mean_len']:>9.1f} {r['ct_mean_len']:>9.1f} "
                     f"{_us(r['added_proc_mean_us']):>14}")
    return Report(rec, proj.rows(), "\n".join(lines))


# --- parser -----------------------------------------------------------------


def _add_security(p, protocol="none", cipher=None):
    p.add_argument("--protocol", default=protocol,
                   choices=[m.value for m in Protocol], help="security protocol (default: %(default)s)")
    p.add_argument("--cipher", default=cipher, help="cipher suite, e.g. aes256-cbc or aes256-gcm")
    p.add_argument("--no-encrypt", action="store_true", help="MACsec integrity only")
    p.add_argument("--tls-overhead", type=positive_int, help="TLS record overhead in bytes")


def _add_link(p):
    p.add_argument("--rate", type=rate, default=10e9, help="link rate in b/s (default: 10G)")
    p.add_argument("--distance", type=float, default=100.0, help="link length in m (default: 100)")


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--output", choices=("table", "json", "csv"), default="table")
    common.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    common.add_argument("--config", metavar="FILE", help="profile/cap config (else $SECCOST_CONFIG)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="seccost", description="Model the cost of securing O-RAN interfaces.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("overhead", parents=[common], help="secured frame size and per-layer bytes")
    _add_security(p, "esp-tunnel", "AES256-CBC")
    p.add_argument("--frame-len", type=positive_int, required=True)
    p.set_defaults(func=cmd_overhead)

    for name, func, helptext in (("delay", cmd_delay, "one-way delay breakdown of a frame"),
                                 ("rtt", cmd_rtt, "round-trip estimate of a frame")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--frame-len", type=positive_int, required=True, help="plaintext frame length")
        p.add_argument("--profile", default="e2-pt")
        _add_link(p)
        _add_security(p)
        if name == "delay":
            p.add_argument("--queuing", type=float, default=0.0, help="queuing delay in µs")
            p.add_argument("--hops", type=positive_int, default=1, help="propagation legs")
        p.set_defaults(func=func)

    p = sub.add_parser("queuing", parents=[common], help="M/M/1 delay added by security overhead")
    p.add_argument("--link-rate", type=rate, default=10e9)
    p.add_argument("--load", type=rate, required=True, help="offered load in b/s")
    p.add_argument("--mean-frame", type=float, required=True, help="mean frame length in B")
    p.add_argument("--overhead", type=float, required=True, help="security bytes per frame")
    p.add_argument("--max-delta", type=float, default=1.0, help="delta bound in µs for the max-load search")
    p.add_argument("--reference-load", type=rate, default=REFERENCE_MAX_LOAD_BPS,
                   help="reported maximum load to compare against (default: 9.78G)")
    p.set_defaults(func=cmd_queuing)

    p = sub.add_parser("throughput", parents=[common], help="achievable IPsec throughput and CPU")
    p.add_argument("--attempted", type=float, required=True, help="attempted rate in Mb/s")
    p.add_argument("--cipher", required=True)
    p.add_argument("--load-profile", help="also report added delay under load, e.g. fh-macsec-enc")
    p.set_defaults(func=cmd_throughput)

    p = sub.add_parser("mtu-sweep", parents=[common], help="delay/throughput of a payload against MTU")
    p.add_argument("--payload", type=positive_int, required=True)
    p.add_argument("--mtu", type=mtu_range, default=range(1400, 9001, 100), help="LO:HI:STEP")
    p.add_argument("--profile", default="fh-macsec-enc")
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.GREEDY.value)
    p.add_argument("--header", type=int, default=ECPRI_HEADER_LEN, help="per-fragment header bytes")
    p.add_argument("--strict", action="store_true", help="security overhead must also fit in the MTU")
    p.add_argument("--pipelined", action="store_true", help="overlap processing with transmission")
    p.add_argument("--figure", metavar="PATH", help="also render a PNG/PDF/SVG figure")
    _add_link(p)
    _add_security(p, "macsec")
    p.set_defaults(func=cmd_mtu_sweep)

    p = sub.add_parser("feasibility", parents=[common], help="latency-budget grid by security option")
    p.add_argument("--baseline", type=float, default=118.0, help="one-way baseline delay in µs")
    p.add_argument("--delta-enc", type=float, default=218.0, help="MACsec with encryption, µs")
    p.add_argument("--delta-noenc", type=float, default=153.0, help="MACsec without encryption, µs")
    p.add_argument("--table", metavar="CSV", help="alternative budget table")
    p.add_argument("--figure", metavar="PATH")
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("analyze", parents=[common], help="summarize a capture and project it secured")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--pcap", metavar="FILE")
    src.add_argument("--csv", metavar="FILE", help="ts_s,len_bytes,class rows")
    p.add_argument("--interface", choices=sorted(INTERFACE_DEFAULTS), required=True)
    p.add_argument("--protocol", choices=[m.value for m in Protocol])
    p.add_argument("--cipher")
    p.add_argument("--no-encrypt", action="store_true")
    p.add_argument("--tls-overhead", type=positive_int)
    p.add_argument("--profile", help="secured processing profile")
    p.add_argument("--baseline-profile", help="plaintext processing profile")
    p.add_argument("--threshold", type=positive_int, default=300, help="E2AP short/long boundary in B")
    p.add_argument("--cdf-out", metavar="FILE", help="write the size CDF as CSV")
    p.add_argument("--figure", metavar="PATH")
    _add_link(p)
    p.set_defaults(func=cmd_analyze)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=stderr)
        return 1
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=stderr)
    try:
        conf = load_config(args.config)
        report = args.func(args, conf)
        text = report.render(args.output)
        if args.out:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        else:
            stdout.write(text)
    except (SeccostError, ValueError, OSError) as exc:
        print(f"seccost {args.command}: {exc}", file=stderr)
        return 2
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
