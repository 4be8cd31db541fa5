"""Payload fragmentation under an MTU and the resulting delay/throughput.

MTU here bounds the frame payload above the Ethernet header.  Security
overhead is added outside that budget unless ``strict=True``, in which case
it is taken out of the usable fragment size.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .delaymodel import (DelayBreakdown, LinkSpec, ProcessingProfile, propagation_delay,
                         total_delay, transmission_delay)
from .errors import MtuTooSmall
from .overhead import ETH_HEADER_LEN, Protocol, SecurityConfig, secure_frame

ECPRI_HEADER_LEN = 8
ECPRI_MAX_PAYLOAD = 8192
IP_TCP_HEADERS = 40


class Strategy(enum.Enum):
    GREEDY = "greedy"
    EVEN_SPLIT = "even"

    @classmethod
    def parse(cls, text: "str | Strategy") -> "Strategy":
        if isinstance(text, Strategy):
            return text
        key = text.lower().replace("_", "-")
        aliases = {"greedy": cls.GREEDY, "even": cls.EVEN_SPLIT, "even-split": cls.EVEN_SPLIT,
                   "evensplit": cls.EVEN_SPLIT}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown strategy {text!r}") from None


@dataclass(frozen=True)
class FragmentationPlan:
    payload: int
    mtu: int
    per_fragment_header: int
    strategy: Strategy
    fragments: tuple[int, ...]
    usable: int

    def __post_init__(self):
        if sum(self.fragments) != self.payload:
            raise AssertionError("fragments do not reassemble to the payload")
        if max(self.fragments) > self.usable:
            raise AssertionError("fragment exceeds usable size")


def fragment_payload(payload: int, mtu: int, per_fragment_header: int = ECPRI_HEADER_LEN,
                     strategy: str | Strategy = Strategy.GREEDY, usable: int | None = None) -> FragmentationPlan:
    """Split ``payload`` bytes into chunks that fit ``mtu - per_fragment_header``.

    Greedy fills every fragment but the last; EvenSplit uses the same count
    with sizes differing by at most one byte.
    """
    strategy = Strategy.parse(strategy)
    if payload <= 0:
        raise ValueError("payload must be > 0")
    if usable is None:
        usable = mtu - per_fragment_header
    if usable <= 0:
        raise MtuTooSmall(f"MTU {mtu} leaves no room after a {mtu - usable} B per-fragment header")
    n = -(-payload // usable)
    if strategy is Strategy.GREEDY:
        frags = [usable] * (n - 1) + [payload - usable * (n - 1)]
    else:
        q, r = divmod(payload, n)
        frags = [q + 1] * r + [q] * (n - r)
    return FragmentationPlan(payload, mtu, per_fragment_header, strategy, tuple(frags), usable)


def strict_usable(mtu: int, per_fragment_header: int, cfg: SecurityConfig) -> int:
    """Largest fragment whose secured frame still fits in the MTU."""
    u = mtu - per_fragment_header
    while u > 0:
        ct = secure_frame(u + per_fragment_header + ETH_HEADER_LEN, cfg).ct_frame_len
        if ct - ETH_HEADER_LEN <= mtu:
            return u
        u -= 1
    raise MtuTooSmall(f"MTU {mtu} cannot carry any payload once security overhead is added")


@dataclass(frozen=True)
class MtuPoint:
    mtu: int
    fragments: int
    total_delay_us: float
    throughput_mbps: float
    plan: FragmentationPlan = field(repr=False)
    per_fragment: tuple[DelayBreakdown, ...] = field(repr=False)
    ct_frames: tuple[int, ...] = field(repr=False)

    def row(self) -> dict:
        return {"mtu": self.mtu, "fragments": self.fragments,
                "total_delay_us": self.total_delay_us, "throughput_mbps": self.throughput_mbps}


def mtu_transfer_model(payload: int, mtu: int, cfg: SecurityConfig, profile: ProcessingProfile,
                       link: LinkSpec, strategy: str | Strategy = Strategy.GREEDY,
                       per_fragment_header: int = ECPRI_HEADER_LEN, strict: bool = False,
                       pipelined: bool = False) -> MtuPoint:
    """Delay and throughput of delivering one payload split under ``mtu``.

    Each fragment becomes an Ethernet frame (fragment + per-fragment header +
    14 B), is secured per ``cfg`` and costs prop + trans + proc of the
    secured frame.  Fragments are serialized, so delays add.  With
    ``pipelined=True`` processing of fragment k+1 overlaps transmission of
    fragment k (two-stage flow shop) and propagation is paid once.
    """
    usable = strict_usable(mtu, per_fragment_header, cfg) if strict else None
    plan = fragment_payload(payload, mtu, per_fragment_header, strategy, usable=usable)
    prop = propagation_delay(link)
    parts, frames = [], []
    for frag in plan.fragments:
        ct = secure_frame(frag + per_fragment_header + ETH_HEADER_LEN, cfg).ct_frame_len
        frames.append(ct)
        parts.append(total_delay(0.0, prop, transmission_delay(ct, link), profile(ct)))
    if pipelined:
        proc_done = link_done = 0.0
        for d in parts:
            proc_done += d.processing
            link_done = max(proc_done, link_done) + d.transmission
        total = link_done + prop
    else:
        total = math.fsum(d.total for d in parts)
    return MtuPoint(mtu, len(plan.fragments), total, 8.0 * payload / total, plan,
                    tuple(parts), tuple(frames))


def mtu_sweep(payload: int, mtus, cfg: SecurityConfig, profile: ProcessingProfile, link: LinkSpec,
              strategy: str | Strategy = Strategy.GREEDY, **kw) -> list[MtuPoint]:
    return [mtu_transfer_model(payload, m, cfg, profile, link, strategy, **kw) for m in mtus]


def optimal_mtu(payload: int, cfg: SecurityConfig, profile: ProcessingProfile, link: LinkSpec,
                mtu_range: tuple[int, int] = (1400, 9000), step: int = 100,
                strategy: str | Strategy = Strategy.GREEDY, **kw) -> tuple[int, float]:
    """Minimum-delay MTU over an inclusive sweep; ties go to the larger MTU."""
    lo, hi = mtu_range
    if hi < lo or step <= 0:
        raise ValueError("empty MTU range")
    points = mtu_sweep(payload, range(lo, hi + 1, step), cfg, profile, link, strategy, **kw)
    best = min(p.total_delay_us for p in points)
    tol = 1e-9 * max(1.0, abs(best))
    winner = max((p for p in points if p.total_delay_us - best <= tol), key=lambda p: p.mtu)
    return winner.mtu, winner.total_delay_us


@dataclass(frozen=True)
class TransferResult:
    mtu: int
    packets: int
    wire_bytes: int
    stream_rate_mbps: float
    duration_s: float
    throughput_mbps: float


def file_transfer_model(file_size: int, mtu: int, cfg: SecurityConfig, profile: ProcessingProfile,
                        link: LinkSpec, pipeline_rate: float = 2500.0,
                        baseline: ProcessingProfile | None = None,
                        l34_header: int = IP_TCP_HEADERS) -> TransferResult:
    """Bulk transfer of ``file_size`` bytes as a saturating packet stream.

    Each packet carries ``mtu - l34_header`` payload bytes and occupies
    ``mtu + 14`` bytes plus security overhead on the wire.  The security
    pipeline's per-packet work is the added processing delay
    ``profile - baseline`` (``baseline=None`` treats ``profile`` as the
    added delay itself).  The pipeline is calibrated to move
    ``pipeline_rate`` Mb/s of frames at the profile's largest anchor, so at
    frame size W it sustains ``pipeline_rate * (W / work(W)) / (L_ref / work(L_ref))``.
    The stream runs at the lesser of that and the link rate.
    """
    if file_size <= 0:
        raise ValueError("file size must be > 0")
    per_packet = mtu - l34_header
    if per_packet <= 0:
        raise MtuTooSmall(f"MTU {mtu} cannot hold {l34_header} B of L3/L4 headers")
    full, rest = divmod(file_size, per_packet)
    packets = full + (1 if rest else 0)

    def wire(payload):
        return secure_frame(payload + l34_header + ETH_HEADER_LEN, cfg).ct_frame_len

    wire_bytes = full * wire(per_packet) + (wire(rest) if rest else 0)

    def work(frame):
        return profile(frame) - (baseline(frame) if baseline is not None else 0.0)

    link_mbps = link.rate / 1e6
    ref = profile.anchors[-1][0]
    # the stream rate is set by its dominant (full-size) packets
    big = wire(per_packet if full else rest)
    if cfg.protocol is Protocol.NONE or work(big) <= 0 or work(ref) <= 0:
        stream = link_mbps
    else:
        stream = min(link_mbps, pipeline_rate * (big / work(big)) / (ref / work(ref)))
    duration = wire_bytes * 8 / (stream * 1e6)
    return TransferResult(mtu, packets, wire_bytes, stream, duration, file_size * 8 / duration / 1e6)
