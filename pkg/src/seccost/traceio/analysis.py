"""Size distributions, load summaries and PT -> CT projection of traces."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from decimal import Decimal
from typing import Callable, Iterable, Union

import numpy as np

from ..delaymodel import LinkSpec, ProcessingProfile, transmission_delay
from ..errors import EmptySelection
from ..overhead import Protocol, SecurityConfig, secure_frame
from .frames import (DEFAULT_DST, DEFAULT_SRC, ECPRI_IQ_DATA, ECPRI_RT_CONTROL, SCTP_DATA, SCTP_SACK,
                     build_ecpri_frame, build_sctp_frame)
from .pcap import PacketRecord, PcapHeader, Trace, TrafficClass

Filter = Union[Callable[[PacketRecord], bool], Iterable[TrafficClass], TrafficClass, None]


def _selector(flt: Filter) -> Callable[[PacketRecord], bool]:
    if flt is None:
        return lambda r: True
    if isinstance(flt, TrafficClass):
        return lambda r: r.classification is flt
    if callable(flt):
        return flt
    wanted = frozenset(flt)
    return lambda r: r.classification in wanted


@dataclass(frozen=True)
class SizeCdf:
    points: tuple[tuple[int, float], ...]

    def __post_init__(self):
        lens = [l for l, _ in self.points]
        fracs = [f for _, f in self.points]
        if not self.points:
            raise ValueError("empty CDF")
        if any(b <= a for a, b in zip(lens, lens[1:])):
            raise ValueError("CDF lengths must be strictly increasing")
        if any(b < a for a, b in zip(fracs, fracs[1:])) or fracs[-1] != 1.0:
            raise ValueError("CDF fractions must be nondecreasing and end at 1")

    def __call__(self, length: float) -> float:
        """Fraction of packets no longer than ``length``."""
        frac = 0.0
        for l, f in self.points:
            if l > length:
                break
            frac = f
        return frac

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["length", "cum_fraction"])
        w.writerows(self.points)
        return buf.getvalue()


def empirical_cdf(trace: Trace, flt: Filter = None) -> SizeCdf:
    sel = _selector(flt)
    lens = np.array([r.original_len for r in trace.records if sel(r)], dtype=np.int64)
    if lens.size == 0:
        raise EmptySelection("no packets match the filter")
    values, counts = np.unique(lens, return_counts=True)
    cum = np.cumsum(counts)
    fracs = [int(c) / lens.size for c in cum]
    fracs[-1] = 1.0
    return SizeCdf(tuple(zip((int(v) for v in values), fracs)))


def summarize(trace: Trace) -> dict:
    """Counts, size statistics and offered load per traffic class.

    Offered load is ``None`` when the trace spans zero time.
    """
    if not trace.records:
        raise EmptySelection("trace has no packets")
    duration = trace.duration

    def stats(lens):
        a = np.asarray(lens, dtype=float)
        total = int(a.sum())
        return {
            "count": int(a.size),
            "bytes": total,
            "mean_len": float(a.mean()),
            "p50_len": float(np.percentile(a, 50)),
            "p90_len": float(np.percentile(a, 90)),
            "p99_len": float(np.percentile(a, 99)),
            "min_len": int(a.min()),
            "max_len": int(a.max()),
            "offered_load_bps": 8.0 * total / duration if duration > 0 else None,
        }

    by_class: dict[str, list[int]] = {}
    for r in trace.records:
        by_class.setdefault(r.classification.value, []).append(r.original_len)
    out = stats([r.original_len for r in trace.records])
    out.update(duration_s=duration, source=trace.source, malformed=trace.malformed,
               classes={k: stats(v) for k, v in sorted(by_class.items())})
    return out


@dataclass(frozen=True)
class ClassProjection:
    count: int
    pt_bytes: int
    ct_bytes: int
    pt_mean_len: float
    ct_mean_len: float
    pt_trans_us: float
    ct_trans_us: float
    added_proc_us: float

    @property
    def added_proc_mean_us(self) -> float:
        return self.added_proc_us / self.count


@dataclass(frozen=True)
class Projection:
    protocol: str
    duration_s: float
    classes: dict[str, ClassProjection]
    total: ClassProjection
    pt_load_bps: float | None
    ct_load_bps: float | None
    profile: str | None = None
    baseline: str | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in self.classes.items():
            d["classes"][k]["added_proc_mean_us"] = v.added_proc_mean_us
        d["total"]["added_proc_mean_us"] = self.total.added_proc_mean_us
        return d

    def rows(self) -> list[dict]:
        rows = []
        for name, c in list(self.classes.items()) + [("total", self.total)]:
            row = {"class": name}
            row.update(asdict(c))
            row["added_proc_mean_us"] = c.added_proc_mean_us
            rows.append(row)
        return rows


def project_secured(trace: Trace, cfg: SecurityConfig, profile: ProcessingProfile | None = None,
                    baseline: ProcessingProfile | None = None, link: LinkSpec | None = None) -> Projection:
    """What the same traffic would cost once secured per ``cfg``.

    Frame sizes are expanded packet by packet.  The added processing delay
    of a packet is ``profile(L) - baseline(L)`` at its plaintext length L
    (profiles are indexed by the plaintext packet size); a missing profile
    or baseline counts as zero, and protocol NONE adds nothing.
    """
    if not trace.records:
        raise EmptySelection("trace has no packets")
    link = link or LinkSpec()
    secured = cfg.protocol is not Protocol.NONE
    acc: dict[str, dict[str, list]] = {}
    for r in trace.records:
        pt = r.original_len
        ct = secure_frame(pt, cfg).ct_frame_len
        added = 0.0
        if secured:
            added = (profile(pt) if profile else 0.0) - (baseline(pt) if baseline else 0.0)
        for key in (r.classification.value, "__total__"):
            a = acc.setdefault(key, {"pt": [], "ct": [], "proc": [], "tpt": [], "tct": []})
            a["pt"].append(pt)
            a["ct"].append(ct)
            a["proc"].append(added)
            a["tpt"].append(transmission_delay(pt, link))
            a["tct"].append(transmission_delay(ct, link))

    def fold(a) -> ClassProjection:
        n = len(a["pt"])
        return ClassProjection(n, sum(a["pt"]), sum(a["ct"]), sum(a["pt"]) / n, sum(a["ct"]) / n,
                               math.fsum(a["tpt"]) / n, math.fsum(a["tct"]) / n, math.fsum(a["proc"]))

    total = fold(acc.pop("__total__"))
    dur = trace.duration
    return Projection(
        protocol=cfg.protocol.value,
        duration_s=dur,
        classes={k: fold(v) for k, v in sorted(acc.items())},
        total=total,
        pt_load_bps=8.0 * total.pt_bytes / dur if dur > 0 else None,
        ct_load_bps=8.0 * total.ct_bytes / dur if dur > 0 else None,
        profile=profile.name if (profile and secured) else None,
        baseline=baseline.name if (baseline and secured) else None,
    )


# --- CSV ingest ---------------------------------------------------------------

CSV_FIELDS = ("ts_s", "len_bytes", "class")


def read_csv_trace(source) -> Trace:
    """Trace from ``ts_s,len_bytes,class`` rows (header required)."""
    if hasattr(source, "read"):
        text, name = source.read(), getattr(source, "name", "")
    else:
        with open(source, newline="") as fh:
            text, name = fh.read(), str(source)
    reader = csv.DictReader(io.StringIO(text))
    missing = set(CSV_FIELDS) - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"CSV trace is missing columns: {', '.join(sorted(missing))}")
    recs = []
    for row in reader:
        n = int(row["len_bytes"])
        recs.append(PacketRecord(int(Decimal(row["ts_s"]) * 1_000_000_000), n, n,
                                 TrafficClass.parse(row["class"] or "other")))
    return Trace(tuple(recs), source=name)


def write_csv_trace(trace: Trace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in trace.records:
        w.writerow([f"{Decimal(r.ts_ns) / Decimal(10**9)}", r.original_len, r.classification.value])
    return buf.getvalue()


# --- synthetic traffic ---------------------------------------------------------


def _spread(rng: np.random.Generator, n: int, span_s: float, start_ns: int) -> list[int]:
    """n exponential-gap timestamps, rescaled so the trace spans exactly ``span_s``."""
    if n == 1:
        return [start_ns]
    gaps = rng.exponential(1.0, n - 1)
    ts = np.concatenate([[0.0], np.cumsum(gaps)])
    ts = ts / ts[-1] * span_s * 1e9
    out = [start_ns + int(round(t)) for t in ts]
    out[-1] = start_ns + int(round(span_s * 1e9))
    return out


def synth_e2_trace(n: int, rng: np.random.Generator | int = 0, load_bps: float = 200e3,
                   short_range=(150, 240), long_range=(1300, 1500), start_ns: int = 1_700_000_000 * 10**9) -> Trace:
    """E2-like capture: repeating short E2AP, long E2AP, then a 62 B SACK back.

    Timestamps are scaled so ``8 * bytes / duration`` equals ``load_bps``.
    """
    rng = np.random.default_rng(rng)
    lens, kinds = [], []
    for i in range(n):
        step = i % 3
        if step == 0:
            lens.append(int(rng.integers(short_range[0], short_range[1] + 1)))
            kinds.append((SCTP_DATA, False))
        elif step == 1:
            lens.append(int(rng.integers(long_range[0], long_range[1] + 1)))
            kinds.append((SCTP_DATA, False))
        else:
            lens.append(62)
            kinds.append((SCTP_SACK, True))
    span = 8.0 * sum(lens) / load_bps
    stamps = _spread(rng, n, span, start_ns)
    recs = []
    for ts, size, (chunk, reply) in zip(stamps, lens, kinds):
        src, dst = (DEFAULT_DST, DEFAULT_SRC) if reply else (DEFAULT_SRC, DEFAULT_DST)
        frame = build_sctp_frame(size, chunk, src=src, dst=dst)
        recs.append(PacketRecord(ts, size, size, data=frame))
    return Trace(tuple(recs), source="synthetic-e2", header=PcapHeader(nanosecond=True))


FH_MIX = {"cp": 0.2, "up_partial": 0.3, "up_full": 0.5}


def synth_fronthaul_trace(n: int, rng: np.random.Generator | int = 0, mix: dict | None = None,
                          cp_len: int = 80, partial_range=(300, 1200), full_len: int = 7678,
                          load_bps: float = 1e9, start_ns: int = 1_700_000_000 * 10**9) -> Trace:
    """Fronthaul-like capture: C-plane, partial-PRB U-plane and full U-plane frames."""
    rng = np.random.default_rng(rng)
    mix = mix or FH_MIX
    kinds = rng.choice(list(mix), size=n, p=list(mix.values()))
    lens, types = [], []
    for k in kinds:
        if k == "cp":
            lens.append(cp_len)
            types.append(ECPRI_RT_CONTROL)
        elif k == "up_partial":
            lens.append(int(rng.integers(partial_range[0], partial_range[1] + 1)))
            types.append(ECPRI_IQ_DATA)
        else:
            lens.append(full_len)
            types.append(ECPRI_IQ_DATA)
    stamps = _spread(rng, n, 8.0 * sum(lens) / load_bps, start_ns)
    recs = [PacketRecord(ts, size, size, data=build_ecpri_frame(size, t))
            for ts, size, t in zip(stamps, lens, types)]
    return Trace(tuple(recs), source="synthetic-fronthaul", header=PcapHeader(nanosecond=True))
