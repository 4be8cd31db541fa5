"""Classic libpcap reader/writer (no pcapng) for Ethernet captures."""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field, replace

from ..errors import TruncatedCapture, UnsupportedFormat

MAGIC_US = 0xA1B2C3D4
MAGIC_NS = 0xA1B23C4D
LINKTYPE_ETHERNET = 1
GLOBAL_HEADER_LEN = 24
RECORD_HEADER_LEN = 16


class TrafficClass(enum.Enum):
    E2_SACK = "e2_sack"
    E2AP_SHORT = "e2ap_short"
    E2AP_LONG = "e2ap_long"
    ECPRI_UP = "ecpri_up"
    ECPRI_CP = "ecpri_cp"
    OTHER = "other"

    @classmethod
    def parse(cls, text: str) -> "TrafficClass":
        key = text.strip().lower().replace("-", "_")
        aliases = {"e2sack": cls.E2_SACK, "sack": cls.E2_SACK, "e2apshort": cls.E2AP_SHORT,
                   "e2aplong": cls.E2AP_LONG, "ecpriuserplane": cls.ECPRI_UP,
                   "ecpricontrolplane": cls.ECPRI_CP}
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        if key.replace("_", "") in aliases:
            return aliases[key.replace("_", "")]
        raise ValueError(f"unknown traffic class {text!r}")


class Direction(enum.Enum):
    A_TO_B = "a->b"
    B_TO_A = "b->a"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class PacketRecord:
    ts_ns: int
    captured_len: int
    original_len: int
    classification: TrafficClass = TrafficClass.OTHER
    direction: Direction = Direction.UNKNOWN
    data: bytes = field(default=b"", repr=False)

    def __post_init__(self):
        if self.captured_len > self.original_len:
            raise ValueError("captured length exceeds original length")

    @property
    def timestamp(self) -> float:
        return self.ts_ns / 1e9


@dataclass(frozen=True)
class PcapHeader:
    nanosecond: bool = False
    big_endian: bool = False
    version_major: int = 2
    version_minor: int = 4
    thiszone: int = 0
    sigfigs: int = 0
    snaplen: int = 262144
    linktype: int = LINKTYPE_ETHERNET


@dataclass(frozen=True)
class Trace:
    records: tuple[PacketRecord, ...]
    link_type: int = LINKTYPE_ETHERNET
    source: str = ""
    header: PcapHeader = field(default_factory=PcapHeader)
    malformed: int = 0

    @property
    def duration(self) -> float:
        if not self.records:
            return 0.0
        ts = [r.ts_ns for r in self.records]
        return (max(ts) - min(ts)) / 1e9

    def __len__(self):
        return len(self.records)

    def with_records(self, records, **kw) -> "Trace":
        return replace(self, records=tuple(records), **kw)


def _byte_order(raw: bytes) -> tuple[str, bool]:
    for endian in ("<", ">"):
        (magic,) = struct.unpack(endian + "I", raw)
        if magic == MAGIC_US:
            return endian, False
        if magic == MAGIC_NS:
            return endian, True
    raise UnsupportedFormat(f"not a classic pcap file (magic 0x{raw.hex()})")


def parse_pcap(data: bytes, source: str = "") -> Trace:
    """Parse a classic pcap byte string into a :class:`Trace`.

    Both timestamp resolutions and both byte orders are accepted; only the
    Ethernet link type is.
    """
    if len(data) < GLOBAL_HEADER_LEN:
        raise UnsupportedFormat("file is shorter than a pcap global header")
    endian, ns = _byte_order(data[:4])
    vmaj, vmin, zone, sigfigs, snaplen, linktype = struct.unpack(endian + "HHiIII", data[4:24])
    if linktype != LINKTYPE_ETHERNET:
        raise UnsupportedFormat(f"link type {linktype} is not Ethernet (1)")
    header = PcapHeader(ns, endian == ">", vmaj, vmin, zone, sigfigs, snaplen, linktype)
    frac_scale = 1 if ns else 1000
    rec_fmt = endian + "IIII"
    records = []
    off, index = GLOBAL_HEADER_LEN, 0
    while off < len(data):
        if off + RECORD_HEADER_LEN > len(data):
            raise TruncatedCapture(index, "record header cut short")
        sec, frac, incl, orig = struct.unpack_from(rec_fmt, data, off)
        off += RECORD_HEADER_LEN
        if off + incl > len(data):
            raise TruncatedCapture(index, f"expected {incl} B of packet data, found {len(data) - off}")
        if incl > orig:
            raise UnsupportedFormat(f"record {index}: captured length {incl} > original {orig}")
        records.append(PacketRecord(sec * 1_000_000_000 + frac * frac_scale, incl, orig,
                                    data=bytes(data[off:off + incl])))
        off += incl
        index += 1
    return Trace(tuple(records), linktype, source, header)


def read_pcap(path) -> Trace:
    with open(path, "rb") as fh:
        return parse_pcap(fh.read(), source=str(path))


def write_pcap(trace: Trace, header: PcapHeader | None = None) -> bytes:
    """Serialize records back to classic pcap (inverse of :func:`parse_pcap`)."""
    h = header or trace.header
    endian = ">" if h.big_endian else "<"
    out = [struct.pack(endian + "IHHiIII", MAGIC_NS if h.nanosecond else MAGIC_US,
                       h.version_major, h.version_minor, h.thiszone, h.sigfigs, h.snaplen, h.linktype)]
    scale = 1 if h.nanosecond else 1000
    for r in trace.records:
        sec, rem = divmod(r.ts_ns, 1_000_000_000)
        if rem % scale:
            raise ValueError("timestamp not representable at microsecond resolution")
        data = r.data if r.data else bytes(r.captured_len)
        if len(data) != r.captured_len:
            raise ValueError("record data length does not match captured_len")
        out.append(struct.pack(endian + "IIII", sec, rem // scale, r.captured_len, r.original_len))
        out.append(data)
    return b"".join(out)
