"""Packet-capture ingest, E2/fronthaul classification and secured-traffic projection."""

from .analysis import (ClassProjection, Projection, SizeCdf, empirical_cdf, project_secured,
                       read_csv_trace, summarize, synth_e2_trace, synth_fronthaul_trace,
                       write_csv_trace)
from .classify import E2AP_SHORT_LONG_THRESHOLD, classify_e2, classify_fronthaul
from .pcap import (Direction, PacketRecord, PcapHeader, Trace, TrafficClass, parse_pcap, read_pcap,
                   write_pcap)

__all__ = [
    "ClassProjection", "Direction", "E2AP_SHORT_LONG_THRESHOLD", "PacketRecord", "PcapHeader",
    "Projection", "SizeCdf", "Trace", "TrafficClass", "classify_e2", "classify_fronthaul",
    "empirical_cdf", "parse_pcap", "project_secured", "read_csv_trace", "read_pcap", "summarize",
    "synth_e2_trace", "synth_fronthaul_trace", "write_csv_trace", "write_pcap",
]
