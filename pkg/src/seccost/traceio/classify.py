"""Traffic classification for E2 (SCTP) and Open Fronthaul (eCPRI) captures."""

from __future__ import annotations

import logging
from dataclasses import replace

from .frames import (ECPRI_IQ_DATA, ECPRI_RT_CONTROL, SCTP_DATA, SCTP_SACK, ecpri_message_type,
                     parse_eth, sctp_first_chunk)
from .pcap import Direction, PacketRecord, TrafficClass, Trace

log = logging.getLogger(__name__)

E2AP_SHORT_LONG_THRESHOLD = 300


def _directions(records) -> list[Direction]:
    first = next((parse_eth(r.data) for r in records if parse_eth(r.data)), None)
    out = []
    for r in records:
        eth = parse_eth(r.data)
        if first is None or eth is None or first.src == first.dst:
            out.append(Direction.UNKNOWN)
        elif (eth.src, eth.dst) == (first.src, first.dst):
            out.append(Direction.A_TO_B)
        elif (eth.src, eth.dst) == (first.dst, first.src):
            out.append(Direction.B_TO_A)
        else:
            out.append(Direction.UNKNOWN)
    return out


def _e2_class(r: PacketRecord, threshold: int) -> TrafficClass:
    chunk = sctp_first_chunk(r.data)
    if chunk == SCTP_SACK:
        return TrafficClass.E2_SACK
    if chunk == SCTP_DATA:
        return TrafficClass.E2AP_LONG if r.original_len >= threshold else TrafficClass.E2AP_SHORT
    return TrafficClass.OTHER


def classify_e2(trace: Trace, threshold: int = E2AP_SHORT_LONG_THRESHOLD) -> Trace:
    """SACK / short E2AP / long E2AP / other, by first SCTP chunk and frame size.

    DATA chunks at or above ``threshold`` bytes (whole frame) are long E2AP.
    """
    dirs = _directions(trace.records)
    recs = [replace(r, classification=_e2_class(r, threshold), direction=d)
            for r, d in zip(trace.records, dirs)]
    return trace.with_records(recs)


def classify_fronthaul(trace: Trace) -> Trace:
    """eCPRI message type 0 is user plane, type 2 is control plane."""
    dirs = _directions(trace.records)
    recs, bad = [], 0
    for r, d in zip(trace.records, dirs):
        try:
            mtype = ecpri_message_type(r.data)
        except ValueError as exc:
            bad += 1
            log.debug("malformed eCPRI frame at %.9f: %s", r.timestamp, exc)
            mtype = None
        cls = {ECPRI_IQ_DATA: TrafficClass.ECPRI_UP,
               ECPRI_RT_CONTROL: TrafficClass.ECPRI_CP}.get(mtype, TrafficClass.OTHER)
        recs.append(replace(r, classification=cls, direction=d))
    if bad:
        log.warning("%d malformed eCPRI frames classified as other", bad)
    return trace.with_records(recs, malformed=trace.malformed + bad)
