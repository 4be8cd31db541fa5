"""Header dissection and synthetic frame construction.

Only what classification needs: Ethernet II, IPv4, the SCTP common header
plus the first chunk type, and the 4-byte eCPRI common header.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

ETHERTYPE_IPV4 = 0x0800
ETHERTYPE_ECPRI = 0xAEFE
IPPROTO_SCTP = 132

SCTP_DATA = 0
SCTP_SACK = 3

ECPRI_IQ_DATA = 0
ECPRI_RT_CONTROL = 2

DEFAULT_SRC = bytes.fromhex("020000000001")
DEFAULT_DST = bytes.fromhex("020000000002")


@dataclass(frozen=True)
class EthHeader:
    dst: bytes
    src: bytes
    ethertype: int


def parse_eth(frame: bytes) -> EthHeader | None:
    if len(frame) < 14:
        return None
    dst, src, ethertype = struct.unpack_from("!6s6sH", frame)
    return EthHeader(dst, src, ethertype)


def sctp_first_chunk(frame: bytes) -> int | None:
    """First SCTP chunk type of an Ethernet/IPv4/SCTP frame, else None."""
    eth = parse_eth(frame)
    if eth is None or eth.ethertype != ETHERTYPE_IPV4 or len(frame) < 34:
        return None
    ver_ihl = frame[14]
    if ver_ihl >> 4 != 4:
        return None
    ihl = (ver_ihl & 0x0F) * 4
    if ihl < 20 or frame[14 + 9] != IPPROTO_SCTP:
        return None
    chunk = 14 + ihl + 12
    if len(frame) <= chunk:
        return None
    return frame[chunk]


def ecpri_message_type(frame: bytes) -> int | None:
    """eCPRI message type, None if not eCPRI; raises ValueError when malformed."""
    eth = parse_eth(frame)
    if eth is None or eth.ethertype != ETHERTYPE_ECPRI:
        return None
    if len(frame) < 18:
        raise ValueError("eCPRI common header truncated")
    revision = frame[14] >> 4
    if revision != 1:
        raise ValueError(f"unsupported eCPRI revision {revision}")
    return frame[15]


def build_sctp_frame(frame_len: int, chunk_type: int = SCTP_DATA,
                     src: bytes = DEFAULT_SRC, dst: bytes = DEFAULT_DST) -> bytes:
    """Ethernet + IPv4 + SCTP frame of exactly ``frame_len`` bytes."""
    min_len = 14 + 20 + 12 + 4
    if frame_len < min_len:
        raise ValueError(f"SCTP frame needs at least {min_len} B")
    ip_len = frame_len - 14
    chunk_len = ip_len - 20 - 12
    eth = struct.pack("!6s6sH", dst, src, ETHERTYPE_IPV4)
    ip = struct.pack("!BBHHHBBH4s4s", 0x45, 0, ip_len, 0, 0x4000, 64, IPPROTO_SCTP, 0,
                     bytes([10, 0, 0, 1]), bytes([10, 0, 0, 2]))
    sctp = struct.pack("!HHII", 36421, 36421, 1, 0)
    chunk = struct.pack("!BBH", chunk_type, 0, chunk_len) + bytes(chunk_len - 4)
    return eth + ip + sctp + chunk


def build_ecpri_frame(frame_len: int, message_type: int = ECPRI_IQ_DATA,
                      src: bytes = DEFAULT_SRC, dst: bytes = DEFAULT_DST, revision: int = 1) -> bytes:
    """Ethernet + eCPRI common header + zero payload, ``frame_len`` bytes total."""
    if frame_len < 18:
        raise ValueError("eCPRI frame needs at least 18 B")
    payload = frame_len - 18
    return (struct.pack("!6s6sH", dst, src, ETHERTYPE_ECPRI)
            + struct.pack("!BBH", revision << 4, message_type, payload)
            + bytes(payload))
