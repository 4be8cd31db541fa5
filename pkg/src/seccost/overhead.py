"""Byte-exact frame expansion for IPsec ESP, MACsec and TLS.

All lengths are on-wire Ethernet frame lengths: the 14 B Ethernet header is
included, the FCS is not.  Under that convention a 62 B SCTP SACK encrypted
with ESP tunnel mode (AES256-CBC, HMAC-SHA2-256-128) becomes a 138 B frame.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field

from .errors import InvalidFrame, UnsupportedProtocol

ETH_HEADER_LEN = 14
ESP_HEADER_LEN = 8
ESP_TRAILER_LEN = 2  # pad length + next header
IPV4_HEADER_LEN = 20
MACSEC_SECTAG_LEN = 16
MACSEC_ICV_LEN = 16
TLS_MIN_RECORD_OVERHEAD = 25


class Protocol(enum.Enum):
    NONE = "none"
    ESP_TUNNEL = "esp-tunnel"
    ESP_TRANSPORT = "esp-transport"
    MACSEC = "macsec"
    TLS = "tls"
    SSH_V2 = "sshv2"

    @classmethod
    def parse(cls, text: str | "Protocol") -> "Protocol":
        if isinstance(text, Protocol):
            return text
        key = text.strip().lower().replace("_", "-")
        for member in cls:
            if key in (member.value, member.name.lower().replace("_", "-")):
                return member
        raise UnsupportedProtocol(f"unknown protocol {text!r}")


@dataclass(frozen=True)
class CipherSuite:
    name: str
    block_align: int
    iv_len: int
    icv_len: int
    aead: bool
    integrity: str | None = None

    def __post_init__(self):
        if self.block_align not in (4, 16):
            raise ValueError(f"{self.name}: block_align must be 4 or 16")
        if self.iv_len not in (8, 16):
            raise ValueError(f"{self.name}: iv_len must be 8 or 16")
        if self.icv_len != 16:
            raise ValueError(f"{self.name}: icv_len must be 16")
        if self.aead and self.integrity is not None:
            raise ValueError(f"{self.name}: AEAD suites take no integrity function")
        if not self.aead and self.integrity is None:
            raise ValueError(f"{self.name}: non-AEAD suites need an integrity function")

    @property
    def label(self) -> str:
        return self.name if self.integrity is None else f"{self.name}+{self.integrity}"


def _cbc(name: str) -> CipherSuite:
    return CipherSuite(name, block_align=16, iv_len=16, icv_len=16, aead=False,
                       integrity="SHA2-256-128")


def _aead(name: str) -> CipherSuite:
    return CipherSuite(name, block_align=4, iv_len=8, icv_len=16, aead=True)


SUITES: dict[str, CipherSuite] = {
    s.name: s
    for s in (
        _cbc("AES128-CBC"),
        _cbc("AES256-CBC"),
        _aead("AES128-GCM"),
        _aead("AES256-GCM"),
        _aead("AES128-CCM"),
        _aead("AES256-CCM"),
        _aead("CHACHA20-POLY1305"),
    )
}


def cipher_suite(name: str | CipherSuite) -> CipherSuite:
    """Look up a suite by name, case-insensitively.

    An integrity suffix such as ``aes256-cbc+sha2-256-128`` is accepted and
    checked against the suite's integrity function.
    """
    if isinstance(name, CipherSuite):
        return name
    base, _, integrity = name.strip().upper().partition("+")
    try:
        suite = SUITES[base]
    except KeyError:
        raise UnsupportedProtocol(
            f"unknown cipher {name!r}; choose from {', '.join(SUITES)}") from None
    if integrity and integrity != (suite.integrity or ""):
        raise UnsupportedProtocol(f"{base} does not pair with integrity {integrity}")
    return suite


@dataclass(frozen=True)
class SecurityConfig:
    protocol: Protocol = Protocol.NONE
    cipher: CipherSuite | None = None
    macsec_encrypt: bool = True
    outer_ip_len: int = IPV4_HEADER_LEN
    esp_header_len: int = ESP_HEADER_LEN
    eth_header_len: int = ETH_HEADER_LEN
    tls_record_overhead: int = TLS_MIN_RECORD_OVERHEAD

    def __post_init__(self):
        if self.esp_header_len != ESP_HEADER_LEN:
            raise ValueError("esp_header_len is fixed at 8")
        if self.eth_header_len != ETH_HEADER_LEN:
            raise ValueError("eth_header_len is fixed at 14")
        if self.tls_record_overhead < TLS_MIN_RECORD_OVERHEAD:
            raise ValueError("tls_record_overhead must be >= 25")
        if self.outer_ip_len < IPV4_HEADER_LEN:
            raise ValueError("outer_ip_len must be >= 20 (IPv4)")
        if self.protocol in (Protocol.ESP_TUNNEL, Protocol.ESP_TRANSPORT) and self.cipher is None:
            raise ValueError(f"{self.protocol.value} requires a cipher suite")

    @classmethod
    def build(cls, protocol: str | Protocol, cipher: str | None = None, **kw) -> "SecurityConfig":
        proto = Protocol.parse(protocol)
        suite = cipher_suite(cipher) if cipher else None
        if suite is None and proto in (Protocol.ESP_TUNNEL, Protocol.ESP_TRANSPORT):
            suite = SUITES["AES256-CBC"]
        return cls(protocol=proto, cipher=suite, **kw)


@dataclass(frozen=True)
class OverheadBreakdown:
    """Per-layer byte accounting of one secured frame.

    ``layers`` lists every on-wire component in transmission order as
    ``(name, bytes)``; it sums to ``ct_frame_len``.
    """

    pt_frame_len: int
    outer_headers: int
    iv: int
    padding: int
    trailer: int
    icv: int
    ct_frame_len: int
    overhead_total: int
    protocol: str = Protocol.NONE.value
    layers: tuple[tuple[str, int], ...] = field(default=())

    def __post_init__(self):
        parts = (self.outer_headers, self.iv, self.padding, self.trailer, self.icv)
        if min(parts + (self.pt_frame_len,)) < 0:
            raise ValueError("breakdown fields must be non-negative")
        if self.overhead_total != sum(parts):
            raise ValueError("overhead_total does not match its components")
        if self.ct_frame_len != self.pt_frame_len + self.overhead_total:
            raise ValueError("ct_frame_len != pt_frame_len + overhead_total")
        if self.layers and sum(n for _, n in self.layers) != self.ct_frame_len:
            raise ValueError("layers do not sum to ct_frame_len")

    def layer(self, name: str) -> int:
        return dict(self.layers)[name]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["layers"] = [{"layer": n, "bytes": b} for n, b in self.layers]
        return d

    def csv_rows(self) -> list[dict]:
        return [{"protocol": self.protocol, "layer": n, "bytes": b} for n, b in self.layers]


def round_up(n: int, align: int) -> int:
    return -(-n // align) * align


def _esp(pt_frame_len: int, suite: CipherSuite, cfg: SecurityConfig, tunnel: bool) -> OverheadBreakdown:
    eth = cfg.eth_header_len
    min_len = eth + cfg.outer_ip_len
    if pt_frame_len < min_len:
        raise InvalidFrame(f"frame of {pt_frame_len} B is shorter than the minimum {min_len} B "
                           "(Ethernet + IPv4 header)")
    if tunnel:
        protected = pt_frame_len - eth
        outer_ip = cfg.outer_ip_len
        kept_ip = 0
    else:
        # transport mode keeps the original IP header in front of ESP
        protected = pt_frame_len - eth - cfg.outer_ip_len
        outer_ip = 0
        kept_ip = cfg.outer_ip_len
    enc_payload = round_up(protected + ESP_TRAILER_LEN, suite.block_align)
    padding = enc_payload - protected - ESP_TRAILER_LEN
    ct = eth + kept_ip + outer_ip + cfg.esp_header_len + suite.iv_len + enc_payload + suite.icv_len
    layers = [("ethernet", eth)]
    if tunnel:
        layers.append(("outer_ip", outer_ip))
    else:
        layers.append(("ip", kept_ip))
    layers += [
        ("esp_header", cfg.esp_header_len),
        ("iv", suite.iv_len),
        ("inner_packet" if tunnel else "transport_payload", protected),
        ("padding", padding),
        ("esp_trailer", ESP_TRAILER_LEN),
        ("icv", suite.icv_len),
    ]
    outer = outer_ip + cfg.esp_header_len
    total = outer + suite.iv_len + padding + ESP_TRAILER_LEN + suite.icv_len
    return OverheadBreakdown(
        pt_frame_len=pt_frame_len,
        outer_headers=outer,
        iv=suite.iv_len,
        padding=padding,
        trailer=ESP_TRAILER_LEN,
        icv=suite.icv_len,
        ct_frame_len=ct,
        overhead_total=total,
        protocol=(Protocol.ESP_TUNNEL if tunnel else Protocol.ESP_TRANSPORT).value,
        layers=tuple(layers),
    )


def esp_tunnel_frame_length(pt_frame_len: int, cipher: str | CipherSuite = "AES256-CBC",
                            cfg: SecurityConfig | None = None) -> OverheadBreakdown:
    """ESP tunnel mode: new outer IPv4 header, the whole inner packet is encrypted.

    >>> esp_tunnel_frame_length(62, "AES256-CBC").ct_frame_len
    138
    """
    suite = cipher_suite(cipher)
    cfg = cfg or SecurityConfig(Protocol.ESP_TUNNEL, suite)
    return _esp(pt_frame_len, suite, cfg, tunnel=True)


def esp_transport_frame_length(pt_frame_len: int, cipher: str | CipherSuite = "AES256-CBC",
                               cfg: SecurityConfig | None = None) -> OverheadBreakdown:
    suite = cipher_suite(cipher)
    cfg = cfg or SecurityConfig(Protocol.ESP_TRANSPORT, suite)
    return _esp(pt_frame_len, suite, cfg, tunnel=False)


def macsec_frame_length(pt_frame_len: int, macsec_encrypt: bool = True) -> OverheadBreakdown:
    """MACsec adds a 16 B SecTAG and a 16 B ICV in both modes.

    GCM runs AES in counter mode, so encryption never pads the payload.
    """
    if pt_frame_len < ETH_HEADER_LEN:
        raise InvalidFrame(f"frame of {pt_frame_len} B is shorter than the minimum "
                           f"{ETH_HEADER_LEN} B Ethernet header")
    body = pt_frame_len - 12
    layers = (
        ("mac_addresses", 12),
        ("sectag", MACSEC_SECTAG_LEN),
        ("secure_data" if macsec_encrypt else "user_data", body),
        ("icv", MACSEC_ICV_LEN),
    )
    return OverheadBreakdown(
        pt_frame_len=pt_frame_len,
        outer_headers=MACSEC_SECTAG_LEN,
        iv=0,
        padding=0,
        trailer=0,
        icv=MACSEC_ICV_LEN,
        ct_frame_len=pt_frame_len + MACSEC_SECTAG_LEN + MACSEC_ICV_LEN,
        overhead_total=MACSEC_SECTAG_LEN + MACSEC_ICV_LEN,
        protocol=Protocol.MACSEC.value,
        layers=layers,
    )


def tls_record_length(pt_payload_len: int, cfg: SecurityConfig | None = None) -> OverheadBreakdown:
    """TLS as a constant per-record overhead on the application payload."""
    if pt_payload_len < 0:
        raise InvalidFrame("payload length must be >= 0")
    extra = (cfg or SecurityConfig(Protocol.TLS)).tls_record_overhead
    return OverheadBreakdown(
        pt_frame_len=pt_payload_len,
        outer_headers=extra,
        iv=0,
        padding=0,
        trailer=0,
        icv=0,
        ct_frame_len=pt_payload_len + extra,
        overhead_total=extra,
        protocol=Protocol.TLS.value,
        layers=(("tls_record_overhead", extra), ("payload", pt_payload_len)),
    )


def plain_frame(pt_frame_len: int) -> OverheadBreakdown:
    return OverheadBreakdown(pt_frame_len, 0, 0, 0, 0, 0, pt_frame_len, 0,
                             protocol=Protocol.NONE.value,
                             layers=(("frame", pt_frame_len),))


_MIN_OVERHEAD = {
    Protocol.ESP_TUNNEL: 57,
    Protocol.TLS: 25,
    Protocol.SSH_V2: 28,
    Protocol.MACSEC: 32,
}


def min_overhead(protocol: str | Protocol) -> int:
    """Per-packet overhead floor for the interface security protocols."""
    proto = Protocol.parse(protocol)
    try:
        return _MIN_OVERHEAD[proto]
    except KeyError:
        raise UnsupportedProtocol(f"no overhead floor defined for {proto.value!r}") from None


def secure_frame(pt_frame_len: int, cfg: SecurityConfig) -> OverheadBreakdown:
    """Dispatch on ``cfg.protocol``; ``Protocol.NONE`` is the identity."""
    p = cfg.protocol
    if p is Protocol.NONE:
        return plain_frame(pt_frame_len)
    if p is Protocol.ESP_TUNNEL:
        return _esp(pt_frame_len, cfg.cipher, cfg, tunnel=True)
    if p is Protocol.ESP_TRANSPORT:
        return _esp(pt_frame_len, cfg.cipher, cfg, tunnel=False)
    if p is Protocol.MACSEC:
        return macsec_frame_length(pt_frame_len, cfg.macsec_encrypt)
    if p is Protocol.TLS:
        return tls_record_length(pt_frame_len, cfg)
    raise UnsupportedProtocol(f"frame expansion for {p.value!r} is not modeled")
