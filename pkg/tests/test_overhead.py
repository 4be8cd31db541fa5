import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seccost.errors import InvalidFrame, UnsupportedProtocol
from seccost.overhead import (SUITES, OverheadBreakdown, Protocol, SecurityConfig, cipher_suite,
                              esp_transport_frame_length, esp_tunnel_frame_length, macsec_frame_length,
                              min_overhead, plain_frame, round_up, secure_frame, tls_record_length)


def esp_oracle(pt, align, iv, tunnel=True):
    """Count bytes of an ESP frame assembled field by field."""
    protected = pt - 14 if tunnel else pt - 34
    pad = 0
    while (protected + pad + 2) % align:
        pad += 1
    frame = [14, 20, 8, iv, protected, pad, 2, 16]
    return sum(frame), pad


class TestCipherSuites:
    """Suite lookup and parameter validation."""

    def test_lookup_case_insensitive(self):
        assert cipher_suite("aes256-cbc") is SUITES["AES256-CBC"]

    def test_integrity_suffix(self):
        assert cipher_suite("AES256-CBC+SHA2-256-128").integrity == "SHA2-256-128"
        with pytest.raises(UnsupportedProtocol):
            cipher_suite("AES256-GCM+SHA2-256-128")

    def test_unknown(self):
        with pytest.raises(UnsupportedProtocol):
            cipher_suite("DES")

    @pytest.mark.parametrize("name", sorted(SUITES))
    def test_parameters(self, name):
        s = SUITES[name]
        if s.aead:
            assert (s.block_align, s.iv_len) == (4, 8)
        else:
            assert (s.block_align, s.iv_len) == (16, 16)
        assert s.icv_len == 16

    def test_label(self):
        assert SUITES["AES256-CBC"].label == "AES256-CBC+SHA2-256-128"
        assert SUITES["AES256-GCM"].label == "AES256-GCM"


class TestSecurityConfig:
    def test_esp_requires_cipher(self):
        with pytest.raises(ValueError):
            SecurityConfig(Protocol.ESP_TUNNEL)

    def test_build_defaults_cipher(self):
        assert SecurityConfig.build("esp-tunnel").cipher.name == "AES256-CBC"

    @pytest.mark.parametrize("kw", [{"esp_header_len": 10}, {"eth_header_len": 18},
                                    {"tls_record_overhead": 24}, {"outer_ip_len": 19}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            SecurityConfig(**kw)

    def test_protocol_parse(self):
        assert Protocol.parse("ESP_TUNNEL") is Protocol.ESP_TUNNEL
        with pytest.raises(UnsupportedProtocol):
            Protocol.parse("wireguard")


class TestEspTunnel:
    """Tunnel mode framing against a field-by-field oracle."""

    def test_sack(self):
        b = esp_tunnel_frame_length(62)
        assert b.ct_frame_len == 138
        assert b.overhead_total == 76
        assert b.padding == 14
        assert b.outer_headers == 28

    def test_gcm_sack(self):
        b = esp_tunnel_frame_length(62, "AES256-GCM")
        assert b.ct_frame_len == 118
        assert b.overhead_total == 56

    @pytest.mark.parametrize("pt", [34, 62, 195, 255, 1425, 1485, 1500, 9000])
    @pytest.mark.parametrize("cipher", ["AES256-CBC", "AES128-GCM", "CHACHA20-POLY1305"])
    def test_oracle(self, pt, cipher):
        s = SUITES[cipher]
        ct, pad = esp_oracle(pt, s.block_align, s.iv_len)
        b = esp_tunnel_frame_length(pt, cipher)
        assert (b.ct_frame_len, b.padding) == (ct, pad)

    def test_layers_sum(self):
        b = esp_tunnel_frame_length(1425)
        assert sum(n for _, n in b.layers) == b.ct_frame_len
        assert b.layer("outer_ip") == 20

    def test_too_short(self):
        with pytest.raises(InvalidFrame):
            esp_tunnel_frame_length(33)

    @settings(max_examples=1000, deadline=None)
    @given(st.integers(34, 9000), st.sampled_from(sorted(SUITES)))
    def test_overhead_floor(self, pt, cipher):
        b = esp_tunnel_frame_length(pt, cipher)
        floor = 54 if SUITES[cipher].aead else 62
        assert floor <= b.overhead_total < floor + SUITES[cipher].block_align
        assert 0 <= b.padding < SUITES[cipher].block_align
        assert (b.ct_frame_len - 14 - 20 - 8 - SUITES[cipher].iv_len - 16) % SUITES[cipher].block_align == 0


class TestEspTransport:
    def test_drops_outer_header(self):
        # 4 B alignment divides 20, so exactly the outer IPv4 header is saved
        for pt in (62, 1000, 1501):
            tun = esp_tunnel_frame_length(pt, "AES256-GCM")
            tra = esp_transport_frame_length(pt, "AES256-GCM")
            assert tun.ct_frame_len - tra.ct_frame_len == 20

    @pytest.mark.parametrize("pt", [34, 100, 1500])
    def test_oracle(self, pt):
        ct, _ = esp_oracle(pt, 16, 16, tunnel=False)
        assert esp_transport_frame_length(pt).ct_frame_len == ct
        assert esp_transport_frame_length(pt).layer("ip") == 20


class TestMacsec:
    @pytest.mark.parametrize("encrypt", [True, False])
    def test_constant(self, encrypt):
        b = macsec_frame_length(1500, encrypt)
        assert b.ct_frame_len == 1532
        assert b.layers[0] == ("mac_addresses", 12)

    def test_too_short(self):
        with pytest.raises(InvalidFrame):
            macsec_frame_length(13)


class TestTlsAndDispatch:
    def test_tls_default(self):
        assert tls_record_length(100).ct_frame_len == 125

    def test_tls_configured(self):
        cfg = SecurityConfig(Protocol.TLS, tls_record_overhead=29)
        assert secure_frame(100, cfg).overhead_total == 29

    def test_plain(self):
        assert secure_frame(62, SecurityConfig()) == plain_frame(62)

    def test_ssh_not_modeled(self):
        with pytest.raises(UnsupportedProtocol):
            secure_frame(100, SecurityConfig(Protocol.SSH_V2))

    @pytest.mark.parametrize("proto,floor", [("esp-tunnel", 57), ("tls", 25), ("sshv2", 28), ("macsec", 32)])
    def test_floors(self, proto, floor):
        assert min_overhead(proto) == floor

    def test_no_floor_for_none(self):
        with pytest.raises(UnsupportedProtocol):
            min_overhead("none")

    def test_round_up(self):
        assert [round_up(n, 16) for n in (0, 1, 16, 17)] == [0, 16, 16, 32]


class TestBreakdown:
    def test_inconsistent_rejected(self):
        with pytest.raises(ValueError):
            OverheadBreakdown(62, 28, 16, 14, 2, 16, 138, 75)
        with pytest.raises(ValueError):
            OverheadBreakdown(62, 28, 16, 14, 2, 16, 139, 76)

    def test_serialization(self):
        b = esp_tunnel_frame_length(62)
        d = b.to_dict()
        assert d["ct_frame_len"] == 138
        assert d["layers"][0] == {"layer": "ethernet", "bytes": 14}
        rows = b.csv_rows()
        assert len(rows) == len(b.layers)
        assert sum(r["bytes"] for r in rows) == 138
