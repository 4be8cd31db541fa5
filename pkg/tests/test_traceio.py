import io
import logging
import struct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seccost.delaymodel import default_profiles
from seccost.errors import EmptySelection, TruncatedCapture, UnsupportedFormat
from seccost.overhead import SecurityConfig
from seccost.traceio import (Direction, PacketRecord, PcapHeader, Trace, TrafficClass, classify_e2,
                             classify_fronthaul, empirical_cdf, parse_pcap, project_secured, read_csv_trace,
                             read_pcap, summarize, synth_e2_trace, synth_fronthaul_trace, write_csv_trace,
                             write_pcap)
from seccost.traceio.frames import (ECPRI_RT_CONTROL, SCTP_SACK, build_ecpri_frame, build_sctp_frame,
                                    ecpri_message_type, parse_eth, sctp_first_chunk)


def pcap_bytes(records, endian="<", ns=False, linktype=1):
    magic = 0xA1B23C4D if ns else 0xA1B2C3D4
    out = struct.pack(endian + "IHHiIII", magic, 2, 4, 0, 0, 65535, linktype)
    for sec, frac, data, orig in records:
        out += struct.pack(endian + "IIII", sec, frac, len(data), orig) + data
    return out


class TestPcap:
    """Classic pcap parsing from hand-built byte strings."""

    @pytest.mark.parametrize("endian", ["<", ">"])
    def test_microsecond(self, endian):
        t = parse_pcap(pcap_bytes([(10, 999_999, bytes(62), 62)], endian))
        assert t.records[0].ts_ns == 10_999_999_000
        assert t.header.big_endian is (endian == ">")
        assert not t.header.nanosecond

    @pytest.mark.parametrize("endian", ["<", ">"])
    def test_nanosecond(self, endian):
        t = parse_pcap(pcap_bytes([(10, 999_999_999, bytes(62), 62)], endian, ns=True))
        assert t.records[0].ts_ns == 10_999_999_999
        assert t.records[0].timestamp == pytest.approx(10.999999999)

    def test_snapped_record(self):
        t = parse_pcap(pcap_bytes([(0, 0, bytes(40), 1500)]))
        assert (t.records[0].captured_len, t.records[0].original_len) == (40, 1500)

    def test_bad_magic(self):
        with pytest.raises(UnsupportedFormat):
            parse_pcap(b"\x0a\x0d\x0d\x0a" + bytes(20))

    def test_short_header(self):
        with pytest.raises(UnsupportedFormat):
            parse_pcap(b"\xd4\xc3\xb2\xa1")

    def test_linktype(self):
        with pytest.raises(UnsupportedFormat):
            parse_pcap(pcap_bytes([], linktype=101))

    def test_truncated_data(self):
        data = pcap_bytes([(0, 0, bytes(62), 62), (1, 0, bytes(100), 100)])[:-10]
        with pytest.raises(TruncatedCapture) as exc:
            parse_pcap(data)
        assert exc.value.index == 1

    def test_truncated_record_header(self):
        with pytest.raises(TruncatedCapture):
            parse_pcap(pcap_bytes([(0, 0, bytes(62), 62)]) + bytes(5))

    def test_incl_exceeds_orig(self):
        with pytest.raises(UnsupportedFormat):
            parse_pcap(pcap_bytes([(0, 0, bytes(62), 10)]))

    def test_empty_capture(self):
        t = parse_pcap(pcap_bytes([]))
        assert len(t) == 0
        assert t.duration == 0

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 2**31), st.integers(0, 10**9 - 1), st.integers(14, 300)),
                    max_size=20),
           st.booleans(), st.booleans())
    def test_round_trip(self, recs, ns, big):
        header = PcapHeader(nanosecond=ns, big_endian=big)
        scale = 1 if ns else 1000
        records = tuple(PacketRecord(s * 10**9 + (f // scale) * scale, n, n, data=bytes([n % 256]) * n)
                        for s, f, n in recs)
        raw = write_pcap(Trace(records, header=header))
        back = parse_pcap(raw)
        assert back.records == records
        assert back.header == header
        assert write_pcap(back) == raw

    def test_write_rejects_sub_microsecond(self):
        with pytest.raises(ValueError):
            write_pcap(Trace((PacketRecord(1, 10, 10),)), PcapHeader(nanosecond=False))

    def test_read_file(self, tmp_path):
        path = tmp_path / "x.pcap"
        path.write_bytes(pcap_bytes([(1, 0, bytes(62), 62)]))
        assert read_pcap(path).source == str(path)


class TestFrames:
    def test_sctp_sack(self):
        f = build_sctp_frame(62, SCTP_SACK)
        assert len(f) == 62
        assert sctp_first_chunk(f) == SCTP_SACK
        assert parse_eth(f).ethertype == 0x0800

    def test_not_sctp(self):
        assert sctp_first_chunk(build_ecpri_frame(100)) is None
        assert sctp_first_chunk(b"") is None

    def test_ecpri(self):
        assert ecpri_message_type(build_ecpri_frame(80, ECPRI_RT_CONTROL)) == ECPRI_RT_CONTROL
        assert ecpri_message_type(build_sctp_frame(62)) is None
        with pytest.raises(ValueError):
            ecpri_message_type(build_ecpri_frame(80, revision=2))
        with pytest.raises(ValueError):
            ecpri_message_type(build_ecpri_frame(18)[:16])

    def test_builders_validate(self):
        with pytest.raises(ValueError):
            build_sctp_frame(49)
        with pytest.raises(ValueError):
            build_ecpri_frame(17)


class TestClassify:
    def test_e2(self):
        t = classify_e2(synth_e2_trace(300, rng=1))
        classes = [r.classification for r in t.records]
        assert classes.count(TrafficClass.E2_SACK) == 100
        assert classes.count(TrafficClass.E2AP_SHORT) == 100
        assert classes.count(TrafficClass.E2AP_LONG) == 100
        assert t.records[0].direction is Direction.A_TO_B
        assert t.records[2].direction is Direction.B_TO_A

    def test_e2_threshold_flag(self):
        t = classify_e2(synth_e2_trace(30, rng=1), threshold=10_000)
        assert TrafficClass.E2AP_LONG not in {r.classification for r in t.records}

    def test_fronthaul_with_malformed(self, caplog):
        recs = [PacketRecord(i, 80, 80, data=build_ecpri_frame(80, mt, revision=rev))
                for i, (mt, rev) in enumerate([(0, 1), (2, 1), (0, 2)])]
        with caplog.at_level(logging.WARNING):
            t = classify_fronthaul(Trace(tuple(recs)))
        assert [r.classification for r in t.records] == [TrafficClass.ECPRI_UP, TrafficClass.ECPRI_CP,
                                                         TrafficClass.OTHER]
        assert t.malformed == 1
        assert "malformed" in caplog.text

    def test_class_aliases(self):
        assert TrafficClass.parse("ecpri_up") is TrafficClass.ECPRI_UP


class TestAnalysis:
    def test_summary(self):
        t = synth_e2_trace(300, rng=2, load_bps=200e3)
        s = summarize(classify_e2(t))
        assert s["count"] == 300
        assert s["offered_load_bps"] == pytest.approx(200e3, rel=1e-6)
        assert s["classes"]["e2_sack"]["mean_len"] == 62

    def test_single_packet_has_no_load(self):
        s = summarize(Trace((PacketRecord(5, 62, 62),)))
        assert s["offered_load_bps"] is None

    def test_empty(self):
        with pytest.raises(EmptySelection):
            summarize(Trace(()))
        with pytest.raises(EmptySelection):
            empirical_cdf(Trace((PacketRecord(0, 62, 62),)), TrafficClass.E2_SACK)

    def test_cdf_filter_and_csv(self):
        t = classify_e2(synth_e2_trace(30, rng=3))
        cdf = empirical_cdf(t, TrafficClass.E2_SACK)
        assert cdf.points == ((62, 1.0),)
        assert cdf(61) == 0.0
        assert cdf.csv().splitlines()[0] == "length,cum_fraction"
        assert empirical_cdf(t, [TrafficClass.E2_SACK]).points == cdf.points
        assert empirical_cdf(t, lambda r: r.original_len == 62).points == cdf.points

    def test_fronthaul_mix(self):
        t = synth_fronthaul_trace(2000, rng=4)
        lens = [r.original_len for r in t.records]
        assert lens.count(7678) / len(lens) == pytest.approx(0.5, abs=0.05)
        assert summarize(t)["offered_load_bps"] == pytest.approx(1e9, rel=1e-6)

    def test_projection_none_adds_nothing(self):
        p = default_profiles()
        t = synth_e2_trace(30, rng=5)
        proj = project_secured(t, SecurityConfig(), p["e2-aes256cbc"], p["e2-pt"])
        assert proj.total.added_proc_us == 0
        assert proj.total.ct_bytes == proj.total.pt_bytes
        assert proj.profile is None

    def test_projection_macsec(self):
        p = default_profiles()
        t = classify_fronthaul(synth_fronthaul_trace(100, rng=6))
        proj = project_secured(t, SecurityConfig.build("macsec"), p["fh-macsec-enc"], p["fh-pt"])
        assert proj.total.ct_bytes - proj.total.pt_bytes == 32 * 100
        assert proj.ct_load_bps > proj.pt_load_bps
        d = proj.to_dict()
        assert d["total"]["added_proc_mean_us"] == proj.total.added_proc_mean_us
        assert proj.rows()[-1]["class"] == "total"

    def test_csv_round_trip(self):
        t = classify_e2(synth_e2_trace(30, rng=7))
        back = read_csv_trace(io.StringIO(write_csv_trace(t)))
        assert [(r.ts_ns, r.original_len, r.classification) for r in back.records] == \
            [(r.ts_ns, r.original_len, r.classification) for r in t.records]

    def test_csv_missing_columns(self):
        with pytest.raises(ValueError):
            read_csv_trace(io.StringIO("ts,len\n0,62\n"))
