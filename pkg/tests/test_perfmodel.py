import pytest

from seccost.errors import ProfileError, UnknownCipher
from seccost.perfmodel import (FRONTHAUL_CPU, LOAD_LATENCY_PROFILES, CipherCapTable, CpuModel,
                               LoadLatencyProfile, achieved_throughput, cpu_utilization, load_latency)


class TestCaps:
    def test_achieved_is_min(self):
        assert achieved_throughput(300, "aes256-cbc") == 300
        assert achieved_throughput(2000, "aes256-cbc") == 512

    def test_unknown_in_table(self):
        with pytest.raises(UnknownCipher):
            achieved_throughput(100, "AES128-GCM")

    def test_gcm_must_lead(self):
        with pytest.raises(ValueError):
            CipherCapTable({"AES256-GCM": 100, "AES256-CBC": 200})

    def test_positive(self):
        with pytest.raises(ValueError):
            CipherCapTable({"AES256-GCM": 0})

    def test_negative_attempt(self):
        with pytest.raises(ValueError):
            achieved_throughput(-1, "AES256-GCM")


class TestCpu:
    def test_linear_then_saturates(self):
        assert cpu_utilization(100, True) == pytest.approx(0.2)
        assert cpu_utilization(100, False) == pytest.approx(0.00365)
        assert cpu_utilization(5000, True, FRONTHAUL_CPU) == 0.8

    def test_validation(self):
        with pytest.raises(ValueError):
            CpuModel(pt_slope=0.1, ct_slope=0.01)
        with pytest.raises(ValueError):
            CpuModel(saturation=0)


class TestLoadLatency:
    def test_anchors(self):
        p = LOAD_LATENCY_PROFILES["fh-macsec-enc"]
        assert load_latency(0, p).delay_us == 39
        assert load_latency(2300, p).delay_us == 4300
        assert load_latency(2300, LOAD_LATENCY_PROFILES["fh-macsec"]).delay_us == 3200

    def test_saturation(self):
        pt = load_latency(3000, LOAD_LATENCY_PROFILES["fh-macsec-enc"])
        assert pt.saturated
        assert pt.delay_us == 4300

    def test_validation(self):
        with pytest.raises(ProfileError):
            LoadLatencyProfile(((0, 1),), 10)
        with pytest.raises(ProfileError):
            LoadLatencyProfile(((0, 5), (10, 1)), 10)
