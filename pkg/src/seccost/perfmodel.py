"""Throughput caps, CPU utilization and load-dependent latency per cipher."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ProfileError, UnknownCipher
from .overhead import CipherSuite, cipher_suite

# Mb/s, 30 s iperf3 runs over IPsec on the E2 host
MEASURED_CAPS = {
    "AES128-CBC": 505.0,
    "AES256-CBC": 512.0,
    "AES128-CCM": 573.0,
    "AES256-CCM": 573.0,
    "CHACHA20-POLY1305": 989.0,
    "AES256-GCM": 1370.0,
}

FH_MACSEC_CAP = 2300.0
FH_CPU_PLATEAU = 0.8


@dataclass(frozen=True)
class CipherCapTable:
    entries: Mapping[str, float] = field(default_factory=lambda: dict(MEASURED_CAPS))

    def __post_init__(self):
        clean = {cipher_suite(k).name: float(v) for k, v in self.entries.items()}
        if any(v <= 0 for v in clean.values()):
            raise ValueError("throughput caps must be > 0")
        gcm = [v for k, v in clean.items() if "GCM" in k]
        if gcm and max(gcm) < max(clean.values()):
            raise ValueError("an AES-GCM suite must have the highest cap")
        object.__setattr__(self, "entries", clean)

    def cap(self, cipher: str | CipherSuite) -> float:
        name = cipher.name if isinstance(cipher, CipherSuite) else cipher_suite(cipher).name
        try:
            return self.entries[name]
        except KeyError:
            raise UnknownCipher(f"no throughput cap for {name}") from None

    def best(self) -> str:
        return max(self.entries, key=self.entries.get)


@dataclass(frozen=True)
class CpuModel:
    """Utilization grows linearly with throughput until ``saturation``.

    Slopes are utilization *fractions* per Mb/s: a published slope of
    "0.2 x T" in percent becomes 0.002 here.
    """

    pt_slope: float = 0.00365 / 100
    ct_slope: float = 0.2 / 100
    saturation: float = 1.0

    def __post_init__(self):
        if not 0 < self.pt_slope < self.ct_slope:
            raise ValueError("need 0 < pt_slope < ct_slope")
        if not 0 < self.saturation <= 1:
            raise ValueError("saturation must be in (0, 1]")

    @property
    def ratio(self) -> float:
        return self.ct_slope / self.pt_slope


FRONTHAUL_CPU = CpuModel(saturation=FH_CPU_PLATEAU)


@dataclass(frozen=True)
class LoadLatencyProfile:
    anchors: tuple[tuple[float, float], ...]
    cap: float
    name: str = ""

    def __post_init__(self):
        pts = tuple((float(r), float(d)) for r, d in self.anchors)
        if len(pts) < 2:
            raise ProfileError("load-latency profile needs at least 2 anchors")
        rates = [r for r, _ in pts]
        delays = [d for _, d in pts]
        if any(b <= a for a, b in zip(rates, rates[1:])):
            raise ProfileError("anchor rates must be strictly increasing")
        if any(b < a for a, b in zip(delays, delays[1:])):
            raise ProfileError("anchor delays must be nondecreasing")
        if self.cap <= 0:
            raise ProfileError("cap must be > 0")
        object.__setattr__(self, "anchors", pts)


@dataclass(frozen=True)
class LoadPoint:
    offered: float
    delay_us: float
    saturated: bool


# near-zero load shows the small-packet MACsec delta; the cap shows the maxima
LOAD_LATENCY_PROFILES = {
    "fh-macsec-enc": LoadLatencyProfile(((0.0, 39.0), (FH_MACSEC_CAP, 4300.0)), FH_MACSEC_CAP, "fh-macsec-enc"),
    "fh-macsec-noenc": LoadLatencyProfile(((0.0, 39.0), (FH_MACSEC_CAP, 3200.0)), FH_MACSEC_CAP, "fh-macsec-noenc"),
}
LOAD_LATENCY_PROFILES["fh-macsec"] = LOAD_LATENCY_PROFILES["fh-macsec-noenc"]


def achieved_throughput(attempted: float, cipher: str | CipherSuite,
                        caps: CipherCapTable | None = None) -> float:
    if attempted < 0:
        raise ValueError("attempted rate must be >= 0")
    caps = caps or CipherCapTable()
    return min(attempted, caps.cap(cipher))


def cpu_utilization(rate: float, encrypted: bool, model: CpuModel | None = None) -> float:
    if rate < 0:
        raise ValueError("rate must be >= 0")
    model = model or CpuModel()
    slope = model.ct_slope if encrypted else model.pt_slope
    return min(slope * rate, model.saturation)


def load_latency(offered: float, profile: LoadLatencyProfile) -> LoadPoint:
    if offered < 0:
        raise ValueError("offered rate must be >= 0")
    rates, delays = zip(*profile.anchors)
    saturated = offered > profile.cap
    x = min(offered, profile.cap)
    return LoadPoint(offered, float(np.interp(x, rates, delays)), saturated)
