"""Per-node delay decomposition: queuing + propagation + transmission + processing.

Every delay is a float in microseconds.  Rates handed to the queue model are
packets per second; :func:`rates_from_bits` is the one place bit rates are
converted.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import asdict, dataclass

from scipy.optimize import brentq

from .errors import ProfileError, UnstableQueue

US = 1e6


@dataclass(frozen=True)
class LinkSpec:
    rate: float = 10e9          # bits/s
    length: float = 100.0       # m
    prop_speed: float = 2e8     # m/s

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError("link rate must be > 0")
        if self.length < 0:
            raise ValueError("link length must be >= 0")
        if self.prop_speed <= 0:
            raise ValueError("propagation speed must be > 0")


@dataclass(frozen=True)
class DelayBreakdown:
    queuing: float
    propagation: float
    transmission: float
    processing: float
    total: float

    def __post_init__(self):
        parts = (self.queuing, self.propagation, self.transmission, self.processing)
        if any(not math.isfinite(p) or p < 0 for p in parts):
            raise ValueError(f"delay components must be finite and >= 0: {parts}")
        if self.total != sum(parts):
            raise ValueError("total must equal the sum of the four components")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class QueueModel:
    service_rate: float          # mu, packets/s
    arrival_rate: float = 0.0    # lambda, packets/s
    overhead_rate: float = 0.0   # epsilon, packet-equivalents/s

    def __post_init__(self):
        if self.service_rate <= 0:
            raise ValueError("service rate must be > 0")
        if self.arrival_rate < 0 or self.overhead_rate < 0:
            raise ValueError("arrival and overhead rates must be >= 0")


class ProcessingProfile:
    """Piecewise-linear packet length -> processing delay curve.

    Values between anchors are linearly interpolated; outside the anchor
    range the nearest endpoint is returned.  The curves behind the shipped
    defaults are only known at a few sizes, so the interpolation is an
    assumption, not a measurement.
    """

    def __init__(self, name: str, anchors, description: str = ""):
        pts = [(float(x), float(y)) for x, y in anchors]
        if len(pts) < 2:
            raise ProfileError(f"profile {name!r} needs at least 2 anchors")
        xs = [x for x, _ in pts]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ProfileError(f"profile {name!r}: anchor lengths must be strictly increasing")
        if any(not math.isfinite(y) or y < 0 for _, y in pts):
            raise ProfileError(f"profile {name!r}: delays must be finite and >= 0")
        self.name = name
        self.anchors = tuple(pts)
        self.description = description
        self._xs = tuple(xs)

    def __call__(self, length: float) -> float:
        xs, pts = self._xs, self.anchors
        if length <= xs[0]:
            return pts[0][1]
        if length >= xs[-1]:
            return pts[-1][1]
        i = bisect.bisect_right(xs, length)
        (x0, y0), (x1, y1) = pts[i - 1], pts[i]
        if length == x0:
            return y0
        return y0 + (length - x0) * (y1 - y0) / (x1 - x0)

    def shifted(self, name: str, deltas, description: str = "") -> "ProcessingProfile":
        """New profile = this profile + a piecewise-linear delta curve.

        The result is anchored on the union of both anchor sets so it is
        exact at every anchor of either curve.
        """
        delta = deltas if isinstance(deltas, ProcessingProfile) else ProcessingProfile(f"{name}-delta", deltas)
        xs = sorted(set(self._xs) | set(delta._xs))
        return ProcessingProfile(name, [(x, self(x) + delta(x)) for x in xs], description)

    def __repr__(self):
        return f"ProcessingProfile({self.name!r}, {list(self.anchors)!r})"

    def __eq__(self, other):
        return isinstance(other, ProcessingProfile) and self.anchors == other.anchors

    def __hash__(self):
        return hash(self.anchors)


def transmission_delay(frame_len: float, link: LinkSpec) -> float:
    if frame_len <= 0:
        raise ValueError("frame length must be > 0")
    return 8.0 * frame_len / link.rate * US


def propagation_delay(link: LinkSpec) -> float:
    return link.length / link.prop_speed * US


def queuing_delay(q: QueueModel) -> float:
    """Mean M/M/1 waiting time, 1/(mu - lambda) - 1/mu."""
    mu, lam = q.service_rate, q.arrival_rate
    if lam >= mu:
        raise UnstableQueue(f"arrival rate {lam:g} >= service rate {mu:g} pkt/s")
    return (1.0 / (mu - lam) - 1.0 / mu) * US


def queuing_delta(q: QueueModel) -> float:
    """Extra waiting time caused by the security overhead rate epsilon."""
    mu, lam, eps = q.service_rate, q.arrival_rate, q.overhead_rate
    if lam + eps >= mu:
        raise UnstableQueue(f"arrival + overhead rate {lam + eps:g} >= service rate {mu:g} pkt/s")
    return (1.0 / (mu - (lam + eps)) - 1.0 / (mu - lam)) * US


def rates_from_bits(link_rate: float, offered_load: float, mean_frame: float,
                    overhead: float = 0.0) -> QueueModel:
    """Convert bit rates to packet rates for a given mean frame size.

    The overhead shows up as ``lambda * overhead / mean_frame`` additional
    packet-equivalents per second.
    """
    if mean_frame <= 0:
        raise ValueError("mean frame size must be > 0")
    mu = link_rate / (8.0 * mean_frame)
    lam = offered_load / (8.0 * mean_frame)
    return QueueModel(mu, lam, lam * overhead / mean_frame)


def max_load_for_delta(link_rate: float, mean_frame: float, overhead: float,
                       max_delta_us: float = 1.0) -> float:
    """Largest offered load (bits/s) whose queuing delta stays <= ``max_delta_us``."""
    if overhead <= 0:
        return link_rate
    mu = link_rate / (8.0 * mean_frame)
    ratio = overhead / mean_frame
    lam_max = mu / (1.0 + ratio)

    def excess(lam):
        return (1.0 / (mu - lam * (1 + ratio)) - 1.0 / (mu - lam)) * US - max_delta_us

    hi = lam_max * (1 - 1e-12)
    lam = brentq(excess, 0.0, hi, xtol=1e-9, rtol=1e-14)
    return lam * 8.0 * mean_frame


def processing_delay(frame_len: float, profile: ProcessingProfile) -> float:
    if not isinstance(profile, ProcessingProfile):
        raise ProfileError(f"not a processing profile: {profile!r}")
    return profile(frame_len)


def total_delay(queuing: float = 0.0, propagation: float = 0.0, transmission: float = 0.0,
                processing: float = 0.0) -> DelayBreakdown:
    parts = (queuing, propagation, transmission, processing)
    return DelayBreakdown(*parts, total=sum(parts))


def frame_delay(frame_len: float, link: LinkSpec, profile: ProcessingProfile,
                queuing: float = 0.0, hops: int = 1) -> DelayBreakdown:
    """One-way delay of a single frame; ``hops`` multiplies propagation."""
    return total_delay(queuing, hops * propagation_delay(link),
                       transmission_delay(frame_len, link), profile(frame_len))


def rtt_estimate(frame_len: float, link: LinkSpec, profile: ProcessingProfile) -> float:
    """RTT = 2 (proc + trans + prop), queuing assumed zero."""
    return 2.0 * (profile(frame_len) + transmission_delay(frame_len, link) + propagation_delay(link))


def solve_processing(total: float, propagation: float, transmission: float,
                     queuing: float = 0.0) -> float:
    """Back out the processing term from a measured total delay."""
    proc = total - propagation - transmission - queuing
    if proc < 0:
        raise ValueError("measured total is smaller than the non-processing terms")
    return proc


# --- shipped profiles -------------------------------------------------------

E2_PT_SACK_PROC = 60.97
E2_CBC_SMALL_DELTA = 22.0
E2_CBC_MAX_DELTA = 50.0
FH_SMALL_DELTA = 39.0
FH_MACSEC_MAX_DELTA = 153.0
FH_MACSEC_ENC_MAX_DELTA = 218.0
FH_BASELINE = 118.0
FH_DELTA_KNEE = 1500.0


def default_profiles(e2_pt_growth: float = 0.0, fh_base: tuple[float, float] = (FH_BASELINE, FH_BASELINE),
                     fh_knee: float | None = FH_DELTA_KNEE) -> dict[str, ProcessingProfile]:
    """Profiles fitted to the published E2 and fronthaul measurements.

    ``e2_pt_growth`` is the plaintext E2 delay added between 62 B and 1500 B.
    ``fh_base`` is the plaintext fronthaul delay at (62 B, 9000 B).
    ``fh_knee`` keeps the MACsec deltas at their small-packet value up to a
    standard 1500 B frame before they grow toward the 9000 B endpoint; pass
    ``None`` for a straight two-anchor delta.
    """
    e2_pt = ProcessingProfile("e2-pt", [(62, E2_PT_SACK_PROC), (1500, E2_PT_SACK_PROC + e2_pt_growth)],
                              "E2 plaintext")
    e2_cbc = e2_pt.shifted("e2-aes256cbc", [(62, E2_CBC_SMALL_DELTA), (1500, E2_CBC_MAX_DELTA)],
                           "E2 IPsec ESP AES256-CBC + SHA2-256")
    e2_gcm = ProcessingProfile("e2-aes256gcm", e2_pt.anchors, "E2 IPsec ESP AES256-GCM")
    fh_pt = ProcessingProfile("fh-pt", [(62, fh_base[0]), (9000, fh_base[1])], "fronthaul plaintext")

    def delta(hi):
        pts = [(62, FH_SMALL_DELTA)]
        if fh_knee is not None:
            pts.append((fh_knee, FH_SMALL_DELTA))
        return pts + [(9000, hi)]

    fh_mac = fh_pt.shifted("fh-macsec", delta(FH_MACSEC_MAX_DELTA), "fronthaul MACsec, no encryption")
    fh_enc = fh_pt.shifted("fh-macsec-enc", delta(FH_MACSEC_ENC_MAX_DELTA), "fronthaul MACsec with encryption")
    profiles = [e2_pt, e2_cbc, e2_gcm, fh_pt, fh_mac, fh_enc]
    out = {p.name: p for p in profiles}
    out["fh-macsec-noenc"] = fh_mac
    return out


def constant_profile(delay: float, name: str = "constant") -> ProcessingProfile:
    return ProcessingProfile(name, [(0, delay), (1, delay)])
