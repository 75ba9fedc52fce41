"""AFC coordination service core.

Validates spectrum-inquiry requests, consults the incumbent database and
exclusion zones, and computes per-channel grants with a fixed lifetime.
Everything here is pure: the wire layer owns transport and time sourcing,
so identical (request, server_now, database, configs) always produce the
identical response.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .channels import (
    SUPPORTED_BANDWIDTHS_MHZ,
    ChannelId,
    FrequencyRange,
    channel_span,
    overlaps,
    us_standard_power_channels,
)
from .geo import Geofence, GeoPoint, LocationEllipse, haversine_distance, within_geofence
from .propagation import (
    FsLink,
    PropagationConfig,
    ProtectionConfig,
    constrains,
    max_permissible_eirp_dbm,
)


class ResponseCode(enum.Enum):
    SUCCESS = "SUCCESS"
    OUTSIDE_COVERAGE = "OUTSIDE_COVERAGE"
    STALE_TIMESTAMP = "STALE_TIMESTAMP"
    INVALID_REQUEST = "INVALID_REQUEST"
    DEVICE_DISALLOWED = "DEVICE_DISALLOWED"


@dataclass(frozen=True)
class CoverageBox:
    """A latitude/longitude bounding box of the service territory."""

    lat_min_deg: float
    lat_max_deg: float
    lon_min_deg: float
    lon_max_deg: float

    def __post_init__(self):
        if self.lat_min_deg > self.lat_max_deg or self.lon_min_deg > self.lon_max_deg:
            raise ValueError("coverage box bounds are inverted")

    def contains(self, p: GeoPoint) -> bool:
        return (
            self.lat_min_deg <= p.lat_deg <= self.lat_max_deg
            and self.lon_min_deg <= p.lon_deg <= self.lon_max_deg
        )


# Contiguous-US service territory, generous enough for every bundled world.
CONUS = CoverageBox(24.5, 49.5, -125.0, -66.9)


@dataclass(frozen=True)
class ServerPolicy:
    grant_lifetime_s: float = 86_400.0
    gps_timestamp_tolerance_s: float = 60.0
    coverage: tuple[CoverageBox, ...] = (CONUS,)
    geofence_registry: dict[str, Geofence] = field(default_factory=dict)

    def __post_init__(self):
        if self.grant_lifetime_s <= 0.0:
            raise ValueError("grant lifetime must be > 0")
        if self.gps_timestamp_tolerance_s < 0.0:
            raise ValueError("timestamp tolerance must be >= 0")


@dataclass(frozen=True)
class ExclusionZone:
    """A region where channels overlapping the banned range are never granted."""

    zone: Geofence
    banned: FrequencyRange


@dataclass(frozen=True)
class IncumbentDatabase:
    fs_links: tuple[FsLink, ...] = ()
    exclusion_zones: tuple[ExclusionZone, ...] = ()


@dataclass(frozen=True)
class SpectrumInquiryRequest:
    request_id: str
    device_serial: str
    certification_id: str
    location: LocationEllipse
    height_m: float
    inquired_bandwidths: tuple[int, ...]
    transport_authenticated: bool


@dataclass(frozen=True)
class ChannelGrant:
    channel: ChannelId
    max_eirp_dbm: float

    def __post_init__(self):
        if self.max_eirp_dbm > 36.0:
            raise ValueError("grant exceeds the 36 dBm regulatory ceiling")


@dataclass(frozen=True)
class SpectrumInquiryResponse:
    request_id: str
    response_code: ResponseCode
    country_code: str | None = None
    grants: tuple[ChannelGrant, ...] = ()
    issue_time: float | None = None
    expire_time: float | None = None

    def __post_init__(self):
        if self.response_code is ResponseCode.SUCCESS:
            if self.issue_time is None or self.expire_time is None:
                raise ValueError("successful responses carry issue and expire times")
        else:
            if self.grants or self.expire_time is not None:
                raise ValueError("rejections carry no grants and no expiry")


def validate_request(
    req: SpectrumInquiryRequest, server_now: float, policy: ServerPolicy
) -> ResponseCode | None:
    """Screen a request; None means acceptable, otherwise the rejection code.

    Checks run in fixed order: GPS-timestamp freshness, device
    authorization (transport authentication, then any registered
    geofence), service-territory coverage, and finally field validity.
    """
    if abs(req.location.gps_time - server_now) > policy.gps_timestamp_tolerance_s:
        return ResponseCode.STALE_TIMESTAMP
    if not req.transport_authenticated:
        return ResponseCode.DEVICE_DISALLOWED
    fence = policy.geofence_registry.get(req.device_serial)
    if fence is not None and not within_geofence(req.location.center, fence):
        return ResponseCode.DEVICE_DISALLOWED
    if not any(box.contains(req.location.center) for box in policy.coverage):
        return ResponseCode.OUTSIDE_COVERAGE
    if not req.request_id or not req.device_serial:
        return ResponseCode.INVALID_REQUEST
    if not req.inquired_bandwidths:
        return ResponseCode.INVALID_REQUEST
    if any(bw not in SUPPORTED_BANDWIDTHS_MHZ for bw in req.inquired_bandwidths):
        return ResponseCode.INVALID_REQUEST
    if not (math.isfinite(req.height_m) and req.height_m >= 0.0):
        return ResponseCode.INVALID_REQUEST
    return None


def quantize_grant_dbm(eirp_dbm: float) -> float:
    """Floor to the wire quantum so serialization never rounds a grant up."""
    return math.floor(eirp_dbm * 100.0 + 1e-9) / 100.0


def compute_availability(
    loc: LocationEllipse,
    bandwidths,
    db: IncumbentDatabase,
    pcfg: PropagationConfig,
    prot: ProtectionConfig,
) -> list[ChannelGrant]:
    """Per-channel grants for a reported location, ordered by bandwidth then cfi.

    Exclusion zones drop overlapping channels outright when the reported
    center lies inside the zone. Each remaining channel takes the minimum
    permissible EIRP over all co-channel incumbent links, evaluated at the
    uncertainty-contracted distance max(1 m, distance - major_axis_m), and
    is withheld entirely when that falls below the useful minimum.
    """
    grants: list[ChannelGrant] = []
    for bw in sorted(set(bandwidths)):
        for ch in us_standard_power_channels(bw):
            span = channel_span(ch)
            if any(
                overlaps(span, z.banned) and within_geofence(loc.center, z.zone)
                for z in db.exclusion_zones
            ):
                continue
            cap = prot.regulatory_max_eirp_dbm
            available = True
            for link in db.fs_links:
                if not constrains(link, ch):
                    continue
                distance = haversine_distance(loc.center, link.rx_location)
                effective = max(1.0, distance - loc.major_axis_m)
                eirp = max_permissible_eirp_dbm(
                    link, loc.center, ch, pcfg, prot, distance_m=effective
                )
                if eirp is None:
                    available = False
                    break
                cap = min(cap, eirp)
            if not available:
                continue
            quantized = quantize_grant_dbm(cap)
            if quantized < prot.min_useful_eirp_dbm:
                continue
            grants.append(ChannelGrant(channel=ch, max_eirp_dbm=quantized))
    return grants


def handle_inquiry(
    req: SpectrumInquiryRequest,
    server_now: float,
    db: IncumbentDatabase,
    policy: ServerPolicy,
    pcfg: PropagationConfig,
    prot: ProtectionConfig,
) -> SpectrumInquiryResponse:
    """Full inquiry handling: validation, availability, grant lifetime."""
    rejection = validate_request(req, server_now, policy)
    if rejection is not None:
        return SpectrumInquiryResponse(request_id=req.request_id, response_code=rejection)
    grants = compute_availability(req.location, req.inquired_bandwidths, db, pcfg, prot)
    return SpectrumInquiryResponse(
        request_id=req.request_id,
        response_code=ResponseCode.SUCCESS,
        country_code="US",
        grants=tuple(grants),
        issue_time=server_now,
        expire_time=server_now + policy.grant_lifetime_s,
    )


@dataclass(frozen=True)
class AfcEngine:
    """One availability engine: a database plus its model configuration."""

    db: IncumbentDatabase
    propagation: PropagationConfig
    protection: ProtectionConfig

    def availability(self, loc: LocationEllipse, bandwidths) -> list[ChannelGrant]:
        return compute_availability(loc, bandwidths, self.db, self.propagation, self.protection)


@dataclass(frozen=True)
class Divergence:
    """One disagreement between two engines on one request."""

    request_id: str
    channel: ChannelId
    eirp_a_dbm: float | None
    eirp_b_dbm: float | None

    @property
    def delta_db(self) -> float | None:
        if self.eirp_a_dbm is None or self.eirp_b_dbm is None:
            return None
        return self.eirp_a_dbm - self.eirp_b_dbm


@dataclass(frozen=True)
class DivergenceReport:
    rows: tuple[Divergence, ...]
    tolerance_db: float

    @property
    def empty(self) -> bool:
        return not self.rows


def differential_compare(
    requests,
    engine_a: AfcEngine,
    engine_b: AfcEngine,
    tolerance_db: float = 0.1,
) -> DivergenceReport:
    """Compare two engines over a request corpus.

    Reports channels granted by exactly one engine, and channels granted
    by both whose EIRPs differ by more than the tolerance. An empty report
    means the engines agree everywhere.
    """
    rows: list[Divergence] = []
    for req in requests:
        by_a = {g.channel: g.max_eirp_dbm for g in engine_a.availability(req.location, req.inquired_bandwidths)}
        by_b = {g.channel: g.max_eirp_dbm for g in engine_b.availability(req.location, req.inquired_bandwidths)}
        for ch in sorted(set(by_a) | set(by_b), key=lambda c: (c.bandwidth_mhz, c.cfi, c.variant or 0)):
            a = by_a.get(ch)
            b = by_b.get(ch)
            if a is None or b is None or abs(a - b) > tolerance_db:
                rows.append(Divergence(req.request_id, ch, a, b))
    return DivergenceReport(rows=tuple(rows), tolerance_db=tolerance_db)
