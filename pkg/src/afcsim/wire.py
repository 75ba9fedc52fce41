"""Wire protocol: JSON codecs, time formatting, and the HTTP service.

The service speaks HTTP/1.1 with a single route, POST
/availableSpectrumInquiry, carrying camelCase JSON both ways. All wire
times are ISO-8601 UTC strings with a trailing Z; dBm values serialize
with at most two decimal places. Malformed bodies never raise to the
transport: they come back as INVALID_REQUEST responses (echoing the
requestId when one could be recovered).
"""

from __future__ import annotations

import json
import math
import threading
import time
from datetime import datetime, timezone
from http.client import HTTPConnection
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .channels import ChannelId, FrequencyRange
from .errors import ScenarioParseError
from .geo import Geofence, GeoPoint, LocationEllipse
from .propagation import FsLink, PropagationConfig, ProtectionConfig
from .server import (
    ChannelGrant,
    CoverageBox,
    ExclusionZone,
    IncumbentDatabase,
    ResponseCode,
    ServerPolicy,
    SpectrumInquiryRequest,
    SpectrumInquiryResponse,
    handle_inquiry,
)

INQUIRY_PATH = "/availableSpectrumInquiry"


class RequestDecodeError(Exception):
    """A request body that cannot be decoded; carries any recoverable id."""

    def __init__(self, message: str, request_id: str = ""):
        super().__init__(message)
        self.request_id = request_id


# ---------------------------------------------------------------------------
# Time formatting. Internal times are float UTC epoch seconds.

def epoch_to_iso(epoch_s: float) -> str:
    dt = datetime.fromtimestamp(math.floor(epoch_s), tz=timezone.utc)
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def iso_to_epoch(text: str) -> float:
    t = text.strip()
    if t.endswith(("Z", "z")):
        t = t[:-1] + "+00:00"
    dt = datetime.fromisoformat(t)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def epoch_to_clock(epoch_s: float) -> str:
    """Console-report style: YYYY-MM-DD HH:MM:SS in UTC."""
    dt = datetime.fromtimestamp(math.floor(epoch_s), tz=timezone.utc)
    return dt.strftime("%Y-%m-%d %H:%M:%S")


# ---------------------------------------------------------------------------
# Field access helpers for document decoding.

def get_field(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ScenarioParseError(f"missing field {where}.{key}", field=f"{where}.{key}")
    return obj[key]


def get_num(obj: dict, key: str, where: str, default=None) -> float:
    if default is not None and key not in obj:
        return float(default)
    v = get_field(obj, key, where)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioParseError(f"{where}.{key} must be a number", field=f"{where}.{key}")
    return float(v)


def get_text(obj: dict, key: str, where: str) -> str:
    v = get_field(obj, key, where)
    if not isinstance(v, str):
        raise ScenarioParseError(f"{where}.{key} must be a string", field=f"{where}.{key}")
    return v


def decode_geopoint(obj: dict, where: str = "point") -> GeoPoint:
    try:
        return GeoPoint(
            lat_deg=get_num(obj, "latitude", where),
            lon_deg=get_num(obj, "longitude", where),
            height_m=get_num(obj, "heightM", where, default=0.0),
        )
    except ValueError as e:
        raise ScenarioParseError(f"{where}: {e}", field=where) from e


def encode_geopoint(p: GeoPoint) -> dict:
    out = {"latitude": p.lat_deg, "longitude": p.lon_deg}
    if p.height_m:
        out["heightM"] = p.height_m
    return out


def decode_geofence(obj: dict, where: str = "geofence") -> Geofence:
    try:
        return Geofence(
            center=decode_geopoint(get_field(obj, "center", where), f"{where}.center"),
            radius_m=get_num(obj, "radiusM", where),
        )
    except ValueError as e:
        raise ScenarioParseError(f"{where}: {e}", field=where) from e


def decode_freq_range(obj: dict, where: str = "freqRange") -> FrequencyRange:
    try:
        return FrequencyRange(
            low_mhz=get_num(obj, "lowMhz", where), high_mhz=get_num(obj, "highMhz", where)
        )
    except ValueError as e:
        raise ScenarioParseError(f"{where}: {e}", field=where) from e


def decode_fs_link(obj: dict, where: str = "fsLink") -> FsLink:
    try:
        return FsLink(
            id=get_text(obj, "id", where),
            rx_location=decode_geopoint(get_field(obj, "rxLocation", where), f"{where}.rxLocation"),
            freq_range=decode_freq_range(get_field(obj, "freqRange", where), f"{where}.freqRange"),
            bandwidth_mhz=get_num(obj, "bandwidthMhz", where),
            noise_figure_db=get_num(obj, "noiseFigureDb", where),
            max_gain_dbi=get_num(obj, "maxGainDbi", where),
            azimuth_deg=get_num(obj, "azimuthDeg", where),
            beamwidth_deg=get_num(obj, "beamwidthDeg", where),
            discrimination_db=get_num(obj, "discriminationDb", where),
        )
    except ValueError as e:
        raise ScenarioParseError(f"{where}: {e}", field=where) from e


def decode_database(obj: dict) -> IncumbentDatabase:
    links = [
        decode_fs_link(o, f"fsLinks[{i}]")
        for i, o in enumerate(obj.get("fsLinks", []))
    ]
    zones = [
        ExclusionZone(
            zone=decode_geofence(get_field(o, "zone", f"exclusionZones[{i}]"), f"exclusionZones[{i}].zone"),
            banned=decode_freq_range(get_field(o, "banned", f"exclusionZones[{i}]"), f"exclusionZones[{i}].banned"),
        )
        for i, o in enumerate(obj.get("exclusionZones", []))
    ]
    return IncumbentDatabase(fs_links=tuple(links), exclusion_zones=tuple(zones))


def decode_propagation(obj: dict) -> PropagationConfig:
    try:
        return PropagationConfig(
            regime_threshold_m=get_num(obj, "regimeThresholdM", "propagation", default=1000.0),
            clutter_offset_db=get_num(obj, "clutterOffsetDb", "propagation", default=20.0),
        )
    except ValueError as e:
        raise ScenarioParseError(f"propagation: {e}", field="propagation") from e


def decode_protection(obj: dict) -> ProtectionConfig:
    try:
        return ProtectionConfig(
            i_over_n_limit_db=get_num(obj, "iOverNLimitDb", "protection", default=-6.0),
            regulatory_max_eirp_dbm=get_num(obj, "regulatoryMaxEirpDbm", "protection", default=36.0),
            min_useful_eirp_dbm=get_num(obj, "minUsefulEirpDbm", "protection", default=21.0),
        )
    except ValueError as e:
        raise ScenarioParseError(f"protection: {e}", field="protection") from e


def decode_policy(obj: dict) -> ServerPolicy:
    boxes = []
    for i, b in enumerate(obj.get("coverage", [])):
        where = f"coverage[{i}]"
        try:
            boxes.append(
                CoverageBox(
                    lat_min_deg=get_num(b, "latMin", where),
                    lat_max_deg=get_num(b, "latMax", where),
                    lon_min_deg=get_num(b, "lonMin", where),
                    lon_max_deg=get_num(b, "lonMax", where),
                )
            )
        except ValueError as e:
            raise ScenarioParseError(f"{where}: {e}", field=where) from e
    registry = {
        serial: decode_geofence(g, f"geofences[{serial}]")
        for serial, g in obj.get("geofences", {}).items()
    }
    try:
        policy = ServerPolicy(
            grant_lifetime_s=get_num(obj, "grantLifetimeS", "policy", default=86_400.0),
            gps_timestamp_tolerance_s=get_num(obj, "gpsTimestampToleranceS", "policy", default=60.0),
            coverage=tuple(boxes) if boxes else ServerPolicy().coverage,
            geofence_registry=registry,
        )
    except ValueError as e:
        raise ScenarioParseError(f"policy: {e}", field="policy") from e
    return policy


# ---------------------------------------------------------------------------
# Inquiry request/response codecs.

def decode_request(obj) -> SpectrumInquiryRequest:
    if not isinstance(obj, dict):
        raise RequestDecodeError("request body must be a JSON object")
    rid = obj.get("requestId")
    rid = rid if isinstance(rid, str) else ""
    try:
        loc_obj = get_field(obj, "location", "request")
        ellipse = LocationEllipse(
            center=GeoPoint(
                lat_deg=get_num(loc_obj, "latitude", "location"),
                lon_deg=get_num(loc_obj, "longitude", "location"),
            ),
            major_axis_m=get_num(loc_obj, "majorAxisM", "location"),
            minor_axis_m=get_num(loc_obj, "minorAxisM", "location"),
            orientation_deg=get_num(loc_obj, "orientationDeg", "location"),
            gps_time=iso_to_epoch(get_text(loc_obj, "gpsTime", "location")),
        )
        bandwidths = get_field(obj, "inquiredBandwidthsMhz", "request")
        if not isinstance(bandwidths, list) or not all(
            isinstance(b, int) and not isinstance(b, bool) for b in bandwidths
        ):
            raise RequestDecodeError("inquiredBandwidthsMhz must be a list of integers", rid)
        authenticated = get_field(obj, "transportAuthenticated", "request")
        if not isinstance(authenticated, bool):
            raise RequestDecodeError("transportAuthenticated must be a boolean", rid)
        return SpectrumInquiryRequest(
            request_id=get_text(obj, "requestId", "request"),
            device_serial=get_text(obj, "deviceSerial", "request"),
            certification_id=get_text(obj, "certificationId", "request"),
            location=ellipse,
            height_m=get_num(obj, "heightM", "request"),
            inquired_bandwidths=tuple(bandwidths),
            transport_authenticated=authenticated,
        )
    except RequestDecodeError:
        raise
    except (ScenarioParseError, ValueError) as e:
        raise RequestDecodeError(str(e), rid) from e


def encode_request(req: SpectrumInquiryRequest) -> dict:
    return {
        "requestId": req.request_id,
        "deviceSerial": req.device_serial,
        "certificationId": req.certification_id,
        "location": {
            "latitude": req.location.center.lat_deg,
            "longitude": req.location.center.lon_deg,
            "majorAxisM": req.location.major_axis_m,
            "minorAxisM": req.location.minor_axis_m,
            "orientationDeg": req.location.orientation_deg,
            "gpsTime": epoch_to_iso(req.location.gps_time),
        },
        "heightM": req.height_m,
        "inquiredBandwidthsMhz": list(req.inquired_bandwidths),
        "transportAuthenticated": req.transport_authenticated,
    }


def encode_grant(g: ChannelGrant) -> dict:
    out = {
        "bandwidthMhz": g.channel.bandwidth_mhz,
        "cfi": g.channel.cfi,
        "maxEirpDbm": round(g.max_eirp_dbm, 2),
    }
    if g.channel.variant is not None:
        out["variant"] = g.channel.variant
    return out


def decode_grant(obj: dict) -> ChannelGrant:
    ch = ChannelId(
        bandwidth_mhz=int(get_num(obj, "bandwidthMhz", "grant")),
        cfi=int(get_num(obj, "cfi", "grant")),
        variant=int(obj["variant"]) if "variant" in obj else None,
    )
    return ChannelGrant(channel=ch, max_eirp_dbm=get_num(obj, "maxEirpDbm", "grant"))


def encode_response(resp: SpectrumInquiryResponse) -> dict:
    out: dict = {
        "requestId": resp.request_id,
        "responseCode": resp.response_code.value,
        "grants": [encode_grant(g) for g in resp.grants],
    }
    if resp.response_code is ResponseCode.SUCCESS:
        out["countryCode"] = resp.country_code
        out["issueTime"] = epoch_to_iso(resp.issue_time)
        out["expireTime"] = epoch_to_iso(resp.expire_time)
    return out


def decode_response(obj: dict) -> SpectrumInquiryResponse:
    code = ResponseCode(get_text(obj, "responseCode", "response"))
    grants = tuple(decode_grant(g) for g in obj.get("grants", []))
    if code is ResponseCode.SUCCESS:
        return SpectrumInquiryResponse(
            request_id=get_text(obj, "requestId", "response"),
            response_code=code,
            country_code=obj.get("countryCode"),
            grants=grants,
            issue_time=iso_to_epoch(get_text(obj, "issueTime", "response")),
            expire_time=iso_to_epoch(get_text(obj, "expireTime", "response")),
        )
    return SpectrumInquiryResponse(
        request_id=get_text(obj, "requestId", "response"), response_code=code
    )


def dumps_response(resp: SpectrumInquiryResponse) -> str:
    """Canonical byte-stable serialization of a response."""
    return json.dumps(encode_response(resp), sort_keys=True)


# ---------------------------------------------------------------------------
# HTTP service.

class _InquiryHandler(BaseHTTPRequestHandler):
    server_version = "afcsim"
    protocol_version = "HTTP/1.1"

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self):  # noqa: N802  (http.server naming)
        if self.path != INQUIRY_PATH:
            self._send(404, {"error": f"unknown path {self.path}"})
            return
        svc = self.server.service  # type: ignore[attr-defined]
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = self.rfile.read(length)
            req = decode_request(json.loads(body))
        except RequestDecodeError as e:
            resp = SpectrumInquiryResponse(e.request_id, ResponseCode.INVALID_REQUEST)
            self._send(200, encode_response(resp))
            return
        except (json.JSONDecodeError, UnicodeDecodeError, ValueError):
            resp = SpectrumInquiryResponse("", ResponseCode.INVALID_REQUEST)
            self._send(200, encode_response(resp))
            return
        resp = handle_inquiry(
            req, svc.now_fn(), svc.db, svc.policy, svc.propagation, svc.protection
        )
        self._send(200, encode_response(resp))

    def do_GET(self):  # noqa: N802
        self._send(405, {"error": "POST only"})

    def log_message(self, fmt, *args):
        pass


class AfcService:
    """The inquiry endpoint bound to one database/policy/model bundle.

    now_fn supplies server time; live serving uses the wall clock, tests
    and the simulator inject logical time.
    """

    def __init__(
        self,
        db: IncumbentDatabase,
        policy: ServerPolicy,
        propagation: PropagationConfig,
        protection: ProtectionConfig,
        host: str = "127.0.0.1",
        port: int = 0,
        now_fn=time.time,
    ):
        self.db = db
        self.policy = policy
        self.propagation = propagation
        self.protection = protection
        self.now_fn = now_fn
        self._httpd = ThreadingHTTPServer((host, port), _InquiryHandler)
        self._httpd.service = self  # type: ignore[attr-defined]
        self._thread: threading.Thread | None = None

    @property
    def host(self) -> str:
        return self._httpd.server_address[0]

    @property
    def port(self) -> int:
        return self._httpd.server_address[1]

    def start(self) -> None:
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()

    def serve_forever(self) -> None:
        self._httpd.serve_forever()

    def close(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def __enter__(self) -> "AfcService":
        self.start()
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def post_inquiry(host: str, port: int, request_obj: dict, timeout: float = 10.0) -> dict:
    """Submit one inquiry over HTTP and return the decoded JSON body."""
    conn = HTTPConnection(host, port, timeout=timeout)
    try:
        body = json.dumps(request_obj).encode("utf-8")
        conn.request(
            "POST", INQUIRY_PATH, body=body, headers={"Content-Type": "application/json"}
        )
        reply = conn.getresponse()
        return json.loads(reply.read().decode("utf-8"))
    finally:
        conn.close()
