"""Declarative attack/defense scenarios and their deterministic execution.

A scenario document describes a world (incumbent database, coverage,
model configs), a set of APs with true positions, GNSS spoofers, and an
ordered event timeline. Execution is single-threaded over logical time
with all randomness drawn from per-AP, per-event streams derived from the
scenario seed, so a scenario always produces byte-identical reports.

Harm is the point of the exercise: grants are computed from reported
(possibly spoofed) positions, but interference at incumbents is assessed
from true positions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

from . import access_point as ap
from .channels import ChannelId
from .detection import (
    DEFAULT_GROUP_THRESHOLD_M,
    DetectionVerdict,
    geofence_check,
    group_consistency_check,
)
from .errors import ScenarioParseError, ScenarioValidationError
from .geo import Geofence, GeoPoint
from .gnss import (
    DEFAULT_CAPTURE_MARGIN_DB,
    LEGIT,
    SPOOFER,
    GnssNoiseModel,
    GnssSource,
    compute_fix,
    received_power_dbm,
)
from .propagation import PropagationConfig, ProtectionConfig, constrains, i_over_n_db
from .server import (
    IncumbentDatabase,
    ServerPolicy,
    handle_inquiry,
)
from .wire import (
    get_field,
    get_num,
    get_text,
    decode_database,
    decode_geofence,
    decode_geopoint,
    decode_policy,
    decode_propagation,
    decode_protection,
    epoch_to_iso,
    iso_to_epoch,
)

ADVANCE_CLOCK = "ADVANCE_CLOCK"
SET_AP_CLOCK_OFFSET = "SET_AP_CLOCK_OFFSET"
RUN_INQUIRY = "RUN_INQUIRY"
RUN_DETECTORS = "RUN_DETECTORS"

ACTIONS = (ADVANCE_CLOCK, SET_AP_CLOCK_OFFSET, RUN_INQUIRY, RUN_DETECTORS)


@dataclass(frozen=True)
class World:
    database: IncumbentDatabase = IncumbentDatabase()
    policy: ServerPolicy = ServerPolicy()
    propagation: PropagationConfig = PropagationConfig()
    protection: ProtectionConfig = ProtectionConfig()


@dataclass(frozen=True)
class ApSpec:
    config: ap.ApConfig
    true_position: GeoPoint
    deployment_registration: GeoPoint
    geofence: Geofence | None = None
    legit_power_dbm: float = -110.0
    initial_clock_offset_s: float = 0.0


@dataclass(frozen=True)
class SpooferSpec:
    position: GeoPoint
    broadcast_position: GeoPoint
    tx_power_dbm: float
    time_offset_s: float = 0.0
    active_window: tuple[float, float] = (0.0, math.inf)


@dataclass(frozen=True)
class TimelineEvent:
    at: float
    action: str
    ap_serial: str | None = None
    offset_s: float | None = None


@dataclass(frozen=True)
class Scenario:
    name: str
    seed: int
    epoch_s: float
    world: World
    gnss_noise: GnssNoiseModel = GnssNoiseModel()
    capture_margin_db: float = DEFAULT_CAPTURE_MARGIN_DB
    group_threshold_m: float = DEFAULT_GROUP_THRESHOLD_M
    aps: tuple[ApSpec, ...] = ()
    spoofers: tuple[SpooferSpec, ...] = ()
    timeline: tuple[TimelineEvent, ...] = ()


@dataclass(frozen=True)
class HarmRow:
    link_id: str
    ap_serial: str
    channel: ChannelId
    i_over_n_db: float
    violated: bool


@dataclass(frozen=True)
class HarmMetrics:
    worst_i_over_n_db: dict[str, float]
    violation_count: int


@dataclass
class ScenarioReport:
    scenario_name: str
    seed: int
    epoch_s: float
    events: list[dict] = field(default_factory=list)
    ap_rows: dict[str, dict] = field(default_factory=dict)
    harm_rows: list[HarmRow] = field(default_factory=list)
    harm_metrics: HarmMetrics = field(default_factory=lambda: HarmMetrics({}, 0))
    detections: list[dict] = field(default_factory=list)
    rendered_reports: dict[str, str] = field(default_factory=dict)
    final_states: dict[str, ap.ApState] = field(default_factory=dict)

    @property
    def has_harm_violations(self) -> bool:
        return self.harm_metrics.violation_count > 0

    @property
    def has_compliance_violations(self) -> bool:
        return any(row.get("complianceViolation") for row in self.ap_rows.values())

    @property
    def has_violations(self) -> bool:
        return self.has_harm_violations or self.has_compliance_violations

    def to_jsonable(self) -> dict:
        return {
            "scenario": self.scenario_name,
            "seed": self.seed,
            "epoch": epoch_to_iso(self.epoch_s),
            "events": self.events,
            "aps": self.ap_rows,
            "harm": [
                {
                    "linkId": r.link_id,
                    "apSerial": r.ap_serial,
                    "channel": _channel_jsonable(r.channel),
                    "iOverNDb": round(r.i_over_n_db, 4),
                    "violated": r.violated,
                }
                for r in self.harm_rows
            ],
            "harmSummary": {
                "worstIOverNDb": {
                    k: round(v, 4) for k, v in sorted(self.harm_metrics.worst_i_over_n_db.items())
                },
                "violationCount": self.harm_metrics.violation_count,
            },
            "detections": self.detections,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_jsonable(), sort_keys=True, indent=2) + "\n"


def _channel_jsonable(ch: ChannelId) -> dict:
    out = {"bandwidthMhz": ch.bandwidth_mhz, "cfi": ch.cfi}
    if ch.variant is not None:
        out["variant"] = ch.variant
    return out


# ---------------------------------------------------------------------------
# Loading.

def load_scenario(document: str, name: str = "scenario") -> Scenario:
    """Parse and validate a scenario JSON document."""
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"invalid JSON at line {e.lineno}: {e.msg}") from e
    if not isinstance(obj, dict):
        raise ScenarioParseError("scenario document must be a JSON object")

    seed_v = obj.get("seed", 0)
    if isinstance(seed_v, bool) or not isinstance(seed_v, int):
        raise ScenarioParseError("seed must be an integer", field="seed")
    epoch_s = iso_to_epoch(get_text(obj, "epoch", "scenario"))

    world_obj = obj.get("world", {})
    geofences: dict[str, Geofence] = {}

    aps: list[ApSpec] = []
    for i, a in enumerate(obj.get("aps", [])):
        where = f"aps[{i}]"
        serial = get_text(a, "serial", where)
        bandwidths = a.get("inquiredBandwidthsMhz", [20, 40, 80, 160, 320])
        if not isinstance(bandwidths, list) or not all(
            isinstance(b, int) and not isinstance(b, bool) for b in bandwidths
        ):
            raise ScenarioParseError(
                f"{where}.inquiredBandwidthsMhz must be a list of integers",
                field=f"{where}.inquiredBandwidthsMhz",
            )
        try:
            cfg = ap.ApConfig(
                serial=serial,
                certification_id=a.get("certificationId", f"CERT-{serial}"),
                height_m=get_num(a, "heightM", where, default=3.0),
                refresh_interval_s=get_num(a, "refreshIntervalS", where, default=86_400.0),
                inquired_bandwidths=tuple(bandwidths),
            )
        except ValueError as e:
            raise ScenarioParseError(f"{where}: {e}", field=where) from e
        true_pos = decode_geopoint(get_field(a, "truePosition", where), f"{where}.truePosition")
        deployment = (
            decode_geopoint(a["deploymentRegistration"], f"{where}.deploymentRegistration")
            if "deploymentRegistration" in a
            else true_pos
        )
        fence = (
            decode_geofence(a["geofence"], f"{where}.geofence") if "geofence" in a else None
        )
        if fence is not None:
            geofences[serial] = fence
        aps.append(
            ApSpec(
                config=cfg,
                true_position=true_pos,
                deployment_registration=deployment,
                geofence=fence,
                legit_power_dbm=get_num(a, "legitPowerDbm", where, default=-110.0),
                initial_clock_offset_s=get_num(a, "clockOffsetS", where, default=0.0),
            )
        )

    spoofers: list[SpooferSpec] = []
    for i, s in enumerate(obj.get("spoofers", [])):
        where = f"spoofers[{i}]"
        window = (0.0, math.inf)
        if "activeWindow" in s:
            w = s["activeWindow"]
            if (
                not isinstance(w, list)
                or len(w) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in w)
            ):
                raise ScenarioParseError(
                    f"{where}.activeWindow must be [t0, t1]", field=f"{where}.activeWindow"
                )
            window = (float(w[0]), float(w[1]))
        spoofers.append(
            SpooferSpec(
                position=decode_geopoint(get_field(s, "position", where), f"{where}.position"),
                broadcast_position=decode_geopoint(
                    get_field(s, "broadcastPosition", where), f"{where}.broadcastPosition"
                ),
                tx_power_dbm=get_num(s, "txPowerDbm", where),
                time_offset_s=get_num(s, "timeOffsetS", where, default=0.0),
                active_window=window,
            )
        )

    timeline: list[TimelineEvent] = []
    for i, e in enumerate(obj.get("timeline", [])):
        where = f"timeline[{i}]"
        action = get_text(e, "action", where)
        timeline.append(
            TimelineEvent(
                at=get_num(e, "at", where),
                action=action,
                ap_serial=e.get("ap"),
                offset_s=float(e["offsetS"]) if "offsetS" in e else None,
            )
        )

    gnss_obj = obj.get("gnss", {})
    try:
        noise = GnssNoiseModel(
            sigma_m=get_num(gnss_obj, "sigmaM", "gnss", default=5.0),
            ellipse_scale=get_num(gnss_obj, "ellipseScale", "gnss", default=2.0),
        )
    except ValueError as e:
        raise ScenarioParseError(f"gnss: {e}", field="gnss") from e
    capture_margin = get_num(gnss_obj, "captureMarginDb", "gnss", default=DEFAULT_CAPTURE_MARGIN_DB)

    detection_obj = obj.get("detection", {})
    group_threshold = get_num(
        detection_obj, "groupThresholdM", "detection", default=DEFAULT_GROUP_THRESHOLD_M
    )

    policy = decode_policy(world_obj.get("policy", {}))
    if geofences:
        merged = dict(policy.geofence_registry)
        merged.update(geofences)
        policy = replace(policy, geofence_registry=merged)

    world = World(
        database=decode_database(world_obj.get("database", {})),
        policy=policy,
        propagation=decode_propagation(world_obj.get("propagation", {})),
        protection=decode_protection(world_obj.get("protection", {})),
    )

    scenario = Scenario(
        name=obj.get("name", name) if isinstance(obj.get("name", name), str) else name,
        seed=seed_v,
        epoch_s=epoch_s,
        world=world,
        gnss_noise=noise,
        capture_margin_db=capture_margin,
        group_threshold_m=group_threshold,
        aps=tuple(aps),
        spoofers=tuple(spoofers),
        timeline=tuple(timeline),
    )
    _validate(scenario)
    return scenario


def _validate(s: Scenario) -> None:
    serials = [a.config.serial for a in s.aps]
    if len(set(serials)) != len(serials):
        raise ScenarioValidationError("duplicate AP serials")
    known = set(serials)
    prev = -math.inf
    for i, ev in enumerate(s.timeline):
        if ev.action not in ACTIONS:
            raise ScenarioValidationError(f"timeline[{i}]: unknown action {ev.action!r}")
        if ev.at < 0:
            raise ScenarioValidationError(f"timeline[{i}]: negative event time")
        if ev.at <= prev:
            raise ScenarioValidationError(
                f"timeline[{i}]: events must be strictly ordered by time"
            )
        prev = ev.at
        if ev.ap_serial is not None and ev.ap_serial not in known:
            raise ScenarioValidationError(f"timeline[{i}]: unknown AP {ev.ap_serial!r}")
        if ev.action == SET_AP_CLOCK_OFFSET:
            if ev.ap_serial is None or ev.offset_s is None:
                raise ScenarioValidationError(
                    f"timeline[{i}]: SET_AP_CLOCK_OFFSET needs ap and offsetS"
                )
    for i, sp in enumerate(s.spoofers):
        if sp.active_window[0] > sp.active_window[1]:
            raise ScenarioValidationError(f"spoofers[{i}]: active window is inverted")


# ---------------------------------------------------------------------------
# Execution.

def _gnss_sources(s: Scenario, spec: ApSpec, t: float) -> list[GnssSource]:
    sources = [
        GnssSource(
            kind=LEGIT,
            broadcast_position=spec.true_position,
            received_power_dbm=spec.legit_power_dbm,
        )
    ]
    for sp in s.spoofers:
        if not (sp.active_window[0] <= t <= sp.active_window[1]):
            continue
        power = received_power_dbm(sp.tx_power_dbm, sp.position, spec.true_position)
        sources.append(
            GnssSource(
                kind=SPOOFER,
                broadcast_position=sp.broadcast_position,
                received_power_dbm=power,
                time_offset_s=sp.time_offset_s,
            )
        )
    return sources


def run_scenario(s: Scenario) -> ScenarioReport:
    """Execute the timeline and aggregate the report."""
    report = ScenarioReport(scenario_name=s.name, seed=s.seed, epoch_s=s.epoch_s)
    specs = {a.config.serial: a for a in s.aps}
    states: dict[str, ap.ApState] = {
        serial: ap.ApState(local_clock_offset_s=spec.initial_clock_offset_s)
        for serial, spec in specs.items()
    }
    now_t = 0.0

    for idx, ev in enumerate(s.timeline):
        now_t = ev.at
        abs_now = s.epoch_s + now_t
        for serial in states:
            states[serial] = ap.tick(states[serial], abs_now)

        if ev.action == ADVANCE_CLOCK:
            report.events.append({"at": now_t, "action": ev.action})

        elif ev.action == SET_AP_CLOCK_OFFSET:
            serial = ev.ap_serial
            states[serial] = ap.tick(
                ap.set_clock_offset(states[serial], ev.offset_s), abs_now
            )
            report.events.append(
                {"at": now_t, "action": ev.action, "ap": serial, "offsetS": ev.offset_s}
            )

        elif ev.action == RUN_INQUIRY:
            targets = [ev.ap_serial] if ev.ap_serial else list(specs)
            for serial in targets:
                spec = specs[serial]
                sources = _gnss_sources(s, spec, now_t)
                fix = compute_fix(
                    spec.true_position,
                    sources,
                    true_time=abs_now,
                    noise=s.gnss_noise,
                    rng_seed=f"{s.seed}:{idx}:{serial}",
                    capture_margin_db=s.capture_margin_db,
                )
                states[serial] = ap.acquire_fix(states[serial], fix)
                row = {"at": now_t, "action": ev.action, "ap": serial}
                if fix is None:
                    row["outcome"] = "NO_FIX"
                    report.events.append(row)
                    continue
                states[serial], req = ap.submit_inquiry(
                    states[serial], spec.config, request_id=f"{serial}-{idx}"
                )
                resp = handle_inquiry(
                    req,
                    abs_now,
                    s.world.database,
                    s.world.policy,
                    s.world.propagation,
                    s.world.protection,
                )
                states[serial] = ap.apply_response(
                    states[serial], resp, ap.local_now(states[serial], abs_now)
                )
                row["responseCode"] = resp.response_code.value
                row["grantCount"] = len(resp.grants)
                row["winningKind"] = fix.winning_kind
                report.events.append(row)

        elif ev.action == RUN_DETECTORS:
            rows = _run_detectors(s, specs, states, now_t)
            report.detections.extend(rows)
            report.events.append(
                {"at": now_t, "action": ev.action, "alarms": sum(r["alarm"] for r in rows)}
            )

    abs_final = s.epoch_s + now_t
    intents = []
    for serial, state in states.items():
        spec = specs[serial]
        chosen = ap.choose_transmit_channel(state)
        compliance_violation = (
            state.phase is ap.ApPhase.AUTHORIZED
            and state.grants is not None
            and abs_final >= state.grants.expire_time
        )
        row = {
            "phase": state.phase.value,
            "grantCount": len(state.grants.grants) if state.grants else 0,
            "clockOffsetS": state.local_clock_offset_s,
            "complianceViolation": compliance_violation,
        }
        if state.last_fix is not None:
            c = state.last_fix.ellipse.center
            row["reportedPosition"] = {"latitude": c.lat_deg, "longitude": c.lon_deg}
            row["fixWinner"] = state.last_fix.winning_kind
        if chosen is not None:
            row["transmitChannel"] = _channel_jsonable(chosen.channel)
            row["transmitEirpDbm"] = chosen.max_eirp_dbm
            intents.append((serial, spec.true_position, chosen.channel, chosen.max_eirp_dbm))
        report.ap_rows[serial] = row
        report.final_states[serial] = state
        report.rendered_reports[serial] = ap.render_channel_report(
            state, ap.local_now(state, abs_final)
        )

    report.harm_rows, report.harm_metrics = assess_harm(intents, s.world)
    return report


def _run_detectors(s, specs, states, now_t: float) -> list[dict]:
    rows: list[dict] = []
    for serial in sorted(specs):
        spec = specs[serial]
        state = states[serial]
        if spec.geofence is None or state.last_fix is None:
            continue
        verdict = geofence_check(state.last_fix.ellipse.center, spec.geofence)
        rows.append(_verdict_row("geofence", verdict, now_t, ap_serial=serial))
    reported = {
        serial: states[serial].last_fix.ellipse.center
        for serial in specs
        if states[serial].last_fix is not None
    }
    deployed = {serial: specs[serial].deployment_registration for serial in specs}
    if len(set(reported) & set(deployed)) >= 2:
        verdict = group_consistency_check(reported, deployed, s.group_threshold_m)
        rows.append(_verdict_row("group_consistency", verdict, now_t))
    return rows


def _verdict_row(
    kind: str, verdict: DetectionVerdict, now_t: float, ap_serial: str | None = None
) -> dict:
    row = {
        "at": now_t,
        "type": kind,
        "alarm": verdict.alarm,
        "scoreM": round(verdict.score_m, 3),
        "detail": verdict.detail,
    }
    if ap_serial is not None:
        row["ap"] = ap_serial
    return row


def assess_harm(intents, world: World) -> tuple[list[HarmRow], HarmMetrics]:
    """Interference assessment at incumbents, from true AP positions.

    intents rows are (ap_serial, true_position, channel, eirp_dbm) for
    every AP that would actually transmit.
    """
    rows: list[HarmRow] = []
    worst: dict[str, float] = {}
    violating_pairs: set[tuple[str, ChannelId]] = set()
    for serial, true_pos, channel, eirp in intents:
        for link in world.database.fs_links:
            if not constrains(link, channel):
                continue
            ratio = i_over_n_db(
                link, true_pos, channel, eirp, world.propagation
            )
            violated = ratio > world.protection.i_over_n_limit_db
            rows.append(
                HarmRow(
                    link_id=link.id,
                    ap_serial=serial,
                    channel=channel,
                    i_over_n_db=ratio,
                    violated=violated,
                )
            )
            if link.id not in worst or ratio > worst[link.id]:
                worst[link.id] = ratio
            if violated:
                violating_pairs.add((serial, channel))
    return rows, HarmMetrics(worst_i_over_n_db=worst, violation_count=len(violating_pairs))
