"""Command-line interface.

Subcommands:
  serve         run the coordination service on a TCP port
  inquire       submit one request document and print the response
  simulate      execute a scenario file; write the report and AP consoles
  diff-engines  compare two availability engines over a request corpus

Exit codes: 0 on success, 2 on parse/validation failures, 3 when
--fail-on-harm is set and the scenario produced violations.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from importlib import resources
from pathlib import Path

from .errors import ScenarioParseError, ScenarioValidationError
from .scenario import load_scenario, run_scenario
from .server import AfcEngine, differential_compare, handle_inquiry
from .wire import (
    AfcService,
    RequestDecodeError,
    decode_database,
    decode_policy,
    decode_propagation,
    decode_protection,
    decode_request,
    dumps_response,
    encode_response,
    iso_to_epoch,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_HARM = 3


def _read_json(path: str, what: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ScenarioParseError(f"cannot read {what} {path}: {e}") from e
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"{what} {path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    return obj


def _load_world_parts(args):
    db = decode_database(_read_json(args.db, "database") if args.db else {})
    policy = decode_policy(_read_json(args.policy, "policy") if args.policy else {})
    return db, policy, decode_propagation({}), decode_protection({})


def _resolve_scenario_path(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    for candidate in (name, f"{name}.json"):
        bundled = resources.files("afcsim").joinpath("scenarios", candidate)
        if bundled.is_file():
            return Path(str(bundled))
    raise ScenarioParseError(f"scenario {name!r} not found on disk or among bundled scenarios")


def _cmd_serve(args) -> int:
    db, policy, pcfg, prot = _load_world_parts(args)
    service = AfcService(db, policy, pcfg, prot, host=args.host, port=args.port)
    print(f"serving on {service.host}:{service.port}", flush=True)
    try:
        service.serve_forever()
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def _cmd_inquire(args) -> int:
    db, policy, pcfg, prot = _load_world_parts(args)
    req = decode_request(_read_json(args.request, "request"))
    server_now = iso_to_epoch(args.now) if args.now else req.location.gps_time
    resp = handle_inquiry(req, server_now, db, policy, pcfg, prot)
    if args.format == "json":
        print(dumps_response(resp))
    else:
        print(f"request {resp.request_id}: {resp.response_code.value}")
        body = encode_response(resp)
        if "expireTime" in body:
            print(f"issue {body['issueTime']}  expire {body['expireTime']}  country {body['countryCode']}")
        print(f"grants: {len(resp.grants)}")
        for g in resp.grants:
            print(f"  {g.channel.label():>9}  cfi {g.channel.cfi:>3}  {g.max_eirp_dbm:.2f} dBm")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    path = _resolve_scenario_path(args.scenario)
    scenario = load_scenario(path.read_text(), name=path.stem)
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)
    report = run_scenario(scenario)

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(report.dumps())
        for serial, text in report.rendered_reports.items():
            (out / f"{serial}.report.txt").write_text(text)

    if args.format == "json":
        print(report.dumps(), end="")
    else:
        print(f"scenario {report.scenario_name} seed {report.seed}")
        for row in report.events:
            extras = {k: v for k, v in row.items() if k not in ("at", "action")}
            detail = " ".join(f"{k}={v}" for k, v in extras.items())
            print(f"  t={row['at']:>8.0f}  {row['action']:<19} {detail}".rstrip())
        for serial, row in report.ap_rows.items():
            line = f"{serial}: {row['phase']} grants={row['grantCount']}"
            if "transmitChannel" in row:
                ch = row["transmitChannel"]
                label = f"{ch['bandwidthMhz']}MHz"
                if "variant" in ch:
                    label += f"_{ch['variant']}"
                line += f" tx={label} cfi {ch['cfi']} @ {row['transmitEirpDbm']:.2f} dBm"
            if row["complianceViolation"]:
                line += " COMPLIANCE-VIOLATION"
            print(line)
        for r in report.harm_rows:
            mark = "VIOLATED" if r.violated else "ok"
            print(
                f"harm {r.link_id} from {r.ap_serial} on cfi {r.channel.cfi} "
                f"({r.channel.bandwidth_mhz} MHz): I/N {r.i_over_n_db:.2f} dB {mark}"
            )
        for d in report.detections:
            state = "ALARM" if d["alarm"] else "clear"
            print(f"detect [{d['type']}] {state} score {d['scoreM']:.1f} m: {d['detail']}")
        print(
            f"violations: harm={report.harm_metrics.violation_count} "
            f"compliance={sum(bool(r['complianceViolation']) for r in report.ap_rows.values())}"
        )
    if args.fail_on_harm and report.has_violations:
        return EXIT_HARM
    return EXIT_OK


def _cmd_diff_engines(args) -> int:
    corpus_obj = _read_json(args.corpus, "corpus")
    if isinstance(corpus_obj, dict):
        corpus_obj = corpus_obj.get("requests", [])
    if not isinstance(corpus_obj, list):
        raise ScenarioParseError("corpus must be a list of requests or {\"requests\": [...]}")
    requests = [decode_request(o) for o in corpus_obj]

    def engine_from(path: str) -> AfcEngine:
        obj = _read_json(path, "engine config")
        return AfcEngine(
            db=decode_database(obj.get("database", {})),
            propagation=decode_propagation(obj.get("propagation", {})),
            protection=decode_protection(obj.get("protection", {})),
        )

    report = differential_compare(
        requests, engine_from(args.engine_a), engine_from(args.engine_b),
        tolerance_db=args.tolerance,
    )
    if args.format == "json":
        rows = [
            {
                "requestId": r.request_id,
                "bandwidthMhz": r.channel.bandwidth_mhz,
                "cfi": r.channel.cfi,
                **({"variant": r.channel.variant} if r.channel.variant is not None else {}),
                "eirpA": r.eirp_a_dbm,
                "eirpB": r.eirp_b_dbm,
            }
            for r in report.rows
        ]
        print(json.dumps({"divergences": rows, "toleranceDb": report.tolerance_db},
                         sort_keys=True, indent=2))
    else:
        if report.empty:
            print("engines agree on all requests")
        for r in report.rows:
            a = "absent" if r.eirp_a_dbm is None else f"{r.eirp_a_dbm:.2f}"
            b = "absent" if r.eirp_b_dbm is None else f"{r.eirp_b_dbm:.2f}"
            print(
                f"{r.request_id}: {r.channel.label()} cfi {r.channel.cfi}: "
                f"A={a} dBm B={b} dBm"
            )
        print(f"divergences: {len(report.rows)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afcsim",
        description="6 GHz spectrum-coordination simulator: GPS-spoofing attacks and defenses",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the coordination service over HTTP")
    p.add_argument("--db", help="incumbent database JSON file")
    p.add_argument("--policy", help="server policy JSON file")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8755)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("inquire", help="submit one spectrum inquiry")
    p.add_argument("request", help="request JSON file")
    p.add_argument("--db", help="incumbent database JSON file")
    p.add_argument("--policy", help="server policy JSON file")
    p.add_argument("--now", help="server time, ISO-8601 (default: the request's gpsTime)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_inquire)

    p = sub.add_parser("simulate", help="run a scenario file")
    p.add_argument("scenario", help="scenario JSON file (or a bundled scenario name)")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--out", help="directory for report.json and per-AP console reports")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--fail-on-harm", action="store_true",
                   help="exit 3 if the run produced harm or compliance violations")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("diff-engines", help="differential-compare two engines")
    p.add_argument("corpus", help="request corpus JSON file")
    p.add_argument("engine_a", help="engine A config JSON file")
    p.add_argument("engine_b", help="engine B config JSON file")
    p.add_argument("--tolerance", type=float, default=0.1, help="EIRP delta tolerance, dB")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_diff_engines)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioParseError, ScenarioValidationError, RequestDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
