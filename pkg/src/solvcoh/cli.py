"""Command line entry point: ``solvcoh catalog | cohomology | verify``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .catalog import CHECKS, builtin_catalog, builtin_names, cohomology_report, get_entry, load_config, run_checks, verify_many
from .errors import ConfigError, SolvcohError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2)


def _write(text: str) -> None:
    sys.stdout.buffer.write((text + "\n").encode("utf-8"))
    sys.stdout.flush()


def _resolve(args):
    if args.input:
        return load_config(args.input)
    try:
        return get_entry(args.entry)
    except KeyError:
        raise ConfigError("", f"unknown entry {args.entry!r}; known: {', '.join(builtin_names())}") from None


def cmd_catalog(args) -> int:
    entries = builtin_catalog()
    if args.format == "json":
        _write(dump_json([e.summary() for e in entries]))
        return EXIT_PASS
    for e in entries:
        flags = f"  expected-FAIL: {', '.join(e.expected_fail)}" if e.expected_fail else ""
        certs = " ".join(f"{k}={v}" for k, v in sorted(e.certificates.items()))
        _write(f"{e.name:16} {e.description}")
        _write(f"{'':16} {certs}{flags}")
    return EXIT_PASS


def cmd_cohomology(args) -> int:
    entry = _resolve(args)
    rep = cohomology_report(entry, args.max_degree)
    if args.format == "json":
        _write(dump_json(rep))
        return EXIT_PASS
    _write(f"entry: {rep['entry']}")
    _write("certificates: " + " ".join(f"{k}={v}" for k, v in rep["certificates"].items()))
    for side in ("lie", "group"):
        data = rep[side]
        if "rejected" in data:
            _write(f"{side}: rejected ({data['rejected']})")
            continue
        _write(f"{side} dims: ({','.join(map(str, data['dims']))})")
        fp = data.get("fingerprint") or (data.get("ring") or {}).get("fingerprints")
        if fp:
            _write(f"{side} fingerprint: {json.dumps(fp, sort_keys=True)}")
        flag = (data.get("provenance") or {}).get("flag")
        if flag:
            _write(f"{side} note: {flag}")
    return EXIT_PASS


def cmd_verify(args) -> int:
    if args.entry == "all" and not args.input:
        reports = verify_many(builtin_names(), args.check, args.jobs)
    else:
        reports = [run_checks(_resolve(args), args.check)]
    if args.json:
        payload = [r.to_json(timings=not args.no_timings) for r in reports]
        _write(dump_json(payload if len(payload) > 1 else payload[0]))
    else:
        for r in reports:
            _write(f"{r.entry}: {r.status}")
            for v in r.verdicts:
                extra = ""
                if v.status == "SKIPPED":
                    hyp = v.witness.get("hypothesis_failed")
                    why = v.witness.get("skipped_because", "")
                    extra = f" (hypothesis {hyp}: {why})" if hyp else f" ({why})"
                elif not v.passed:
                    extra = f" {json.dumps(v.witness, sort_keys=True, ensure_ascii=False, default=str)}"
                _write(f"  {v.check:24} {v.status}{extra}")
    return EXIT_PASS if all(r.passed for r in reports) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="solvcoh", description="exact rational cohomology of polycyclic groups via algebraic hulls")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("catalog", help="list builtin entries with their certificates")
    c.add_argument("--format", choices=("table", "json"), default="table")
    c.set_defaults(func=cmd_catalog)

    h = sub.add_parser("cohomology", help="Lie and group cohomology of one entry")
    src = h.add_mutually_exclusive_group(required=True)
    src.add_argument("--entry")
    src.add_argument("--input")
    h.add_argument("--max-degree", type=int, default=None)
    h.add_argument("--format", choices=("table", "json"), default="table")
    h.set_defaults(func=cmd_cohomology)

    v = sub.add_parser("verify", help="run verification checks")
    src = v.add_mutually_exclusive_group(required=True)
    src.add_argument("--entry", help="builtin entry name, or 'all'")
    src.add_argument("--input")
    v.add_argument("--check", choices=CHECKS + ("all",), default="all")
    v.add_argument("--json", action="store_true")
    v.add_argument("--no-timings", action="store_true", help="omit timings from JSON output")
    v.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolvcohError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
