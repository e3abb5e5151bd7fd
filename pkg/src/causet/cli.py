"""Command-line entry point.

    causet run COMMAND --seed S [--param k=v ...] [--output PATH] [--format f]
    causet replay RECORD.json

Exit codes: 0 success, 2 usage error (unknown command / bad parameters),
3 numerical or validation failure.  Errors print one JSON object to stderr.
CAUSET_THREADS caps replica parallelism; results do not depend on it.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import CausetError, SchemaError, UnknownCommand
from .experiments import SCHEMAS, ExperimentConfig, replay, run


def _parse_param(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise SchemaError(f"--param expects key=value, got {text!r}")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _error_json(exc: Exception) -> str:
    return json.dumps({"error": type(exc).__name__, "message": str(exc)})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="causet",
                                     description="causal set experiments")
    sub = parser.add_subparsers(dest="mode", required=True)
    runp = sub.add_parser("run", help="run one experiment")
    runp.add_argument("command", help="one of: " + ", ".join(sorted(SCHEMAS)))
    runp.add_argument("--seed", type=int, required=True)
    runp.add_argument("--param", action="append", default=[],
                      metavar="KEY=VALUE", help="experiment parameter")
    runp.add_argument("--output", default=None, help="record path")
    runp.add_argument("--format", default="json", choices=["json", "csv"])
    rep = sub.add_parser("replay", help="rerun a record and compare")
    rep.add_argument("record", help="path to a JSON record")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.mode == "run":
            params = dict(_parse_param(p) for p in args.param)
            config = ExperimentConfig(command=args.command, params=params,
                                      seed=args.seed, output=args.output,
                                      fmt=args.format)
            record = run(config)
            if not args.output:
                print(record.to_json())
            else:
                print(f"wrote {args.output}")
            return 0
        record = replay(args.record)
        print(f"replay OK: {record.command} seed={record.seed}")
        return 0
    except (UnknownCommand, SchemaError) as exc:
        print(_error_json(exc), file=sys.stderr)
        return 2
    except CausetError as exc:
        print(_error_json(exc), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
