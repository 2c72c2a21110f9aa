"""CLI adapter for toeplab experiments and computations."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from toeplab.bridge.backend import BackendBridge, BridgeError
from toeplab.core.errors import USAGE_ERROR_CODES, ErrorCode
from toeplab.core.payloads import COMPUTE_VERBS

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_UNCERTAIN = 2
EXIT_USAGE = 3

_STATUS_EXIT = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "uncertain": EXIT_UNCERTAIN}


class _UsageParser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage code instead of 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_shared_backend_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", default="auto", choices=["direct", "api", "auto"], help="Execution mode")
    parser.add_argument(
        "--api-base-url",
        default="http://127.0.0.1:8000",
        help="API base URL used by api/auto modes",
    )
    parser.add_argument("--log-level", default="WARNING", help="Logging level for stderr diagnostics")


def _add_run_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--grid-size", type=int, default=None, help="Samples on the circle (power of two)")
    parser.add_argument("--truncation", type=int, default=None, help="Trusted coefficient band N")
    parser.add_argument("--tol-residual", type=float, default=None, help="Residual tolerance for smooth symbols")
    parser.add_argument("--seed", type=int, default=None, help="Generator seed")
    parser.add_argument("--json", dest="json_path", default=None, help="Also write the report to this path")
    parser.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Experiment or verb parameter; VALUE is parsed as JSON when possible",
    )


def build_parser() -> argparse.ArgumentParser:
    """Create command line parser."""

    parser = _UsageParser(prog="toeplab-cli", description="Toeplitz kernel laboratory")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_UsageParser)

    listing = subparsers.add_parser("list", help="List registered experiments")
    _add_shared_backend_args(listing)

    run = subparsers.add_parser("run", help="Run one registered experiment")
    run.add_argument("experiment_id", help="Experiment id, see `list`")
    _add_run_args(run)
    _add_shared_backend_args(run)

    compute = subparsers.add_parser("compute", help="Evaluate one verb on descriptors")
    compute.add_argument("verb", choices=COMPUTE_VERBS, help="Computation to perform")
    compute.add_argument("--symbol", default=None, help="Symbol descriptor as JSON text or @path")
    compute.add_argument("--function", default=None, help="Hardy function descriptor as JSON text or @path")
    compute.add_argument("--lambda", dest="lam", default=None, help="Point in the disk as 're,im'")
    compute.add_argument("--size", type=int, default=None, help="Finite-section size")
    _add_run_args(compute)
    _add_shared_backend_args(compute)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Run CLI command and return process exit code."""

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(level=args.log_level.upper(), stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    bridge = BackendBridge(mode=args.mode, api_base_url=args.api_base_url)

    if args.command == "list":
        return _run_list(bridge)

    if args.command == "run":
        return _run_experiment(bridge, args)

    if args.command == "compute":
        return _run_compute(bridge, args)

    parser.error(f"Unsupported command: {args.command}")
    return EXIT_USAGE


def _run_list(bridge: BackendBridge) -> int:
    try:
        data = bridge.list_experiments()
    except BridgeError as exc:
        return _report_error(exc)

    print(json.dumps(data, indent=2))
    return EXIT_PASS


def _run_experiment(bridge: BackendBridge, args: argparse.Namespace) -> int:
    try:
        data = bridge.run_experiment(
            experiment_id=args.experiment_id,
            overrides=_config_overrides(args),
            seed=args.seed,
            params=_parse_params(args.param),
        )
    except (BridgeError, ValueError) as exc:
        return _report_error(exc)

    return _emit_report(data, args.json_path)


def _run_compute(bridge: BackendBridge, args: argparse.Namespace) -> int:
    try:
        data = bridge.compute(
            verb=args.verb,
            symbol=_read_descriptor(args.symbol),
            function=_read_descriptor(args.function),
            lam=args.lam,
            size=args.size,
            overrides=_config_overrides(args),
            seed=args.seed,
            params=_parse_params(args.param),
        )
    except (BridgeError, ValueError, OSError) as exc:
        return _report_error(exc)

    return _emit_report(data, args.json_path)


def _emit_report(data: dict[str, Any], json_path: str | None) -> int:
    text = json.dumps(data, indent=2, sort_keys=True)
    if json_path:
        Path(json_path).expanduser().write_text(text + "\n", encoding="utf-8")
    print(text)
    return _STATUS_EXIT.get(str(data.get("status")), EXIT_FAIL)


def _report_error(exc: Exception) -> int:
    code = exc.code if isinstance(exc, BridgeError) else ErrorCode.VALIDATION_ERROR
    payload: dict[str, Any] = {"error": str(exc)}
    if code is not None:
        payload["code"] = code.value
    print(json.dumps(payload), file=sys.stderr)
    return _exit_for_code(code)


def _exit_for_code(code: ErrorCode | None) -> int:
    if code in USAGE_ERROR_CODES:
        return EXIT_USAGE
    if code is ErrorCode.UNCERTAIN_RESULT:
        return EXIT_UNCERTAIN
    return EXIT_FAIL


def _config_overrides(args: argparse.Namespace) -> dict[str, Any]:
    overrides = {
        "grid_size": args.grid_size,
        "truncation": args.truncation,
        "tol_residual": args.tol_residual,
    }
    return {key: value for key, value in overrides.items() if value is not None}


def _read_descriptor(raw: str | None) -> str | None:
    if raw is None:
        return None
    if raw.startswith("@"):
        return Path(raw[1:]).expanduser().read_text(encoding="utf-8")
    return raw


def _parse_params(items: list[str]) -> dict[str, Any]:
    params: dict[str, Any] = {}
    for item in items:
        if "=" not in item:
            raise ValueError(f"Invalid --param entry: {item}")

        key, raw_value = item.split("=", 1)
        params[key.strip()] = _coerce_cli_value(raw_value.strip())
    return params


def _coerce_cli_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


if __name__ == "__main__":
    raise SystemExit(main())
