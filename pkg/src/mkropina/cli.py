"""Command-line interface: check / curvature / scan / verify over scenario files.

Exit codes: 0 success, 1 validation failure, 2 residual failure (verify).
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .errors import MKropinaError
from .report import emit_check, emit_report, emit_verify
from .scenario import METHODS, Scenario, load_scenario, run_command


def builtin_scenario_names() -> list[str]:
    files = resources.files("mkropina") / "scenarios"
    return sorted(p.name for p in files.iterdir() if p.name.endswith(".json"))


def resolve_scenario(source: str) -> str:
    """Scenario text from a filesystem path or a shipped scenario name."""
    path = Path(source)
    if path.exists():
        return path.read_text(encoding="utf-8")
    name = source if source.endswith(".json") else source + ".json"
    candidate = resources.files("mkropina") / "scenarios" / name
    if candidate.is_file():
        return candidate.read_text(encoding="utf-8")
    raise MKropinaError(
        f"scenario {source!r} is neither a file nor one of the shipped "
        f"scenarios ({', '.join(builtin_scenario_names())})"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mkropina",
        description=(
            "Flag curvature of homogeneous Finsler spaces with generalized "
            "m-Kropina metrics, computed from Lie-algebra data."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--scenario",
            required=True,
            help="path to a scenario JSON file, or a shipped scenario name",
        )
        p.add_argument(
            "--format", choices=["csv", "json"], default="csv", dest="fmt"
        )
        p.add_argument(
            "--sigma",
            type=int,
            choices=[-1, 1],
            default=None,
            help="override the scenario's curvature sign convention",
        )

    check_cmd = sub.add_parser("check", help="structural and reductivity checks")
    common(check_cmd)
    check_cmd.set_defaults(fmt="json")

    curv_cmd = sub.add_parser("curvature", help="flag curvature for explicit flags")
    common(curv_cmd)
    curv_cmd.add_argument(
        "--methods",
        default=",".join(METHODS),
        help=f"comma-separated subset of: {', '.join(METHODS)}",
    )

    scan_cmd = sub.add_parser("scan", help="curvature over seeded random flags")
    common(scan_cmd)
    scan_cmd.add_argument("--methods", default=",".join(METHODS))
    scan_cmd.add_argument("--count", type=int, default=None)
    scan_cmd.add_argument("--seed", type=int, default=None)

    verify_cmd = sub.add_parser("verify", help="oracle cross-check suite")
    common(verify_cmd)
    verify_cmd.add_argument(
        "--tolerance",
        type=float,
        default=None,
        help="override both scenario residual tolerances",
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        scn: Scenario = load_scenario(resolve_scenario(args.scenario))
        if args.sigma is not None:
            scn = scn.with_sigma(args.sigma)
        if args.command == "check":
            sys.stdout.write(emit_check(run_command(scn, "check"), args.fmt))
            return 0
        if args.command in ("curvature", "scan"):
            methods = tuple(
                name for name in args.methods.split(",") if name
            )
            kwargs = {"methods": methods}
            if args.command == "scan":
                kwargs.update(count=args.count, seed=args.seed)
            rows = run_command(scn, args.command, **kwargs)
            sys.stdout.write(emit_report(rows, args.fmt))
            return 0
        report = run_command(scn, "verify", tolerance=args.tolerance)
        sys.stdout.write(emit_verify(report, args.fmt))
        return 0 if report.passed else 2
    except MKropinaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
