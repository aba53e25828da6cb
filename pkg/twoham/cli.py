#!/usr/bin/env python3
"""Command-line entry point: `python -m twoham <command> ...`.

Exit codes: 0 success or verified, 1 a relation violation was found, 2 invalid input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence

from twoham.engine import enumerate_producibles, terminal_supertiles
from twoham.errors import InputError, TwohamError
from twoham.formats import dump_rep, dump_system, load_rep, load_system, to_json
from twoham.ladders import HALF_BLOCK_RULES, gen_ladder_system, gen_sim_ladder_system
from twoham.lift import lift_system, verify_lift
from twoham.log import configure_logging, get_logger
from twoham.render import render_producibles
from twoham.settings import Settings, load_settings
from twoham.simrel import MODES, SimulationChecker, find_strong_failure
from twoham.temps import find_uniform_mapping, no_mapping_gaps

log = get_logger(__name__)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2

Handler = Callable[[argparse.Namespace, Settings], int]


def _emit(text: str, destination: Optional[str] = None) -> None:
    if destination:
        Path(destination).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_tas_validate(args: argparse.Namespace, settings: Settings) -> int:
    tas = load_system(args.file)
    print(f"ok: {tas.name} ({len(tas.tiles)} tiles, tau={tas.temperature})")
    return EXIT_OK


def cmd_tas_enumerate(args: argparse.Namespace, settings: Settings) -> int:
    tas = load_system(args.file)
    prods = enumerate_producibles(tas, args.max_size, workers=settings.threads)
    payload: Dict[str, Any] = {
        "system": tas.name,
        "bound": args.max_size,
        "count": len(prods),
        "supertiles": [s.to_rows() for s in prods],
    }
    if args.terminal:
        payload["terminal"] = [s.to_rows() for s in terminal_supertiles(prods, tas)]
    if args.render:
        render_producibles(prods, tas.tiles, args.render)
    _emit(to_json(payload))
    return EXIT_OK


def cmd_map_find(args: argparse.Namespace, settings: Settings) -> int:
    mapping = find_uniform_mapping(args.tau, args.tau_prime)
    if mapping is None:
        print(f"no uniform mapping (tau={args.tau}, tau'={args.tau_prime})")
        return EXIT_OK
    for strength, image in mapping.as_dict().items():
        print(f"{strength} -> {image}")
    return EXIT_OK


def cmd_map_gaps(args: argparse.Namespace, settings: Settings) -> int:
    print(" ".join(str(gap) for gap in no_mapping_gaps(args.tau, args.limit)))
    return EXIT_OK


def cmd_lift(args: argparse.Namespace, settings: Settings) -> int:
    lifted = lift_system(load_system(args.file), args.tau_prime)
    _emit(dump_system(lifted.lifted), args.output)
    if args.rep_output:
        _emit(dump_rep(lifted.representation), args.rep_output)
    if args.verify is None:
        return EXIT_OK
    report = verify_lift(lifted, args.verify, workers=settings.threads)
    # stdout carries the lifted system unless it went to a file
    (sys.stdout if args.output else sys.stderr).write(to_json(report.to_dict()))
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_gen_ladder(args: argparse.Namespace, settings: Settings) -> int:
    _emit(dump_system(gen_ladder_system(args.tau).tas), args.output)
    return EXIT_OK


def cmd_gen_ladder_sim(args: argparse.Namespace, settings: Settings) -> int:
    sls = gen_sim_ladder_system(args.tau, args.tau_prime, half_blocks=args.half_blocks)
    _emit(dump_system(sls.tas), args.output)
    if args.rep_output:
        _emit(dump_rep(sls.representation), args.rep_output)
    if args.simulated_output:
        _emit(dump_system(sls.simulated.tas), args.simulated_output)
    return EXIT_OK


def cmd_sim_check(args: argparse.Namespace, settings: Settings) -> int:
    checker = SimulationChecker(
        load_system(args.simulator),
        load_system(args.simulated),
        load_rep(args.rep),
        args.max_size,
        step_cap=args.step_cap,
        workers=settings.threads,
    )
    report = checker.report(args.mode)
    _emit(to_json(report.to_dict()))
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_demo_impossibility(args: argparse.Namespace, settings: Settings) -> int:
    sls = gen_sim_ladder_system(args.tau, args.tau_prime)
    failure = find_strong_failure(sls)
    if failure is None:
        _emit(to_json({"tau": args.tau, "tau_prime": args.tau_prime, "witness": None}))
        return EXIT_OK
    _emit(to_json({"tau": args.tau, "tau_prime": args.tau_prime, "witness": failure.to_dict()}))
    return EXIT_VIOLATION if failure.confirmed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twoham", description="2HAM simulation toolkit")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logs")
    parser.add_argument("--log-json", action="store_true", help="emit logs as JSON lines on stderr")
    parser.add_argument("--env-file", type=Path, help=".env file to load (default: ./.env)")
    commands = parser.add_subparsers(dest="command", required=True)

    tas = commands.add_parser("tas", help="inspect a system file").add_subparsers(dest="action", required=True)
    validate = tas.add_parser("validate", help="check a system file")
    validate.add_argument("file")
    validate.set_defaults(handler=cmd_tas_validate)
    enumerate_ = tas.add_parser("enumerate", help="list producible supertiles up to a size bound")
    enumerate_.add_argument("file")
    enumerate_.add_argument("--max-size", type=int, required=True)
    enumerate_.add_argument("--terminal", action="store_true", help="also list terminal-up-to-bound members")
    enumerate_.add_argument("--render", metavar="DIR", help="write one SVG per supertile into DIR")
    enumerate_.set_defaults(handler=cmd_tas_enumerate)

    maps = commands.add_parser("map", help="uniform mappings between temperatures").add_subparsers(
        dest="action", required=True
    )
    find = maps.add_parser("find", help="print the uniform mapping for a temperature pair")
    find.add_argument("--tau", type=int, required=True)
    find.add_argument("--tau-prime", type=int, required=True)
    find.set_defaults(handler=cmd_map_find)
    gaps = maps.add_parser("gaps", help="list tau' without a uniform mapping")
    gaps.add_argument("--tau", type=int, required=True)
    gaps.add_argument("--limit", type=int, required=True)
    gaps.set_defaults(handler=cmd_map_gaps)

    lift = commands.add_parser("lift", help="lift a system to a higher temperature")
    lift.add_argument("file")
    lift.add_argument("--tau-prime", type=int, required=True)
    lift.add_argument("-o", "--output", help="lifted system file (default: stdout)")
    lift.add_argument("-r", "--rep-output", help="representation function file")
    lift.add_argument("--verify", type=int, metavar="N", help="compare both systems up to N tiles")
    lift.set_defaults(handler=cmd_lift)

    gen = commands.add_parser("gen", help="generate ladder systems").add_subparsers(dest="action", required=True)
    ladder = gen.add_parser("ladder", help="ladder system at tau")
    ladder.add_argument("--tau", type=int, required=True)
    ladder.add_argument("-o", "--output")
    ladder.set_defaults(handler=cmd_gen_ladder)
    ladder_sim = gen.add_parser("ladder-sim", help="scale-2 simulator of the tau ladder at tau'")
    ladder_sim.add_argument("--tau", type=int, required=True)
    ladder_sim.add_argument("--tau-prime", type=int, required=True)
    ladder_sim.add_argument("--half-blocks", choices=HALF_BLOCK_RULES, default="both")
    ladder_sim.add_argument("-o", "--output")
    ladder_sim.add_argument("-r", "--rep-output")
    ladder_sim.add_argument("-s", "--simulated-output", help="also write the simulated ladder system")
    ladder_sim.set_defaults(handler=cmd_gen_ladder_sim)

    sim = commands.add_parser("sim", help="simulation checks").add_subparsers(dest="action", required=True)
    check = sim.add_parser("check", help="bounded check of the simulation relations")
    check.add_argument("simulator")
    check.add_argument("simulated")
    check.add_argument("rep")
    check.add_argument("--max-size", type=int, required=True)
    check.add_argument("--mode", choices=sorted(MODES), default="standard")
    check.add_argument("--step-cap", type=int, help="reachability path cap (default 4*m^2)")
    check.set_defaults(handler=cmd_sim_check)

    demo = commands.add_parser("demo", help="canned demonstrations").add_subparsers(dest="action", required=True)
    impossibility = demo.add_parser("impossibility", help="half-ladders breaking strong simulation")
    impossibility.add_argument("--tau", type=int, default=3)
    impossibility.add_argument("--tau-prime", type=int, default=4)
    impossibility.set_defaults(handler=cmd_demo_impossibility)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, json_output=args.log_json)
    handler: Handler = args.handler
    try:
        settings = load_settings(args.env_file)
        return handler(args, settings)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except TwohamError as exc:
        log.error("command_failed", command=args.command, error=str(exc))
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
