"""Command line front end: ``construct``, ``simulate``, ``verify``, ``plot``.

Exit codes: 0 success, 1 failed check or failed simulation step, 2 bad input.
"""
from __future__ import annotations

import argparse
import os
import sys

from .construction import CollisionError, ConstructionError, Parameters, ParameterError, construct
from .documents import DocumentError, dumps_profile, dumps_trajectory, load_profile, read_trajectory, save_profile
from .dynamics import GS, PF, PhaseState, StepError, orbit
from .numeric import EXACT, FLOAT, convert, format_scalar, parse_scalar
from .verification import check_escape, check_feasibility, verify_instance

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _rational(text):
    try:
        return parse_scalar(text, EXACT)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _sweep_item(text):
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"sweep entries look like g:delta[:w_scale], got {text!r}")
    w = 1
    if len(parts) == 3:
        try:
            w = int(parts[2])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad w_scale in {text!r}") from None
    return _rational(parts[0]), _rational(parts[1]), w


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bounce-escape", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build the blueprint and plate profile")
    c.add_argument("--g", type=_rational, help="gravity, as p/q or decimal")
    c.add_argument("--delta", type=_rational, help="derivative bound, 0 < delta < g/4")
    c.add_argument("--w-scale", type=int, default=1)
    c.add_argument("--out", default="profile.json", help="profile path, or a directory with --sweep")
    c.add_argument("--sweep", nargs="+", type=_sweep_item, metavar="G:DELTA[:W]",
                   help="construct several instances into the --out directory")

    s = sub.add_parser("simulate", help="iterate a bounce map from the stored initial condition")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--map", choices=("gs", "pf"), default="gs")
    s.add_argument("--mode", choices=(EXACT, FLOAT), default=EXACT)
    s.add_argument("--steps", type=int, default=30)
    s.add_argument("--tol", type=float, default=None, help="gap tolerance for --map pf (default 1e-12)")
    s.add_argument("--t0", type=_rational, default=None)
    s.add_argument("--v0", type=_rational, default=None)
    s.add_argument("--out", default="-")

    v = sub.add_parser("verify", help="run the check battery; exit 0 iff everything passes")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--trajectory", default=None)
    v.add_argument("--periods", type=int, default=50, help="cycles of the exact escape check")
    v.add_argument("--tol", type=float, default=1e-6, help="tolerance for float trajectories")
    v.add_argument("--out", default=None, help="also write the JSON report here")

    p = sub.add_parser("plot", help="write SVG figures")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--trajectory", default=None)
    p.add_argument("--out", default="plots")
    return parser


def _summary(blueprint) -> str:
    t0, v0 = blueprint.initial_state
    return (f"N={blueprint.N} V={blueprint.V} W={blueprint.W} eta={format_scalar(blueprint.eta)} "
            f"t1={format_scalar(blueprint.t[1])} initial=({format_scalar(t0)}, {format_scalar(v0)})")


def cmd_construct(args) -> int:
    if args.sweep:
        if args.g is not None or args.delta is not None:
            raise InputError("--sweep cannot be combined with --g/--delta")
        os.makedirs(args.out, exist_ok=True)
        for g, delta, w in args.sweep:
            blueprint, profile = construct(Parameters(g, delta, w))
            name = f"profile_g{format_scalar(g)}_d{format_scalar(delta)}_w{w}.json".replace("/", "-")
            path = os.path.join(args.out, name)
            save_profile(path, blueprint, profile)
            print(f"{path}: {_summary(blueprint)}")
        return EXIT_OK
    if args.g is None or args.delta is None:
        raise InputError("construct needs --g and --delta (or --sweep)")
    blueprint, profile = construct(Parameters(args.g, args.delta, args.w_scale))
    if args.out == "-":
        sys.stdout.write(dumps_profile(blueprint, profile))
    else:
        save_profile(args.out, blueprint, profile)
        print(_summary(blueprint))
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.map == "gs" and args.tol is not None:
        raise InputError("--tol only applies to --map pf")
    if args.steps < 0:
        raise InputError("--steps must be non-negative")
    blueprint, profile = load_profile(args.input)
    t0, v0 = blueprint.initial_state
    if args.t0 is not None:
        t0 = args.t0
    if args.v0 is not None:
        v0 = args.v0
    if v0 <= 0:
        raise InputError("initial velocity must be positive")
    state = PhaseState(convert(t0, args.mode), convert(v0, args.mode))
    tol = 1e-12 if args.tol is None else args.tol
    try:
        traj = orbit(profile, state, PF if args.map == "pf" else GS, args.steps, tol)
    except StepError as exc:
        print(f"simulation failed at step {exc.index}: {exc.cause}", file=sys.stderr)
        return EXIT_FAIL
    text = dumps_trajectory(traj, profile.g)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    blueprint, profile = load_profile(args.input)
    report = verify_instance(blueprint, profile, periods=args.periods)
    if args.trajectory:
        with open(args.trajectory, encoding="utf-8") as fh:
            traj = read_trajectory(fh)
        traj.profile = profile
        if len(traj) < 2 * blueprint.N + 1:
            raise InputError(f"trajectory needs at least {2 * blueprint.N + 1} states")
        escape = check_escape(traj, blueprint.N, blueprint.V, profile.g, tolerance=args.tol)
        for item in escape.items:
            item.id = "trajectory." + item.id
        report.extend(escape)
        feas = check_feasibility(profile, traj)
        for item in feas.items:
            item.id = "trajectory." + item.id
        report.extend(feas)
    print(report.summary())
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.to_text() + "\n")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_plot(args) -> int:
    from .plotting import plot_all

    _, profile = load_profile(args.input)
    traj = None
    if args.trajectory:
        with open(args.trajectory, encoding="utf-8") as fh:
            traj = read_trajectory(fh)
    for path in plot_all(profile, args.out, traj):
        print(path)
    return EXIT_OK


COMMANDS = {"construct": cmd_construct, "simulate": cmd_simulate, "verify": cmd_verify, "plot": cmd_plot}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InputError, DocumentError, ParameterError, CollisionError, ConstructionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
