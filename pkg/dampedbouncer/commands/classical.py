import argparse
import logging
import sys

from dampedbouncer.classical.integrator import integrate
from dampedbouncer.classical.phase_space import find_phase_crossings
from dampedbouncer.classical.quantities import EXACT, FORMULATIONS, QUADRATIC, DissipationSpec
from dampedbouncer.commands.options import add_law_arguments, add_output_arguments, add_system_arguments, \
    parameter_from_args, system_from_args
from dampedbouncer.common.errors import ConfigError
from dampedbouncer.common.utils import format_float, write_csv, write_json, write_meta
from dampedbouncer.formatters.formatters import BOUNCE_FIELDS, TRAJECTORY_FIELDS, bounce_rows


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_system_arguments(parser)
    add_law_arguments(parser)
    parser.add_argument('--formulation', choices=list(FORMULATIONS), required=False, default=EXACT)
    parser.add_argument('--x0', type=float, required=False, default=0.0)
    parser.add_argument('--v0', type=float, required=True)
    parser.add_argument('--cycles', type=int, required=False, default=None, help="stop after this many bounces")
    parser.add_argument('--t-end', type=float, required=False, default=None)
    parser.add_argument('--dt', type=float, required=False, default=None)
    parser.add_argument('--summary', type=str, required=False, default=None, help="bounce summary CSV path")
    parser.add_argument('--crossing-gamma', type=float, required=False, default=None,
                        help="second quadratic drag coefficient whose first ascending arc is intersected")
    add_output_arguments(parser)


def _log_crossings(trajectory, args: argparse.Namespace, sys_) -> None:
    if args.crossing_gamma is None:
        return
    if args.law != QUADRATIC:
        raise ConfigError("--crossing-gamma only applies to the quadratic law.")
    other = integrate(args.x0, args.v0, DissipationSpec(QUADRATIC, args.crossing_gamma, args.formulation), sys_,
                      max_bounces=1)
    for space in ("xv", "xp"):
        crossings = find_phase_crossings(trajectory, other, space)
        points = ", ".join(f"({format_float(x)}, {format_float(y)})" for x, y in crossings) or "none"
        logging.info(f"Crossings in ({space[0]}, {space[1]}) with gamma={args.crossing_gamma}: {points}")


def run(args: argparse.Namespace) -> int:
    sys_ = system_from_args(args)
    parameter = parameter_from_args(args)
    if args.cycles is None and args.t_end is None:
        raise ConfigError("Give --cycles or --t-end.")
    if args.cycles is not None and args.cycles < 1:
        raise ConfigError(f"--cycles must be >= 1, got {args.cycles}.")

    spec = DissipationSpec(args.law, parameter, args.formulation)
    trajectory = integrate(args.x0, args.v0, spec, sys_, t_end=args.t_end, dt=args.dt, max_bounces=args.cycles)
    logging.info(f"Apex heights: {', '.join(format_float(x) for x in trajectory.apex_heights)}")
    logging.info(f"Largest relative drift of the constant of motion on one arc: {trajectory.arc_drift():.3e}")
    _log_crossings(trajectory, args, sys_)

    # the analytic map starts from a launch at the wall
    launch = abs(args.v0) if args.x0 == 0.0 else 0.0
    summary = bounce_rows(trajectory, launch)

    if args.format == "json":
        write_json(args.out, {'spec': {'law': spec.law, 'parameter': parameter, 'formulation': spec.formulation},
                              'trajectory': trajectory.rows(), 'bounces': summary})
    else:
        write_csv(args.out, TRAJECTORY_FIELDS, trajectory.rows())
    if args.summary is not None:
        write_csv(args.summary, BOUNCE_FIELDS, summary)

    write_meta(args.out, sys.argv, {'command': 'classical', 'system': sys_.as_dict()})

    return 0
