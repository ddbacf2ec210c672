import argparse
import logging
import sys

from dampedbouncer.classical.estimation import PARAMETER_MAX, estimate_alpha, estimate_gamma, estimation_residual
from dampedbouncer.classical.quantities import LAWS, LINEAR
from dampedbouncer.commands.options import add_output_arguments, add_system_arguments, system_from_args
from dampedbouncer.common.utils import write_csv, write_json, write_meta

ESTIMATE_FIELDS = ['law', 'parameter', 'value', 'residual']


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_system_arguments(parser)
    parser.add_argument('--law', choices=list(LAWS), required=True)
    parser.add_argument('--v0', type=float, required=True, help="launch speed at the wall")
    parser.add_argument('--xmax', type=float, required=True, help="measured apex height")
    parser.add_argument('--max-parameter', type=float, required=False, default=PARAMETER_MAX)
    add_output_arguments(parser)


def run(args: argparse.Namespace) -> int:
    sys_ = system_from_args(args)
    if args.law == LINEAR:
        name, value = "alpha", estimate_alpha(args.v0, args.xmax, sys_, args.max_parameter)
    else:
        name, value = "gamma", estimate_gamma(args.v0, args.xmax, sys_, args.max_parameter)
    residual = estimation_residual(args.law, args.v0, args.xmax, value, sys_)
    logging.info(f"Recovered {name}={value!r}, apex residual {residual:.3e}")

    row = {'law': args.law, 'parameter': name, 'value': value, 'residual': residual}
    if args.format == "json":
        write_json(args.out, row)
    else:
        write_csv(args.out, ESTIMATE_FIELDS, [row])

    write_meta(args.out, sys.argv, {'command': 'estimate', 'system': sys_.as_dict()})

    return 0
