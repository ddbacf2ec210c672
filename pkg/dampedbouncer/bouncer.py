import argparse
import logging
import os
import sys

sys.path.append(os.path.join(os.path.dirname(os.path.abspath(__file__)), ".."))

from dampedbouncer import __version__
from dampedbouncer.commands import classical, elements, estimate, spectrum, verify
from dampedbouncer.common.errors import BouncerError
from dampedbouncer.common.utils import setup_logging

commands = {
    "spectrum": (spectrum, "second-order levels for the K and H quantization routes"),
    "classical": (classical, "integrate the damped classical bouncer"),
    "estimate": (estimate, "recover alpha or gamma from a launch speed and an apex height"),
    "elements": (elements, "dump Airy-basis matrix element tables"),
    "verify": (verify, "run the oracle checks"),
}


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="dampedbouncer")
    parser.add_argument('--version', action="version", version=f"%(prog)s {__version__}")
    parser.add_argument('-v', '--verbose', action="store_true")
    parser.add_argument('--log-file', type=str, required=False, default=None)

    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (module, description) in commands.items():
        subparser = subparsers.add_parser(name, help=description, description=description)
        module.add_arguments(subparser)
        subparser.set_defaults(handler=module.run)

    return parser.parse_args(argv)


def main(args: argparse.Namespace) -> int:
    setup_logging(args.verbose, args.log_file)

    try:
        return args.handler(args)
    except BouncerError as e:
        logging.error(str(e))
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main(parse_args()))
