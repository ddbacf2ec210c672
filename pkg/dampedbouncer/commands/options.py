import argparse

from dampedbouncer.classical.quantities import LAWS, LINEAR, QUADRATIC, Branch
from dampedbouncer.common.errors import ConfigError
from dampedbouncer.common.system_configs import PhysicalSystem, get_system_instance, system_presets

OUTPUT_FORMATS = ("csv", "json")


def add_system_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("physical system")
    group.add_argument('--normalized', action="store_true", help="m = g = l_g = 1, hbar = sqrt(2) (default)")
    group.add_argument('--system', choices=list(system_presets.keys()), required=False, default=None)
    group.add_argument('--m', type=float, required=False, default=None)
    group.add_argument('--g', type=float, required=False, default=None)
    group.add_argument('--hbar', type=float, required=False, default=None)


def system_from_args(args: argparse.Namespace) -> PhysicalSystem:
    explicit = [value is not None for value in (args.m, args.g, args.hbar)]
    if any(explicit):
        if not all(explicit):
            raise ConfigError("Physical units need all three of --m, --g and --hbar.")
        if args.normalized or args.system is not None:
            raise ConfigError("--m/--g/--hbar cannot be combined with --normalized or --system.")
        return PhysicalSystem(args.m, args.g, args.hbar)

    if args.system is not None:
        if args.normalized and args.system != "normalized":
            raise ConfigError(f"--normalized conflicts with --system {args.system}.")
        return get_system_instance(args.system)

    return PhysicalSystem.normalized()


def add_law_arguments(parser: argparse.ArgumentParser, branch: bool = False) -> None:
    parser.add_argument('--law', choices=list(LAWS), required=True)
    parser.add_argument('--alpha', type=float, required=False, default=None, help="linear drag coefficient")
    parser.add_argument('--gamma', type=float, required=False, default=None, help="quadratic drag coefficient")
    if branch:
        parser.add_argument('--branch', choices=[b.value for b in Branch], required=False, default=None)


def parameter_from_args(args: argparse.Namespace) -> float:
    """The dissipation parameter matching --law; the other one must be absent."""
    wanted, other = ('alpha', 'gamma') if args.law == LINEAR else ('gamma', 'alpha')
    if getattr(args, other) is not None:
        raise ConfigError(f"--{other} does not apply to the {args.law} law; use --{wanted}.")
    value = getattr(args, wanted)
    if value is None:
        raise ConfigError(f"The {args.law} law needs --{wanted}.")
    if value < 0:
        raise ConfigError(f"--{wanted} must be >= 0, got {value}.")

    return value


def branch_from_args(args: argparse.Namespace) -> Branch | None:
    if args.law == QUADRATIC:
        return Branch(args.branch) if args.branch is not None else Branch.UP
    if args.branch is not None:
        raise ConfigError("--branch only applies to the quadratic law.")
    return None


def add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--out', type=str, required=False, default=None, help="output file (default: stdout)")
    parser.add_argument('--format', choices=list(OUTPUT_FORMATS), required=False, default="csv")
