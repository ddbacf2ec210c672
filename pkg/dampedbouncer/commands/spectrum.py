import argparse
import logging
import sys

from dampedbouncer.commands.options import add_law_arguments, add_output_arguments, add_system_arguments, \
    branch_from_args, parameter_from_args, system_from_args
from dampedbouncer.common.errors import ConfigError
from dampedbouncer.common.utils import parse_level_range, thread_count, write_csv, write_json, write_meta
from dampedbouncer.elements.perturbation import ROUTES
from dampedbouncer.formatters.formatters import COMPARE_FIELDS, comparison_rows, spectrum_document, spectrum_fields, \
    spectrum_rows
from dampedbouncer.spectra.spectrum import BASIS_SIZE, DERIVED, FORMULAS, VALIDITY_GUARD, compare_routes, \
    compute_spectrum
from dampedbouncer.spectra.truncation import TAIL_TOLERANCE


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_system_arguments(parser)
    add_law_arguments(parser, branch=True)
    parser.add_argument('--route', choices=list(ROUTES) + ["both"], required=False, default="K")
    parser.add_argument('--levels', type=str, required=False, default="1", help="e.g. 3, 1..5 or 1,2,7")
    parser.add_argument('--basis-size', type=int, required=False, default=BASIS_SIZE)
    parser.add_argument('--tol', type=float, required=False, default=TAIL_TOLERANCE,
                        help="tail estimate tolerance relative to shift2")
    parser.add_argument('--guard', type=float, required=False, default=VALIDITY_GUARD,
                        help="largest |shift| / E0 accepted")
    parser.add_argument('--formula', choices=list(FORMULAS), required=False, default=DERIVED)
    parser.add_argument('--compare', action="store_true", help="add E^K, E^H and delta E columns")
    parser.add_argument('--strict', action="store_true", help="fail on non-converged sums")
    add_output_arguments(parser)


def run(args: argparse.Namespace) -> int:
    sys_ = system_from_args(args)
    parameter = parameter_from_args(args)
    branch = branch_from_args(args)
    levels = parse_level_range(args.levels)
    if levels[-1] > args.basis_size:
        raise ConfigError(f"Level n={levels[-1]} outside the basis of size {args.basis_size}.")
    if args.tol <= 0 or args.guard <= 0:
        raise ConfigError("--tol and --guard must be positive.")

    routes = list(ROUTES) if args.route == "both" else [args.route]
    compare = args.compare or args.route == "both"
    options = dict(
        basis_size=args.basis_size, formula=args.formula, tail_tol=args.tol, guard=args.guard, strict=args.strict,
    )
    threads = thread_count()

    logging.info(f"Computing {'/'.join(routes)} {args.law} spectrum for levels {levels}...")
    results = [
        compute_spectrum(route, levels, args.law, parameter, sys_, branch, threads=threads, **options)
        for route in routes
    ]
    comparisons = None
    if compare:
        comparisons = compare_routes(
            levels, args.law, parameter, branch, sys_, threads=threads,
            basis_size=args.basis_size, formula=args.formula, guard=args.guard, strict=args.strict,
        )

    pending = [f"{result.route}:{n}" for result in results for n, record in result.levels.items() if not record.converged]
    if pending:
        logging.warning(f"Partial sums reported for {', '.join(pending)}; tail_estimate holds the truncation error.")

    if args.format == "json":
        write_json(args.out, spectrum_document(results, comparisons))
    else:
        fields = spectrum_fields(len(results) > 1)
        rows = spectrum_rows(results)
        if comparisons is not None:
            extra = [field for field in COMPARE_FIELDS if field not in fields]
            by_level = {row['n']: row for row in comparison_rows(comparisons)}
            rows = [{**row, **{field: by_level[row['n']][field] for field in extra}} for row in rows]
            fields = fields + extra
        write_csv(args.out, fields, rows)

    write_meta(args.out, sys.argv, {'command': 'spectrum', 'system': sys_.as_dict()})

    return 0
