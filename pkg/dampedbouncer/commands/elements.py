import argparse
import logging
import sys

from dampedbouncer.airy import get_basis
from dampedbouncer.commands.options import add_output_arguments
from dampedbouncer.common.errors import ConfigError
from dampedbouncer.common.utils import thread_count, write_csv, write_json, write_meta
from dampedbouncer.elements.catalog import CATALOGS, FAMILIES, VERIFIED
from dampedbouncer.elements.perturbation import ROUTES
from dampedbouncer.elements.table import build_table
from dampedbouncer.formatters.formatters import ELEMENT_FIELDS, ELEMENT_QUADRATURE_FIELDS
from dampedbouncer.oracle.quadrature_elements import FAMILY_DESCRIPTORS, quadrature_table
from dampedbouncer.spectra.spectrum import DERIVED, PRINTED, a_nk


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--families', choices=list(FAMILIES), nargs='+', required=False, default=list(FAMILIES))
    parser.add_argument('--size', type=int, required=False, default=10, help="table size N (n, k = 1..N)")
    parser.add_argument('--catalog', choices=list(CATALOGS), required=False, default=VERIFIED)
    parser.add_argument('--quadrature', action="store_true", help="add quadrature values and their difference")
    parser.add_argument('--a-nk', action="store_true", help="append the quadratic second-order coefficients")
    add_output_arguments(parser)


def _a_nk_rows(size: int) -> list[dict]:
    zeros = get_basis(size).zeros
    rows = []
    variants = [("a_nk", "K", PRINTED)] + [(f"a_nk_{route}", route, DERIVED) for route in ROUTES]
    for name, route, formula in variants:
        for n in range(1, size + 1):
            for k in range(1, size + 1):
                if n != k:
                    rows.append({'name': name, 'n': n, 'k': k, 'value': a_nk(n, k, zeros, route, formula)})
    return rows


def run(args: argparse.Namespace) -> int:
    if args.size < 2:
        raise ConfigError(f"--size must be >= 2, got {args.size}.")

    basis = get_basis(args.size)
    table = build_table(basis, args.size, args.catalog)
    rows = table.rows(args.families)
    fields = ELEMENT_FIELDS

    if args.quadrature:
        logging.info(f"Computing {len(args.families)} quadrature tables of size {args.size}...")
        threads = thread_count()
        reference = {name: quadrature_table(FAMILY_DESCRIPTORS[name], args.size, basis, threads) for name in args.families}
        for row in rows:
            value = reference[row['name']][row['n'] - 1, row['k'] - 1]
            row['quadrature'] = float(value)
            row['abs_error'] = abs(row['value'] - float(value))
        worst = max(rows, key=lambda r: r['abs_error'])
        logging.info(f"Largest closed form vs quadrature difference: {worst['abs_error']:.3e} "
                     f"at <{worst['n']}|{worst['name']}|{worst['k']}>")
        fields = ELEMENT_QUADRATURE_FIELDS

    if args.a_nk:
        rows += _a_nk_rows(args.size)

    if args.format == "json":
        write_json(args.out, {'catalog': args.catalog, 'size': args.size, 'elements': rows})
    else:
        write_csv(args.out, fields, rows)

    write_meta(args.out, sys.argv, {'command': 'elements'})

    return 0
