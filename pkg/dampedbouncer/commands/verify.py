import argparse
import logging
import sys

from dampedbouncer.common.errors import ConfigError, VerificationFailure
from dampedbouncer.common.utils import write_json, write_meta
from dampedbouncer.foundation.verifier.verifier import Verifier
from dampedbouncer.verifiers.airy_verifier import AiryVerifier
from dampedbouncer.verifiers.appendix_verifier import AppendixVerifier
from dampedbouncer.verifiers.classical_verifier import ClassicalVerifier
from dampedbouncer.verifiers.spectrum_verifier import SpectrumVerifier

verifier_suites = {
    "airy": AiryVerifier,
    "appendix": AppendixVerifier,
    "classical": ClassicalVerifier,
    "spectrum": SpectrumVerifier,
}


def get_verifier_instance(suite: str) -> Verifier:
    if suite in verifier_suites:
        return verifier_suites[suite]()

    raise ConfigError(f"Verifier suite `{suite}` not supported!")


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--quick', action="store_true", help="reduced sizes (n, k <= 6, fewer levels)")
    parser.add_argument('--suites', choices=list(verifier_suites.keys()), nargs='+', required=False,
                        default=list(verifier_suites.keys()))
    parser.add_argument('--out', type=str, required=False, default=None, help="JSON report (default: stdout)")


def run(args: argparse.Namespace) -> int:
    records = []
    errata = {}
    for suite in args.suites:
        logging.info(f"Running `{suite}` checks{' (quick)' if args.quick else ''}...")
        verifier = get_verifier_instance(suite)
        records.extend(verifier.run(args.quick))
        if isinstance(verifier, AppendixVerifier):
            errata = verifier.errata

    failed = [record for record in records if not record.ok]
    report = {
        'checks': [record.as_dict() for record in records],
        'errata': errata,
        'summary': {'total': len(records), 'passed': len(records) - len(failed), 'failed': len(failed)},
    }
    write_json(args.out, report)
    write_meta(args.out, sys.argv, {'command': 'verify'})

    if failed:
        names = ", ".join(f"{record.suite}/{record.name}" for record in failed)
        raise VerificationFailure(f"{len(failed)} of {len(records)} checks failed: {names}")

    logging.info(f"All {len(records)} checks passed.")

    return 0
