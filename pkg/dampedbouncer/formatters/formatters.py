from dampedbouncer.classical.bounce_maps import bounce_sequence
from dampedbouncer.classical.integrator import Trajectory
from dampedbouncer.spectra.spectrum import RouteComparison, SpectrumResult

SPECTRUM_FIELDS = ['n', 'E0', 'shift1', 'shift2', 'E_total', 'tail_estimate', 'terms_used']
COMPARE_FIELDS = ['n', 'E0', 'E_K', 'E_H', 'delta_E', 'delta_E_printed', 'printed_matches']
TRAJECTORY_FIELDS = ['t', 'x', 'v', 'p', 'K_or_H', 'arc', 'branch']
BOUNCE_FIELDS = ['cycle', 't_bounce', 'v_bounce', 'x_max', 't_apex', 'map_x_max', 'map_v']
ELEMENT_FIELDS = ['name', 'n', 'k', 'value']
ELEMENT_QUADRATURE_FIELDS = ELEMENT_FIELDS + ['quadrature', 'abs_error']


def spectrum_fields(multi_route: bool) -> list[str]:
    return (['route'] if multi_route else []) + SPECTRUM_FIELDS


def spectrum_rows(results: list[SpectrumResult]) -> list[dict]:
    multi_route = len(results) > 1
    rows = []
    for result in results:
        for row in result.rows():
            rows.append({'route': result.route, **row} if multi_route else row)
    return rows


def spectrum_document(results: list[SpectrumResult], comparisons: list[RouteComparison] | None = None) -> dict:
    document = {
        'spectra': [{'header': result.header(), 'levels': result.rows()} for result in results],
    }
    if comparisons is not None:
        document['comparison'] = comparison_rows(comparisons)
    return document


def comparison_rows(comparisons: list[RouteComparison]) -> list[dict]:
    return [comparison.row() for comparison in comparisons]


def bounce_rows(trajectory: Trajectory, v0: float) -> list[dict]:
    """One row per cycle: integrator wall hit and apex next to the analytic bounce map."""
    cycles = min(len(trajectory.apexes), max(len(trajectory.bounces), 1))
    expected = bounce_sequence(v0, trajectory.spec, trajectory.sys, cycles) if v0 > 0 else []
    rows = []
    for i in range(cycles):
        bounce = trajectory.bounces[i] if i < len(trajectory.bounces) else None
        apex = trajectory.apexes[i]
        rows.append({
            'cycle': i + 1,
            't_bounce': None if bounce is None else bounce.t,
            'v_bounce': None if bounce is None else bounce.speed,
            'x_max': apex.x,
            't_apex': apex.t,
            'map_x_max': expected[i][0] if i < len(expected) else None,
            'map_v': expected[i][1] if i < len(expected) else None,
        })
    return rows
