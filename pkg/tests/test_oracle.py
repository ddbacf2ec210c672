import math

import numpy as np
import pytest

from dampedbouncer.airy import get_basis
from dampedbouncer.classical.quantities import LINEAR, QUADRATIC, Branch
from dampedbouncer.common.errors import ConfigError
from dampedbouncer.elements.perturbation import H_ROUTE, K_ROUTE
from dampedbouncer.oracle.diagonalization import diagonalize_quadratic, match_levels, operator_matrix
from dampedbouncer.oracle.quadrature_elements import apply_word, element_by_quadrature
from dampedbouncer.oracle.second_order import operator_series, second_order_by_elements
from dampedbouncer.spectra.spectrum import energy_level


def test_apply_word_uses_airy_equation():
    p, q = apply_word((("d", 1),), 1.5)
    assert p(2.0) == 0.0 and q(2.0) == 1.0
    p, q = apply_word((("d", 2),), 1.5)
    assert p(2.0) == pytest.approx(0.5) and q(2.0) == 0.0
    p, q = apply_word((("z", 1), ("d", 1)), 1.5)
    assert p(2.0) == 0.0 and q(2.0) == pytest.approx(2.0)


def test_symmetric_words_by_quadrature(basis):
    # d z + z d = 2 z d + 1 and <1|z d|1> = -1/2
    value = element_by_quadrature("d z + z d", 1, 1, basis)
    assert abs(value) < 1e-9, f"<1|dz + zd|1> = {value!r}"
    assert element_by_quadrature("z d", 2, 2, basis) == pytest.approx(-0.5, abs=1e-9)


def test_linear_operator_series_prefactors():
    k = operator_series(K_ROUTE, LINEAR)
    h = operator_series(H_ROUTE, LINEAR)
    assert k.order1[0][0] == pytest.approx(1j * -2.0 * math.sqrt(2.0) / 3.0)
    assert h.order1[0][0] == pytest.approx(1j * math.sqrt(2.0) / 3.0)
    assert k.order2[0][0] == pytest.approx(1.0)
    assert h.order2[0][0] == pytest.approx(1.0 / 6.0)
    with pytest.raises(ConfigError):
        operator_series(K_ROUTE, QUADRATIC)


@pytest.mark.parametrize("route,law,parameter,branch", [
    (K_ROUTE, QUADRATIC, 0.01, Branch.UP),
    (H_ROUTE, QUADRATIC, 0.01, Branch.DOWN),
    (K_ROUTE, LINEAR, 0.02, None),
    (H_ROUTE, LINEAR, 0.02, None),
])
def test_second_order_matches_closed_forms(normalized, route, law, parameter, branch):
    for n in (1, 2):
        oracle = second_order_by_elements(route, law, n, parameter, normalized, 40, branch)
        closed = energy_level(route, n, law, parameter, normalized, branch, basis_size=40)
        assert closed.shift1 == pytest.approx(oracle.shift1, rel=1e-8, abs=1e-14)
        assert closed.shift2 == pytest.approx(oracle.shift2, rel=1e-8), \
            f"{route}-{law} n={n}: closed {closed.shift2!r} vs quadrature {oracle.shift2!r}"


def test_second_order_oracle_needs_large_basis(normalized):
    with pytest.raises(ConfigError):
        second_order_by_elements(K_ROUTE, LINEAR, 1, 0.02, normalized, 20)


def test_diagonalization_without_dissipation(normalized):
    report = diagonalize_quadratic(K_ROUTE, 0.0, Branch.UP, 40, normalized, [1, 2, 3])
    np.testing.assert_allclose(report.eigenvalues, get_basis(40).zeros, rtol=1e-14)
    for n in (1, 2, 3):
        entry = report.comparison(n)
        assert entry.overlap == pytest.approx(1.0)
        assert not entry.ambiguous
        assert abs(entry.deviation) < 1e-12
    assert report.as_dict()['branch'] == "up"
    with pytest.raises(ConfigError):
        report.comparison(4)


def test_operator_matrix_is_symmetric():
    matrix = operator_matrix(H_ROUTE, 0.003, Branch.DOWN, 40)
    np.testing.assert_allclose(matrix, matrix.T, atol=1e-12)


def test_match_levels():
    vectors = np.array([[0.1, 0.995], [0.995, -0.1]])
    assert match_levels(vectors, [1, 2]) == [(1, 0.995), (0, 0.995)]


@pytest.mark.parametrize("route", [K_ROUTE, H_ROUTE])
def test_residual_is_third_order(normalized, route):
    levels = [1, 2, 3]
    full = diagonalize_quadratic(route, 0.004, Branch.UP, 120, normalized, levels)
    half = diagonalize_quadratic(route, 0.002, Branch.UP, 120, normalized, levels)
    for n in levels:
        ratio = full.comparison(n).deviation / half.comparison(n).deviation
        assert 6.0 <= ratio <= 10.0, f"{route} n={n}: halving ratio {ratio:.3f} outside [6, 10]"


def test_ground_level_basis_drift(normalized):
    small = diagonalize_quadratic(K_ROUTE, 0.005, Branch.UP, 120, normalized, [1])
    large = diagonalize_quadratic(K_ROUTE, 0.005, Branch.UP, 240, normalized, [1])
    drift = large.comparison(1).eigenvalue - small.comparison(1).eigenvalue
    assert abs(drift) < 1e-6, f"ground level drift {drift:.3e}"
    assert drift <= 1e-12


def test_diagonalization_validation(normalized):
    with pytest.raises(ConfigError):
        diagonalize_quadratic(K_ROUTE, 0.01, Branch.UP, 20, normalized)
    with pytest.raises(ConfigError):
        diagonalize_quadratic("L", 0.01, Branch.UP, 40, normalized)
