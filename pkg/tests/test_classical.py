import math

import numpy as np
import pytest

from dampedbouncer.classical.bounce_maps import bounce_map_linear, bounce_map_quadratic, bounce_sequence
from dampedbouncer.classical.estimation import estimate_alpha, estimate_gamma, estimation_residual
from dampedbouncer.classical.integrator import integrate
from dampedbouncer.classical.phase_space import CROSSING_PAIR, apex_ordering, find_phase_crossings
from dampedbouncer.classical.quantities import EXACT, FORMULATIONS, LAWS, LINEAR, QUADRATIC, SERIES, SERIES_SWITCH, \
    Branch, DissipationSpec, constant_of_motion, h_linear, h_quadratic, k_linear, k_quadratic, l_linear, l_quadratic, \
    lagrangian, momentum, p_linear, p_quadratic, v_linear
from dampedbouncer.common.errors import ConfigError, ConvergenceError, DomainError
from dampedbouncer.verifiers.classical_verifier import LEGENDRE_RTOL, LEGENDRE_SERIES_BOUND, legendre_residuals, \
    series_halving_ratios

X_MAX_QUADRATIC = 0.4765508990216243


def test_linear_constant_of_motion(normalized):
    value = k_linear(0.0, 1.0, 0.1, normalized)
    expected = 100.0 * (0.1 - math.log(1.1))
    assert abs(value - expected) < 1e-12, f"K_alpha(0, 1) = {value!r}, expected {expected!r}"
    assert abs(value - 0.468982) < 1e-6


def test_linear_momentum_and_inverse(normalized):
    p = p_linear(1.0, 0.1, normalized)
    assert abs(p - 10.0 * math.log(1.1)) < 1e-12, f"p_alpha(1) = {p!r}"
    assert abs(v_linear(p, 0.1, normalized) - 1.0) < 1e-12


def test_linear_series_switch_is_continuous(normalized):
    # w = alpha v / (m g) just below and above the switch
    below = k_linear(0.0, 1.0, 0.0099, normalized)
    above = k_linear(0.0, 1.0, 0.0101, normalized)
    assert 0.0 < above < below < 0.5
    assert abs(k_linear(0.0, 1.0, 0.0, normalized) - 0.5) < 1e-15


def test_linear_terminal_velocity_is_rejected(normalized):
    with pytest.raises(DomainError):
        k_linear(0.0, -20.0, 0.1, normalized)


def test_hamiltonian_matches_constant_of_motion(normalized):
    for v in (0.7, -0.4):
        p = p_linear(v, 0.2, normalized)
        assert h_linear(0.3, p, 0.2, normalized) == pytest.approx(k_linear(0.3, v, 0.2, normalized), rel=1e-12)

        branch = Branch.for_velocity(v)
        p = p_quadratic(0.3, v, 0.2, branch, normalized)
        h = h_quadratic(0.3, p, 0.2, branch, normalized)
        assert h == pytest.approx(k_quadratic(0.3, v, 0.2, branch, normalized), rel=1e-12)


def test_quadratic_branch_must_match_velocity(normalized):
    with pytest.raises(DomainError):
        k_quadratic(0.1, -0.5, 0.1, Branch.UP, normalized)
    with pytest.raises(DomainError):
        p_quadratic(0.1, 0.5, 0.1, Branch.DOWN, normalized)


def test_dissipation_spec_validation():
    with pytest.raises(ConfigError):
        DissipationSpec("cubic", 0.1)
    with pytest.raises(ConfigError):
        DissipationSpec(LINEAR, -0.1)
    with pytest.raises(ConfigError):
        DissipationSpec(LINEAR, 0.1, branch=Branch.UP)
    assert DissipationSpec(QUADRATIC, 0.1, branch="down").branch is Branch.DOWN


def test_series_is_second_order():
    for law in (LINEAR, QUADRATIC):
        for name, ratios in series_halving_ratios(law, 30).items():
            assert np.all((ratios > 6.0) & (ratios < 10.0)), \
                f"{law} {name}: halving ratios {ratios.min():.3f}..{ratios.max():.3f} outside [6, 10]"


def test_series_formulation_at_zero_parameter(normalized):
    exact = k_linear(0.2, 0.5, 0.0, normalized, EXACT)
    assert k_linear(0.2, 0.5, 0.0, normalized, SERIES) == pytest.approx(exact, rel=1e-15)
    assert p_quadratic(0.2, 0.5, 0.0, Branch.UP, normalized, SERIES) == pytest.approx(0.5, rel=1e-15)


def test_quadratic_bounce_map(normalized):
    x_max, v1 = bounce_map_quadratic(1.0, 0.1, normalized)
    assert abs(x_max - X_MAX_QUADRATIC) < 1e-14, f"x_max = {x_max!r}, expected {X_MAX_QUADRATIC!r}"
    assert abs(v1 - 1.0 / math.sqrt(1.1)) < 1e-14


def test_conservative_bounce_maps(normalized):
    assert bounce_map_linear(1.0, 0.0, normalized) == (0.5, 1.0)
    x_max, v1 = bounce_map_quadratic(1.0, 0.0, normalized)
    assert x_max == 0.5 and v1 == 1.0


def test_linear_bounce_map_return_speed(normalized):
    x_max, v1 = bounce_map_linear(1.0, 0.2, normalized)
    assert 0.0 < v1 < 1.0
    assert k_linear(0.0, -v1, 0.2, normalized) == pytest.approx(x_max, rel=1e-10)


def test_bounce_map_rejects_bad_launch(normalized):
    for v0 in (0.0, -1.0, math.nan):
        with pytest.raises(DomainError):
            bounce_map_quadratic(v0, 0.1, normalized)


def test_conservative_integration(normalized):
    trajectory = integrate(0.0, 1.0, DissipationSpec(LINEAR, 0.0), normalized, max_bounces=3)
    assert len(trajectory.bounces) == 3
    for apex in trajectory.apex_heights:
        assert abs(apex - 0.5) < 1e-8, f"conservative apex {apex!r}, expected 0.5"


@pytest.mark.parametrize("law", [LINEAR, QUADRATIC])
@pytest.mark.parametrize("parameter", [0.05, 0.2])
def test_integrator_conserves_and_matches_bounce_map(normalized, law, parameter):
    spec = DissipationSpec(law, parameter)
    trajectory = integrate(0.0, 1.0, spec, normalized, max_bounces=4)
    assert trajectory.arc_drift() < 1e-8, f"drift {trajectory.arc_drift():.3e}"

    expected = [x_max for x_max, _ in bounce_sequence(1.0, spec, normalized, 4)]
    np.testing.assert_allclose(trajectory.apex_heights[:4], expected, rtol=1e-6)


def test_integrator_rejects_bad_input(normalized):
    spec = DissipationSpec(LINEAR, 0.1)
    with pytest.raises(DomainError):
        integrate(-0.1, 1.0, spec, normalized, max_bounces=1)
    with pytest.raises(ConfigError):
        integrate(0.0, 1.0, spec, normalized)
    with pytest.raises(DomainError):
        integrate(0.0, 0.0, spec, normalized, max_bounces=1)


def test_parameter_estimation_round_trip(normalized):
    gamma = estimate_gamma(1.0, X_MAX_QUADRATIC, normalized)
    assert abs(gamma - 0.1) < 1e-8, f"recovered gamma {gamma!r}, expected 0.1"

    for alpha in (0.005, 0.1, 0.4):
        x_max, _ = bounce_map_linear(1.0, alpha, normalized)
        recovered = estimate_alpha(1.0, x_max, normalized)
        assert recovered == pytest.approx(alpha, rel=1e-8)
        assert abs(estimation_residual(LINEAR, 1.0, x_max, recovered, normalized)) < 1e-10


def test_estimation_without_root(normalized):
    for x_max in (0.5, 0.7, 0.0):
        with pytest.raises(DomainError):
            estimate_gamma(1.0, x_max, normalized)


def test_phase_crossings_only_in_momentum(normalized):
    gamma_a, gamma_b = CROSSING_PAIR
    traj_a = integrate(0.0, 1.0, DissipationSpec(QUADRATIC, gamma_a), normalized, max_bounces=1)
    traj_b = integrate(0.0, 1.0, DissipationSpec(QUADRATIC, gamma_b), normalized, max_bounces=1)

    crossings = find_phase_crossings(traj_a, traj_b, "xp")
    assert len(crossings) == 1, f"(x, p) crossings: {crossings}"
    assert 0.3 < crossings[0][0] < 0.4

    assert find_phase_crossings(traj_a, traj_b, "xv") == []

    with pytest.raises(ConfigError):
        find_phase_crossings(traj_a, traj_b, "vp")


def test_apex_ordering(normalized):
    apexes_a, apexes_b = apex_ordering(1.0, 0.1, 0.3, normalized, cycles=5)
    assert all(a > b for a, b in zip(apexes_a, apexes_b))
    assert all(later < earlier for earlier, later in zip(apexes_a, apexes_a[1:]))


@pytest.mark.parametrize("v", [1.0, -1.0])
def test_linear_series_branch_matches_closed_form(normalized, v):
    # |w| = 0.00999 sits just inside the power-series branch
    alpha = 0.00999
    w = alpha * v
    closed = (1.0 / alpha) ** 2 * (w - math.log1p(w))
    assert abs(w) < SERIES_SWITCH
    assert k_linear(0.0, v, alpha, normalized) == pytest.approx(closed, rel=1e-12)
    assert p_linear(v, alpha, normalized) == pytest.approx(math.log1p(w) / alpha, rel=1e-12)


@pytest.mark.parametrize("law", LAWS)
@pytest.mark.parametrize("formulation", FORMULATIONS)
def test_legendre_consistency(law, formulation):
    residuals, eps = legendre_residuals(law, formulation)
    assert len(residuals) == 1000
    if formulation == EXACT:
        assert residuals.max() < LEGENDRE_RTOL, f"{law}: max |H(x, p) - K| / |K| = {residuals.max():.3e}"
    else:
        scaled = residuals / eps ** 3
        assert scaled.max() < LEGENDRE_SERIES_BOUND, f"{law}: max residual / eps^3 = {scaled.max():.3f}"


def test_dispatchers_follow_the_dissipation_law(normalized):
    spec = DissipationSpec(LINEAR, 0.2)
    assert lagrangian(0.3, 0.7, spec, normalized) == l_linear(0.3, 0.7, 0.2, normalized)
    assert constant_of_motion(0.3, -0.4, spec, normalized) == k_linear(0.3, -0.4, 0.2, normalized)

    spec = DissipationSpec(QUADRATIC, 0.2, SERIES)
    assert lagrangian(0.3, -0.4, spec, normalized) == l_quadratic(0.3, -0.4, 0.2, Branch.DOWN, normalized, SERIES)
    # the apex velocity takes either branch through the override
    assert momentum(0.3, 0.0, spec, normalized, Branch.DOWN) == 0.0
    assert constant_of_motion(0.3, 0.0, spec, normalized, Branch.DOWN) \
        == k_quadratic(0.3, 0.0, 0.2, Branch.DOWN, normalized, SERIES)

    with pytest.raises(DomainError):
        constant_of_motion(0.3, 0.5, DissipationSpec(QUADRATIC, 0.2, branch=Branch.DOWN), normalized)


@pytest.mark.parametrize("law", LAWS)
def test_integrator_records_dispatched_observables(normalized, law):
    spec = DissipationSpec(law, 0.1)
    trajectory = integrate(0.0, 1.0, spec, normalized, max_bounces=1)
    assert trajectory.conserved[0] == pytest.approx(constant_of_motion(0.0, 1.0, spec, normalized), rel=1e-15)
    assert trajectory.p[0] == pytest.approx(momentum(0.0, 1.0, spec, normalized), rel=1e-15)

    descending = np.flatnonzero(trajectory.v < -0.1)[0]
    x, v = trajectory.x[descending], trajectory.v[descending]
    assert trajectory.conserved[descending] == pytest.approx(constant_of_motion(x, v, spec, normalized), rel=1e-15)


def test_estimate_alpha_without_finite_root(normalized):
    # K_alpha(0, 1) / (m g) stays near 1e-6 even at alpha = 1e6
    with pytest.raises(ConvergenceError):
        estimate_alpha(1.0, 1e-9, normalized)
