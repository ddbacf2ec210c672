import numpy as np
import pytest

from dampedbouncer.classical.quantities import LINEAR, QUADRATIC, Branch
from dampedbouncer.common.errors import ConfigError
from dampedbouncer.elements.catalog import FAMILIES, PRINTED, VERIFIED, element
from dampedbouncer.elements.perturbation import H_ROUTE, K_ROUTE, perturbation_matrix
from dampedbouncer.elements.table import build_table, get_table
from dampedbouncer.oracle.quadrature_elements import FAMILY_DESCRIPTORS, parse_descriptor, quadrature_table

Z_12 = 0.65318
Z3_11 = 6.27164


def test_diagonal_elements(verified_table):
    z = verified_table.zeros
    expected = {
        "one": np.ones_like(z),
        "z": 2 * z / 3,
        "z2": 8 * z ** 2 / 15,
        "z3": 3 / 7 + 48 * z ** 3 / 105,
        "d": np.zeros_like(z),
        "d2": -z / 3,
        "d3": np.full_like(z, 0.5),
        "d4": z ** 2 / 5,
        "zd": np.full_like(z, -0.5),
    }
    for name, diagonal in expected.items():
        np.testing.assert_allclose(np.diag(verified_table.family(name)), diagonal, rtol=1e-14, atol=1e-15,
                                   err_msg=f"diagonal of {name}")


def test_reference_values(verified_table):
    assert abs(verified_table.value("z", 1, 2) - Z_12) < 1e-5, f"<1|z|2> = {verified_table.value('z', 1, 2)}"
    assert abs(verified_table.value("z3", 1, 1) - Z3_11) < 1e-5, f"<1|z^3|1> = {verified_table.value('z3', 1, 1)}"
    assert element("z", 1, 2, verified_table.zeros) == pytest.approx(verified_table.value("z", 1, 2), rel=1e-15)


def test_reduction_identities(verified_table):
    zk = verified_table.zeros[None, :]
    eye = np.eye(verified_table.size)
    d, z, z2 = verified_table.d_pow(1), verified_table.z_pow(1), verified_table.z_pow(2)

    np.testing.assert_allclose(verified_table.d_pow(2), z - zk * eye, atol=1e-12)
    np.testing.assert_allclose(verified_table.d_pow(3), verified_table.zd + eye - zk * d, atol=1e-12)
    np.testing.assert_allclose(verified_table.d_pow(4), 2 * d + z2 - 2 * zk * z + zk ** 2 * eye, atol=1e-10)


def test_symmetries(verified_table):
    for name in ("one", "z", "z2", "z3", "d2", "d4"):
        matrix = verified_table.family(name)
        assert np.allclose(matrix, matrix.T, atol=1e-12), f"{name} should be symmetric"
    d = verified_table.d_pow(1)
    np.testing.assert_allclose(d, -d.T, atol=1e-15)
    zd = verified_table.zd
    np.testing.assert_allclose(zd + zd.T, -np.eye(verified_table.size), atol=1e-12)


def test_printed_catalog_agrees_where_verified(verified_table, printed_table):
    for name in ("one", "z", "z2", "d"):
        np.testing.assert_allclose(printed_table.family(name), verified_table.family(name), rtol=1e-14)
    for name in FAMILIES:
        np.testing.assert_allclose(np.diag(printed_table.family(name)), np.diag(verified_table.family(name)),
                                   rtol=1e-14, atol=1e-15)
    # the printed d^2 off-diagonal has the opposite sign
    assert printed_table.value("d2", 1, 2) == pytest.approx(-verified_table.value("d2", 1, 2), rel=1e-14)


def test_table_is_read_only(verified_table):
    with pytest.raises(ValueError):
        verified_table.family("z")[0, 0] = 1.0


def test_table_validation(basis):
    with pytest.raises(ConfigError):
        build_table(basis, 1)
    with pytest.raises(ConfigError):
        build_table(basis, basis.max_n + 1)
    with pytest.raises(ConfigError):
        build_table(basis, 10, "handwritten")
    table = get_table(10)
    with pytest.raises(ConfigError):
        table.z_pow(4)
    with pytest.raises(ConfigError):
        table.d_pow(0)
    with pytest.raises(ConfigError):
        table.value("z", 11, 1)
    with pytest.raises(ConfigError):
        element("z5", 1, 2, table.zeros)


def test_table_rows(verified_table):
    rows = verified_table.rows(["z"], max_n=3)
    assert len(rows) == 9
    assert rows[1] == {'name': "z", 'n': 1, 'k': 2, 'value': verified_table.value("z", 1, 2)}


def test_closed_forms_match_quadrature(basis):
    size = 6
    table = build_table(basis, size, VERIFIED)
    for name in FAMILIES:
        reference = quadrature_table(FAMILY_DESCRIPTORS[name], size, basis)
        scale = np.maximum(1.0, np.abs(reference))
        error = float(np.max(np.abs(table.family(name) - reference) / scale))
        assert error < 1e-6, f"{name}: closed form vs quadrature relative error {error:.3e}"


def test_printed_d2_fails_quadrature(basis):
    reference = quadrature_table("d^2", 4, basis)
    printed = build_table(basis, 4, PRINTED)
    assert not np.allclose(printed.d_pow(2), reference, atol=1e-6)


def test_parse_descriptor():
    terms = parse_descriptor("-2/3 d^2 z + z^3 - 1/2")
    assert [t.coefficient for t in terms] == pytest.approx([-2 / 3, 1.0, -0.5])
    assert terms[0].factors == (("d", 2), ("z", 1))
    assert terms[2].factors == ()
    with pytest.raises(ConfigError):
        parse_descriptor("x^2")
    with pytest.raises(ConfigError):
        parse_descriptor("  ")


def test_quadratic_first_order_diagonals(verified_table):
    z = verified_table.zeros
    k_up = perturbation_matrix(K_ROUTE, QUADRATIC, verified_table, Branch.UP)
    h_up = perturbation_matrix(H_ROUTE, QUADRATIC, verified_table, Branch.UP)
    k_down = perturbation_matrix(K_ROUTE, QUADRATIC, verified_table, Branch.DOWN)

    np.testing.assert_allclose(np.diag(k_up.order1), -12 / 15 * z ** 2, rtol=1e-12)
    np.testing.assert_allclose(np.diag(h_up.order1), 4 / 15 * z ** 2, rtol=1e-12)
    np.testing.assert_allclose(k_down.order1, -k_up.order1, atol=1e-12)
    np.testing.assert_allclose(k_up.order2, h_up.order2, atol=1e-12)
    assert k_up.symmetric and np.allclose(k_up.order1, k_up.order1.T)


def test_quadratic_second_order_diagonal(verified_table):
    z = verified_table.zeros
    k_up = perturbation_matrix(K_ROUTE, QUADRATIC, verified_table, Branch.UP)
    # -2 (<z^2 D^2> + 2 <z D> + 1/2) + 2/3 <z^3>
    z2d2 = 48 * z ** 3 / 105 + 3 / 7 - z * 8 * z ** 2 / 15
    expected = -2 * (z2d2 - 1.0 + 0.5) + 2 / 3 * (3 / 7 + 48 * z ** 3 / 105)
    np.testing.assert_allclose(np.diag(k_up.order2), expected, rtol=1e-12)


def test_linear_first_order_is_imaginary(verified_table):
    for route in (K_ROUTE, H_ROUTE):
        matrix = perturbation_matrix(route, LINEAR, verified_table)
        assert matrix.order1_phase == 1j
        assert matrix.first_order_shift(1) == 0.0
        np.testing.assert_array_equal(np.real(np.diag(matrix.order1_complex())), 0.0)


def test_linear_operator_prefactors(verified_table):
    k = perturbation_matrix(K_ROUTE, LINEAR, verified_table)
    h = perturbation_matrix(H_ROUTE, LINEAR, verified_table)
    np.testing.assert_allclose(k.order1, -2 * h.order1, rtol=1e-13, atol=1e-13)
    np.testing.assert_allclose(k.order2, 6 * h.order2, rtol=1e-13, atol=1e-13)


def test_perturbation_validation(verified_table):
    with pytest.raises(ConfigError):
        perturbation_matrix("L", QUADRATIC, verified_table, Branch.UP)
    with pytest.raises(ConfigError):
        perturbation_matrix(K_ROUTE, QUADRATIC, verified_table)
    with pytest.raises(ConfigError):
        perturbation_matrix(K_ROUTE, LINEAR, verified_table, Branch.UP)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_position_elements_decay_as_inverse_square(verified_table, n):
    z = verified_table.zeros
    ks = np.arange(n + 5, n + 31)
    spacing = np.abs(z[ks - 1] - z[n - 1])
    magnitude = np.abs(verified_table.family("z")[n - 1, ks - 1])
    slope, _ = np.polyfit(np.log(spacing), np.log(magnitude), 1)
    assert abs(slope + 2.0) < 0.1, f"log|<{n}|z|k>| vs log|z_k - z_{n}| slope {slope:.4f}, expected -2"
