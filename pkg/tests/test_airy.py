import math

import numpy as np
import pytest

from dampedbouncer.airy import AiryBasis, ai, aip, eigenfunction, get_basis, inner_product, zero, zero_seed
from dampedbouncer.common.errors import DomainError
from dampedbouncer.oracle.quadrature_elements import gram_matrix

AI_0 = 0.3550280538878172
AIP_0 = -0.2588194037928068
Z_1 = 2.338107410459767
Z_2 = 4.087949444130971


def test_airy_at_origin():
    assert abs(ai(0.0) - AI_0) < 1e-15, f"Ai(0) = {ai(0.0)!r}, expected {AI_0!r}"
    assert abs(aip(0.0) - AIP_0) < 1e-15, f"Ai'(0) = {aip(0.0)!r}, expected {AIP_0!r}"


def test_airy_rejects_bad_arguments():
    for x in (math.nan, math.inf, 81.0, -100.0):
        with pytest.raises(DomainError):
            ai(x)


def test_first_zeros():
    assert abs(zero(1) - Z_1) < 1e-13, f"z_1 = {zero(1)!r}, expected {Z_1!r}"
    assert abs(zero(2) - Z_2) < 1e-13, f"z_2 = {zero(2)!r}, expected {Z_2!r}"


def test_zeros_are_roots():
    for n in range(1, 51):
        residual = abs(ai(-zero(n)))
        assert residual <= 1e-12, f"|Ai(-z_{n})| = {residual:.3e}"


def test_zero_seed_is_close():
    for n in (1, 5, 50):
        assert abs(zero_seed(n) - zero(n)) < 1e-3 / n, f"seed {zero_seed(n)} vs z_{n} = {zero(n)}"


def test_zero_rejects_bad_index():
    for n in (0, -3, 1.5):
        with pytest.raises(DomainError):
            zero(n)


def test_basis_is_immutable_and_ordered():
    basis = AiryBasis(20)
    assert basis.max_n == 20
    assert np.all(np.diff(basis.zeros) > 0), "Airy zeros must increase"
    with pytest.raises(ValueError):
        basis.zeros[0] = 1.0
    with pytest.raises(DomainError):
        basis.zero(21)


def test_eigenfunction_boundary_and_sign():
    basis = get_basis(10)
    for n in range(1, 11):
        assert abs(basis.eigenfunction(n, 0.0)) < 1e-12, f"psi_{n}(0) = {basis.eigenfunction(n, 0.0)}"
        slope = basis.eigenfunction_derivative(n, 0.0)
        assert abs(slope - (-1) ** (n + 1)) < 1e-12, f"psi_{n}'(0) = {slope}, expected {(-1) ** (n + 1)}"
    assert eigenfunction(1, 1.0) == pytest.approx(basis.eigenfunction(1, 1.0), rel=1e-15)


def test_inner_product_of_polynomial_times_exponential():
    value, error = inner_product(lambda z: z ** 2 * np.exp(-z))
    assert abs(value - 2.0) < 1e-12, f"int z^2 e^-z = {value!r}, expected 2"
    assert error < 1e-10


def test_gram_matrix_is_identity():
    gram = gram_matrix(10, get_basis(10))
    deviation = float(np.max(np.abs(gram - np.eye(10))))
    assert deviation < 1e-7, f"max |<n|k> - delta_nk| = {deviation:.3e}"


def test_airy_equation_residual():
    # five-point derivative of Ai', truncation error ~ h^4 |Ai^(6)| / 30
    h = 1e-3
    for x in np.linspace(-20.0, 5.0, 251):
        second = (-aip(x + 2 * h) + 8 * aip(x + h) - 8 * aip(x - h) + aip(x - 2 * h)) / (12 * h)
        residual = abs(second - x * ai(x))
        assert residual < 1e-9, f"|Ai''({x:.2f}) - x Ai({x:.2f})| = {residual:.3e}"
