import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

# --- Project Imports ---
from models.common import BasisConvention, SpinLabel
from models.geometry import S3Point
from services.irrep_service import irrep_service
from tests.conftest import failures


@given(two_s=st.integers(min_value=0, max_value=15),
       basis=st.sampled_from(list(BasisConvention)))
@settings(max_examples=30, deadline=None)
def test_verify_irrep_passes(two_s, basis):
    checks = irrep_service.verify_irrep(SpinLabel(two_s=two_s), basis)
    assert not failures(checks)


@pytest.mark.parametrize("two_s", [0, 1, 2, 3, 8, 41])
def test_casimir_value(two_s):
    rep = irrep_service.build_irrep(SpinLabel(two_s=two_s))
    assert irrep_service.casimir_check(rep) == pytest.approx(-two_s * (two_s + 2))
    assert irrep_service.casimir_residual(rep) < 1e-10


def test_spin_half_matrices():
    rep = irrep_service.build_irrep(SpinLabel(two_s=1))
    np.testing.assert_allclose(rep.sigma[0], np.diag([1j, -1j]))
    np.testing.assert_allclose(rep.sigma[1], [[0, 1], [-1, 0]])
    np.testing.assert_allclose(rep.sigma[2], [[0, 1j], [1j, 0]])


def test_triangular_basis_ladder_entries():
    rep = irrep_service.build_irrep(SpinLabel(two_s=3), BasisConvention.TRIANGULAR)
    np.testing.assert_allclose(np.diag(rep.e, 1), [3, 4, 3])
    np.testing.assert_allclose(np.diag(rep.f, -1), [1, 1, 1])


@pytest.mark.parametrize("two_s,sign", [(1, -1), (3, -1), (2, 1), (4, 1)])
def test_full_turn_is_minus_identity_on_half_integral(two_s, sign):
    rep = irrep_service.build_irrep(SpinLabel(two_s=two_s))
    np.testing.assert_allclose(expm(np.pi * rep.sigma[0]), sign * np.eye(two_s + 1),
                               atol=1e-12)


@pytest.mark.parametrize("two_s", [1, 2, 5])
def test_change_basis_matches_direct_build(two_s):
    label = SpinLabel(two_s=two_s)
    triangular = irrep_service.build_irrep(label, BasisConvention.TRIANGULAR)
    unitary = irrep_service.build_irrep(label, BasisConvention.UNITARY)
    converted, p = irrep_service.change_basis(triangular, BasisConvention.UNITARY)
    assert converted.basis == BasisConvention.UNITARY
    for a, b in zip((converted.h, converted.e, converted.f), (unitary.h, unitary.e, unitary.f)):
        np.testing.assert_allclose(a, b, atol=1e-10)
    assert np.allclose(p, np.diag(np.diag(p)))


def test_rep_of_vector_is_linear():
    rep = irrep_service.build_irrep(SpinLabel(two_s=4))
    x, y = np.array([1.0, -2.0, 0.5]), np.array([0.0, 1j, 3.0])
    np.testing.assert_allclose(irrep_service.rep_of_vector(rep, x + 2 * y),
                               irrep_service.rep_of_vector(rep, x) +
                               2 * irrep_service.rep_of_vector(rep, y))


def test_group_element_on_spin_half_is_the_point():
    point = S3Point.from_quaternion(np.array([0.3, -0.5, 0.7, 0.1]))
    rep = irrep_service.build_irrep(SpinLabel(two_s=1))
    np.testing.assert_allclose(irrep_service.group_element(rep, point), point.g, atol=1e-12)


def test_group_element_is_a_homomorphism(rng):
    rep = irrep_service.build_irrep(SpinLabel(two_s=3))
    a = S3Point.from_quaternion(rng.normal(size=4))
    b = S3Point.from_quaternion(rng.normal(size=4))
    product = S3Point(g=a.g @ b.g)
    np.testing.assert_allclose(irrep_service.group_element(rep, product),
                               irrep_service.group_element(rep, a) @
                               irrep_service.group_element(rep, b), atol=1e-10)
    np.testing.assert_allclose(irrep_service.inverse_element(rep, a) @
                               irrep_service.group_element(rep, a), np.eye(4), atol=1e-10)


def test_negative_label_is_rejected():
    with pytest.raises(ValueError):
        SpinLabel(two_s=-1)


def test_label_spin_index():
    assert str(SpinLabel(two_s=3).j) == "1"
    assert str(SpinLabel(two_s=4).j) == "2"
    assert SpinLabel(two_s=3).shifted(2).dim == 6


def test_basis_alias_resolves_to_triangular():
    assert BasisConvention("paper") is BasisConvention.TRIANGULAR
    assert BasisConvention("Paper") is BasisConvention.TRIANGULAR
    with pytest.raises(ValueError):
        BasisConvention("lower")
