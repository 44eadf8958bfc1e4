import numpy as np
import pytest

# --- Project Imports ---
from core.exceptions import DimensionMismatchException, SpaceMismatchException
from models.common import BasisConvention, ModelSpace, SpinLabel
from models.geometry import H3Point, R3Point, S3Point
from services.clifford_service import clifford_service
from services.killing_service import killing_service
from services.spinor_fields import (AdjointVectorField, AffineTwistorField,
                                    CliffordMultipliedField, ConjTranslateField,
                                    ConstantField, ConstantVectorField,
                                    LinearComboField, PowerExpField,
                                    TransformedField, ZeroField)

SPIN_HALF = SpinLabel(two_s=1)


def test_constant_field_rejects_wrong_length():
    with pytest.raises(DimensionMismatchException):
        ConstantField(ModelSpace.S3, SpinLabel(two_s=3), [1.0, 0.0])


def test_linear_combination_rejects_mixed_levels():
    a = ConstantField(ModelSpace.S3, SPIN_HALF, [1.0, 0.0])
    b = ConstantField(ModelSpace.S3, SpinLabel(two_s=3), [1.0, 0.0, 0.0, 0.0])
    with pytest.raises(DimensionMismatchException):
        LinearComboField([(1.0, a), (1.0, b)])


def test_linear_combination_rejects_mixed_spaces():
    a = ConstantField(ModelSpace.S3, SPIN_HALF, [1.0, 0.0])
    b = ConstantField(ModelSpace.R3, SPIN_HALF, [1.0, 0.0])
    with pytest.raises(SpaceMismatchException):
        LinearComboField([(1.0, a), (2.0, b)])
    with pytest.raises(ValueError):
        LinearComboField([])


def test_linear_combination_adds_values():
    a = ConstantField(ModelSpace.R3, SPIN_HALF, [1.0, 0.0])
    b = ConstantField(ModelSpace.R3, SPIN_HALF, [0.0, 1.0])
    combo = LinearComboField([(2.0, a), (1j, b)])
    np.testing.assert_allclose(combo.value(R3Point(x=np.zeros(3))), [2.0, 1j])
    assert isinstance(combo.derivative(0), ZeroField)


def test_transformed_field_checks_shape():
    field = ConstantField(ModelSpace.R3, SPIN_HALF, [1.0, 0.0])
    with pytest.raises(DimensionMismatchException):
        TransformedField(np.eye(3), field)
    raised = TransformedField(np.ones((4, 2)), field)
    assert raised.label == SpinLabel(two_s=3)


def test_conj_translate_at_identity():
    psi = np.array([1.0, -2j, 0.5, 0.0])
    field = ConjTranslateField(SpinLabel(two_s=3), psi)
    np.testing.assert_allclose(field.value(S3Point.identity()), psi, atol=1e-12)


def test_conj_translate_rejects_wrong_length():
    with pytest.raises(DimensionMismatchException):
        ConjTranslateField(SpinLabel(two_s=3), [1.0, 0.0])


def test_power_exp_spin_half_triangular_basis():
    field = PowerExpField(SPIN_HALF, [0.0, 1.0], 1, BasisConvention.TRIANGULAR)
    value = field.value(H3Point(x1=4.0, x2=1.0, x3=2.0))
    # (iz x^{-1/2}, x^{1/2}) with z = 1 + 2i
    np.testing.assert_allclose(value, [-1.0 + 0.5j, 2.0], atol=1e-12)


def test_power_exp_rejects_bad_sign():
    with pytest.raises(ValueError):
        PowerExpField(SPIN_HALF, [1.0, 0.0], 0)


def test_affine_twistor_field():
    label = SpinLabel(two_s=2)
    u = np.array([1.0, 0.0, 0.0])
    v = np.array([0.0, 1.0, 0.0])
    field = AffineTwistorField(label, u, v)
    np.testing.assert_allclose(field.value(R3Point(x=np.zeros(3))), u)
    derivative = field.derivative(1).value(R3Point(x=np.ones(3)))
    np.testing.assert_allclose(derivative, field.rep.sigma[1] @ v)


def test_adjoint_vector_field_at_identity():
    a = np.array([0.3, -1.2, 2.0])
    field = AdjointVectorField(a)
    np.testing.assert_allclose(field.components(S3Point.identity()), a, atol=1e-12)
    assert field.is_right_invariant and not field.is_left_invariant


def test_adjoint_vector_field_keeps_length(s3_points):
    field = AdjointVectorField([1.0, 2.0, 2.0])
    for p in s3_points:
        assert np.linalg.norm(field.components(p)) == pytest.approx(3.0)


def test_constant_vector_field_invariance():
    assert ConstantVectorField(ModelSpace.S3, [1, 0, 0]).is_left_invariant
    assert not ConstantVectorField(ModelSpace.H3, [1, 0, 0]).is_left_invariant


def test_clifford_multiplied_field_checks(s3_points):
    base = ConstantField(ModelSpace.S3, SPIN_HALF, [1.0, 0.0])
    maps = clifford_service.build_clifford(SPIN_HALF).raise_maps
    with pytest.raises(SpaceMismatchException):
        CliffordMultipliedField(maps, ConstantVectorField(ModelSpace.R3, [1, 0, 0]), base)
    with pytest.raises(DimensionMismatchException):
        CliffordMultipliedField(maps, ConstantVectorField(ModelSpace.S3, [1, 0, 0]),
                                ConstantField(ModelSpace.S3, SpinLabel(two_s=2), [1, 0, 0]))
    field = CliffordMultipliedField(maps, AdjointVectorField([0.5, -1.0, 0.2]),
                                    ConjTranslateField(SPIN_HALF, [1.0, 1j]))
    assert field.label == SpinLabel(two_s=3)
    report = killing_service.fd_oracle_check([field], s3_points[:3])
    assert report.all_passed, report.checks
