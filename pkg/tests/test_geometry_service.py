import numpy as np
import pytest

# --- Project Imports ---
from core.exceptions import SpaceMismatchException
from core.linalg import EPSILON
from models.common import BasisConvention, ModelSpace, SpinLabel
from models.geometry import H3Point, R3Point, S3Point
from services.geometry_service import geometry_service
from services.irrep_service import irrep_service
from services.spinor_fields import ConjTranslateField, ConstantField, PowerExpField
from tests.conftest import failures


def test_sphere_levi_civita_is_epsilon():
    np.testing.assert_allclose(geometry_service.levi_civita_table(ModelSpace.S3), EPSILON)


@pytest.mark.parametrize("two_s", [1, 2, 5])
def test_sphere_connection_is_half_sigma(two_s):
    label = SpinLabel(two_s=two_s)
    sigma = irrep_service.build_irrep(label).sigma
    for c, s in zip(geometry_service.connection(ModelSpace.S3, label), sigma):
        np.testing.assert_allclose(c, 0.5 * s, atol=1e-12)


def test_hyperbolic_connection():
    label = SpinLabel(two_s=3)
    sigma = irrep_service.build_irrep(label).sigma
    c = geometry_service.connection(ModelSpace.H3, label)
    np.testing.assert_allclose(c[0], np.zeros((4, 4)), atol=1e-12)
    np.testing.assert_allclose(c[1], -0.5 * sigma[2], atol=1e-12)
    np.testing.assert_allclose(c[2], 0.5 * sigma[1], atol=1e-12)


@pytest.mark.parametrize("space,scal", [(ModelSpace.S3, 6.0), (ModelSpace.H3, -6.0),
                                        (ModelSpace.R3, 0.0)])
def test_scalar_curvature(space, scal):
    assert geometry_service.scalar_curvature(space) == pytest.approx(scal)
    np.testing.assert_allclose(geometry_service.ricci(space), (scal / 3) * np.eye(3),
                               atol=1e-12)


@pytest.mark.parametrize("two_s", [1, 3, 6])
def test_curvature_action_on_sphere(two_s):
    q = geometry_service.curvature_qR(ModelSpace.S3, SpinLabel(two_s=two_s))
    np.testing.assert_allclose(q, 0.25 * two_s * (two_s + 2) * np.eye(two_s + 1),
                               atol=1e-10)


def test_curvature_action_on_hyperbolic_spin_three_halves():
    q = geometry_service.curvature_qR(ModelSpace.H3, SpinLabel(two_s=3))
    np.testing.assert_allclose(q, -15 / 4 * np.eye(4), atol=1e-10)


def test_flat_curvature_vanishes():
    label = SpinLabel(two_s=3)
    assert np.allclose(geometry_service.curvature_qR(ModelSpace.R3, label), 0)
    assert np.allclose(geometry_service.bundle_curvature(ModelSpace.R3, label, 0, 1), 0)


def test_sphere_bundle_curvature():
    label = SpinLabel(two_s=1)
    sigma = irrep_service.build_irrep(label).sigma
    np.testing.assert_allclose(geometry_service.bundle_curvature(ModelSpace.S3, label, 0, 1),
                               -0.5 * sigma[2], atol=1e-12)


@pytest.mark.parametrize("space", list(ModelSpace))
@pytest.mark.parametrize("two_s", [1, 3])
def test_verify_model_space(space, two_s):
    checks = geometry_service.verify_model_space(space, SpinLabel(two_s=two_s), 1e-10)
    assert len(checks) == 5
    assert not failures(checks)


def test_connection_in_triangular_basis_matches_table():
    label = SpinLabel(two_s=3)
    basis = BasisConvention.TRIANGULAR
    for a, b in zip(geometry_service.connection(ModelSpace.H3, label, basis),
                    geometry_service.tabled_connection(ModelSpace.H3, label, basis)):
        np.testing.assert_allclose(a, b, atol=1e-12)


def test_hyperbolic_flow_scales_height():
    start = H3Point(x1=1.0, x2=0.5, x3=-0.5)
    end = geometry_service.frame_flow(ModelSpace.H3, start, 0, np.log(2.0))
    assert end.x1 == pytest.approx(2.0)
    assert (end.x2, end.x3) == (0.5, -0.5)
    moved = geometry_service.frame_flow(ModelSpace.H3, H3Point(x1=2.0, x2=0.0, x3=0.0), 2,
                                        0.25)
    assert moved.x3 == pytest.approx(0.5)


def test_sphere_flow_stays_on_sphere():
    point = S3Point.from_quaternion(np.array([1.0, 2.0, -1.0, 0.5]))
    moved = geometry_service.frame_flow(ModelSpace.S3, point, 1, 0.3)
    back = geometry_service.frame_flow(ModelSpace.S3, moved, 1, -0.3)
    np.testing.assert_allclose(back.g, point.g, atol=1e-12)


def test_flat_flow_translates():
    moved = geometry_service.frame_flow(ModelSpace.R3, R3Point(x=np.zeros(3)), 2, 1.5)
    np.testing.assert_allclose(moved.x, [0.0, 0.0, 1.5])


def test_finite_difference_matches_closed_form(s3_points):
    label = SpinLabel(two_s=3)
    fields = [ConstantField(ModelSpace.S3, label, [1.0, 2j, 0.0, -1.0]),
              ConjTranslateField(label, [0.5, 1.0, -1j, 0.0])]
    for field in fields:
        for p in s3_points[:3]:
            for i in range(3):
                exact = geometry_service.covariant_derivative(field, p, i)
                approx = geometry_service.fd_oracle(field, p, i)
                np.testing.assert_allclose(approx, exact, atol=1e-6)


def test_finite_difference_on_half_space():
    field = PowerExpField(SpinLabel(two_s=3), [0.0, 0.0, 1.0, 1.0], 1)
    point = H3Point(x1=1.2, x2=0.3, x3=-0.4)
    for i in range(3):
        np.testing.assert_allclose(geometry_service.fd_oracle(field, point, i),
                                   geometry_service.covariant_derivative(field, point, i),
                                   atol=1e-6)


def test_finite_difference_rejects_bad_step():
    field = ConstantField(ModelSpace.R3, SpinLabel(two_s=1), [1.0, 0.0])
    with pytest.raises(ValueError):
        geometry_service.fd_oracle(field, R3Point(x=np.zeros(3)), 0, h=-1e-3)


def test_point_space_mismatch():
    with pytest.raises(SpaceMismatchException):
        geometry_service.check_point(ModelSpace.S3, H3Point(x1=1.0, x2=0.0, x3=0.0))
    geometry_service.check_point(ModelSpace.R3, R3Point(x=np.ones(3)))


def test_rank_points_stay_in_box(rng):
    for p in geometry_service.rank_points(ModelSpace.H3, rng, 50):
        assert 0.5 <= p.x1 <= 2.0 and abs(p.x2) <= 1 and abs(p.x3) <= 1


def test_invalid_points_are_rejected():
    with pytest.raises(ValueError):
        H3Point(x1=-1.0, x2=0.0, x3=0.0)
    with pytest.raises(ValueError):
        S3Point(g=2 * np.eye(2))
