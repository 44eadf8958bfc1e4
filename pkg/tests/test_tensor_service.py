import numpy as np
import pytest

# --- Project Imports ---
from core.exceptions import (DimensionMismatchException,
                             InadmissibleKillingNumberException)
from models.common import ModelSpace, SpinLabel
from services.killing_service import killing_service
from services.tensor_service import SpinorPairTensor, tensor_service
from tests.conftest import failures

TOLERANCE = 1e-8


@pytest.mark.parametrize("two_s", [1, 3, 5])
def test_weight_checks(two_s, rng):
    for degree in range(0, min(two_s, 3) + 1):
        report = tensor_service.weight_checks(SpinLabel(two_s=two_s), degree, 1e-10, rng)
        assert report.all_passed, failures(report.checks)


def test_highest_weight_rows_only_up_to_the_level():
    label = SpinLabel(two_s=1)
    names = {c.name for c in tensor_service.weight_checks(label, 2).checks}
    assert names == {"weights.vanishing", "weights.h_action"}


def test_weight_index():
    label = SpinLabel(two_s=3)
    assert [tensor_service.weight_index(label, k) for k in (3, 1, -1, -3)] == [0, 1, 2, 3]


@pytest.mark.parametrize("degree", [0, 1, 2])
@pytest.mark.parametrize("two_s", [1, 3])
def test_killing_tensors_from_spinors(degree, two_s, s3_points, rng):
    checks = tensor_service.spinor_tensor_checks(SpinLabel(two_s=two_s), degree, s3_points,
                                                 TOLERANCE, rng)
    assert not failures(checks)
    assert (degree >= 1) == any(c.name == "killing_tensor.mixed_mu_fails" for c in checks)


def test_killing_tensor_rejects_bad_input():
    label = SpinLabel(two_s=1)
    phi = killing_service.generate(ModelSpace.S3, label, 0.5).fields[0]
    psi = killing_service.generate(ModelSpace.S3, SpinLabel(two_s=3), 0.5).fields[0]
    with pytest.raises(ValueError):
        tensor_service.killing_tensor_from_spinors(-1, phi, phi)
    with pytest.raises(DimensionMismatchException):
        tensor_service.killing_tensor_from_spinors(1, phi, psi)


@pytest.mark.parametrize("two_s", [0, 2, 4, 6])
def test_embedding(two_s):
    label = SpinLabel(two_s=two_s)
    emb = tensor_service.embedding(label)
    assert emb.shape == (3**(two_s // 2), two_s + 1)
    assert not failures(tensor_service.embedding_checks(label, 1e-10))


def test_embedding_needs_integral_spin():
    with pytest.raises(DimensionMismatchException):
        tensor_service.embedding(SpinLabel(two_s=3))
    with pytest.raises(DimensionMismatchException):
        tensor_service.generate_integral(SpinLabel(two_s=1), 0.5)
    with pytest.raises(InadmissibleKillingNumberException):
        tensor_service.generate_integral(SpinLabel(two_s=2), 0.5j)


@pytest.mark.parametrize("two_s", [0, 2, 4])
def test_integral_spin_solutions(two_s, s3_points, rng):
    checks = tensor_service.integral_checks(SpinLabel(two_s=two_s), s3_points, TOLERANCE, rng)
    assert not failures(checks)


@pytest.mark.parametrize("two_s", [2, 4, 6])
def test_parallel_flat_solutions(two_s):
    report = tensor_service.parallel_flat_check(SpinLabel(two_s=two_s), TOLERANCE,
                                                [0.2, -1.0, 0.5])
    assert report.all_passed, failures(report.checks)
    has_trace_row = any(c.name == "parallel.trace_subtraction" for c in report.checks)
    assert has_trace_row == (two_s == 4)


def test_symbol_constants():
    constants, gaps = tensor_service.symbol_fits()
    for name, expected in (("curl", 1.0), ("grad", 1.0), ("div", -1.0)):
        np.testing.assert_allclose(constants[name], [expected] * 3, atol=1e-10)
        assert gaps[name] < 1e-10
    report = tensor_service.d1_symbol_check()
    assert report.all_passed and report.summary.total == 3


def test_run_level_covers_both_parities(rng):
    half = tensor_service.run_level(SpinLabel(two_s=3), TOLERANCE, 8, rng, max_degree=2)
    whole = tensor_service.run_level(SpinLabel(two_s=2), TOLERANCE, 8, rng)
    assert any(c.name.startswith("weights.") for c in half)
    assert any(c.name.startswith("integral.") for c in whole)
    assert not failures(half + whole)


def test_run_level_reaches_degree_four_and_the_top_weight(rng):
    label = SpinLabel(two_s=1)
    checks = tensor_service.run_level(label, TOLERANCE, 6, rng)
    assert not failures(checks)
    tensor_degrees = {c.k for c in checks if c.name == "killing_tensor.left"}
    assert tensor_degrees == {0, 1, 2, 3, 4}
    weight_degrees = {c.k for c in checks if c.name == "weights.vanishing"}
    assert weight_degrees == {0, 1, 2}


@pytest.mark.parametrize("two_s", [3, 5])
def test_weight_checks_up_to_twice_the_spin_plus_one(two_s, rng):
    label = SpinLabel(two_s=two_s)
    report = tensor_service.weight_checks(label, two_s + 1, 1e-10, rng)
    assert report.all_passed, failures(report.checks)
    assert {c.k for c in report.checks} == {two_s + 1}


def test_family_tensor_holds_every_pair(s3_points):
    label = SpinLabel(two_s=3)
    fields = list(killing_service.generate(ModelSpace.S3, label, 0.5).fields)
    family = tensor_service.killing_tensor_family(2, fields, fields)
    assert family.pairs == label.dim**2
    vectors = [np.array([1.0, 0.5, -0.2]), np.array([0.0, 1.0, 2.0])]
    point = s3_points[0]
    values = family.value(point, vectors)
    assert values.shape == (label.dim, label.dim)
    for a, phi in enumerate(fields):
        for b, psi in enumerate(fields):
            single = SpinorPairTensor(2, phi, psi).value(point, vectors)
            assert values[b, a] == pytest.approx(single, abs=1e-12)


def test_spinor_tensor_rows_per_degree(s3_points, rng):
    checks = tensor_service.spinor_tensor_checks(SpinLabel(two_s=3), 2, s3_points, TOLERANCE,
                                                 rng)
    names = [c.name for c in checks]
    assert names.count("killing_tensor.left") == 1 and names.count("killing_tensor.right") == 1
    assert names.count("killing_tensor.symmetric") == 2
    assert len(checks) == 8
