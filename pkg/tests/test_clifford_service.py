import numpy as np
import pytest

# --- Project Imports ---
from models.common import SpinLabel
from services.clifford_service import clifford_service, raise_scale
from tests.conftest import failures


@pytest.mark.parametrize("two_s,components", [(0, [2]), (1, [3, 1]), (2, [4, 2, 0]),
                                              (5, [7, 5, 3])])
def test_tensor_decompose_blocks(two_s, components):
    decomposition = clifford_service.tensor_decompose(SpinLabel(two_s=two_s))
    assert [b.component.two_s for b in decomposition.blocks] == components
    assert sum(b.isometry.shape[1] for b in decomposition.blocks) == 3 * (two_s + 1)


@pytest.mark.parametrize("two_s", range(0, 10))
def test_decomposition_checks_pass(two_s):
    checks = clifford_service.decomposition_checks(SpinLabel(two_s=two_s), 1e-10)
    assert not failures(checks)


@pytest.mark.parametrize("two_s", [0, 1, 2, 3, 6, 11])
def test_p_relations_pass(two_s, rng):
    report = clifford_service.verify_p_relations(SpinLabel(two_s=two_s), rng=rng)
    assert report.suite == "clifford"
    assert report.all_passed, failures(report.checks)


@pytest.mark.parametrize("two_s", [0, 1, 2, 3, 4, 9])
def test_structure_checks_pass(two_s, rng):
    checks = clifford_service.structure_checks(SpinLabel(two_s=two_s), rng=rng)
    names = {c.name for c in checks}
    assert {"clifford.adjoint_pinning", "clifford.schur_vanishing",
            "clifford.phase_insensitive"} <= names
    assert not failures(checks)


@pytest.mark.parametrize("two_s", [0, 1, 2, 7])
def test_triple_shapes(two_s):
    triple = clifford_service.build_clifford(SpinLabel(two_s=two_s))
    assert all(m.shape == (two_s + 1, two_s + 1) for m in triple.same_level)
    assert all(m.shape == (two_s + 3, two_s + 1) for m in triple.raise_maps)
    assert triple.has_lower == (two_s >= 2)
    if triple.has_lower:
        assert all(m.shape == (two_s - 1, two_s + 1) for m in triple.lower_maps)


def test_lower_maps_are_minus_adjoints_of_raise_maps():
    label = SpinLabel(two_s=3)
    triple = clifford_service.build_clifford(label)
    upper = clifford_service.build_clifford(label.shifted(2))
    for i in range(3):
        np.testing.assert_allclose(upper.lower_maps[i], -triple.raise_maps[i].conj().T,
                                   atol=1e-12)


def test_raise_maps_square_sum():
    """sum_i pi^+(e_i)^* pi^+(e_i) = 2 (N+3)/(N+2) Id"""
    for two_s in (1, 4):
        triple = clifford_service.build_clifford(SpinLabel(two_s=two_s))
        total = sum(m.conj().T @ m for m in triple.raise_maps)
        expected = raise_scale(two_s)**2 * (two_s + 3) / (two_s + 1)
        np.testing.assert_allclose(total, expected * np.eye(two_s + 1), atol=1e-10)


def test_apply_is_linear_extension():
    triple = clifford_service.build_clifford(SpinLabel(two_s=2))
    x = np.array([0.5, 1j, -2.0])
    expected = sum(x[i] * triple.raise_maps[i] for i in range(3))
    np.testing.assert_allclose(clifford_service.apply(triple.raise_maps, x), expected)


def test_phases_leave_lower_adjoint_link():
    label = SpinLabel(two_s=1)
    phases = {1: 0.7, 3: 1.9}
    triple = clifford_service.build_clifford(label, phases)
    upper = clifford_service.build_clifford(label.shifted(2), phases)
    for i in range(3):
        np.testing.assert_allclose(upper.lower_maps[i], -triple.raise_maps[i].conj().T,
                                   atol=1e-12)


def test_p_maps_missing_block_is_none():
    assert clifford_service.p_maps(1, -1) is None
    assert clifford_service.p_maps(0, 0) is None
