import numpy as np
import pytest

from liplab.errors import ValidationError
from liplab.functions import absolute_value, constant_function, divided_difference
from liplab.measures import (DiscreteMeasure, WeightedKernelOperator, discrete_measure,
                             kernel_operator, materialize, read_kernel_operator,
                             weighted_l2_norm, write_kernel_operator)
from liplab.rng import make_rng, random_kernel_operator


def test_discrete_measure_sorts():
    m = discrete_measure([2.0, -1.0, 0.5], [1.0, 2.0, 3.0])
    np.testing.assert_array_equal(m.positions, [-1.0, 0.5, 2.0])
    np.testing.assert_array_equal(m.masses, [2.0, 3.0, 1.0])
    assert m.total_mass == 6.0
    assert m.support_radius == 2.0


def test_discrete_measure_validation():
    with pytest.raises(ValidationError):
        discrete_measure([0.0, 0.0], [1.0, 1.0])  # duplicate positions
    with pytest.raises(ValidationError):
        discrete_measure([0.0, 1.0], [1.0, 0.0])  # nonpositive mass
    with pytest.raises(ValidationError):
        DiscreteMeasure(np.array([1.0, 0.0]), np.array([1.0, 1.0]))  # unsorted


def test_kernel_operator_sorts_joint():
    kop = kernel_operator([1.0, -1.0], [0.25, 0.75], [10.0, 20.0],
                          [0.0], [1.0], [1.0], absolute_value())
    np.testing.assert_array_equal(kop.mu.positions, [-1.0, 1.0])
    np.testing.assert_array_equal(kop.phi, [20.0, 10.0])


def test_weight_shape_validation():
    mu = discrete_measure([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValidationError):
        WeightedKernelOperator(mu, mu, np.ones(3), np.ones(2), absolute_value())


def test_norms():
    assert weighted_l2_norm([2.0, 1.0], [0.25, 1.0]) == pytest.approx(np.sqrt(2.0))
    kop = kernel_operator([0.0], [4.0], [0.5], [1.0], [1.0], [3.0], absolute_value())
    assert kop.phi_norm == pytest.approx(1.0)
    assert kop.psi_norm == pytest.approx(3.0)
    assert kop.norm_product == pytest.approx(3.0)


def test_materialize_constant_function_is_zero():
    rng = make_rng(30)
    kop = random_kernel_operator(rng, constant_function(5.0), 10, 12)
    np.testing.assert_array_equal(materialize(kop), np.zeros((10, 12)))


def test_materialize_single_atoms():
    # (|0| - |1|) / (0 - 1) = 1 with unit masses and weights.
    kop = kernel_operator([0.0], [1.0], [1.0], [1.0], [1.0], [1.0], absolute_value())
    np.testing.assert_allclose(materialize(kop), [[1.0]])


def test_materialize_hs_matches_double_sum_oracle():
    rng = make_rng(31)
    kop = random_kernel_operator(rng, absolute_value(), 15, 13)
    m = materialize(kop)
    hs_sq = float(np.sum(m * m))
    oracle = 0.0
    for i in range(kop.mu.size):
        for j in range(kop.nu.size):
            dd = divided_difference(kop.f, kop.mu.positions[i], kop.nu.positions[j])
            oracle += (kop.mu.masses[i] * kop.phi[i] ** 2 *
                       dd ** 2 * kop.psi[j] ** 2 * kop.nu.masses[j])
    assert hs_sq == pytest.approx(oracle, abs=1e-10 * max(1.0, oracle))


def test_kernel_entrywise_bound():
    rng = make_rng(32)
    kop = random_kernel_operator(rng, absolute_value(), 20, 20)
    m = np.abs(materialize(kop))
    bound = (np.sqrt(kop.mu.masses) * np.abs(kop.phi))[:, None] * \
            (np.abs(kop.psi) * np.sqrt(kop.nu.masses))[None, :] * kop.f.lip
    assert np.all(m <= bound * (1 + 1e-12))


def test_operator_file_roundtrip(tmp_path):
    rng = make_rng(33)
    kop = random_kernel_operator(rng, absolute_value(), 8, 6)
    path = tmp_path / "kop.txt"
    write_kernel_operator(path, kop)
    back = read_kernel_operator(path)
    np.testing.assert_array_equal(back.mu.positions, kop.mu.positions)
    np.testing.assert_array_equal(back.mu.masses, kop.mu.masses)
    np.testing.assert_array_equal(back.phi, kop.phi)
    np.testing.assert_array_equal(back.nu.positions, kop.nu.positions)
    np.testing.assert_array_equal(back.psi, kop.psi)
    assert back.f.spec == kop.f.spec
    np.testing.assert_array_equal(materialize(back), materialize(kop))


def test_operator_file_errors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("MU\n0.0 1.0 1.0\nFUNCTION\n{\"kind\": \"abs\"}\n")
    with pytest.raises(ValidationError, match="missing NU"):
        read_kernel_operator(path)
    path.write_text("MU\n0.0 1.0\nNU\n0.0 1.0 1.0\nFUNCTION\n{\"kind\": \"abs\"}\n")
    with pytest.raises(ValidationError):
        read_kernel_operator(path)
    path.write_text("stray\nMU\n")
    with pytest.raises(ValidationError, match="before any section"):
        read_kernel_operator(path)
    path.write_text("MU\n0.0 1.0 1.0\nNU\n0.0 1.0 1.0\nFUNCTION\nnot json\n")
    with pytest.raises(ValidationError, match="JSON"):
        read_kernel_operator(path)
