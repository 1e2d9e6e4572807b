import math

import numpy as np
import pytest

from cryptononlocal.quantum import (
    ChainedSettings,
    asymptotic_chained_value,
    cglmp_bases,
    cglmp_chained_value,
    chained_settings,
    chained_value,
    closed_form_probs,
    expected_mod,
    gamma_factor,
    joint_distribution,
    joint_from_bases,
    maximally_entangled,
)


def test_settings_phases():
    s = chained_settings(3, 15)
    assert s.alpha[0] == pytest.approx(1.0 / 30.0, abs=0)
    assert np.array_equal(s.alpha, (np.arange(1, 16) - 0.5) / 15)
    assert np.array_equal(s.beta, np.arange(1, 16) / 15)


@pytest.mark.parametrize("d,n", [(2, 1), (2, 4), (3, 15), (5, 7), (8, 3)])
def test_bases_orthonormal(d, n):
    alice, bob = cglmp_bases(chained_settings(d, n))
    eye = np.eye(d)
    for side in (alice, bob):
        gram = np.einsum("axj,ayj->axy", side.conj(), side)
        assert np.abs(gram - eye).max() < 1e-12


def test_maximally_entangled():
    psi = maximally_entangled(2)
    assert np.allclose(psi, np.array([1, 0, 0, 1]) / math.sqrt(2))
    for d in (3, 5):
        psi = maximally_entangled(d)
        assert abs(np.linalg.norm(psi) - 1.0) < 1e-12
        rho = np.outer(psi, psi.conj()).reshape(d, d, d, d)
        reduced = np.einsum("ikjk->ij", rho)
        assert np.abs(reduced - np.eye(d) / d).max() < 1e-12


@pytest.mark.parametrize("d,n", [(2, 3), (3, 1), (3, 5), (4, 4), (5, 3)])
def test_joint_invariants(d, n):
    dist = joint_distribution(maximally_entangled(d), chained_settings(d, n))
    p = dist.probs
    assert p.min() >= 0.0
    assert np.abs(p.sum(axis=(2, 3)) - 1.0).max() < 1e-12
    alice = p.sum(axis=3)
    bob = p.sum(axis=2)
    assert np.abs(alice - 1.0 / d).max() < 1e-12  # marginals uniform
    assert np.abs(bob - 1.0 / d).max() < 1e-12


@pytest.mark.parametrize("d,n", [(2, 2), (3, 4), (4, 3), (5, 2), (6, 2), (8, 2)])
def test_closed_form_matches_born_rule(d, n):
    s = chained_settings(d, n)
    dist = joint_distribution(maximally_entangled(d), s)
    assert np.abs(closed_form_probs(s) - dist.probs).max() < 1e-10


def test_equal_phases_correlate_perfectly():
    # engineered settings with alpha = beta force X = Y
    d, n = 4, 3
    phases = np.linspace(0.1, 0.9, n)
    s = ChainedSettings(d=d, n=n, alpha=phases, beta=phases.copy())
    dist = joint_distribution(maximally_entangled(d), s)
    for a in range(n):
        block = dist.probs[a, a]
        assert np.abs(np.diag(block) - 1.0 / d).max() < 1e-12
        assert block.sum() - np.trace(block) < 1e-12
    # the closed form hits its theta = 0 (mod d) limit here
    assert np.abs(closed_form_probs(s) - dist.probs).max() < 1e-10


def _uniform_dist(d, n):
    from cryptononlocal.nosignaling import ConditionalDistribution

    probs = np.full((n, n, d, d), 1.0 / (d * d))
    return ConditionalDistribution(d=d, n=n, probs=probs)


def test_expected_mod():
    d, n = 4, 3
    phases = np.linspace(0.1, 0.9, n)
    s = ChainedSettings(d=d, n=n, alpha=phases, beta=phases.copy())
    corr = joint_distribution(maximally_entangled(d), s)
    assert expected_mod(corr, 1, 1) == pytest.approx(0.0, abs=1e-12)
    assert expected_mod(_uniform_dist(2, 2), 1, 2) == pytest.approx(0.5)
    assert expected_mod(_uniform_dist(3, 2), 2, 1) == pytest.approx(1.0)
    with pytest.raises(ValueError, match="out of range"):
        expected_mod(corr, 0, 1)


def test_chained_value_deterministic_wrap():
    # all-zero outcomes at d=2, N=2: only the wrap term contributes
    probs = np.zeros((2, 2, 2, 2))
    probs[:, :, 0, 0] = 1.0
    assert chained_value(probs) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("d,n", [(2, 1), (2, 5), (3, 7), (4, 6), (5, 4)])
def test_fast_value_matches_tensor_path(d, n):
    dist = joint_distribution(maximally_entangled(d), chained_settings(d, n))
    assert abs(chained_value(dist) - cglmp_chained_value(d, n)) < 1e-10


def test_qubit_closed_form():
    for n in (1, 2, 5, 9, 40):
        expected = 2 * n * math.sin(math.pi / (4 * n)) ** 2
        assert cglmp_chained_value(2, n) == pytest.approx(expected, abs=1e-12)


def test_gamma_values():
    assert gamma_factor(2) == pytest.approx(math.pi**2 / 16, abs=1e-12)
    assert gamma_factor(3) == pytest.approx(math.pi**2 / 9, abs=1e-12)
    # direct evaluation of the d=4 sum: j/sin^2(pi j/4) = 2, 2, 6
    assert gamma_factor(4) == pytest.approx(math.pi**2 / 64 * 10, abs=1e-12)


def test_asymptotic_values():
    assert asymptotic_chained_value(3, 15) == pytest.approx(
        2 * math.pi**2 / 9 / 15, abs=1e-12
    )
    assert asymptotic_chained_value(2, 8) == pytest.approx(math.pi**2 / 64, abs=1e-12)


@pytest.mark.parametrize("d", range(2, 9))
def test_chained_value_strictly_decreasing(d):
    values = [cglmp_chained_value(d, n) for n in range(2, 41)]
    assert all(v > 0 for v in values)
    assert all(a > b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_gamma_is_the_decay_coefficient(d):
    g = gamma_factor(d)
    assert abs(200 * cglmp_chained_value(d, 200) / 2 - g) < 0.01 * g


def test_dimension_validation():
    with pytest.raises(ValueError):
        chained_settings(1, 3)
    with pytest.raises(ValueError):
        maximally_entangled(1)
    with pytest.raises(ValueError):
        joint_from_bases(
            maximally_entangled(3), *cglmp_bases(chained_settings(2, 2))
        )
