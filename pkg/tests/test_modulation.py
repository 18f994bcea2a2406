import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from weakfield.errors import ConfigurationError
from weakfield.modulation import (
    ModulationKind,
    ModulationScheme,
    build_rule,
    gamma_amplitude_density,
    gaussian_density,
)


def test_gaussian_density_peak():
    assert gaussian_density(0.0, 1.0) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), abs=1e-15)


def test_gaussian_density_one_sigma():
    sigma2 = 2.3
    peak = gaussian_density(0.0, sigma2)
    assert gaussian_density(math.sqrt(sigma2), sigma2) == pytest.approx(
        peak * math.exp(-0.5), rel=1e-14
    )


def test_gaussian_density_normalized():
    total, _ = quad(lambda x: gaussian_density(x, 0.7), -np.inf, np.inf)
    assert total == pytest.approx(1.0, abs=1e-10)


def test_gaussian_density_domain():
    with pytest.raises(ValueError):
        gaussian_density(0.0, 0.0)
    with pytest.raises(ValueError):
        gaussian_density(0.0, -1.0)


def test_gamma_density_reduces_to_gaussian_at_half():
    n_s = 1.7
    for x in np.linspace(-4.0, 4.0, 41):
        assert gamma_amplitude_density(x, 0.5, n_s) == pytest.approx(
            gaussian_density(x, n_s), abs=1e-12
        )


def test_gamma_density_vanishes_at_origin_for_nu_above_half():
    assert gamma_amplitude_density(0.0, 2.0, 4.0) == 0.0


def test_gamma_density_second_moment():
    for nu in (0.5, 1.0, 3.0, 10.0):
        n_s = 2.4
        moment, _ = quad(
            lambda x: x * x * gamma_amplitude_density(x, nu, n_s), -np.inf, np.inf, limit=200
        )
        assert moment == pytest.approx(n_s, rel=1e-8)


def test_gamma_density_domain():
    with pytest.raises(ValueError):
        gamma_amplitude_density(1.0, 0.3, 1.0)
    with pytest.raises(ValueError):
        gamma_amplitude_density(1.0, 1.0, 0.0)


def test_scheme_validation():
    with pytest.raises(ValueError):
        ModulationScheme(ModulationKind.GAMMA_UNI, 1.0, nu=0.2)
    with pytest.raises(ValueError):
        ModulationScheme(ModulationKind.GAMMA_UNI, 1.0)
    with pytest.raises(ValueError):
        ModulationScheme(ModulationKind.GAUSSIAN_UNI, 1.0, nu=2.0)
    with pytest.raises(ValueError):
        ModulationScheme(ModulationKind.GAUSSIAN_UNI, -1.0)


def test_scheme_sigma2_conventions():
    assert ModulationScheme(ModulationKind.GAUSSIAN_UNI, 3.0).sigma2 == 3.0
    assert ModulationScheme(ModulationKind.GAUSSIAN_BI, 3.0).sigma2 == 1.5


def test_bpsk_rule_is_two_points():
    rule = build_rule(ModulationScheme(ModulationKind.BPSK_UNI, 1.0), 64)
    np.testing.assert_allclose(sorted(rule.nodes), [-1.0, 1.0])
    np.testing.assert_allclose(rule.weights, [0.5, 0.5])


def test_gauss_hermite_rule_second_moment():
    rule = build_rule(ModulationScheme(ModulationKind.GAUSSIAN_UNI, 0.05), 64)
    assert np.dot(rule.weights, rule.nodes**2) == pytest.approx(0.05, abs=1e-10 * 0.05)
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-10)


def test_panel_rule_second_moment():
    # wide prior exercises the composite-panel path
    rule = build_rule(ModulationScheme(ModulationKind.GAUSSIAN_UNI, 4.0), 64)
    assert np.dot(rule.weights, rule.nodes**2) == pytest.approx(4.0, rel=1e-8)


def test_gamma_rule_half_matches_gaussian_rule():
    gamma_rule = build_rule(ModulationScheme(ModulationKind.GAMMA_UNI, 1.0, nu=0.5), 64)
    gauss_rule = build_rule(ModulationScheme(ModulationKind.GAUSSIAN_UNI, 1.0), 64)
    assert np.dot(gamma_rule.weights, gamma_rule.nodes**2) == pytest.approx(1.0, rel=1e-8)
    for f in (np.tanh, np.cos, lambda x: np.exp(-(x**2))):
        a = np.dot(gamma_rule.weights, f(gamma_rule.nodes))
        b = np.dot(gauss_rule.weights, f(gauss_rule.nodes))
        assert a == pytest.approx(b, abs=1e-6)


def test_gamma_rule_second_moment_across_shapes():
    for nu in (0.5, 0.954, 3.83, 50.0, 1000.0):
        for n_s in (0.05, 1.0, 4.0):
            rule = build_rule(ModulationScheme(ModulationKind.GAMMA_UNI, n_s, nu=nu), 64)
            assert np.dot(rule.weights, rule.nodes**2) == pytest.approx(n_s, rel=1e-8)


def test_gamma_rule_large_nu_approaches_bpsk():
    n_s = 1.3
    gamma_rule = build_rule(ModulationScheme(ModulationKind.GAMMA_UNI, n_s, nu=1e4), 64)
    bpsk_rule = build_rule(ModulationScheme(ModulationKind.BPSK_UNI, n_s), 64)
    for f in (np.tanh, np.cos, lambda x: 1.0 / (1.0 + x**2)):
        a = np.dot(gamma_rule.weights, f(gamma_rule.nodes))
        b = np.dot(bpsk_rule.weights, f(bpsk_rule.nodes))
        assert a == pytest.approx(b, abs=1e-3)


def test_bivariate_rule_energy():
    rule = build_rule(ModulationScheme(ModulationKind.GAUSSIAN_BI, 0.1), 48)
    assert rule.bivariate
    energy = np.dot(rule.weights, rule.nodes[:, 0] ** 2 + rule.nodes[:, 1] ** 2)
    assert energy == pytest.approx(0.1, rel=1e-10)


def test_bivariate_panel_rule_energy():
    rule = build_rule(ModulationScheme(ModulationKind.GAUSSIAN_BI, 6.0), 48)
    energy = np.dot(rule.weights, rule.nodes[:, 0] ** 2 + rule.nodes[:, 1] ** 2)
    assert energy == pytest.approx(6.0, rel=1e-8)


def test_zero_energy_degenerates_to_point_mass():
    rule = build_rule(ModulationScheme(ModulationKind.GAUSSIAN_UNI, 0.0), 64)
    assert rule.nodes.shape == (1,)
    assert rule.weights[0] == 1.0
    rule = build_rule(ModulationScheme(ModulationKind.GAUSSIAN_BI, 0.0), 48)
    assert rule.nodes.shape == (1, 2)


def test_node_count_validation():
    with pytest.raises(ConfigurationError):
        build_rule(ModulationScheme(ModulationKind.GAUSSIAN_UNI, 1.0), 4)


@settings(max_examples=60, deadline=None)
@given(n_s=st.floats(1e-6, 20.0), nu=st.floats(0.5, 500.0))
def test_rules_are_normalized_probability_measures(n_s, nu):
    for scheme in (
        ModulationScheme(ModulationKind.GAUSSIAN_UNI, n_s),
        ModulationScheme(ModulationKind.GAMMA_UNI, n_s, nu=nu),
        ModulationScheme(ModulationKind.BPSK_UNI, n_s),
    ):
        rule = build_rule(scheme, 32)
        assert np.all(rule.weights > 0)
        assert rule.weights.sum() == pytest.approx(1.0, abs=1e-10)
        assert np.dot(rule.weights, rule.nodes**2) == pytest.approx(n_s, rel=1e-6)
