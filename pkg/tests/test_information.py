import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakfield import baselines
from weakfield.detectors import DetectorConfig, wh_conditional_matrix
from weakfield.errors import ConfigurationError
from weakfield.information import (
    DetectorKind,
    mutual_information,
    pie,
    ratio_and_gain,
    shannon_entropy,
)
from weakfield.modulation import ModulationKind, ModulationScheme, build_rule


def test_entropy_uniform():
    assert shannon_entropy([0.25] * 4) == pytest.approx(2.0, abs=1e-14)


def test_entropy_point_mass():
    assert shannon_entropy([1.0, 0.0, 0.0]) == 0.0


def test_entropy_of_click_difference_example():
    q0 = math.exp(-0.5)
    q1 = 1.0 - q0
    dist = [q0**2 + q1**2, q0 * q1, q0 * q1]
    expected = -math.fsum(p * math.log2(p) for p in dist)
    assert shannon_entropy(dist) == pytest.approx(expected, abs=1e-14)
    # direct evaluation of the frozen oracle value
    assert expected == pytest.approx(1.475815, abs=5e-7)


def test_entropy_renormalizes_small_drift():
    drifted = np.array([0.5, 0.5]) * (1.0 + 5e-7)
    assert shannon_entropy(drifted) == pytest.approx(1.0, abs=1e-9)


def test_entropy_domain_errors():
    with pytest.raises(ValueError):
        shannon_entropy([0.5, 0.6])
    with pytest.raises(ValueError):
        shannon_entropy([0.7, -0.1, 0.4])
    with pytest.raises(ValueError):
        shannon_entropy([])


def _enumeration_oracle(n_s, z, M):
    """Joint-distribution mutual information for the equiprobable binary prior."""
    amps = (math.sqrt(n_s), -math.sqrt(n_s))
    conds = [
        wh_conditional_matrix([a], [0.0], z, 0.0, M)[0]
        for a in amps
    ]
    joint = 0.5 * np.array(conds)
    p_out = joint.sum(axis=0)
    info = 0.0
    for i in range(2):
        for k in range(joint.shape[1]):
            if joint[i, k] > 0.0:
                info += joint[i, k] * math.log2(joint[i, k] / (0.5 * p_out[k]))
    return info


def test_bpsk_matches_enumeration_oracle():
    for M in (1, 2):
        for z in (0.5, 1.0):
            scheme = ModulationScheme(ModulationKind.BPSK_UNI, 0.4)
            rule = build_rule(scheme, 64)
            computed = mutual_information(
                DetectorKind.WH, DetectorConfig(M=M, z=z), scheme, rule
            )
            assert computed == pytest.approx(_enumeration_oracle(0.4, z, M), abs=1e-10)


def test_bpsk_blind_lo_carries_no_information():
    # with z = 0 both binary inputs produce identical click statistics
    scheme = ModulationScheme(ModulationKind.BPSK_UNI, 0.3)
    rule = build_rule(scheme, 64)
    computed = mutual_information(DetectorKind.WH, DetectorConfig(M=1, z=0.0), scheme, rule)
    assert computed == pytest.approx(0.0, abs=1e-12)
    assert _enumeration_oracle(0.3, 0.0, 1) == pytest.approx(0.0, abs=1e-15)


def test_degenerate_prior_gives_zero_information():
    scheme = ModulationScheme(ModulationKind.GAUSSIAN_UNI, 0.0)
    rule = build_rule(scheme, 64)
    assert mutual_information(DetectorKind.WH, DetectorConfig(M=3, z=0.7), scheme, rule) == 0.0


def test_information_bounded_by_output_entropy():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n_s = float(rng.uniform(0.01, 2.0))
        z = float(rng.uniform(0.0, 2.0))
        M = int(rng.integers(1, 6))
        scheme = ModulationScheme(ModulationKind.GAUSSIAN_UNI, n_s)
        rule = build_rule(scheme, 64)
        config = DetectorConfig(M=M, z=z)
        info = mutual_information(DetectorKind.WH, config, scheme, rule)
        cond = wh_conditional_matrix(*rule.amplitudes(), z, 0.0, M)
        marginal_entropy = shannon_entropy(rule.weights @ cond)
        assert 0.0 <= info <= marginal_entropy + 1e-12


def test_data_processing_on_small_grid():
    for n_s in (1e-3, 0.1, 1.0):
        scheme = ModulationScheme(ModulationKind.GAUSSIAN_UNI, n_s)
        rule = build_rule(scheme, 64)
        for z2 in np.logspace(-4, 1.5, 8):
            config = DetectorConfig(M=3, z=math.sqrt(z2))
            i_wh = mutual_information(DetectorKind.WH, config, scheme, rule)
            i_hl = mutual_information(DetectorKind.HL, config, scheme, rule)
            assert i_hl <= i_wh + 1e-9


def test_arity_mismatch_raises():
    uni = ModulationScheme(ModulationKind.GAUSSIAN_UNI, 0.5)
    bi = ModulationScheme(ModulationKind.GAUSSIAN_BI, 0.5)
    uni_rule = build_rule(uni, 64)
    bi_rule = build_rule(bi, 16)
    with pytest.raises(ConfigurationError):
        mutual_information(DetectorKind.DW, DetectorConfig(M=2, z=1.0), uni, uni_rule)
    with pytest.raises(ConfigurationError):
        mutual_information(DetectorKind.WH, DetectorConfig(M=2, z=1.0), bi, bi_rule)


def test_pie_examples():
    assert pie(1.0, 0.5) == pytest.approx(2.0, abs=1e-15)
    assert pie(0.0, 0.7) == 0.0
    with pytest.raises(ValueError):
        pie(1.0, 0.0)


def test_pie_of_shannon_capacity_saturates():
    n_s = 1e-6
    assert pie(baselines.shannon_sh(n_s), n_s) == pytest.approx(2.0 / math.log(2.0), rel=1e-4)


def test_ratio_and_gain_definitions():
    n_s = 0.8
    ratio, gain = ratio_and_gain(baselines.shannon_sh(n_s), n_s, "SH")
    assert ratio == pytest.approx(1.0, abs=1e-14)
    c_dd = baselines.dd_upper_bound(n_s)
    ratio, gain = ratio_and_gain(c_dd, n_s, "DD")
    assert ratio == pytest.approx(1.0, abs=1e-14)
    assert gain == pytest.approx(0.0, abs=1e-14)
    _, gain = ratio_and_gain(1.12 * c_dd, n_s, "DD")
    assert gain == pytest.approx(0.12, abs=1e-12)


def test_ratio_and_gain_domain():
    with pytest.raises(ValueError):
        ratio_and_gain(1.0, 0.0, "SH")
    with pytest.raises(ConfigurationError):
        ratio_and_gain(1.0, 1.0, "XX")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(1e-6, 1.0), min_size=2, max_size=40))
def test_entropy_bounds(values):
    p = np.array(values)
    p = p / p.sum()
    h = shannon_entropy(p)
    assert 0.0 <= h <= math.log2(len(p)) + 1e-12


def test_rate_result_invariants():
    from weakfield.information import RateResult

    scheme = ModulationScheme(ModulationKind.GAUSSIAN_UNI, 0.5)
    rate = RateResult.from_rate(1.0, 0.8, scheme, DetectorKind.WH, 5)
    assert rate.pie_bits_per_photon == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(ValueError):
        RateResult(-0.1, 0.0, 0.8, scheme, DetectorKind.WH, 5)
    with pytest.raises(ValueError):
        RateResult(1.0, 3.0, 0.8, scheme, DetectorKind.WH, 5)
