# tests/test_bath.py
import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st
from scipy.integrate import simpson

from app.bath import bath_correlation, eta_table, spectral_density, thermal_factor
from app.errors import DomainError
from data_models.requests import BathSpec

REFERENCE = BathSpec(K=0.1, T=0.2, omega_c=7.5)


def test_spectral_density_basics():
    assert spectral_density(3.0, BathSpec(K=0.0, T=0.2, omega_c=7.5)) == 0.0
    assert spectral_density(0.0, REFERENCE) == 0.0
    assert spectral_density(1e-9, REFERENCE) < 1e-9


def test_spectral_density_peaks_at_cutoff():
    peak = spectral_density(7.5, REFERENCE)
    assert peak == pytest.approx(math.pi * 0.05 * 7.5 * math.exp(-1.0), rel=1e-14)
    grid = np.linspace(0.0, 40.0, 4001)
    assert np.all(spectral_density(grid, REFERENCE) <= peak + 1e-15)


def test_spectral_density_rejects_negative_frequency():
    with pytest.raises(DomainError):
        spectral_density(-1.0, REFERENCE)


def test_thermal_factor_is_continuous_at_series_switch():
    T = 0.2
    below = thermal_factor(2 * T * (1e-3 - 1e-12), T)
    above = thermal_factor(2 * T * (1e-3 + 1e-12), T)
    assert below == pytest.approx(above, rel=1e-12)
    assert thermal_factor(0.0, T) == pytest.approx(2 * T)


def test_correlation_vanishes_without_coupling():
    bath = BathSpec(K=0.0, T=0.2, omega_c=7.5)
    assert bath_correlation(0.7, bath) == 0


def test_correlation_zero_time_low_temperature():
    bath = BathSpec(K=0.1, T=0.01, omega_c=7.5)
    assert bath_correlation(0.0, bath).real == pytest.approx(0.5 * 0.1 * 7.5 ** 2, rel=1e-4)


@pytest.mark.parametrize("t", [0.05, 0.3, 1.0, 2.5])
def test_correlation_symmetry(t):
    forward = bath_correlation(t, REFERENCE)
    backward = bath_correlation(-t, REFERENCE)
    assert backward == pytest.approx(forward.conjugate(), abs=1e-12)
    hot = bath_correlation(t, BathSpec(K=0.1, T=1.0, omega_c=7.5))
    assert hot.imag == pytest.approx(forward.imag, abs=1e-15)


def test_eta_table_zero_coupling():
    table = eta_table(BathSpec(K=0.0, T=0.2, omega_c=7.5), 0.25, 9)
    assert table.eta_same == 0
    assert not np.any(table.eta_diff)
    assert table.coefficient(3) == 0


def test_eta_table_memory_truncation():
    table = eta_table(REFERENCE, 0.25, 4)
    assert table.coefficient(0) == table.eta_same
    assert table.coefficient(2) == table.eta_diff[1]
    assert table.coefficient(5) == 0
    with pytest.raises(DomainError):
        table.coefficient(-1)


@hyp_settings(max_examples=10, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.8))
def test_eta_table_is_linear_in_K(K):
    single = eta_table(BathSpec(K=K, T=0.2, omega_c=7.5), 0.25, 9)
    double = eta_table(BathSpec(K=2 * K, T=0.2, omega_c=7.5), 0.25, 9)
    assert double.eta_same == pytest.approx(2 * single.eta_same, rel=1e-12)
    np.testing.assert_allclose(double.eta_diff, 2 * single.eta_diff, rtol=1e-12)


def test_eta_same_is_dissipative():
    for T in (0.05, 0.2, 1.0):
        assert eta_table(BathSpec(K=0.1, T=T, omega_c=7.5), 0.25, 1).eta_same.real > 0


def test_eta_table_tail_decreases():
    table = eta_table(REFERENCE, 0.25, 30)
    magnitudes = np.abs(table.eta_diff)
    assert magnitudes[-10:].mean() < magnitudes[:10].mean()


def test_eta_table_quadrature_is_converged():
    loose = eta_table(REFERENCE, 0.25, 9, epsrel=1e-8)
    tight = eta_table(REFERENCE, 0.25, 9)
    assert loose.eta_same == pytest.approx(tight.eta_same, rel=1e-6)
    np.testing.assert_allclose(loose.eta_diff, tight.eta_diff, rtol=1e-6, atol=1e-12)


def _window_integral(lag: float, dt: float, nodes: int = 400) -> complex:
    """Integral dupla de C sobre duas janelas, reduzida ao peso triangular em t' - t''."""
    halves = []
    for lo, hi in ((lag - dt, lag), (lag, lag + dt)):
        tau = np.linspace(lo, hi, nodes + 1)
        values = np.array([(dt - abs(x - lag)) * bath_correlation(x, REFERENCE) for x in tau])
        halves.append(simpson(values.real, x=tau) + 1j * simpson(values.imag, x=tau))
    return sum(halves)


def test_eta_table_matches_direct_window_integration():
    dt = 0.25
    table = eta_table(REFERENCE, dt, 4)

    tau = np.linspace(0.0, dt, 401)
    values = np.array([(dt - x) * bath_correlation(x, REFERENCE) for x in tau])
    same = simpson(values.real, x=tau) + 1j * simpson(values.imag, x=tau)
    assert abs(table.eta_same - same) <= 1e-4 * abs(same)

    for sep in (1, 4):
        direct = _window_integral(sep * dt, dt)
        assert abs(table.coefficient(sep) - direct) <= 1e-4 * abs(direct)
