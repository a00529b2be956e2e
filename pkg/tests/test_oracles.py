# tests/test_oracles.py
import itertools
import math

import numpy as np
import pytest
from scipy.linalg import expm

from app.bath import bath_correlation, eta_table
from app.errors import DomainError, ResourceError
from app.model import BranchSpec, BranchState
from app.oracles import dephasing_decay, full_path_sum, path_coefficients, rabi_closed
from data_models.requests import BathSpec

UP = BranchState(np.array([[1.0, 0.0], [0.0, 0.0]]))
DOWN = np.array([[0.0, 0.0], [0.0, 1.0]])
PLUS = BranchState(np.full((2, 2), 0.5))
MIXED = BranchState(np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]]))
SPIN = (1, -1)


def _branch(bias: float, tunneling: float, k_eff: float = 0.0) -> BranchSpec:
    return BranchSpec(bias=bias, tunneling=tunneling, offset=0.0, k_eff=k_eff, branch_id="P")


def test_rabi_closed_at_zero_time():
    np.testing.assert_allclose(rabi_closed(_branch(0.4, 0.5), MIXED, 0.0).m, MIXED.m, atol=1e-15)


def test_rabi_closed_keeps_eigenstates():
    for t in (0.3, 2.0, 17.5):
        np.testing.assert_allclose(rabi_closed(_branch(0.0, 1.0), PLUS, t).m, PLUS.m, atol=1e-12)
        np.testing.assert_allclose(rabi_closed(_branch(0.4, 0.0), UP, t).m, UP.m, atol=1e-12)


def test_rabi_closed_half_period():
    np.testing.assert_allclose(rabi_closed(_branch(0.0, 1.0), UP, math.pi / 2).m, DOWN, atol=1e-12)


def test_dephasing_decay_trivial_cases():
    bath = BathSpec(K=0.2, T=0.2, omega_c=7.5)
    assert dephasing_decay(bath, 0.0) == 0.0
    assert dephasing_decay(BathSpec(K=0.0, T=0.2, omega_c=7.5), 3.0) == 0.0
    with pytest.raises(DomainError):
        dephasing_decay(bath, -1.0)


def test_dephasing_decay_is_nondecreasing():
    bath = BathSpec(K=0.2, T=0.2, omega_c=7.5)
    values = [dephasing_decay(bath, t) for t in np.linspace(0.0, 10.0, 41)]
    assert all(later >= earlier for earlier, later in zip(values, values[1:]))
    assert values[-1] > 0


def test_dephasing_decay_short_time_expansion():
    bath = BathSpec(K=0.1, T=0.2, omega_c=7.5)
    t = 0.002
    expected = 2.0 * bath_correlation(0.0, bath).real * t * t
    assert dephasing_decay(bath, t) == pytest.approx(expected, rel=5e-3)


def test_dephasing_decay_is_linear_in_K():
    single = dephasing_decay(BathSpec(K=0.1, T=0.2, omega_c=7.5), 2.0)
    double = dephasing_decay(BathSpec(K=0.2, T=0.2, omega_c=7.5), 2.0)
    assert double == pytest.approx(2.0 * single, rel=1e-12)


def test_full_path_sum_limits():
    bath = BathSpec(K=0.1, T=0.2, omega_c=7.5)
    with pytest.raises(ResourceError):
        full_path_sum(_branch(0.0, 1.0, 0.1), bath, PLUS, 0.25, 9)
    with pytest.raises(DomainError):
        full_path_sum(_branch(0.0, 1.0, 0.1), bath, PLUS, 0.25, 0)


def test_full_path_sum_single_step():
    branch = _branch(0.4, 0.5, 0.1)
    bath = BathSpec(K=0.1, T=0.2, omega_c=7.5)
    dt = 0.25
    U = expm(-1j * dt * branch.hamiltonian)
    eta = path_coefficients(bath, dt, 1)[0]

    rho1 = U @ MIXED.m @ U.conj().T
    for i, j in itertools.product(range(2), range(2)):
        sp, sm = SPIN[i], SPIN[j]
        rho1[i, j] *= np.exp(-(sp - sm) * (eta * sp - np.conj(eta) * sm))
    np.testing.assert_allclose(full_path_sum(branch, bath, MIXED, dt, 1)[1].m, rho1, atol=1e-14)


def test_full_path_sum_without_bath_is_unitary():
    branch = _branch(0.4, 0.5)
    states = full_path_sum(branch, BathSpec(K=0.0, T=0.2, omega_c=7.5), MIXED, 0.25, 4)
    for k, state in enumerate(states):
        np.testing.assert_allclose(state.m, rabi_closed(branch, MIXED, 0.25 * k).m, atol=1e-12)


def _recursive_path_sum(U: np.ndarray, coeffs: np.ndarray, rho0: np.ndarray, n_steps: int) -> np.ndarray:
    """Segunda enumeração: percorre os caminhos do fim para o início, um ponto de cada vez."""
    def walk(path):
        if len(path) == n_steps + 1:
            (ip0, im0) = path[0]
            weight = rho0[ip0, im0]
            for (ip, im), (jp, jm) in zip(path[1:], path[:-1]):
                weight *= U[ip, jp] * np.conj(U[im, jm])
            phase = 0j
            for late in range(n_steps, 0, -1):
                sp, sm = SPIN[path[late][0]], SPIN[path[late][1]]
                for early in range(late, 0, -1):
                    c = coeffs[late - early]
                    phase += (sp - sm) * (c * SPIN[path[early][0]] - np.conj(c) * SPIN[path[early][1]])
            result = np.zeros((2, 2), dtype=complex)
            result[path[-1]] = weight * np.exp(-phase)
            return result
        return sum(walk(path + [(ip, im)]) for ip in range(2) for im in range(2))

    return sum(walk([(ip, im)]) for ip in range(2) for im in range(2))


@pytest.mark.parametrize("n_steps", [1, 2, 3])
def test_full_path_sum_matches_recursive_enumeration(n_steps):
    branch = _branch(0.0, 1.0, 0.3)
    bath = BathSpec(K=0.3, T=0.2, omega_c=7.5)
    dt = 0.25
    coeffs = path_coefficients(bath, dt, n_steps)
    U = expm(-1j * dt * branch.hamiltonian)

    expected = _recursive_path_sum(U, coeffs, MIXED.m, n_steps)
    expected = 0.5 * (expected + expected.conj().T)
    np.testing.assert_allclose(full_path_sum(branch, bath, MIXED, dt, n_steps)[-1].m,
                               expected / np.trace(expected).real, atol=1e-12)


@pytest.mark.parametrize("T,dt", [(0.2, 0.25), (1.0, 0.25), (0.2, 0.0625)])
def test_path_coefficients_agree_with_eta_table(T, dt):
    bath = BathSpec(K=0.3, T=T, omega_c=7.5)
    eta = eta_table(bath, dt, 6)
    np.testing.assert_allclose(path_coefficients(bath, dt, 6), [eta.eta_same, *eta.eta_diff],
                               rtol=1e-6, atol=1e-11)


def test_path_coefficients_without_bath():
    np.testing.assert_array_equal(path_coefficients(BathSpec(K=0.0, T=0.2, omega_c=7.5), 0.25, 4), np.zeros(5))
    with pytest.raises(DomainError):
        path_coefficients(BathSpec(K=0.1, T=0.2, omega_c=7.5), 0.0, 4)


def test_path_coefficients_imaginary_closed_forms():
    bath = BathSpec(K=0.1, T=0.2, omega_c=7.5)
    h = 0.25
    coeffs = path_coefficients(bath, h, 3)
    x = h * 7.5
    assert coeffs[0].imag == pytest.approx(-0.05 * (x - math.atan(x)), rel=1e-9)
    for sep in (1, 2, 3):
        lag = sep * h
        expected = -0.1 * (math.atan(lag * 7.5) - 0.5 * math.atan((lag + h) * 7.5) - 0.5 * math.atan((lag - h) * 7.5))
        assert coeffs[sep].imag == pytest.approx(expected, rel=1e-8)
