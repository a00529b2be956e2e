# tests/test_entanglement.py
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.entanglement import (_at_most_one, birth_time, concurrence_x, is_x_state, revival_times,
                              wootters_concurrence, zero_intervals)
from app.errors import DomainError, NumericalError
from app.model import XState, assemble_xstate, bell_initial


def _random_x_state(rng: np.random.Generator, max_ratio: float = 1.0) -> XState:
    p00, p01, p10, p11 = rng.dirichlet([2.0, 2.0, 2.0, 2.0])
    cP = rng.uniform(0, max_ratio) * math.sqrt(p01 * p10) * np.exp(1j * rng.uniform(-math.pi, math.pi))
    cQ = rng.uniform(0, max_ratio) * math.sqrt(p00 * p11) * np.exp(1j * rng.uniform(-math.pi, math.pi))
    return XState(p00=p00, p01=p01, p10=p10, p11=p11, cP=cP, cQ=cQ)


def test_bell_p_state_is_maximally_entangled():
    x = XState(p00=0.0, p01=0.5, p10=0.5, p11=0.0, cP=0.5, cQ=0.0)
    assert concurrence_x(x).C == pytest.approx(1.0)


def test_half_weight_bell_sum_is_separable():
    breakdown = concurrence_x(assemble_xstate(0.5, *bell_initial(0.5)[:2]))
    assert breakdown.F1 == pytest.approx(0.0, abs=1e-15)
    assert breakdown.F2 == pytest.approx(0.0, abs=1e-15)
    assert breakdown.C == 0.0


def test_classical_mixture_is_separable():
    assert concurrence_x(XState(p00=0.5, p01=0.0, p10=0.0, p11=0.5, cP=0.0, cQ=0.0)).C == 0.0


def test_tiny_negative_population_is_clamped():
    x = XState(p00=-1e-8, p01=0.5, p10=0.5 + 1e-8, p11=0.0, cP=0.49, cQ=0.0)
    assert concurrence_x(x).C == pytest.approx(0.98)


def test_closed_forms_agree_with_eigen_path_on_random_x_states():
    rng = np.random.default_rng(20240601)
    for _ in range(1000):
        x = _random_x_state(rng, max_ratio=0.999)
        eigen = wootters_concurrence(x.to_matrix(), method="eigen")
        assert concurrence_x(x).C == pytest.approx(eigen, abs=1e-10)


def test_concurrence_above_one_within_positivity_slack():
    x = XState(p00=0.0, p01=0.5, p10=0.5, p11=0.0, cP=math.sqrt(0.25 + 0.9e-6), cQ=0.0)
    assert concurrence_x(x).C == 1.0
    with pytest.raises(NumericalError):
        _at_most_one(1.0 + 1e-3, "teste")


def test_general_path_agrees_with_closed_form():
    rng = np.random.default_rng(7)
    for _ in range(200):
        rho = _random_x_state(rng, max_ratio=0.95).to_matrix()
        closed = wootters_concurrence(rho, method="closed_form")
        assert wootters_concurrence(rho, method="eigen") == pytest.approx(closed, abs=1e-8)


def test_reference_x_state():
    x = XState(p00=0.3, p01=0.25, p10=0.25, p11=0.2, cP=0.2, cQ=0.1)
    rho = x.to_matrix()
    assert concurrence_x(x).C == pytest.approx(wootters_concurrence(rho, method="eigen"), abs=1e-10)


@pytest.mark.parametrize("index", range(4))
def test_product_states_are_separable(index):
    rho = np.zeros((4, 4))
    rho[index, index] = 1.0
    assert wootters_concurrence(rho) == 0.0
    # estados puros: autovalores nulos de rho limitam a precisão da raiz quadrada
    assert wootters_concurrence(rho, method="eigen") == pytest.approx(0.0, abs=1e-7)


def test_bell_q_state():
    rho = np.zeros((4, 4))
    rho[0, 0] = rho[3, 3] = rho[0, 3] = rho[3, 0] = 0.5
    assert wootters_concurrence(rho) == pytest.approx(1.0)
    assert wootters_concurrence(rho, method="eigen") == pytest.approx(1.0, abs=1e-7)


def _local_unitary(theta: float, phi: float) -> np.ndarray:
    return np.array([[math.cos(theta), -np.exp(-1j * phi) * math.sin(theta)],
                     [np.exp(1j * phi) * math.sin(theta), math.cos(theta)]])


def test_general_state_uses_eigen_path():
    rng = np.random.default_rng(11)
    for _ in range(50):
        x = _random_x_state(rng, max_ratio=0.95)
        U = np.kron(_local_unitary(*rng.uniform(0, math.pi, 2)), _local_unitary(*rng.uniform(0, math.pi, 2)))
        rho = U @ x.to_matrix() @ U.conj().T
        rho = 0.5 * (rho + rho.conj().T)
        assert not is_x_state(rho)
        # a concorrência é invariante por unitárias locais
        assert wootters_concurrence(rho) == pytest.approx(concurrence_x(x).C, abs=1e-8)
    with pytest.raises(DomainError):
        wootters_concurrence(rho, method="closed_form")


def test_non_hermitian_input_is_rejected():
    rho = 0.25 * np.eye(4, dtype=complex)
    rho[0, 3] = 0.1
    with pytest.raises(DomainError):
        wootters_concurrence(rho)


@given(st.floats(min_value=-math.pi, max_value=math.pi), st.floats(min_value=-math.pi, max_value=math.pi))
def test_concurrence_depends_only_on_moduli(phase_p, phase_q):
    base = XState(p00=0.1, p01=0.4, p10=0.35, p11=0.15, cP=0.3, cQ=0.05)
    rotated = XState(p00=0.1, p01=0.4, p10=0.35, p11=0.15,
                     cP=0.3 * np.exp(1j * phase_p), cQ=0.05 * np.exp(1j * phase_q))
    assert concurrence_x(rotated).C == pytest.approx(concurrence_x(base).C, abs=1e-14)
    assert 0.0 <= concurrence_x(rotated).C <= 1.0


def test_sudden_death_and_revival():
    times = np.arange(9, dtype=float)
    C = [0.5, 0.3, 0.0, 0.0, 0.0, 0.2, 0.4, 0.0, 0.1]
    assert zero_intervals(times, C) == [(2.0, 4.0)]
    assert revival_times(times, C) == [5.0]
    assert birth_time(times, C) is None


def test_sudden_birth():
    times = np.linspace(0.0, 2.0, 5)
    assert birth_time(times, [0.0, 0.0, 0.0, 0.1, 0.3]) == pytest.approx(1.5)
    assert birth_time(times, [0.0] * 5) is None
    assert zero_intervals(times, [0.0, 0.0, 0.0, 0.1, 0.0]) == [(0.0, 1.0)]
    assert revival_times(times, [0.1, 0.0, 0.0, 0.0, 0.0]) == []
