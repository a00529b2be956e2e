# app/quapi.py
"""
Propagador QUAPI (integral de caminho quase-adiabática) para um ramo de dois níveis.

Cada ponto do caminho é um par (s+, s-) com s = +1 (índice 0) ou s = -1 (índice 1),
codificado como alpha = 2*i+ + i-. A janela [t_{j-1}, t_j] carrega o ponto s_j (j >= 1);
s_0 só transporta o peso do estado inicial. Ao juntar um novo ponto ao tensor aumentado
aplicam-se de imediato todos os fatores de influência entre ele e os pontos retidos, por
isso a leitura em t_k é uma soma simples sobre os eixos mais antigos.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from config import settings
from data_models.requests import BathSpec, BathTopology, QubitPairParams
from data_models.responses import ConcurrenceBreakdown
from .bath import EtaTable, eta_table
from .entanglement import concurrence_x
from .errors import DomainError, NumericalError, ResourceError
from .model import BranchSpec, BranchState, XState, assemble_xstate, build_branches, effective_bath

# Valores de s para cada índice alpha = 2*i+ + i-
S_PLUS = np.array([1.0, 1.0, -1.0, -1.0])
S_MINUS = np.array([1.0, -1.0, 1.0, -1.0])

TRAJECTORY_COLUMNS = ["t", "p00", "p01", "p10", "p11", "Re_cP", "Im_cP", "Re_cQ", "Im_cQ", "F1", "F2", "C"]


@dataclass(frozen=True, eq=False)
class PropagatorTable:
    """
    Amplitudes de curto tempo K(s'; s) = <s'+|U|s+> <s-|U^dagger|s'->, com U = exp(-i H_b dt).
    `amp[alpha', alpha]` propaga o vetor (rho_++, rho_+-, rho_-+, rho_--).
    """
    forward: np.ndarray
    amp: np.ndarray

    @property
    def is_diagonal(self) -> bool:
        return not np.any(self.forward[0, 1]) and not np.any(self.forward[1, 0])


def system_propagator(branch: BranchSpec, dt: float) -> PropagatorTable:
    """
    Exponencial exata de H_b = bias*sigma_z + tunneling*sigma_x em dt:
    U = cos(W dt) I - i sin(W dt)/W H_b, com W = sqrt(bias^2 + tunneling^2).
    O deslocamento escalar do ramo é omitido (cancela em U rho U^dagger).
    """
    if not dt > 0:
        raise DomainError(f"Passo de tempo inválido: dt = {dt}")
    omega = math.hypot(branch.bias, branch.tunneling)
    phase = omega * dt
    # sin(W dt)/W -> dt quando W -> 0
    sinc = dt * np.sinc(phase / math.pi)
    forward = math.cos(phase) * np.eye(2, dtype=complex) - 1j * sinc * branch.hamiltonian
    amp = np.kron(forward, forward.conj())
    forward.setflags(write=False)
    amp.setflags(write=False)
    return PropagatorTable(forward=forward, amp=amp)


def influence_factor(eta: EtaTable, s_k: Tuple[int, int], s_kp: Tuple[int, int], sep: int) -> complex:
    """
    Fator de Feynman-Vernon exp[-(s_k+ - s_k-)(eta s_k'+ - eta* s_k'-)] entre dois pontos.
    sep = 0 usa eta_same; sep > dk_max devolve 1 (memória truncada).
    """
    if sep > eta.dk_max:
        return 1.0 + 0j
    coeff = eta.coefficient(sep)
    exponent = -(s_k[0] - s_k[1]) * (coeff * s_kp[0] - coeff.conjugate() * s_kp[1])
    return complex(np.exp(exponent))


def _influence_matrix(coeff: complex) -> np.ndarray:
    """F[alpha_novo, alpha_antigo] para um coeficiente eta."""
    diff_new = (S_PLUS - S_MINUS)[:, None]
    return np.exp(-diff_new * (coeff * S_PLUS[None, :] - np.conj(coeff) * S_MINUS[None, :]))


def _self_factor(coeff: complex) -> np.ndarray:
    return np.exp(-(S_PLUS - S_MINUS) * (coeff * S_PLUS - np.conj(coeff) * S_MINUS))


def _on_axes(matrix: np.ndarray, first: int, second: int, ndim: int) -> np.ndarray:
    shape = [1] * ndim
    shape[first] = shape[second] = 4
    return matrix.reshape(shape)


def _append_weights(table: PropagatorTable, eta: EtaTable, retained: int) -> np.ndarray:
    """
    Pesos para juntar um ponto novo a um tensor com `retained` eixos: propagador entre o
    ponto mais recente e o novo, fator próprio do novo e fatores de influência com todos
    os pontos retidos (o eixo p fica a retained - p passos do novo).
    """
    ndim = retained + 1
    weights = np.ones((4,) * ndim, dtype=complex)
    weights = weights * _on_axes(table.amp.T, retained - 1, retained, ndim)
    weights = weights * _self_factor(eta.eta_same).reshape((1,) * retained + (4,))
    for axis in range(retained):
        sep = retained - axis
        weights = weights * _on_axes(_influence_matrix(eta.coefficient(sep)).T, axis, retained, ndim)
    return weights


def _emit(raw: np.ndarray, step: int, branch_id: str) -> BranchState:
    """Verifica deriva de traço e de hermiticidade e devolve a parte hermitiana normalizada."""
    m = raw.reshape(2, 2)
    trace = np.trace(m)
    drift = abs(trace - 1.0)
    if drift > settings.TRACE_DRIFT_TOL:
        raise NumericalError(f"Ramo {branch_id}: deriva de traço {drift:.3e} no passo {step}.")
    anti = 0.5 * np.max(np.abs(m - m.conj().T))
    if anti > settings.HERMITIAN_DRIFT_TOL:
        raise NumericalError(f"Ramo {branch_id}: parte anti-hermitiana {anti:.3e} no passo {step}.")
    herm = 0.5 * (m + m.conj().T) / trace.real
    lowest = np.linalg.eigvalsh(herm).min()
    if lowest < -settings.TOL_POS:
        raise NumericalError(f"Ramo {branch_id}: autovalor {lowest:.3e} abaixo de -tol_pos no passo {step}.")
    if drift > 1e-10:
        logging.debug(f"Ramo {branch_id}: deriva de traço {drift:.2e} no passo {step}")
    return BranchState(herm)


def _evolve_unitary(table: PropagatorTable, rho0: BranchState, n_steps: int, branch_id: str) -> List[BranchState]:
    vec = rho0.vector
    states = [rho0]
    for step in range(1, n_steps + 1):
        vec = table.amp @ vec
        states.append(_emit(vec, step, branch_id))
    return states


def _evolve_diagonal(table: PropagatorTable, eta: EtaTable, rho0: BranchState,
                     n_steps: int, branch_id: str) -> List[BranchState]:
    """
    Propagador diagonal: só os caminhos constantes contribuem. O expoente no passo k é
    k*phi_self + soma_{d=1}^{min(k-1, dk_max)} (k - d) phi_d, sem tensor.
    """
    diag = np.diag(table.amp)
    phi_self = np.log(_self_factor(eta.eta_same))
    phi = [np.log(np.diag(_influence_matrix(eta.coefficient(sep)))) for sep in range(1, eta.dk_max + 1)]
    vec0 = rho0.vector
    states = [rho0]
    for step in range(1, n_steps + 1):
        exponent = step * phi_self
        for sep in range(1, min(step - 1, eta.dk_max) + 1):
            exponent = exponent + (step - sep) * phi[sep - 1]
        raw = vec0 * diag ** step * np.exp(exponent)
        states.append(_emit(raw, step, branch_id))
    return states


def evolve_branch(branch: BranchSpec, bath: BathSpec, rho0: BranchState, dt: float, dk_max: int,
                  n_steps: int, tensor_cap: Optional[int] = None) -> List[BranchState]:
    """
    Dinâmica reduzida de um ramo acoplado ao seu banho efetivo.

    Fase de crescimento: até dk_max passos o tensor aumentado ganha um eixo por passo.
    Fase de iteração: o ponto mais antigo é somado depois de receber o último fator de
    influência e o novo ponto é acrescentado. Com k_eff = 0 a evolução é unitária e com
    tunelamento nulo usa-se a forma fechada dos caminhos constantes (memória arbitrária).

    Args:
        branch: Ramo efetivo (Q ou P).
        bath: Banho efetivo do ramo; bath.K deve coincidir com branch.k_eff.
        rho0: Estado inicial do ramo.
        dt: Passo de tempo.
        dk_max: Número de passos de memória.
        n_steps: Número de passos a propagar.
        tensor_cap: Limite de entradas do tensor (padrão em settings).

    Returns:
        n_steps + 1 estados, o primeiro sendo rho0.

    Raises:
        DomainError: Parâmetros inválidos ou banho inconsistente com o ramo.
        ResourceError: Se o tensor aumentado exceder o limite.
        NumericalError: Deriva de traço, de hermiticidade ou de positividade.
    """
    if n_steps < 1:
        raise DomainError(f"n_steps deve ser >= 1 (recebido {n_steps}).")
    if dk_max < 1:
        raise DomainError(f"dk_max deve ser >= 1 (recebido {dk_max}).")
    if not math.isclose(bath.K, branch.k_eff, rel_tol=1e-12, abs_tol=1e-15):
        raise DomainError(f"Banho com K = {bath.K} inconsistente com k_eff = {branch.k_eff} do ramo {branch.branch_id}.")

    table = system_propagator(branch, dt)
    if branch.k_eff == 0:
        logging.debug(f"Ramo {branch.branch_id}: k_eff = 0, evolução unitária")
        return _evolve_unitary(table, rho0, n_steps, branch.branch_id)

    memory = min(dk_max, n_steps)
    if table.is_diagonal:
        logging.debug(f"Ramo {branch.branch_id}: propagador diagonal, soma fechada sobre caminhos constantes")
        return _evolve_diagonal(table, eta_table(bath, dt, memory), rho0, n_steps, branch.branch_id)

    cap = tensor_cap or settings.TENSOR_CAP
    entries = 4 ** (memory + 1)
    if entries > cap:
        raise ResourceError(
            f"Tensor aumentado com {entries} entradas excede o limite de {cap} (dk_max = {dk_max})."
        )
    eta = eta_table(bath, dt, memory)

    logging.info(f"Ramo {branch.branch_id}: QUAPI com dt={dt}, dk_max={memory}, {n_steps} passos")
    states = [rho0]
    tensor = (table.amp @ rho0.vector) * _self_factor(eta.eta_same)
    states.append(_emit(tensor, 1, branch.branch_id))

    iterate_weights = None
    for step in range(2, n_steps + 1):
        retained = tensor.ndim
        if retained < memory:
            tensor = tensor[..., None] * _append_weights(table, eta, retained)
        else:
            if iterate_weights is None:
                iterate_weights = _append_weights(table, eta, retained).reshape(4, 4 ** (retained - 1), 4)
            # o eixo mais antigo recebe o último fator e é somado
            tensor = np.einsum("or,orn->rn", tensor.reshape(4, -1), iterate_weights).reshape((4,) * retained)
        states.append(_emit(tensor.reshape(-1, 4).sum(axis=0), step, branch.branch_id))
    return states


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Série temporal do par de qubits: estados X, concorrência e estados dos ramos."""
    a: float
    times: np.ndarray
    states: List[XState]
    breakdowns: List[ConcurrenceBreakdown]
    branch_q: List[BranchState] = field(default_factory=list)
    branch_p: List[BranchState] = field(default_factory=list)

    def __post_init__(self):
        if len(self.times) != len(self.states) or len(self.states) != len(self.breakdowns):
            raise DomainError("Trajetória com número de tempos, estados e concorrências diferente.")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise DomainError("Os tempos da trajetória devem ser estritamente crescentes.")

    @property
    def concurrence(self) -> np.ndarray:
        return np.array([b.C for b in self.breakdowns])

    @property
    def F1(self) -> np.ndarray:
        return np.array([b.F1 for b in self.breakdowns])

    @property
    def F2(self) -> np.ndarray:
        return np.array([b.F2 for b in self.breakdowns])

    def to_frame(self) -> pd.DataFrame:
        rows = [
            [t, x.p00, x.p01, x.p10, x.p11, x.cP.real, x.cP.imag, x.cQ.real, x.cQ.imag, b.F1, b.F2, b.C]
            for t, x, b in zip(self.times, self.states, self.breakdowns)
        ]
        return pd.DataFrame(rows, columns=TRAJECTORY_COLUMNS)

    def inversion_intervals(self, q_bias: float) -> List[Tuple[float, float]]:
        """
        Intervalos (início, fim) com inversão de população entre |00> e |11>: o estado
        excitado do subespaço Q mais populado que o fundamental.

        Com H_Q = q_bias*sigma_z + ..., |00> é o excitado para q_bias > 0 (inversão quando
        p00 > p11) e |11> para q_bias < 0. Sem viés os dois níveis são degenerados e não há inversão.
        """
        if q_bias == 0:
            return []
        inverted = np.array([(x.p00 > x.p11) if q_bias > 0 else (x.p11 > x.p00) for x in self.states])
        intervals = []
        start = None
        for i, flag in enumerate(inverted):
            if flag and start is None:
                start = i
            elif not flag and start is not None:
                intervals.append((float(self.times[start]), float(self.times[i - 1])))
                start = None
        if start is not None:
            intervals.append((float(self.times[start]), float(self.times[-1])))
        return intervals


def trajectory_from_branches(a: float, dt: float, q_states: List[BranchState],
                             p_states: List[BranchState]) -> Trajectory:
    """Monta a trajetória do par a partir das evoluções dos dois ramos."""
    if len(q_states) != len(p_states):
        raise DomainError("Os ramos Q e P têm comprimentos diferentes.")
    times = dt * np.arange(len(q_states))
    states = [assemble_xstate(a, q, p) for q, p in zip(q_states, p_states)]
    breakdowns = [concurrence_x(x) for x in states]
    return Trajectory(a=a, times=times, states=states, breakdowns=breakdowns,
                      branch_q=list(q_states), branch_p=list(p_states))


def evolve_branches(params: QubitPairParams, topology: BathTopology, bath_L: BathSpec, bath_R: BathSpec,
                    rhoQ0: BranchState, rhoP0: BranchState, dt: float, dk_max: int, n_steps: int,
                    tensor_cap: Optional[int] = None, skip_q: bool = False,
                    skip_p: bool = False) -> Tuple[List[BranchState], List[BranchState]]:
    """Evolui os dois ramos; um ramo marcado para saltar fica congelado no estado inicial (peso zero)."""
    branch_q, branch_p = build_branches(params, topology, bath_L.K, bath_R.K)
    evolved = []
    for branch, rho0, skip in ((branch_q, rhoQ0, skip_q), (branch_p, rhoP0, skip_p)):
        if skip:
            evolved.append([rho0] * (n_steps + 1))
            continue
        bath = effective_bath(branch, topology, bath_L, bath_R)
        evolved.append(evolve_branch(branch, bath, rho0, dt, dk_max, n_steps, tensor_cap))
    return evolved[0], evolved[1]


def simulate_pair(params: QubitPairParams, topology: BathTopology, bath_L: BathSpec, bath_R: BathSpec,
                  a: float, rhoQ0: BranchState, rhoP0: BranchState, dt: float, dk_max: int, n_steps: int,
                  tensor_cap: Optional[int] = None) -> Trajectory:
    """
    Dinâmica completa do par: mapeamento P/Q, QUAPI em cada ramo, montagem do estado X
    e concorrência em cada instante.
    """
    q_states, p_states = evolve_branches(params, topology, bath_L, bath_R, rhoQ0, rhoP0, dt, dk_max, n_steps,
                                         tensor_cap, skip_q=(a == 0.0), skip_p=(a == 1.0))
    trajectory = trajectory_from_branches(a, dt, q_states, p_states)

    if a <= 0.5 and params.eps1 == params.eps2:
        worst = float(trajectory.F2.max())
        if worst > 1e-9:
            logging.warning(f"F2 = {worst:.3e} > 0 numa trajetória com a <= 1/2 e eps1 = eps2.")
    return trajectory
