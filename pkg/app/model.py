# app/model.py
"""
Mapeamento exato do par de qubits em dois problemas spin-bóson independentes.

O espaço de dois qubits se decompõe na soma direta dos subespaços Q = {|00>, |11>} e
P = {|01>, |10>}. Em cada um deles o Hamiltoniano (sistema + acoplamento de desfasamento)
tem a forma de um spin-bóson com viés, tunelamento e um banho efetivo próprio.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config import settings
from data_models.requests import BathSpec, BathTopology, QubitPairParams
from .errors import ConfigError, DomainError

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

BRANCH_Q = "Q"
BRANCH_P = "P"

# Com um banho comum, B = B_L + B_R = 2*B_c; a densidade espectral é quadrática na amplitude.
COMMON_BATH_FACTOR = 4.0


@dataclass(frozen=True)
class BranchSpec:
    """
    Problema de dois níveis efetivo de um ramo.

    `offset` guarda o termo escalar +-J*delta; ele cancela em U rho U^dagger e nunca
    entra na propagação.
    """
    bias: float
    tunneling: float
    offset: float
    k_eff: float
    branch_id: str

    def __post_init__(self):
        if self.k_eff < 0:
            raise DomainError(f"Parâmetro de Kondo efetivo negativo no ramo {self.branch_id}: {self.k_eff}")
        if self.branch_id not in (BRANCH_Q, BRANCH_P):
            raise DomainError(f"Ramo desconhecido: '{self.branch_id}'")

    @property
    def hamiltonian(self) -> np.ndarray:
        """bias*sigma_z + tunneling*sigma_x (sem o deslocamento escalar)."""
        return self.bias * SIGMA_Z + self.tunneling * SIGMA_X


@dataclass(frozen=True, eq=False)
class BranchState:
    """Matriz densidade 2x2 de um ramo. Base Q: (|00>, |11>); base P: (|01>, |10>)."""
    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=complex)
        if m.shape != (2, 2) or not np.all(np.isfinite(m)):
            raise DomainError(f"Estado de ramo deve ser uma matriz 2x2 finita (forma recebida {m.shape}).")
        herm = np.max(np.abs(m - m.conj().T))
        if herm > settings.HERMITIAN_TOL:
            raise DomainError(f"Estado de ramo não hermitiano (desvio {herm:.3e}).")
        trace = np.trace(m).real
        if abs(trace - 1.0) > settings.TRACE_TOL:
            raise DomainError(f"Estado de ramo com traço {trace:.12f} != 1.")
        lowest = np.linalg.eigvalsh(m).min()
        if lowest < -settings.TOL_POS:
            raise DomainError(f"Estado de ramo não positivo (autovalor mínimo {lowest:.3e}).")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def vector(self) -> np.ndarray:
        return self.m.reshape(4).copy()

    @property
    def populations(self) -> Tuple[float, float]:
        return float(self.m[0, 0].real), float(self.m[1, 1].real)

    @property
    def coherence(self) -> complex:
        return complex(self.m[0, 1])

    @property
    def purity(self) -> float:
        return float(np.trace(self.m @ self.m).real)


@dataclass(frozen=True)
class XState:
    """
    Matriz densidade reduzida 4x4 em forma X, na ordem |00>, |01>, |10>, |11>.
    Só as entradas do padrão X existem; as restantes são zero por construção.
    """
    p00: float
    p01: float
    p10: float
    p11: float
    cP: complex
    cQ: complex

    def __post_init__(self):
        total = self.p00 + self.p01 + self.p10 + self.p11
        if abs(total - 1.0) > settings.TRACE_TOL:
            raise DomainError(f"Estado X com traço {total:.12f} != 1.")
        if min(self.p00, self.p01, self.p10, self.p11) < -settings.TOL_POS:
            raise DomainError("Estado X com população negativa além da tolerância.")
        if abs(self.cP) ** 2 > self.p01 * self.p10 + settings.TOL_POS:
            raise DomainError("Coerência P excede o limite de positividade |cP|^2 <= p01*p10.")
        if abs(self.cQ) ** 2 > self.p00 * self.p11 + settings.TOL_POS:
            raise DomainError("Coerência Q excede o limite de positividade |cQ|^2 <= p00*p11.")

    def to_matrix(self) -> np.ndarray:
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0], rho[1, 1], rho[2, 2], rho[3, 3] = self.p00, self.p01, self.p10, self.p11
        rho[1, 2], rho[2, 1] = self.cP, np.conj(self.cP)
        rho[0, 3], rho[3, 0] = self.cQ, np.conj(self.cQ)
        return rho


def _check_kondo(name: str, value: float):
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"Parâmetro de Kondo {name} inválido: {value} (deve ser finito e >= 0).")


def build_branches(params: QubitPairParams, topology: BathTopology,
                   kL: float, kR: float) -> Tuple[BranchSpec, BranchSpec]:
    """
    Constrói os dois ramos efetivos (Q, P) do par de qubits.

    Q: viés eps1+eps2, tunelamento J*gamma, deslocamento +J*delta, acoplado a B_L + B_R.
    P: viés eps1-eps2, tunelamento J, deslocamento -J*delta, acoplado a B_L - B_R.

    Args:
        params: Energias do par de qubits.
        topology: Topologia dos banhos.
        kL: Parâmetro de Kondo do banho esquerdo (ou do banho comum).
        kR: Parâmetro de Kondo do banho direito.

    Returns:
        A tupla (ramo Q, ramo P).

    Raises:
        DomainError: Se algum parâmetro de Kondo for negativo.
        ConfigError: Se a topologia 'single_left' vier com kR != 0.
    """
    _check_kondo("kL", kL)
    _check_kondo("kR", kR)
    topology = BathTopology(topology)

    if topology == BathTopology.SEPARATE:
        # Banhos independentes: as densidades espectrais de B_L +- B_R somam-se
        k_q = k_p = kL + kR
    elif topology == BathTopology.SINGLE_LEFT:
        if kR != 0:
            raise ConfigError(f"Topologia 'single_left' exige kR = 0 (recebido {kR}).")
        k_q = k_p = kL
    else:
        # Banho comum: B = 2*B_c no ramo Q e B_L - B_R = 0 no ramo P (subespaço livre de decoerência)
        k_q, k_p = COMMON_BATH_FACTOR * kL, 0.0

    jd = params.J * params.delta
    branch_q = BranchSpec(bias=params.eps1 + params.eps2, tunneling=params.J * params.gamma,
                          offset=jd, k_eff=k_q, branch_id=BRANCH_Q)
    branch_p = BranchSpec(bias=params.eps1 - params.eps2, tunneling=params.J,
                          offset=-jd, k_eff=k_p, branch_id=BRANCH_P)
    return branch_q, branch_p


def effective_bath(branch: BranchSpec, topology: BathTopology,
                   bath_L: BathSpec, bath_R: BathSpec) -> BathSpec:
    """Banho ôhmico visto por um ramo: K = k_eff, com a temperatura e o corte do banho ativo."""
    topology = BathTopology(topology)
    reference = bath_L
    if topology == BathTopology.SEPARATE and bath_L.K == 0 and bath_R.K > 0:
        reference = bath_R
    elif topology == BathTopology.SEPARATE and bath_L.K > 0 and bath_R.K > 0:
        if bath_L.T != bath_R.T or bath_L.omega_c != bath_R.omega_c:
            raise ConfigError("Banhos separados ativos devem partilhar T e omega_c.")
    return BathSpec(K=branch.k_eff, T=reference.T, omega_c=reference.omega_c)


def _check_weight(a: float):
    if not (math.isfinite(a) and 0.0 <= a <= 1.0):
        raise DomainError(f"Peso a = {a} fora do intervalo [0, 1].")


def bell_initial(a: float) -> Tuple[BranchState, BranchState, float]:
    """Estados de Bell nos dois ramos: rho_Q(0) = rho_P(0) = [[1/2, 1/2], [1/2, 1/2]]."""
    _check_weight(a)
    bell = np.full((2, 2), 0.5, dtype=complex)
    return BranchState(bell), BranchState(bell), a


def diagonal_initial(a: float) -> Tuple[BranchState, BranchState, float]:
    """Estados diagonais (maximamente misturados) nos dois ramos."""
    _check_weight(a)
    mixed = 0.5 * np.eye(2, dtype=complex)
    return BranchState(mixed), BranchState(mixed), a


def assemble_xstate(a: float, rhoQ: BranchState, rhoP: BranchState) -> XState:
    """rho_S = a*rho_Q (+) (1-a)*rho_P, organizado em forma X."""
    _check_weight(a)
    q, p = rhoQ.m, rhoP.m
    return XState(
        p00=float(a * q[0, 0].real),
        p01=float((1.0 - a) * p[0, 0].real),
        p10=float((1.0 - a) * p[1, 1].real),
        p11=float(a * q[1, 1].real),
        cP=complex((1.0 - a) * p[0, 1]),
        cQ=complex(a * q[0, 1]),
    )


def split_direct_sum(rho: np.ndarray) -> Tuple[float, BranchState, BranchState]:
    """
    Decompõe uma matriz densidade 4x4 na forma a*rho_Q (+) (1-a)*rho_P.

    Raises:
        DomainError: Se existirem coerências cruzadas entre P e Q (o mapeamento não as evolui).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError(f"Esperada matriz 4x4, recebida forma {rho.shape}.")
    q_idx, p_idx = [0, 3], [1, 2]
    cross = np.max(np.abs(rho[np.ix_(q_idx, p_idx)]))
    if cross > settings.HERMITIAN_TOL:
        raise DomainError(f"Estado inicial com coerências cruzadas P-Q (|max| = {cross:.3e}); não é soma direta.")
    block_q = rho[np.ix_(q_idx, q_idx)]
    block_p = rho[np.ix_(p_idx, p_idx)]
    a = float(np.trace(block_q).real)
    _check_weight(a)
    mixed = 0.5 * np.eye(2, dtype=complex)
    rhoQ = BranchState(block_q / a) if a > 0 else BranchState(mixed)
    rhoP = BranchState(block_p / (1.0 - a)) if a < 1 else BranchState(mixed)
    logging.debug(f"Estado inicial decomposto: a = {a:.6f}")
    return a, rhoQ, rhoP
