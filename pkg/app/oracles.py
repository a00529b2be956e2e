# app/oracles.py
"""
Referências exatas independentes do motor principal: dinâmica fechada de dois níveis,
decaimento exato por desfasamento puro e soma explícita sobre todos os caminhos para
poucos passos. Nenhuma delas reutiliza a exponencial de matriz nem a quadratura do motor.
"""
import logging
import math
from typing import Callable, List

import numpy as np
from scipy.linalg import expm

from config import settings
from data_models.requests import BathSpec
from .errors import DomainError, ResourceError
from .model import BranchSpec, BranchState

ORACLE_INTERVALS = 2 ** 14
PATH_COEFF_INTERVALS = 2 ** 16


def _hermitian_state(m: np.ndarray) -> BranchState:
    m = 0.5 * (m + m.conj().T)
    return BranchState(m / np.trace(m).real)


def rabi_closed(branch: BranchSpec, rho0: BranchState, t: float) -> BranchState:
    """Conjugação exata de rho0 por exp(-i t (bias sigma_z + tunneling sigma_x))."""
    U = expm(-1j * t * branch.hamiltonian)
    return _hermitian_state(U @ rho0.m @ U.conj().T)


def _omega_coth(omega: np.ndarray, T: float) -> np.ndarray:
    # w coth(w/2T) = w + 2w/(e^{w/T} - 1), com limite 2T em w = 0
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        value = omega + 2.0 * omega / np.expm1(omega / T)
    return np.where(omega > 0, value, 2.0 * T)


def _simpson(values: np.ndarray, h: float) -> float:
    return h / 3.0 * (values[0] + values[-1] + 4.0 * values[1:-1:2].sum() + 2.0 * values[2:-1:2].sum())


def _richardson(integrand: Callable[[np.ndarray], np.ndarray], upper: float, intervals: int) -> float:
    """Simpson composto com N e 2N intervalos em [0, upper] e extrapolação de Richardson."""
    coarse = _simpson(integrand(np.linspace(0.0, upper, intervals + 1)), upper / intervals)
    fine = _simpson(integrand(np.linspace(0.0, upper, 2 * intervals + 1)), upper / (2 * intervals))
    return (16.0 * fine - coarse) / 15.0


def dephasing_decay(bath: BathSpec, t: float, intervals: int = ORACLE_INTERVALS) -> float:
    """
    Expoente exato de desfasamento puro,
    Gamma(t) = (4/pi) integral_0^inf (J(w)/w^2) coth(w/2T) (1 - cos wt) dw,
    para operadores de acoplamento com autovalores +-1. A coerência decai como exp(-Gamma).

    Simpson composto com N e 2N intervalos em [0, 40 omega_c] e extrapolação de Richardson.
    """
    if t < 0:
        raise DomainError(f"dephasing_decay exige t >= 0 (recebido {t}).")
    if bath.K == 0 or t == 0:
        return 0.0
    upper = settings.OMEGA_MAX_FACTOR * bath.omega_c

    def integrand(omega: np.ndarray) -> np.ndarray:
        # (1 - cos wt)/w^2 = (t^2/2) sinc^2(wt/2pi)
        return (np.exp(-omega / bath.omega_c) * _omega_coth(omega, bath.T)
                * 0.5 * t * t * np.sinc(omega * t / (2.0 * math.pi)) ** 2)

    # (4/pi) (pi K/2) = 2K
    return 2.0 * bath.K * _richardson(integrand, upper, intervals)


def path_coefficients(bath: BathSpec, dt: float, n_steps: int,
                      intervals: int = PATH_COEFF_INTERVALS) -> np.ndarray:
    """
    Coeficientes [eta_0, eta_1, ..., eta_n] da soma de caminhos, integrados diretamente em
    frequência (partes reais e imaginárias) sem passar pela tabela eta do motor:

        Re eta_d = (K/2) int e^{-w/wc} w coth(w/2T) cos(w d h) (2 - 2cos wh)/w^2 dw
        Im eta_d = -(K/2) int e^{-w/wc} sin(w d h) (2 - 2cos wh)/w dw
        Re eta_0 = (K/2) int e^{-w/wc} w coth(w/2T) (1 - cos wh)/w^2 dw
        Im eta_0 = -(K/2) int e^{-w/wc} (h - sin(wh)/w) dw
    """
    if not dt > 0:
        raise DomainError(f"Passo de tempo inválido: dt = {dt}")
    coeffs = np.zeros(n_steps + 1, dtype=complex)
    if bath.K == 0:
        return coeffs
    h, wc, T = dt, bath.omega_c, bath.T
    upper = settings.OMEGA_MAX_FACTOR * wc

    def window(omega: np.ndarray) -> np.ndarray:
        # (2 - 2cos wh)/w^2 = h^2 sinc^2(wh/2pi)
        return h * h * np.sinc(omega * h / (2.0 * math.pi)) ** 2

    def real_part(lag: float) -> float:
        return _richardson(lambda w: np.exp(-w / wc) * _omega_coth(w, T) * np.cos(w * lag) * window(w),
                           upper, intervals)

    def imag_part(lag: float) -> float:
        return -_richardson(lambda w: np.exp(-w / wc) * np.sin(w * lag) * w * window(w), upper, intervals)

    same_imag = -_richardson(lambda w: np.exp(-w / wc) * h * (1.0 - np.sinc(w * h / math.pi)), upper, intervals)
    coeffs[0] = complex(0.5 * real_part(0.0), same_imag)
    for sep in range(1, n_steps + 1):
        coeffs[sep] = complex(real_part(sep * h), imag_part(sep * h))
    return 0.5 * bath.K * coeffs


def full_path_sum(branch: BranchSpec, bath: BathSpec, rho0: BranchState, dt: float,
                  n_steps: int) -> List[BranchState]:
    """
    Avalia a mesma soma de caminhos discretizada do motor QUAPI, sem truncagem de memória,
    enumerando explicitamente os 4^(k+1) caminhos até cada passo k. Os coeficientes vêm de
    `path_coefficients`.

    Raises:
        ResourceError: n_steps acima do limite de enumeração.
    """
    if n_steps < 1:
        raise DomainError(f"n_steps deve ser >= 1 (recebido {n_steps}).")
    if n_steps > settings.MAX_BRUTE_FORCE_STEPS:
        raise ResourceError(
            f"Enumeração de 4^{n_steps + 1} caminhos acima do limite ({settings.MAX_BRUTE_FORCE_STEPS} passos)."
        )
    U = expm(-1j * dt * branch.hamiltonian)
    coeffs = path_coefficients(bath, dt, n_steps)

    # índice do par (s+, s-) -> valores de spin
    spin_plus = np.array([1, 1, -1, -1])
    spin_minus = np.array([1, -1, 1, -1])
    rho0_flat = rho0.m.reshape(4)

    states = [rho0]
    for k in range(1, n_steps + 1):
        paths = np.indices((4,) * (k + 1)).reshape(k + 1, -1)
        plus, minus = spin_plus[paths], spin_minus[paths]

        weight = rho0_flat[paths[0]].astype(complex)
        for j in range(1, k + 1):
            weight *= U[(1 - plus[j]) // 2, (1 - plus[j - 1]) // 2]
            weight *= np.conj(U[(1 - minus[j]) // 2, (1 - minus[j - 1]) // 2])

        phase = np.zeros(paths.shape[1], dtype=complex)
        for j in range(1, k + 1):
            for jp in range(1, j + 1):
                c = coeffs[j - jp]
                phase -= (plus[j] - minus[j]) * (c * plus[jp] - np.conj(c) * minus[jp])
        weight *= np.exp(phase)

        end = paths[k]
        rho = np.array([weight[end == alpha].sum() for alpha in range(4)]).reshape(2, 2)
        states.append(_hermitian_state(rho))
    logging.debug(f"Soma explícita de caminhos concluída: {n_steps} passos, {4 ** (n_steps + 1)} caminhos")
    return states
