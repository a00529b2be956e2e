# app/entanglement.py
"""
Concorrência de dois qubits: expressões fechadas para estados X e o cálculo geral de
Wootters, usado como oráculo interno. Inclui a análise de morte súbita e renascimento
do emaranhamento sobre uma série temporal.
"""
import logging
import math
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np

from config import settings
from data_models.responses import ConcurrenceBreakdown
from .errors import DomainError, NumericalError
from .model import XState

SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))

# Entradas fora do padrão X (ordem |00>, |01>, |10>, |11>)
_OFF_X = np.ones((4, 4), dtype=bool)
_OFF_X[np.diag_indices(4)] = False
_OFF_X[1, 2] = _OFF_X[2, 1] = _OFF_X[0, 3] = _OFF_X[3, 0] = False


def _clamp(name: str, value: float) -> float:
    if value >= 0:
        return value
    if value < -settings.TOL_POS:
        raise DomainError(f"População {name} = {value:.3e} abaixo de -tol_pos.")
    if value < -1e-9:
        logging.warning(f"População {name} = {value:.3e} ajustada para zero.")
    else:
        logging.debug(f"População {name} = {value:.3e} ajustada para zero.")
    return 0.0


def _at_most_one(C: float, source: str) -> float:
    """
    C > 1 só é admitido dentro da folga de positividade: com |c|^2 <= p p + tol_pos o máximo
    é 1 + 2 tol_pos. Acima disso o estado não é físico.
    """
    if C <= 1.0:
        return C
    if C > 1.0 + 2.0 * settings.TOL_POS:
        raise NumericalError(f"Concorrência {C:.9f} > 1 ({source}): estado fora do domínio físico.")
    logging.debug(f"Concorrência {C:.12f} ({source}) acima de 1 por arredondamento; registada como 1.")
    return 1.0


def concurrence_x(x: XState) -> ConcurrenceBreakdown:
    """
    C = max(0, 2*F1, 2*F2) com
    F1 = |cP| - sqrt(p00 p11) e F2 = |cQ| - sqrt(p01 p10).
    """
    p00, p01 = _clamp("p00", x.p00), _clamp("p01", x.p01)
    p10, p11 = _clamp("p10", x.p10), _clamp("p11", x.p11)
    F1 = abs(x.cP) - math.sqrt(p00 * p11)
    F2 = abs(x.cQ) - math.sqrt(p01 * p10)
    C = _at_most_one(max(0.0, 2.0 * F1, 2.0 * F2), "forma fechada X")
    return ConcurrenceBreakdown(F1=F1, F2=F2, C=C)


def _validate_density(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError(f"Esperada matriz densidade 4x4, recebida forma {rho.shape}.")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > settings.HERMITIAN_TOL:
        raise DomainError(f"Matriz densidade não hermitiana (desvio {herm:.3e}).")
    trace = np.trace(rho).real
    if abs(trace - 1.0) > settings.TRACE_TOL:
        raise DomainError(f"Matriz densidade com traço {trace:.12f} != 1.")
    return 0.5 * (rho + rho.conj().T)


def is_x_state(rho: np.ndarray) -> bool:
    return not np.any(np.asarray(rho)[_OFF_X])


def _closed_form(rho: np.ndarray) -> float:
    p00, p01, p10, p11 = (max(rho[i, i].real, 0.0) for i in range(4))
    cP, cQ = abs(rho[1, 2]), abs(rho[0, 3])
    a, b = math.sqrt(p01 * p10), math.sqrt(p00 * p11)
    # raízes dos autovalores de rho * (sy x sy) rho* (sy x sy)
    roots = [a + cP, abs(a - cP), b + cQ, abs(b - cQ)]
    return max(0.0, 2.0 * max(roots) - sum(roots))


def _eigen(rho: np.ndarray) -> float:
    evals, evecs = np.linalg.eigh(rho)
    if evals.min() < -settings.TOL_POS:
        raise DomainError(f"Matriz densidade não positiva (autovalor mínimo {evals.min():.3e}).")
    sqrt_rho = (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T
    # os valores singulares de sqrt(rho) (sy x sy) sqrt(rho)* são as raízes dos autovalores de Wootters
    singular = np.linalg.svd(sqrt_rho @ SIGMA_YY @ sqrt_rho.conj(), compute_uv=False)
    singular = np.sort(singular)[::-1]
    return max(0.0, float(singular[0] - singular[1:].sum()))


def wootters_concurrence(rho: np.ndarray, method: Literal["auto", "closed_form", "eigen"] = "auto") -> float:
    """
    Concorrência de Wootters de uma matriz densidade 4x4.

    Args:
        rho: Matriz densidade na base |00>, |01>, |10>, |11>.
        method: 'closed_form' só aceita estados X; 'eigen' faz o cálculo geral;
            'auto' escolhe a forma fechada sempre que o estado é X.

    Raises:
        DomainError: Entrada não hermitiana, sem traço unitário ou não positiva.
    """
    rho = _validate_density(rho)
    if method == "closed_form" or (method == "auto" and is_x_state(rho)):
        if not is_x_state(rho):
            raise DomainError("A forma fechada exige um estado X.")
        return _at_most_one(_closed_form(rho), "forma fechada")
    if method not in ("auto", "eigen"):
        raise DomainError(f"Método desconhecido: '{method}'")
    return _at_most_one(_eigen(rho), "autovalores")


def zero_intervals(times: Sequence[float], C: Sequence[float],
                   threshold: float = 1e-10) -> List[Tuple[float, float]]:
    """Intervalos maximais de comprimento positivo em que C = 0 (morte súbita)."""
    times, dead = np.asarray(times), np.asarray(C) <= threshold
    intervals = []
    start = None
    for i, flag in enumerate(dead):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            if i - 1 > start:
                intervals.append((float(times[start]), float(times[i - 1])))
            start = None
    if start is not None and len(dead) - 1 > start:
        intervals.append((float(times[start]), float(times[-1])))
    return intervals


def birth_time(times: Sequence[float], C: Sequence[float], threshold: float = 1e-10) -> Optional[float]:
    """
    Primeiro instante em que C fica positiva depois de um trecho inicial nulo (nascimento súbito).
    Devolve None se C já começa positiva ou nunca fica positiva.
    """
    alive = np.asarray(C) > threshold
    if alive.size == 0 or alive[0] or not alive.any():
        return None
    return float(np.asarray(times)[np.argmax(alive)])


def revival_times(times: Sequence[float], C: Sequence[float], threshold: float = 1e-10) -> List[float]:
    """Instantes em que C volta a ser positiva no fim de cada intervalo de morte súbita."""
    times, C = np.asarray(times), np.asarray(C)
    revivals = []
    for _, end in zero_intervals(times, C, threshold):
        idx = int(np.searchsorted(times, end)) + 1
        if idx < len(times):
            revivals.append(float(times[idx]))
    return revivals
