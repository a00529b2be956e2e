# app/bath.py
"""
Banho ôhmico: densidade espectral, função de correlação e a tabela de coeficientes
eta do funcional de influência discretizado.

Convenções:
- J(w) = (pi*K/2) * w * exp(-w/omega_c), com k_B = hbar = 1.
- C(t) = (1/pi) * integral_0^inf J(w) [coth(w/2T) cos(wt) - i sin(wt)] dw.
- As partes imaginárias têm forma fechada para o corte exponencial; as partes reais
  são integradas com QUADPACK (QAWO para os pesos oscilatórios) em [0, 40*omega_c].
"""
import logging
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy import integrate

from config import settings
from data_models.requests import BathSpec
from .errors import DomainError, NumericalError

ArrayLike = Union[float, np.ndarray]


def thermal_factor(omega: ArrayLike, T: float) -> ArrayLike:
    """
    w * coth(w / 2T), estável em w -> 0 (limite 2T).

    Abaixo de x = w/2T = 1e-3 usa a série x*coth(x) = 1 + x^2/3 - x^4/45.
    """
    omega = np.asarray(omega, dtype=float)
    x = omega / (2.0 * T)
    small = np.abs(x) < 1e-3
    safe_x = np.where(small, 1.0, x)
    series = 2.0 * T * (1.0 + x ** 2 / 3.0 - x ** 4 / 45.0)
    value = np.where(small, series, omega / np.tanh(safe_x))
    return value if value.ndim else float(value)


def spectral_density(omega: ArrayLike, bath: BathSpec) -> ArrayLike:
    """J(w) = (pi*K/2) w exp(-w/omega_c). Frequências negativas não fazem parte do domínio."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise DomainError(f"Densidade espectral definida apenas para w >= 0 (mínimo recebido {omega.min()}).")
    value = 0.5 * math.pi * bath.K * omega * np.exp(-omega / bath.omega_c)
    return value if value.ndim else float(value)


def _omega_max(omega_c: float) -> float:
    return settings.OMEGA_MAX_FACTOR * omega_c


def _integrate(func: Callable[[float], float], upper: float, name: str,
               weight: Optional[str] = None, wvar: Optional[float] = None,
               epsrel: Optional[float] = None) -> float:
    """Quadratura adaptativa em [0, upper]; qualquer IntegrationWarning vira NumericalError."""
    kwargs = dict(epsabs=settings.QUAD_EPSABS, epsrel=epsrel or settings.QUAD_EPSREL, limit=settings.QUAD_LIMIT)
    if weight is not None and wvar:
        kwargs.update(weight=weight, wvar=wvar)
    elif weight == "sin":
        # sin(0 * w) = 0
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(func, 0.0, upper, **kwargs)
        except integrate.IntegrationWarning as e:
            raise NumericalError(f"Quadratura '{name}' não convergiu (wvar={wvar}): {e}") from e
    if not math.isfinite(value):
        raise NumericalError(f"Quadratura '{name}' devolveu valor não finito (wvar={wvar}).")
    logging.debug(f"Quadratura '{name}' (wvar={wvar}): {value:.6e} +- {abserr:.1e}")
    return value


def bath_correlation(t: float, bath: BathSpec) -> complex:
    """
    Função de correlação do banho C(t).

    Re C é par em t e depende de T; Im C = -K t omega_c^3 / (1 + omega_c^2 t^2)^2 é ímpar
    e independente da temperatura.
    """
    if bath.K == 0:
        return 0j
    wc, T = bath.omega_c, bath.T
    real = _integrate(lambda w: math.exp(-w / wc) * thermal_factor(w, T), _omega_max(wc),
                      "Re C(t)", weight="cos", wvar=abs(t))
    imag = -t * wc ** 3 / (1.0 + (wc * t) ** 2) ** 2
    return 0.5 * bath.K * real + 1j * bath.K * imag


@dataclass(frozen=True, eq=False)
class EtaTable:
    """
    Coeficientes eta de uma discretização uniforme com passo dt.

    eta_same é o termo da própria janela (ordenado no tempo); eta_diff[d - 1] é o termo
    entre janelas separadas por d passos, d = 1..dk_max.
    """
    dt: float
    dk_max: int
    eta_same: complex
    eta_diff: np.ndarray

    def __post_init__(self):
        diff = np.array(self.eta_diff, dtype=complex)
        if diff.shape != (self.dk_max,):
            raise DomainError(f"eta_diff deve ter {self.dk_max} entradas (recebido {diff.shape}).")
        diff.setflags(write=False)
        object.__setattr__(self, "eta_diff", diff)
        object.__setattr__(self, "eta_same", complex(self.eta_same))

    def coefficient(self, sep: int) -> complex:
        """eta para uma separação de `sep` passos; zero além da memória (truncagem)."""
        if sep < 0:
            raise DomainError(f"Separação negativa: {sep}")
        if sep == 0:
            return self.eta_same
        if sep > self.dk_max:
            return 0j
        return complex(self.eta_diff[sep - 1])


@lru_cache(maxsize=64)
def _unit_eta(T: float, omega_c: float, dt: float, dk_max: int, epsrel: float) -> Tuple[complex, Tuple[complex, ...]]:
    """Coeficientes para K = 1. A tabela final é K vezes esta, o que garante a linearidade exata em K."""
    upper = _omega_max(omega_c)
    h = dt

    def window(w: float) -> float:
        # e^{-w/wc} * w coth(w/2T) * (2 - 2cos wh)/w^2, escrito com sinc para ser estável em w -> 0
        return math.exp(-w / omega_c) * thermal_factor(w, T) * h * h * np.sinc(w * h / (2.0 * math.pi)) ** 2

    re_same = 0.5 * 0.5 * _integrate(window, upper, "Re eta_same", epsrel=epsrel)
    im_same = -0.5 * (h * omega_c - math.atan(h * omega_c))

    diff = []
    for sep in range(1, dk_max + 1):
        lag = sep * h
        re_diff = 0.5 * _integrate(window, upper, f"Re eta_diff[{sep}]", weight="cos", wvar=lag, epsrel=epsrel)
        im_diff = -(math.atan(lag * omega_c)
                    - 0.5 * math.atan((lag + h) * omega_c)
                    - 0.5 * math.atan((lag - h) * omega_c))
        diff.append(complex(re_diff, im_diff))
    return complex(re_same, im_same), tuple(diff)


def eta_table(bath: BathSpec, dt: float, dk_max: int, epsrel: Optional[float] = None) -> EtaTable:
    """
    Tabela eta de um banho efetivo para passo `dt` e memória `dk_max`.

    eta_diff[d] = integral dupla de C(t' - t'') sobre duas janelas de largura dt separadas por d*dt;
    eta_same = integral de C sobre o triângulo t'' < t' da mesma janela.

    Raises:
        DomainError: dt <= 0 ou dk_max < 1.
        NumericalError: Se alguma quadratura não convergir.
    """
    if not (dt > 0 and math.isfinite(dt)):
        raise DomainError(f"Passo de tempo inválido: dt = {dt}")
    if dk_max < 1:
        raise DomainError(f"Memória inválida: dk_max = {dk_max}")
    if bath.K == 0:
        return EtaTable(dt, dk_max, 0j, np.zeros(dk_max, dtype=complex))

    same, diff = _unit_eta(bath.T, bath.omega_c, float(dt), int(dk_max), float(epsrel or settings.QUAD_EPSREL))
    logging.debug(f"Tabela eta: K={bath.K}, T={bath.T}, omega_c={bath.omega_c}, dt={dt}, dk_max={dk_max}")
    return EtaTable(dt, dk_max, bath.K * same, bath.K * np.array(diff, dtype=complex))
