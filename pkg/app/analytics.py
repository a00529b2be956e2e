# app/analytics.py
"""
Expressões analíticas de longo prazo no regime de acoplamento fraco: polarização e
coerência de equilíbrio de cada ramo, constantes de renormalização e a concorrência
estacionária em forma fechada.
"""
import cmath
import logging
import math

from data_models.requests import QubitPairParams
from data_models.responses import SteadyEstimate, SteadyParams
from .errors import DomainError

# Razões B_2n / 2n da série assintótica de psi(z)
_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)

# Fronteiras da região de validade
VALIDITY_MAX_K = 0.1


def digamma(z: complex) -> complex:
    """
    Função digama complexa.

    Reflexão para Re z < 1/2, recorrência psi(z) = psi(z + 1) - 1/z até |z| >= 10 e,
    depois, a série assintótica ln z - 1/(2z) - soma B_2n / (2n z^2n).
    """
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise DomainError(f"Digama tem polo em z = {z.real:g}.")
    if z.real < 0.5:
        return digamma(1.0 - z) - math.pi / cmath.tan(math.pi * z)

    shift = 0j
    while abs(z) < 10.0:
        shift -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    series = 0j
    power = inv2
    for coeff in _ASYMPTOTIC:
        series += coeff * power
        power *= inv2
    return shift + cmath.log(z) - 0.5 / z - series


def mu_coefficient(J: float, T: float) -> float:
    """
    mu = Re psi(iJ/pi T) - ln(J/T).

    Usa-se a parte real: Re psi(iy) = Re psi(1 + iy), e é essa a forma avaliada.
    Não depende de K; quando T -> 0, mu -> -ln(pi).
    """
    if not (J > 0 and T > 0):
        raise DomainError(f"mu exige J > 0 e T > 0 (recebido J = {J}, T = {T}).")
    y = J / (math.pi * T)
    return digamma(1.0 + 1j * y).real - math.log(J / T)


def _delta_b(eps: float, tun_q: float) -> float:
    return math.hypot(eps, tun_q)


def steady_qz(a: float, eps: float, tun_q: float, T: float) -> float:
    """
    <Q_z> = a (eps/Delta_b) tanh(Delta_b/T), com Delta_b = sqrt(eps^2 + tun_q^2).

    O sinal segue a convenção em que |00> é o fundamental para eps > 0. Com
    H_Q = +eps*sigma_z, usado pelo motor, o valor corresponde a p11 - p00.
    """
    if eps == 0:
        return 0.0
    if T <= 0:
        raise DomainError(f"Temperatura deve ser positiva (recebido {T}).")
    delta_b = _delta_b(eps, tun_q)
    return a * (eps / delta_b) * math.tanh(delta_b / T)


def steady_population_product(a: float, eps: float, tun_q: float, T: float) -> float:
    """sqrt(p00 p11) = (a/2) sqrt(1 - (eps/Delta_b)^2 tanh^2(Delta_b/T)), pois p00 + p11 = a."""
    qz = steady_qz(a, eps, tun_q, T)
    return 0.5 * math.sqrt(max(a * a - qz * qz, 0.0))


def _omega_r(J: float, K: float, mu: float, sign: float = 1.0) -> float:
    omega_sq = J * J * (1.0 + sign * 2.0 * K * mu)
    if omega_sq <= 0:
        raise DomainError(f"Omega^2 = {omega_sq:.4e} <= 0: K = {K} fora do alcance da teoria de acoplamento fraco.")
    return math.sqrt(omega_sq)


def steady_coherence_p(a: float, J: float, K: float, T: float, damped: bool = False) -> float:
    """
    |cP| ~ ((1 - a)/2) (J/Omega) tanh(Omega/T), Omega = J sqrt(1 + 2 K mu).

    Com `damped=True` usa Omega = J sqrt(1 - 2 K mu): para mu < 0 fica Omega > J e a
    coerência respeita |cP| <= (1 - a)/2, o limite de positividade do ramo P.
    """
    omega = _omega_r(J, K, mu_coefficient(J, T), -1.0 if damped else 1.0)
    return 0.5 * (1.0 - a) * (J / omega) * math.tanh(omega / T)


def _bounded(value: float) -> float:
    return min(1.0, max(0.0, value))


def steady_concurrence(a: float, params: QubitPairParams, K: float, T: float) -> SteadyEstimate:
    """
    Concorrência estacionária prevista pela teoria de acoplamento fraco.

    O valor principal é a forma reduzida (1 - a)/sqrt(1 + 2 mu K) - a limitada a [0, 1];
    também são devolvidos a forma linearizada 1 - 2a - mu K (1 - a), a forma completa com
    os fatores de temperatura, a forma completa amortecida (Omega^2 = J^2 (1 - 2 K mu)) e,
    para a > 1/2, a estimativa indicativa 2a - 1.

    Com mu < 0 (temperaturas baixas face a J) a forma reduzida passa de 1 em a = 0; a forma amortecida
    é a que fica dentro de [0, 1] e acompanha a dinâmica QUAPI.

    Fora da região de validade (a < 1/2, T < J, T < J gamma, |eps| < J gamma, K <= 0.1)
    o resultado é marcado como inválido e regista-se um aviso; não é um erro.
    """
    if not 0.0 <= a <= 1.0:
        raise DomainError(f"Peso a = {a} fora do intervalo [0, 1].")
    if K < 0:
        raise DomainError(f"Parâmetro de Kondo negativo: {K}")
    J = params.J
    eps = params.eps1 + params.eps2
    tun_q = J * params.gamma
    mu = mu_coefficient(J, T)
    omega = _omega_r(J, K, mu)

    reduced = (1.0 - a) / math.sqrt(1.0 + 2.0 * mu * K) - a
    if reduced > 1.0:
        logging.info(f"Forma reduzida {reduced:.4f} > 1 (mu = {mu:.4f}, K = {K}); valor limitado a 1.")
    linearized = 1.0 - 2.0 * a - mu * K * (1.0 - a)
    population = 2.0 * steady_population_product(a, eps, tun_q, T)
    weak_coupling = 2.0 * steady_coherence_p(a, J, K, T) - population
    try:
        damped = _bounded(2.0 * steady_coherence_p(a, J, K, T, damped=True) - population)
    except DomainError:
        damped = None

    valid = a < 0.5 and T < J and T < tun_q and abs(eps) < tun_q and K <= VALIDITY_MAX_K
    if not valid:
        logging.warning(
            f"Concorrência estacionária fora da região de validade (a={a}, K={K}, T={T}, "
            f"eps={eps}, J*gamma={tun_q}); valor apenas indicativo."
        )
    return SteadyEstimate(
        value=_bounded(reduced),
        linearized=linearized,
        weak_coupling=_bounded(weak_coupling),
        damped=damped,
        advisory_high_a=(2.0 * a - 1.0) if a > 0.5 else None,
        valid=valid,
        params=SteadyParams(delta_b=_delta_b(eps, tun_q), omega_r=omega, mu=mu),
    )
