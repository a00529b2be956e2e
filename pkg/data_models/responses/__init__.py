# data_models/responses/__init__.py
"""Modelos de saída: concorrência decomposta e estimativas analíticas de estado estacionário."""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class ConcurrenceBreakdown(BaseModel):
    """C = max(0, 2*F1, 2*F2); F1 e F2 ficam disponíveis para diagnóstico."""
    model_config = ConfigDict(frozen=True)

    F1: float
    F2: float
    C: float = Field(ge=0.0, le=1.0)


class SteadyParams(BaseModel):
    """Constantes de renormalização do regime de acoplamento fraco."""
    model_config = ConfigDict(frozen=True)

    delta_b: float
    omega_r: float
    mu: float


class SteadyEstimate(BaseModel):
    """
    Concorrência de longo prazo prevista pela teoria de acoplamento fraco.

    `value` é a forma reduzida (1-a)/sqrt(1+2*mu*K) - a limitada a [0, 1], `linearized` é
    1-2a-mu*K(1-a), `weak_coupling` mantém os fatores de tanh e de população e `damped` repete
    a forma completa com Omega^2 = J^2 (1 - 2 K mu) (None se Omega^2 <= 0). `valid` indica se os
    parâmetros estão dentro da região de validade; fora dela o resultado é só indicativo.
    """
    model_config = ConfigDict(frozen=True)

    value: float = Field(ge=0.0, le=1.0)
    linearized: float
    weak_coupling: float = Field(ge=0.0, le=1.0)
    damped: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    advisory_high_a: Optional[float] = None
    valid: bool
    params: SteadyParams
