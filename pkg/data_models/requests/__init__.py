# data_models/requests/__init__.py
"""Modelos de entrada: parâmetros do par de qubits, banhos e configuração de execução."""
from enum import Enum
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import settings

COMMANDS = ("simulate", "sweep", "converge", "steady")


class BathTopology(str, Enum):
    """Como os dois qubits se acoplam aos reservatórios."""
    SEPARATE = "separate"
    COMMON = "common"
    SINGLE_LEFT = "single_left"


class QubitPairParams(BaseModel):
    """As cinco energias que definem H_S: vieses, troca J e anisotropias gamma (XY) e delta (ZZ)."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    eps1: float
    eps2: float
    J: float
    gamma: float
    delta: float


class BathSpec(BaseModel):
    """Banho ôhmico com corte exponencial: parâmetro de Kondo, temperatura (k_B = 1) e frequência de corte."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    K: float = Field(ge=0.0)
    T: float = Field(gt=0.0)
    omega_c: float = Field(gt=0.0)


def _default_sweep_K() -> List[float]:
    return [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]


def _default_sweep_a() -> List[float]:
    return [round(0.1 * i, 10) for i in range(11)]


class RunConfig(BaseModel):
    """
    Configuração completa de uma execução, lida de um YAML plano.
    Chaves desconhecidas são rejeitadas. Os valores padrão reproduzem o conjunto de referência
    (eps1 = eps2 = 0.2, J = 1, gamma = 0.5, delta = 0.1, T = 0.2, omega_c = 7.5, dt = 0.25, dk_max = 9).
    """
    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    command: Literal["simulate", "sweep", "converge", "steady"] = "simulate"

    eps1: float = 0.2
    eps2: float = 0.2
    J: float = 1.0
    gamma: float = 0.5
    delta: float = 0.1

    topology: BathTopology = BathTopology.SINGLE_LEFT
    K_L: float = Field(0.05, ge=0.0)
    K_R: float = Field(0.0, ge=0.0)
    T_L: float = Field(0.2, gt=0.0)
    T_R: float = Field(0.2, gt=0.0)
    omega_c_L: float = Field(7.5, gt=0.0)
    omega_c_R: float = Field(7.5, gt=0.0)

    a: float = Field(0.5, ge=0.0, le=1.0)
    initial_state: Literal["bell", "diagonal"] = "bell"

    dt: float = Field(settings.DEFAULT_DT, gt=0.0)
    dk_max: int = Field(settings.DEFAULT_DK_MAX, ge=1)
    n_steps: int = Field(settings.DEFAULT_N_STEPS, ge=1)

    sweep_K: List[float] = Field(default_factory=_default_sweep_K)
    sweep_a: List[float] = Field(default_factory=_default_sweep_a)
    sweep_T: List[float] = Field(default_factory=lambda: [0.2])

    converge_dt: List[float] = Field(default_factory=lambda: [0.25, 0.25, 0.2])
    converge_dk_max: List[int] = Field(default_factory=lambda: [9, 11, 11])

    output_dir: Optional[str] = None
    workers: Optional[int] = Field(None, ge=1)
    tensor_cap: int = Field(settings.TENSOR_CAP, ge=4)

    @field_validator("sweep_K")
    @classmethod
    def _check_sweep_K(cls, values: List[float]) -> List[float]:
        if any(k < 0 for k in values):
            raise ValueError("sweep_K não admite parâmetros de Kondo negativos.")
        return values

    @field_validator("sweep_a")
    @classmethod
    def _check_sweep_a(cls, values: List[float]) -> List[float]:
        if any(not 0.0 <= a <= 1.0 for a in values):
            raise ValueError("sweep_a exige pesos no intervalo [0, 1].")
        return values

    @field_validator("sweep_T")
    @classmethod
    def _check_sweep_T(cls, values: List[float]) -> List[float]:
        if any(t <= 0 for t in values):
            raise ValueError("sweep_T exige temperaturas positivas.")
        return values

    @field_validator("converge_dt")
    @classmethod
    def _check_converge_dt(cls, values: List[float]) -> List[float]:
        if any(dt <= 0 for dt in values):
            raise ValueError("converge_dt exige passos de tempo positivos.")
        return values

    @field_validator("converge_dk_max")
    @classmethod
    def _check_converge_dk(cls, values: List[int]) -> List[int]:
        if any(dk < 1 for dk in values):
            raise ValueError("converge_dk_max exige memórias >= 1.")
        return values

    @model_validator(mode="after")
    def _check_consistency(self) -> "RunConfig":
        if self.topology == BathTopology.SINGLE_LEFT and self.K_R != 0.0:
            raise ValueError(f"Topologia 'single_left' exige K_R = 0 (recebido K_R = {self.K_R}).")
        if self.topology == BathTopology.SEPARATE and self.K_L > 0 and self.K_R > 0:
            if self.T_L != self.T_R or self.omega_c_L != self.omega_c_R:
                raise ValueError(
                    "Topologia 'separate' com os dois banhos ativos exige T_L = T_R e omega_c_L = omega_c_R."
                )
        if self.command in ("sweep", "steady"):
            for axis in ("sweep_K", "sweep_a", "sweep_T"):
                if not getattr(self, axis):
                    raise ValueError(f"O eixo '{axis}' do sweep está vazio.")
        if self.command == "converge":
            if not self.converge_dt or len(self.converge_dt) != len(self.converge_dk_max):
                raise ValueError("converge_dt e converge_dk_max devem ser listas não vazias do mesmo tamanho.")
        return self

    @property
    def params(self) -> QubitPairParams:
        return QubitPairParams(eps1=self.eps1, eps2=self.eps2, J=self.J, gamma=self.gamma, delta=self.delta)

    @property
    def bath_L(self) -> BathSpec:
        return BathSpec(K=self.K_L, T=self.T_L, omega_c=self.omega_c_L)

    @property
    def bath_R(self) -> BathSpec:
        return BathSpec(K=self.K_R, T=self.T_R, omega_c=self.omega_c_R)
