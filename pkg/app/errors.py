# app/errors.py
"""Hierarquia de exceções do simulador. Cada classe conhece o código de saída da CLI."""


class SimulationError(Exception):
    """Erro base do simulador."""
    exit_code = 1


class ConfigError(SimulationError):
    """Configuração inválida, incompleta ou com chaves desconhecidas."""
    exit_code = 2


class DomainError(SimulationError, ValueError):
    """Valor fora do domínio matemático da operação."""
    exit_code = 2


class NumericalError(SimulationError, ArithmeticError):
    """Falha numérica: quadratura sem convergência, deriva de traço, positividade."""
    exit_code = 3


class ResourceError(SimulationError):
    """Pedido acima dos limites de memória ou de enumeração."""
    exit_code = 4
