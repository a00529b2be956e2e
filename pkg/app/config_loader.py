# app/config_loader.py
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple

import yaml
from pydantic import ValidationError

from config import settings
from data_models.requests import RunConfig
from .errors import ConfigError, DomainError


def parse_override(item: str) -> Tuple[str, Any]:
    """
    Converte 'chave=valor' num par (chave, valor). O valor é lido como YAML,
    por isso '--set sweep_K=[0.1,0.2]' produz uma lista.
    """
    if "=" not in item:
        raise ConfigError(f"Override inválido '{item}': use o formato chave=valor.")
    key, raw = item.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigError(f"Override inválido '{item}': chave vazia.")
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as e:
        raise ConfigError(f"Valor inválido no override '{item}': {e}") from e
    return key, value


class ConfigLoader:
    """
    Lê configurações de execução em YAML plano, aplica overrides da linha de comando
    e valida o resultado contra o modelo RunConfig.
    """
    def __init__(self, config_dir: Optional[Path] = None):
        """
        Args:
            config_dir: Diretório onde procurar ficheiros dados por caminho relativo
                que não existam a partir do diretório atual.
        """
        self.config_dir = Path(config_dir or settings.CONFIGS_DIR)

    def _resolve(self, path: str) -> Path:
        candidate = Path(path)
        if candidate.is_file():
            return candidate
        fallback = self.config_dir / candidate
        if not candidate.is_absolute() and fallback.is_file():
            return fallback
        raise ConfigError(f"Ficheiro de configuração '{path}' não encontrado.")

    def read(self, path: str) -> Dict[str, Any]:
        """Carrega um ficheiro YAML e garante que é um mapeamento plano."""
        filepath = self._resolve(path)
        try:
            with open(filepath, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Erro ao ler o YAML '{filepath}': {e}") from e
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigError(f"O ficheiro '{filepath}' deve conter um mapeamento chave: valor.")
        for key, value in data.items():
            if isinstance(value, dict):
                raise ConfigError(f"A chave '{key}' em '{filepath}' não pode ser aninhada.")
        logging.info(f"Configuração carregada de '{filepath}' ({len(data)} chaves)")
        return data

    def load(self, path: Optional[str] = None, overrides: Iterable[str] = (),
             **explicit: Any) -> RunConfig:
        """
        Monta a configuração final: ficheiro, depois overrides '--set', depois
        valores explícitos (command, output_dir, workers) que não sejam None.

        Raises:
            ConfigError: Chaves desconhecidas, tipos inválidos ou combinações proibidas.
            DomainError: Quando a validação falha por um valor fora do domínio matemático.
        """
        data: Dict[str, Any] = self.read(path) if path else {}
        for item in overrides:
            key, value = parse_override(item)
            data[key] = value
        data.update({key: value for key, value in explicit.items() if value is not None})

        try:
            config = RunConfig.model_validate(data)
        except ValidationError as e:
            for error in e.errors():
                if isinstance(error.get("ctx", {}).get("error"), DomainError):
                    raise DomainError(str(error["ctx"]["error"])) from e
            details = "; ".join(
                f"{'.'.join(str(p) for p in err['loc']) or '<config>'}: {err['msg']}" for err in e.errors()
            )
            raise ConfigError(f"Configuração inválida: {details}") from e
        return config
