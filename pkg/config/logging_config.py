# config/logging_config.py
import logging
import sys
from logging.handlers import TimedRotatingFileHandler
from typing import Optional

from . import settings


def setup_logging(level: Optional[str] = None, log_to_file: bool = True):
    """
    Configura o sistema de logging para a aplicação.
    - Loga para o stderr (a saída padrão fica livre para os dados).
    - Loga para um ficheiro com rotação diária.
    """
    log_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - [%(levelname)s] - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(level or settings.LOG_LEVEL)

    # Limpa handlers existentes para evitar duplicação
    if root_logger.hasHandlers():
        root_logger.handlers.clear()

    # --- Handler para a Consola (stderr) ---
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(log_formatter)
    root_logger.addHandler(console_handler)

    # --- Handler para o Ficheiro ---
    if log_to_file:
        settings.LOGS_DIR.mkdir(parents=True, exist_ok=True)
        file_handler = TimedRotatingFileHandler(
            settings.LOGS_DIR / "qubits_bath.log",
            when="midnight",
            interval=1,
            backupCount=7,
            encoding='utf-8'
        )
        file_handler.setFormatter(log_formatter)
        root_logger.addHandler(file_handler)

    logging.info("=" * 50)
    logging.info("Sistema de Logging Inicializado")
    logging.info("=" * 50)
