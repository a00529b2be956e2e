# simulacao_qubits.py
"""
Ponto de entrada da linha de comando.

    python simulacao_qubits.py simulate|sweep|converge|steady --config <caminho>
        [--out <dir>] [--set chave=valor ...] [--workers N]

Códigos de saída: 0 sucesso, 2 configuração, 3 numérico, 4 recursos.
"""
import argparse
import logging
import sys
from typing import List, Optional

from config.logging_config import setup_logging
from data_models.requests import COMMANDS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulacao_qubits",
        description="Dinâmica e emaranhamento de dois qubits acoplados a banhos térmicos (QUAPI).",
    )
    parser.add_argument("command", choices=COMMANDS, help="Workflow a executar.")
    parser.add_argument("--config", help="Ficheiro YAML com a configuração da execução.")
    parser.add_argument("--out", help="Diretório de saída (sobrepõe output_dir).")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="CHAVE=VALOR",
                        help="Sobrepõe uma chave da configuração; pode repetir-se.")
    parser.add_argument("--workers", type=int, help="Número de processos do sweep.")
    parser.add_argument("--log-level", help="Nível de logging (DEBUG, INFO, WARNING, ...).")
    parser.add_argument("--no-log-file", action="store_true", help="Não grava o ficheiro de log.")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(level=args.log_level, log_to_file=not args.no_log_file)

    # Importados depois do logging para que os módulos encontrem os handlers prontos
    from app import use_cases
    from app.config_loader import ConfigLoader
    from app.errors import SimulationError

    try:
        config = ConfigLoader().load(args.config, args.overrides, command=args.command,
                                     output_dir=args.out, workers=args.workers)
        path = use_cases.run(config)
    except SimulationError as e:
        logging.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
