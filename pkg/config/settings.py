# config/settings.py
import os
from pathlib import Path
from dotenv import load_dotenv

# Define o caminho para a raiz do projeto
BASE_DIR = Path(__file__).resolve().parent.parent

# Carrega o arquivo .env da raiz do projeto (opcional)
load_dotenv(BASE_DIR / ".env")

# Caminhos de diretório
CONFIGS_DIR = BASE_DIR / "configs"
LOGS_DIR = Path(os.getenv("QUBITS_LOGS_DIR", BASE_DIR / "logs"))
OUTPUT_DIR = Path(os.getenv("QUBITS_OUTPUT_DIR", BASE_DIR / "output"))
LOG_LEVEL = os.getenv("QUBITS_LOG_LEVEL", "INFO").upper()

# Paralelismo do sweep
MAX_WORKERS = int(os.getenv("QUBITS_WORKERS", os.cpu_count() or 1))

# Limite de entradas do tensor aumentado (4^12 por padrão)
TENSOR_CAP = int(os.getenv("QUBITS_TENSOR_CAP", 4 ** 12))

# Parâmetros numéricos padrão do conjunto de referência
DEFAULT_DT = 0.25
DEFAULT_DK_MAX = 9
DEFAULT_N_STEPS = 400

# Tolerâncias
TOL_POS = 1e-6
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
TRACE_DRIFT_TOL = 1e-6
HERMITIAN_DRIFT_TOL = 1e-8

# Quadratura adaptativa (Gauss-Kronrod, QUADPACK)
OMEGA_MAX_FACTOR = 40.0
QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-10
QUAD_LIMIT = 2000

# Limite da enumeração explícita de caminhos
MAX_BRUTE_FORCE_STEPS = 8
