# app/use_cases.py
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import pandas as pd
import yaml

from config import settings
from data_models.requests import RunConfig
from .analytics import mu_coefficient, steady_coherence_p, steady_concurrence
from .entanglement import concurrence_x
from .errors import DomainError, NumericalError
from .model import BranchState, assemble_xstate, bell_initial, diagonal_initial
from .quapi import evolve_branches, simulate_pair

SWEEP_COLUMNS = ["K", "a", "T", "C_infinity_numeric", "C_infinity_analytic", "validity_flag"]
CONVERGE_COLUMNS = ["dt", "dk_max", "n_steps", "t_final", "C_final", "abs_diff_vs_first", "status"]
STEADY_COLUMNS = ["K", "a", "T", "mu", "Omega", "coherence_P", "C_infinity_analytic",
                  "C_linearized", "C_weak_coupling", "C_damped", "C_advisory_high_a", "validity_flag"]

OUTPUT_FILES = {
    "simulate": "trajectory.csv",
    "sweep": "sweep.csv",
    "converge": "converge.csv",
    "steady": "steady.csv",
}
MANIFEST_FILE = "run_manifest.yaml"


# =====================================================================
# --- Funções Utilitárias ---
# =====================================================================

def initial_branches(config: RunConfig, a: Optional[float] = None) -> Tuple[BranchState, BranchState]:
    """Estados iniciais dos ramos conforme 'initial_state' (Bell ou diagonal)."""
    builder = bell_initial if config.initial_state == "bell" else diagonal_initial
    rhoQ, rhoP, _ = builder(config.a if a is None else a)
    return rhoQ, rhoP


def output_directory(config: RunConfig) -> Path:
    out = Path(config.output_dir) if config.output_dir else settings.OUTPUT_DIR
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_csv(frame: pd.DataFrame, path: Path):
    """CSV determinístico: 12 algarismos significativos em notação científica, fim de linha LF."""
    frame.to_csv(path, float_format="%.11e", lineterminator="\n", index=False, na_rep="nan")
    logging.info(f"Ficheiro escrito: {path} ({len(frame)} linhas)")


def write_manifest(config: RunConfig, out: Path) -> Path:
    """Ecoa a configuração resolvida ao lado dos resultados (chaves ordenadas, sem carimbo de tempo)."""
    path = out / MANIFEST_FILE
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        yaml.safe_dump(config.model_dump(mode="json"), f, sort_keys=True, default_flow_style=False,
                       allow_unicode=True)
    return path


def _analytic_columns(a: float, config: RunConfig, K: float, T: float) -> Dict[str, float]:
    """Colunas analíticas de uma linha; fora do domínio da teoria (Omega^2 <= 0) ficam NaN."""
    nan = float("nan")
    row = {"mu": mu_coefficient(config.J, T), "Omega": nan, "coherence_P": nan, "C_infinity_analytic": nan,
           "C_linearized": nan, "C_weak_coupling": nan, "C_damped": nan,
           "C_advisory_high_a": nan, "validity_flag": 0}
    try:
        estimate = steady_concurrence(a, config.params, K, T)
    except DomainError as e:
        logging.warning(f"Estimativa analítica indisponível (K={K}, a={a}, T={T}): {e}")
        return row
    advisory = estimate.advisory_high_a
    row.update(
        Omega=estimate.params.omega_r,
        coherence_P=steady_coherence_p(a, config.J, K, T),
        C_infinity_analytic=estimate.value if a <= 0.5 else advisory,
        C_linearized=estimate.linearized,
        C_weak_coupling=estimate.weak_coupling,
        C_damped=nan if estimate.damped is None else estimate.damped,
        C_advisory_high_a=nan if advisory is None else advisory,
        validity_flag=int(estimate.valid),
    )
    return row


# =====================================================================
# --- Workflows ---
# =====================================================================

def run_simulate(config: RunConfig, out: Path) -> Path:
    rhoQ, rhoP = initial_branches(config)
    trajectory = simulate_pair(config.params, config.topology, config.bath_L, config.bath_R, config.a,
                               rhoQ, rhoP, config.dt, config.dk_max, config.n_steps, config.tensor_cap)
    path = out / OUTPUT_FILES["simulate"]
    write_csv(trajectory.to_frame(), path)
    return path


@dataclass(frozen=True)
class SweepTask:
    """Um ponto (K, T) do sweep; todos os pesos a partilham as mesmas evoluções dos ramos."""
    config: RunConfig
    K: float
    T: float


def run_sweep_task(task: SweepTask) -> List[Dict[str, float]]:
    config = task.config.model_copy(update={"K_L": task.K, "T_L": task.T, "T_R": task.T})
    weights = sorted(config.sweep_a)
    rhoQ, rhoP = initial_branches(config, a=0.5)
    q_states, p_states = evolve_branches(
        config.params, config.topology, config.bath_L, config.bath_R, rhoQ, rhoP,
        config.dt, config.dk_max, config.n_steps, config.tensor_cap,
        skip_q=all(a == 0.0 for a in weights), skip_p=all(a == 1.0 for a in weights),
    )
    rows = []
    for a in weights:
        final = concurrence_x(assemble_xstate(a, q_states[-1], p_states[-1]))
        analytic = _analytic_columns(a, config, task.K, task.T)
        rows.append({
            "K": task.K, "a": a, "T": task.T,
            "C_infinity_numeric": final.C,
            "C_infinity_analytic": analytic["C_infinity_analytic"],
            "validity_flag": analytic["validity_flag"],
        })
    logging.info(f"Sweep: ponto K={task.K}, T={task.T} concluído ({len(rows)} pesos)")
    return rows


def run_sweep(config: RunConfig, out: Path) -> Path:
    tasks = [SweepTask(config, K, T) for K in sorted(config.sweep_K) for T in sorted(config.sweep_T)]
    workers = min(config.workers or settings.MAX_WORKERS, len(tasks))
    logging.info(f"Sweep com {len(tasks)} pontos (K, T) e {workers} processo(s)")

    if workers <= 1:
        results = [run_sweep_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(run_sweep_task, tasks))

    frame = pd.DataFrame([row for rows in results for row in rows], columns=SWEEP_COLUMNS)
    frame = frame.sort_values(["K", "a", "T"], kind="mergesort").reset_index(drop=True)
    path = out / OUTPUT_FILES["sweep"]
    write_csv(frame, path)
    return path


def run_converge(config: RunConfig, out: Path) -> Path:
    """
    Concorrência final para cada par (dt, dk_max), no mesmo tempo final da configuração.

    Um par cuja evolução é abortada (NumericalError, por exemplo positividade perdida com
    memória curta) fica na tabela com C_final NaN e a mensagem em `status`; as diferenças
    são medidas contra o primeiro par que correu até ao fim.
    """
    t_final = config.n_steps * config.dt
    rhoQ, rhoP = initial_branches(config)
    rows = []
    first = None
    for dt, dk_max in zip(config.converge_dt, config.converge_dk_max):
        n_steps = max(1, int(round(t_final / dt)))
        row = {"dt": dt, "dk_max": dk_max, "n_steps": n_steps, "t_final": n_steps * dt,
               "C_final": float("nan"), "abs_diff_vs_first": float("nan"), "status": "ok"}
        try:
            trajectory = simulate_pair(config.params, config.topology, config.bath_L, config.bath_R, config.a,
                                       rhoQ, rhoP, dt, dk_max, n_steps, config.tensor_cap)
        except NumericalError as e:
            logging.error(f"Convergência: dt={dt}, dk_max={dk_max} abortado: {e}")
            row["status"] = str(e)
            rows.append(row)
            continue
        c_final = float(trajectory.concurrence[-1])
        first = c_final if first is None else first
        row.update(C_final=c_final, abs_diff_vs_first=abs(c_final - first))
        rows.append(row)
        logging.info(f"Convergência: dt={dt}, dk_max={dk_max} -> C({n_steps * dt:g}) = {c_final:.6f}")
    path = out / OUTPUT_FILES["converge"]
    write_csv(pd.DataFrame(rows, columns=CONVERGE_COLUMNS), path)
    return path


def run_steady(config: RunConfig, out: Path) -> Path:
    rows = []
    for K in sorted(config.sweep_K):
        for a in sorted(config.sweep_a):
            for T in sorted(config.sweep_T):
                rows.append({"K": K, "a": a, "T": T, **_analytic_columns(a, config, K, T)})
    path = out / OUTPUT_FILES["steady"]
    write_csv(pd.DataFrame(rows, columns=STEADY_COLUMNS), path)
    return path


WORKFLOWS = {
    "simulate": run_simulate,
    "sweep": run_sweep,
    "converge": run_converge,
    "steady": run_steady,
}


def run(config: RunConfig) -> Path:
    """
    Executa o comando da configuração e grava o resultado e o manifesto.

    Returns:
        O caminho do CSV produzido.

    Raises:
        SimulationError: Qualquer falha de configuração, numérica ou de recursos.
    """
    out = output_directory(config)
    logging.info(f"Iniciando '{config.command}' (saída em {out})")
    start = time.perf_counter()
    write_manifest(config, out)
    path = WORKFLOWS[config.command](config, out)
    logging.info(f"'{config.command}' concluído em {time.perf_counter() - start:.1f} s")
    return path
