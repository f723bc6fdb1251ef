"""Batch runs over (epsilon, q, gamma) grids.

Each grid cell owns a seed derived from its indices, so results are
independent of worker count and execution order; rows are always emitted in
canonical order (objective, then gamma as listed, then epsilon, then q
ascending). Within a cell both objectives share the same random block,
making paired differences free of between-ensemble sampling noise.
"""
from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import io, simulate
from .analytics import boundary_curve
from .dp import solve_policy, write_table_csv
from .metrics import differentials
from .params import INFOMAX, REWARDMAX, SweepConfig


def _cells(cfg: SweepConfig):
    for i_g in range(len(cfg.gamma_list)):
        for i_e in range(len(cfg.epsilon_grid)):
            for i_q in range(len(cfg.q_grid)):
                yield i_e, i_q, i_g


def _cell_env(cfg: SweepConfig, i_e: int, i_q: int, i_g: int):
    return dataclasses.replace(
        cfg.base,
        epsilon=cfg.epsilon_grid[i_e],
        q=cfg.q_grid[i_q],
        gamma=cfg.gamma_list[i_g],
    )


def _map_cells(worker, cfg: SweepConfig, workers: int) -> dict:
    tasks = [(cfg, i_e, i_q, i_g) for i_e, i_q, i_g in _cells(cfg)]
    results: dict = {}
    if workers <= 1:
        for task in tasks:
            key, payload = worker(task)
            results[key] = payload
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for key, payload in pool.map(worker, tasks):
                results[key] = payload
    return results


def _sweep_cell(task):
    cfg, i_e, i_q, i_g = task
    env = _cell_env(cfg, i_e, i_q, i_g)
    seed = simulate.derive_cell_seed(cfg.master_seed, (i_e, i_q, i_g))
    summaries = {}
    for objective in cfg.objectives:
        table = solve_policy(objective, env, cfg.dp)
        summaries[objective] = simulate.run_ensemble(table, env, cfg.n_realizations, seed)
    stats = {
        obj: (s.burst_ratio_mean, s.rate_mean, s.rate_std, s.kappa) for obj, s in summaries.items()
    }
    diff = None
    if REWARDMAX in summaries and INFOMAX in summaries:
        diff = differentials(summaries[REWARDMAX], summaries[INFOMAX])
    return (i_e, i_q, i_g), (stats, diff)


def sweep_rows(cfg: SweepConfig, workers: int = 1):
    """Raw-value rows for the sweep CSV and the differentials CSV."""
    results = _map_cells(_sweep_cell, cfg, workers)
    sweep = []
    for objective in cfg.objectives:
        for i_e, i_q, i_g in _cells(cfg):
            stats, _ = results[(i_e, i_q, i_g)]
            ratio, rate_mean, rate_std, kappa = stats[objective]
            sweep.append(
                (
                    objective,
                    cfg.epsilon_grid[i_e],
                    cfg.q_grid[i_q],
                    cfg.gamma_list[i_g],
                    ratio,
                    rate_mean,
                    rate_std,
                    kappa,
                    cfg.n_realizations,
                )
            )
    diffs = []
    if REWARDMAX in cfg.objectives and INFOMAX in cfg.objectives:
        for i_e, i_q, i_g in _cells(cfg):
            _, diff = results[(i_e, i_q, i_g)]
            delta_rho, delta_kappa = diff
            diffs.append(
                (
                    cfg.epsilon_grid[i_e],
                    cfg.q_grid[i_q],
                    cfg.gamma_list[i_g],
                    delta_rho,
                    delta_kappa,
                    cfg.n_realizations,
                )
            )
    return sweep, diffs


def _alignment_cell(task):
    cfg, i_e, i_q, i_g = task
    env = _cell_env(cfg, i_e, i_q, i_g)
    seed = simulate.derive_cell_seed(cfg.master_seed, (i_e, i_q, i_g))
    rm_table = solve_policy(REWARDMAX, env, cfg.dp)
    im_table = solve_policy(INFOMAX, env, cfg.dp)
    summary = simulate.run_alignment_ensemble(
        rm_table, im_table, env, cfg.n_realizations, seed, cfg.driver
    )
    return (i_e, i_q, i_g), summary.alignment_mean


def alignment_rows(cfg: SweepConfig, workers: int = 1):
    results = _map_cells(_alignment_cell, cfg, workers)
    rows = []
    for i_e, i_q, i_g in _cells(cfg):
        rows.append(
            (
                cfg.epsilon_grid[i_e],
                cfg.q_grid[i_q],
                cfg.gamma_list[i_g],
                cfg.driver,
                results[(i_e, i_q, i_g)],
                cfg.n_realizations,
            )
        )
    return rows


def boundary_rows(cfg: SweepConfig):
    curve = boundary_curve(cfg.base.h, cfg.q_grid)
    return list(zip(curve.q_values, curve.epsilon_values))


def _fmt_row(row):
    return tuple(io.fmt_float(v) if isinstance(v, float) else str(v) for v in row)


SWEEP_HEADER = ("objective", "epsilon", "q", "gamma", "burst_ratio_mean", "rate_mean", "rate_std", "kappa", "n")
DIFF_HEADER = ("epsilon", "q", "gamma", "delta_rho", "delta_kappa", "n")
ALIGN_HEADER = ("epsilon", "q", "gamma", "driver", "alignment_mean", "n")
BOUNDARY_HEADER = ("q", "epsilon")


def write_sweep(cfg: SweepConfig, workers: int = 1):
    """Run the sweep and write sweep.csv (plus differentials.csv when both
    objectives are present); returns the written paths."""
    sweep, diffs = sweep_rows(cfg, workers)
    out = Path(cfg.output_dir)
    sweep_path = out / "sweep.csv"
    io.write_csv(sweep_path, SWEEP_HEADER, [_fmt_row(r) for r in sweep])
    paths = [sweep_path]
    if diffs:
        diff_path = out / "differentials.csv"
        io.write_csv(diff_path, DIFF_HEADER, [_fmt_row(r) for r in diffs])
        paths.append(diff_path)
    return paths


def write_alignment(cfg: SweepConfig, workers: int = 1):
    rows = alignment_rows(cfg, workers)
    path = Path(cfg.output_dir) / "alignment.csv"
    io.write_csv(path, ALIGN_HEADER, [_fmt_row(r) for r in rows])
    return [path]


def write_boundary(cfg: SweepConfig):
    rows = boundary_rows(cfg)
    path = Path(cfg.output_dir) / "boundary.csv"
    io.write_csv(path, BOUNDARY_HEADER, [_fmt_row(r) for r in rows])
    return [path]


def write_tables(cfg: SweepConfig):
    """Solve and serialize one policy table per (objective, cell)."""
    out = Path(cfg.output_dir) / "tables"
    paths = []
    for objective in cfg.objectives:
        for i_e, i_q, i_g in _cells(cfg):
            env = _cell_env(cfg, i_e, i_q, i_g)
            table = solve_policy(objective, env, cfg.dp)
            name = (
                f"table_{objective}_eps{format(env.epsilon, '.6g')}"
                f"_q{format(env.q, '.6g')}_gamma{format(env.gamma, '.6g')}.csv"
            )
            path = out / name
            write_table_csv(table, path)
            paths.append(path)
    return paths
