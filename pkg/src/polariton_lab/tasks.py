"""Task runners behind the command line: each turns a RunConfig into a Dataset."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from .config import ConfigError, RunConfig
from .dataset import Dataset
from .lindblad import DecayRates, build_liouvillian, linear_response, steady_state
from .model import HilbertSpace, build_rotating_hamiltonian, nesting_boundaries
from .numerics import hermitian_eigendecompose
from .polariton import polariton_basis_exact, track_labels_across_sweep
from .spectroscopy import (
    ThreeLevelRates,
    absorption_spectrum_pipeline,
    classify_regime,
    eit_ats_threshold,
    eit_condition_check,
    effective_rabi,
    susceptibility,
)
from .transitions import (
    PAIRS,
    classify_transition_type,
    decay_rates,
    format_types,
    impedance_match_drive,
    matrix_elements_exact,
    transition_table,
)
from .errors import RegimeError
from .version import __version__

THREADS_ENV = "POLARITON_LAB_THREADS"


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _map(fn, items: list) -> list:
    """Ordered map, spread over worker processes when more than one is allowed."""
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _metadata(cfg: RunConfig, **extra) -> dict:
    meta = {"config": cfg.to_dict(), "version": __version__, "n_max": cfg.n_max, "units": "MHz"}
    meta.update(extra)
    return meta


def apply_axis(cfg: RunConfig, name: str, value: float) -> RunConfig:
    """Config with one swept quantity set; ``Delta`` moves omega_r to omega_q + Delta."""
    from dataclasses import replace

    value = float(value)
    if name == "Delta":
        return replace(cfg, params=cfg.params.replace(omega_r=cfg.params.omega_q + value))
    if name in ("A_c", "A_p"):
        return replace(cfg, **{name: value})
    try:
        return replace(cfg, params=cfg.params.replace(**{name: value}))
    except ValueError as exc:
        raise ConfigError(f"sweep {name}={value:g}: {exc}") from exc


def _grid(cfg: RunConfig, default_axes=()) -> tuple[list[str], list[np.ndarray]]:
    axes = cfg.sweep or default_axes
    return [a.name for a in axes], [a.values() for a in axes]


# eigen ---------------------------------------------------------------------

def _eigen_point(cfg: RunConfig) -> list[float]:
    p = cfg.params.replace(Omega=0.0)
    h = HilbertSpace(cfg.n_max)
    H = build_rotating_hamiltonian(p, h)
    e_ground = H[h.index("g", 0), h.index("g", 0)].real
    row = [0.0]
    for n in range(cfg.n_max):
        idx = [h.index("e", n), h.index("g", n + 1)]
        block = H[np.ix_(idx, idx)]
        minus, plus = hermitian_eigendecompose(block).values
        row += [minus - e_ground, plus - e_ground]
    return row


def run_eigen(cfg: RunConfig) -> Dataset:
    from .config import Axis

    names, grids = _grid(cfg, (Axis("Delta", -5000.0, 5000.0, 201),))
    if len(names) != 1:
        raise ConfigError("task 'eigen' takes exactly one sweep axis")
    columns = [names[0]] if names[0] == "Delta" else [names[0], "Delta"]
    columns.append("E_g0")
    for n in range(cfg.n_max):
        columns += [f"E_minus_{n}", f"E_plus_{n}"]
    rows = []
    for x in grids[0]:
        point = apply_axis(cfg, names[0], x)
        lead = [float(x)] if names[0] == "Delta" else [float(x), point.params.Delta]
        rows.append(lead + _eigen_point(point))
    return Dataset(columns, rows, _metadata(cfg, frame="rotating", reference="E_g0"))


# sweep ---------------------------------------------------------------------

def _table_row(t) -> list:
    row = [t.omega[(2, 1)], t.omega[(3, 2)], t.omega[(3, 1)], t.omega[(4, 3)]]
    for k in PAIRS:
        row += [t.Q[k], t.C[k], t.gamma[k]]
    return row


def _sweep_columns() -> list[str]:
    cols = ["omega_21", "omega_32", "omega_31", "omega_43"]
    for i, j in PAIRS:
        cols += [f"Q_{i}{j}", f"C_{i}{j}", f"gamma_{i}{j}"]
    return cols + ["Gamma_31", "type", "relabeled"]


def _sweep_row(cfg: RunConfig, inner_name: str | None, inner: np.ndarray | None, outer: tuple) -> list[list]:
    base = cfg
    for name, value in outer:
        base = apply_axis(base, name, value)
    points = [base] if inner_name is None else [apply_axis(base, inner_name, x) for x in inner]
    h = HilbertSpace(cfg.n_max)
    rows = []
    prev = None
    for pt in points:
        b = polariton_basis_exact(pt.params, h)
        if cfg.track_labels and prev is not None:
            b = track_labels_across_sweep(prev, b)
        prev = b
        t = decay_rates(matrix_elements_exact(b, h), pt.params.gamma_c, pt.params.gamma_q)
        types = format_types(classify_transition_type(t, cfg.type_threshold))
        rows.append(_table_row(t) + [t.Gamma_31, types, int(b.labeling == "tracked")])
    return rows


def run_sweep(cfg: RunConfig) -> Dataset:
    from .config import Axis

    names, grids = _grid(cfg, (Axis("omega_d", 4800.0, 5000.0, 41), Axis("Omega", 0.0, 40.0, 41)))
    if not names:
        raise ConfigError("task 'sweep' needs at least one sweep axis")
    if len(names) == 1:
        outer_points = [()]
        inner_name, inner = names[0], grids[0]
    else:
        outer_points = [((names[0], x),) for x in grids[0]]
        inner_name, inner = names[1], grids[1]
    blocks = _map(partial(_sweep_row, cfg, inner_name, inner), outer_points)
    rows = []
    for outer, block in zip(outer_points, blocks):
        lead = [float(v) for _, v in outer]
        for x, r in zip(inner, block):
            rows.append(lead + [float(x)] + r)
    return Dataset(names + _sweep_columns(), rows, _metadata(cfg, frame="rotating"))


# table1 --------------------------------------------------------------------

TABLE1_COLUMNS = ["Omega", "C_31", "C_32", "Q_21", "Q_31", "Q_32", "C_21", "omega_21", "omega_32", "type"]


def run_table1(cfg: RunConfig) -> Dataset:
    h = HilbertSpace(cfg.n_max)
    rows = []
    for Omega in cfg.Omega_values:
        t = transition_table(cfg.params.replace(Omega=Omega), h)
        rows.append([
            float(Omega), t.C[(3, 1)], t.C[(3, 2)], t.Q[(2, 1)], t.Q[(3, 1)], t.Q[(3, 2)], t.C[(2, 1)],
            t.omega[(2, 1)], t.omega[(3, 2)], format_types(classify_transition_type(t, cfg.type_threshold)),
        ])
    return Dataset(list(TABLE1_COLUMNS), rows, _metadata(cfg, frame="rotating"))


# spectrum ------------------------------------------------------------------

SPECTRUM_COLUMNS = [
    "delta", "Im_chi", "Re_chi", "Im_chi_plus", "Im_chi_minus", "Im_chi_swapped", "Re_chi_swapped",
    "regime", "Omega_c", "threshold", "Delta_2", "Gamma_31", "gamma_21",
]


def _spectrum_block(cfg: RunConfig) -> list[list]:
    grid = cfg.delta.values()
    res = absorption_spectrum_pipeline(
        cfg.params, cfg.A_c, cfg.A_p, cfg.omega_c_rotating(), grid, HilbertSpace(cfg.n_max), cfg.type_threshold
    )
    chi = res.spectrum.chi
    swapped = susceptibility(res.rates, grid, swapped=True)
    if res.decomposition is not None and not res.decomposition.double_pole:
        plus, minus = (np.imag(x) for x in res.decomposition.branches(grid))
    else:
        plus = minus = [None] * len(grid)
    r = res.rates
    return [
        [float(d), float(c.imag), float(c.real), pl, mi, float(q.imag), float(q.real),
         res.regime.value, res.Omega_c, res.threshold, r.Delta_2, r.Gamma_31, r.gamma_21]
        for d, c, pl, mi, q in zip(grid, chi, plus, minus, swapped)
    ]


def _axis_points(cfg: RunConfig) -> tuple[list[str], list[RunConfig], list[list[float]]]:
    if len(cfg.sweep) > 1:
        raise ConfigError(f"task {cfg.task!r} takes at most one sweep axis")
    if not cfg.sweep:
        return [], [cfg], [[]]
    axis = cfg.sweep[0]
    vals = axis.values()
    return [axis.name], [apply_axis(cfg, axis.name, x) for x in vals], [[float(x)] for x in vals]


def run_spectrum(cfg: RunConfig) -> Dataset:
    names, points, leads = _axis_points(cfg)
    blocks = _map(_spectrum_block, points)
    rows = [lead + r for lead, block in zip(leads, blocks) for r in block]
    omega_c = cfg.omega_c_rotating()
    extra = {
        "frame": "rotating",
        "omega_c_rotating": "resonant" if omega_c is None else omega_c,
        "omega_c_lab": "resonant" if omega_c is None else omega_c + cfg.params.omega_d,
        "rates_note": "Gamma_31 and gamma_21 are recomputed from the exact polariton states at every point",
    }
    return Dataset(names + SPECTRUM_COLUMNS, rows, _metadata(cfg, **extra))


# oracle-check --------------------------------------------------------------

ORACLE_COLUMNS = [
    "delta", "Re_chi_analytic", "Im_chi_analytic", "Re_chi_num", "Im_chi_num", "residual",
    "eps_halving", "rho_11", "Delta_2", "Omega_c",
]


def _oracle_rates(cfg: RunConfig) -> tuple[ThreeLevelRates, float]:
    """Three-level rates and the physical probe Rabi frequency."""
    if cfg.synthetic_rates:
        return ThreeLevelRates(cfg.Gamma_31, cfg.gamma_21, cfg.Omega_c, cfg.Delta_2), cfg.A_p
    res = absorption_spectrum_pipeline(
        cfg.params, cfg.A_c, cfg.A_p, cfg.omega_c_rotating(), [0.0], HilbertSpace(cfg.n_max), cfg.type_threshold
    )
    return res.rates, res.Omega_p


def _oracle_block(cfg: RunConfig) -> tuple[list[list], float]:
    rates, Omega_p = _oracle_rates(cfg)
    grid = cfg.delta.values()
    decay = DecayRates.from_three_level(rates)
    analytic = np.asarray(susceptibility(rates, grid))
    scale = float(np.max(np.abs(analytic)))
    rows = []
    worst = 0.0
    for d, chi_a in zip(grid, analytic):
        lr = linear_response(decay, rates.Omega_c, rates.Delta_2, float(d), cfg.epsilon)
        rho = steady_state(build_liouvillian(decay, rates.Omega_c, float(d) + rates.Delta_2, rates.Delta_2, Omega_p))
        resid = abs(lr.chi - chi_a) / scale if scale > 0 else abs(lr.chi - chi_a)
        worst = max(worst, resid)
        rows.append([float(d), chi_a.real, chi_a.imag, lr.chi.real, lr.chi.imag, resid,
                     lr.nonlinearity, float(rho[0, 0].real), rates.Delta_2, rates.Omega_c])
    return rows, worst


def run_oracle_check(cfg: RunConfig) -> Dataset:
    if cfg.synthetic_rates and cfg.sweep:
        raise ConfigError("synthetic oracle rates ('Omega_c' set) cannot be combined with a sweep axis")
    names, points, leads = _axis_points(cfg)
    results = _map(_oracle_block, points)
    rows = [lead + r for lead, (block, _) in zip(leads, results) for r in block]
    worst = [w for _, w in results]
    extra = {"max_residual": max(worst), "rates": "synthetic" if cfg.synthetic_rates else "pipeline"}
    if names:
        extra["max_residual_by_" + names[0]] = [[lead[0], w] for lead, w in zip(leads, worst)]
    return Dataset(names + ORACLE_COLUMNS, rows, _metadata(cfg, **extra))


# classify ------------------------------------------------------------------

def _pairs(d: dict) -> dict:
    return {f"{i}{j}": v for (i, j), v in d.items()}


def run_classify(cfg: RunConfig) -> Dataset:
    p = cfg.params
    h = HilbertSpace(cfg.n_max)
    b = polariton_basis_exact(p, h)
    t = decay_rates(matrix_elements_exact(b, h), p.gamma_c, p.gamma_q)
    types = classify_transition_type(t, cfg.type_threshold)
    window = nesting_boundaries(p)
    Omega_c, Omega_p = effective_rabi(cfg.A_c, cfg.A_p, t)
    G, g21 = t.Gamma_31, t.gamma[(2, 1)]
    report = {
        "Delta": p.Delta,
        "chi": p.chi,
        "nesting_window": [window.low, window.high],
        "inside_nesting": window.contains(p.omega_d),
        "energies": [float(e) for e in b.energies],
        "omega": _pairs(t.omega),
        "Q": _pairs(t.Q),
        "C": _pairs(t.C),
        "gamma": _pairs(t.gamma),
        "Gamma_31": G,
        "type": format_types(types),
        "Omega_c": Omega_c,
        "Omega_p": Omega_p,
        "threshold": eit_ats_threshold(G, g21),
        "regime": classify_regime(Omega_c, G, g21).value,
        "eit_condition": eit_condition_check(Omega_c, p.gamma_c),
    }
    try:
        report["impedance_match_Omega"] = impedance_match_drive(p, h=h)
    except RegimeError as exc:
        report["impedance_match_Omega"] = None
        report["impedance_match_note"] = str(exc)
    return Dataset([], [], _metadata(cfg, frame="rotating"), report=report)


RUNNERS = {
    "eigen": run_eigen,
    "sweep": run_sweep,
    "table1": run_table1,
    "spectrum": run_spectrum,
    "classify": run_classify,
    "oracle-check": run_oracle_check,
}


def run(cfg: RunConfig) -> Dataset:
    return RUNNERS[cfg.task](cfg)
