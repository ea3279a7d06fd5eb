"""Declarative scenario files, run orchestration, CSV output and
quantum-vs-classical comparison reports.

A scenario is a JSON file::

    {
      "name": "two-qubit demo",
      "hamiltonian": {"pauli": "1*ZI + 1*XI + 1*YI"},
      "initial_state": {"real": [0.5, 0.5, 0.5, 0.5], "imag": [0, 0, 0, 0]},
      "grid": {"t_end": 10.0, "dt": 0.001, "output_stride": 10},
      "flow": {"switch_threshold": 0.2},
      "observables": ["populations", "z", "concurrence", "energy", "norm"]
    }

The Hamiltonian is either a Pauli-string (``{"pauli": "..."}``) or a dense
Hermitian matrix (``{"dense": {"real": [[..]], "imag": [[..]]}}``).
Amplitudes and matrices carry real and imaginary parts as separate arrays so
the file format needs no complex literals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import chart, flow, observables, pauli, quantum

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "RunResult",
    "ComparisonReport",
    "load_scenario",
    "run",
    "emit_csv",
    "compare",
]

CSV_SCHEMA_VERSION = 1

KNOWN_OBSERVABLES = ("populations", "z", "concurrence", "energy", "norm")
METHODS = ("quantum", "classical", "both")


class ConfigError(ValueError):
    """Scenario file rejected; the message names the violated rule."""


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    hamiltonian: np.ndarray
    initial_state: np.ndarray
    grid: quantum.TimeGrid
    flow: flow.FlowSettings = field(default_factory=flow.FlowSettings)
    observables: tuple[str, ...] = ("populations", "energy", "norm")
    renormalize_before_observables: bool = False
    quantum_method: str = "exact"

    @property
    def dimension(self) -> int:
        return self.initial_state.shape[0]


def _require(cond: bool, message: str):
    if not cond:
        raise ConfigError(message)


def _complex_array(node, key: str, ndim: int) -> np.ndarray:
    _require(isinstance(node, dict), f"{key}: expected an object with 'real'/'imag'")
    _require("real" in node, f"{key}: missing 'real' array")
    real = np.asarray(node["real"], dtype=float)
    imag = np.asarray(node.get("imag", np.zeros_like(real)), dtype=float)
    _require(
        real.ndim == ndim and imag.shape == real.shape,
        f"{key}: 'real' and 'imag' must both be {ndim}-dimensional and equal shape",
    )
    return real + 1j * imag


def _parse_hamiltonian(node) -> np.ndarray:
    _require(isinstance(node, dict), "hamiltonian: expected an object")
    if "pauli" in node:
        try:
            terms = pauli.parse_hamiltonian(node["pauli"])
            return pauli.build_hamiltonian(terms)
        except ValueError as exc:
            raise ConfigError(f"hamiltonian.pauli: {exc}") from exc
    if "dense" in node:
        H = _complex_array(node["dense"], "hamiltonian.dense", ndim=2)
        _require(
            H.shape[0] == H.shape[1] and H.shape[0] >= 2,
            f"hamiltonian.dense: must be square with N >= 2, got {H.shape}",
        )
        dev = float(np.max(np.abs(H - H.conj().T)))
        _require(dev <= 1e-9, f"hamiltonian.dense: not Hermitian, max|H - H^dag| = {dev:.3e}")
        return H
    raise ConfigError("hamiltonian: needs either a 'pauli' string or a 'dense' matrix")


def _parse_grid(node) -> quantum.TimeGrid:
    _require(isinstance(node, dict), "grid: expected an object")
    for key in ("t_end", "dt"):
        _require(key in node, f"grid: missing required field '{key}'")
    try:
        return quantum.TimeGrid(
            t_end=float(node["t_end"]),
            dt=float(node["dt"]),
            output_stride=int(node.get("output_stride", 1)),
        )
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from exc


def _parse_flow(node) -> flow.FlowSettings:
    if node is None:
        return flow.FlowSettings()
    _require(isinstance(node, dict), "flow: expected an object")
    unknown = set(node) - {"dt", "switch_threshold", "method"}
    _require(not unknown, f"flow: unknown fields {sorted(unknown)}")
    try:
        return flow.FlowSettings(
            dt=None if node.get("dt") is None else float(node["dt"]),
            switch_threshold=float(node.get("switch_threshold", 0.2)),
            method=node.get("method", "rk4"),
        )
    except ValueError as exc:
        raise ConfigError(f"flow: {exc}") from exc


def scenario_from_dict(data, source: str = "<dict>") -> ScenarioConfig:
    """Validate a deserialized scenario document into a ScenarioConfig."""
    _require(isinstance(data, dict), "scenario: top level must be an object")
    unknown = set(data) - {
        "name",
        "hamiltonian",
        "initial_state",
        "grid",
        "flow",
        "observables",
        "renormalize_before_observables",
        "quantum_method",
    }
    _require(not unknown, f"scenario: unknown fields {sorted(unknown)}")
    for key in ("hamiltonian", "initial_state", "grid"):
        _require(key in data, f"scenario: missing required field '{key}'")

    H = _parse_hamiltonian(data["hamiltonian"])
    psi0 = _complex_array(data["initial_state"], "initial_state", ndim=1)
    _require(
        psi0.shape[0] == H.shape[0],
        f"initial_state: has {psi0.shape[0]} amplitudes but the Hamiltonian "
        f"dimension is {H.shape[0]}",
    )
    nrm = float(np.linalg.norm(psi0))
    _require(
        abs(nrm - 1.0) <= 1e-9,
        f"initial_state: norm is {nrm!r}, not 1 within 1e-9",
    )

    grid = _parse_grid(data["grid"])
    flow_settings = _parse_flow(data.get("flow"))

    obs = data.get("observables", ["populations", "energy", "norm"])
    _require(
        isinstance(obs, (list, tuple)) and len(obs) > 0,
        "observables: expected a non-empty list",
    )
    bad = [o for o in obs if o not in KNOWN_OBSERVABLES]
    _require(not bad, f"observables: unknown names {bad}; known: {list(KNOWN_OBSERVABLES)}")
    n = H.shape[0]
    for name in ("z", "concurrence"):
        _require(
            name not in obs or n == 4,
            f"observables: '{name}' requires a two-qubit system (N=4), got N={n}",
        )

    qmethod = data.get("quantum_method", "exact")
    _require(
        qmethod in ("exact", "rk4"),
        f"quantum_method: must be 'exact' or 'rk4', got {qmethod!r}",
    )

    return ScenarioConfig(
        name=str(data.get("name", Path(source).stem)),
        hamiltonian=H,
        initial_state=psi0,
        grid=grid,
        flow=flow_settings,
        observables=tuple(obs),
        renormalize_before_observables=bool(
            data.get("renormalize_before_observables", False)
        ),
        quantum_method=qmethod,
    )


def load_scenario(path) -> ScenarioConfig:
    """Read and validate a scenario JSON file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: JSON parse error at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc
    return scenario_from_dict(data, source=str(path))


@dataclass
class RunResult:
    """Trajectories produced by `run`; either side may be None depending on
    the requested method."""

    config: ScenarioConfig
    method: str
    quantum_trajectory: quantum.QuantumTrajectory | None = None
    classical_trajectory: flow.ClassicalTrajectory | None = None

    @property
    def times(self) -> np.ndarray:
        traj = self.quantum_trajectory or self.classical_trajectory
        return traj.times


def run(config: ScenarioConfig, method: str = "both") -> RunResult:
    """Execute a scenario; deterministic for a fixed config.

    The classical side starts from the chart anchored at the maximum-modulus
    initial amplitude.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    result = RunResult(config=config, method=method)
    if method in ("quantum", "both"):
        if config.quantum_method == "rk4":
            result.quantum_trajectory = quantum.evolve_rk4(
                config.hamiltonian, config.initial_state, config.grid
            )
        else:
            result.quantum_trajectory = quantum.evolve_exact_grid(
                config.hamiltonian, config.initial_state, config.grid
            )
    if method in ("classical", "both"):
        point0 = chart.to_chart(
            config.initial_state, chart.select_pivot(config.initial_state)
        )
        result.classical_trajectory = flow.integrate_classical(
            config.hamiltonian, point0, config.grid, config.flow
        )
    return result


def _quantum_columns(result: RunResult) -> dict[str, np.ndarray]:
    cfg = result.config
    traj = result.quantum_trajectory
    states = traj.states
    if cfg.renormalize_before_observables:
        states = states / np.linalg.norm(states, axis=1, keepdims=True)
    cols: dict[str, np.ndarray] = {}
    if "populations" in cfg.observables:
        pops = np.abs(states) ** 2
        for i in range(cfg.dimension):
            cols[f"p{i}_q"] = pops[:, i]
    if "z" in cfg.observables:
        cols["z_q"] = np.array([observables.quaternionic_z_quantum(s) for s in states])
    if "concurrence" in cfg.observables:
        cols["C_q"] = np.array([observables.concurrence_quantum(s) for s in states])
    if "energy" in cfg.observables:
        cols["E_q"] = np.array(
            [observables.energy(cfg.hamiltonian, s) for s in states]
        )
    if "norm" in cfg.observables:
        cols["norm_drift_q"] = traj.norm_drift
    return cols


def _classical_columns(result: RunResult) -> dict[str, np.ndarray]:
    cfg = result.config
    traj = result.classical_trajectory
    points = [traj.point(k) for k in range(len(traj.times))]
    cols: dict[str, np.ndarray] = {}
    if "populations" in cfg.observables:
        pops = np.array([observables.populations_classical(p) for p in points])
        for i in range(cfg.dimension):
            cols[f"p{i}_c"] = pops[:, i]
    if "z" in cfg.observables:
        cols["z_c"] = np.array(
            [observables.quaternionic_z_classical(p) for p in points]
        )
    if "concurrence" in cfg.observables:
        cols["C_c"] = np.array(
            [observables.concurrence_classical(p) for p in points]
        )
    if "energy" in cfg.observables:
        cols["E_c"] = traj.energies
    cols["pivot"] = traj.pivots
    cols["n_switches_cum"] = traj.n_switches_cum
    return cols


def _column_order(result: RunResult) -> list[str]:
    cfg = result.config
    has_q = result.quantum_trajectory is not None
    has_c = result.classical_trajectory is not None
    order = ["t"]
    if "populations" in cfg.observables:
        if has_q:
            order += [f"p{i}_q" for i in range(cfg.dimension)]
        if has_c:
            order += [f"p{i}_c" for i in range(cfg.dimension)]
    for name, col in (("z", "z"), ("concurrence", "C"), ("energy", "E")):
        if name in cfg.observables:
            if has_q:
                order.append(f"{col}_q")
            if has_c:
                order.append(f"{col}_c")
    if "norm" in cfg.observables and has_q:
        order.append("norm_drift_q")
    if has_c:
        order += ["pivot", "n_switches_cum"]
    return order


def emit_csv(result: RunResult, path) -> None:
    """Write sampled observables as CSV.

    First line is the schema comment ``# schema=1``; floats carry 17
    significant digits so values round-trip exactly.
    """
    cols: dict[str, np.ndarray] = {"t": result.times}
    if result.quantum_trajectory is not None:
        cols.update(_quantum_columns(result))
    if result.classical_trajectory is not None:
        cols.update(_classical_columns(result))
    order = _column_order(result)

    def fmt(name: str, v) -> str:
        if name in ("pivot", "n_switches_cum"):
            return str(int(v))
        return f"{float(v):.17g}"

    lines = [f"# schema={CSV_SCHEMA_VERSION}", ",".join(order)]
    for k in range(len(result.times)):
        lines.append(",".join(fmt(name, cols[name][k]) for name in order))
    Path(path).write_text("\n".join(lines) + "\n")


@dataclass
class ComparisonReport:
    """Max deviations between the quantum run and the classical run of one
    scenario, plus conservation diagnostics."""

    scenario: str
    tolerance: float
    observable_deviation: dict[str, float]
    fidelity_gap_max: float
    energy_drift_quantum: float
    energy_drift_classical: float
    norm_drift_quantum: float
    n_switches: int
    switch_times: np.ndarray = field(repr=False)

    @property
    def max_deviation(self) -> float:
        devs = [self.fidelity_gap_max, *self.observable_deviation.values()]
        return max(devs)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "tolerance": self.tolerance,
            "observable_deviation": dict(self.observable_deviation),
            "fidelity_gap_max": self.fidelity_gap_max,
            "energy_drift_quantum": self.energy_drift_quantum,
            "energy_drift_classical": self.energy_drift_classical,
            "norm_drift_quantum": self.norm_drift_quantum,
            "n_switches": self.n_switches,
            "switch_times": [float(t) for t in self.switch_times],
            "max_deviation": self.max_deviation,
            "passed": self.passed,
        }

    def summary_lines(self) -> list[str]:
        lines = [f"scenario: {self.scenario}"]
        for name in sorted(self.observable_deviation):
            lines.append(
                f"  max |quantum - classical| {name}: "
                f"{self.observable_deviation[name]:.3e}"
            )
        lines += [
            f"  max fidelity gap: {self.fidelity_gap_max:.3e}",
            f"  energy drift (quantum, classical): "
            f"{self.energy_drift_quantum:.3e}, {self.energy_drift_classical:.3e}",
            f"  quantum norm drift: {self.norm_drift_quantum:.3e}",
            f"  chart switches: {self.n_switches}",
            f"  tolerance: {self.tolerance:.3e} -> "
            f"{'PASS' if self.passed else 'FAIL'}",
        ]
        return lines


def compare(config: ScenarioConfig, tolerance: float = 1e-6) -> ComparisonReport:
    """Run quantum and classical on the same grid and report deviations.

    The report fails (passed=False) when any observable deviation or the
    trajectory fidelity gap exceeds `tolerance`; nothing is clamped.
    """
    result = run(config, method="both")
    qtraj = result.quantum_trajectory
    ctraj = result.classical_trajectory

    qcols = _quantum_columns(result)
    ccols = _classical_columns(result)
    deviation: dict[str, float] = {}
    for name in config.observables:
        if name == "norm":
            continue
        if name == "populations":
            devs = [
                float(np.max(np.abs(qcols[f"p{i}_q"] - ccols[f"p{i}_c"])))
                for i in range(config.dimension)
            ]
            deviation["populations"] = max(devs)
        else:
            col = {"z": "z", "concurrence": "C", "energy": "E"}[name]
            deviation[name] = float(
                np.max(np.abs(qcols[f"{col}_q"] - ccols[f"{col}_c"]))
            )

    gaps = np.empty(len(qtraj.times))
    for k in range(len(qtraj.times)):
        psi_c = chart.from_chart(ctraj.point(k))
        gaps[k] = 1.0 - abs(np.vdot(qtraj.states[k], psi_c))
    fidelity_gap_max = float(np.max(gaps))

    energies_q = np.array(
        [observables.energy(config.hamiltonian, s) for s in qtraj.states]
    )
    return ComparisonReport(
        scenario=config.name,
        tolerance=tolerance,
        observable_deviation=deviation,
        fidelity_gap_max=fidelity_gap_max,
        energy_drift_quantum=float(np.max(np.abs(energies_q - energies_q[0]))),
        energy_drift_classical=float(
            np.max(np.abs(ctraj.energies - ctraj.energies[0]))
        ),
        norm_drift_quantum=float(np.max(qtraj.norm_drift)),
        n_switches=ctraj.n_switches,
        switch_times=ctraj.switch_times,
    )
