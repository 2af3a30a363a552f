"""End-to-end experiment driver.

Pipeline: draw the cell layout, assign demands, size and place the hub
fleet, evaluate the channel, then solve the association with the selected
solvers. Every run re-checks the solver outputs with the independent
feasibility checker before anything is written.

Artifacts per run directory: layout.csv, links.csv, assoc_<method>.csv,
report_<method>.csv, timing_<method>.txt and summary.json. All CSVs are
byte-stable for a fixed (config, seed); wall-clock numbers are quarantined
in the timing files so rerunning never perturbs the CSVs.
"""

import csv
import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .association import (AssociationMatrix, ProblemInstance, check_feasible,
                          solve_greedy)
from .channel import LinkTable, build_link_table, coverage_radius
from .config import ScenarioConfig
from .deployment import (CellSite, FleetPlan, HubSite, Layout, cells_per_hub,
                         fleet_size, place_fleet)
from .exact import solve_exact
from .geometry import HardCoreSpec, matern_type1
from .instances import random_instance
from .report import SolveReport
from .units import RNG_ALGORITHM, make_rng, sub_seed

# sub-stream indices off the master seed
_STREAM_CELLS = 0
_STREAM_RATES = 1
_STREAM_HUBS = 2


class SeedSearchError(RuntimeError):
    """No seed in the scanned range produced the requested layout."""


class SolutionRejectedError(RuntimeError):
    """A solver emitted an association the independent checker refused."""


@dataclass
class PreparedScenario:
    """Everything that precedes solving: layout, fleet arithmetic, channel."""

    cfg: ScenarioConfig
    layout: Layout
    fleet: FleetPlan | None  # None for the empty layout
    link_table: LinkTable
    instance: ProblemInstance  # with the full constraint set


@dataclass
class RunResult:
    prepared: PreparedScenario
    constraints: str
    matrices: dict[str, AssociationMatrix]
    reports: dict[str, SolveReport]


def draw_cells(cfg: ScenarioConfig) -> list:
    spec = HardCoreSpec(cfg.area_side_m, cfg.cell_intensity_per_m2,
                        cfg.cell_min_sep_m)
    return matern_type1(spec, sub_seed(cfg.seed, _STREAM_CELLS))


def draw_rates(cfg: ScenarioConfig, n_cells: int) -> np.ndarray:
    rng = make_rng(sub_seed(cfg.seed, _STREAM_RATES))
    return rng.choice(np.asarray(cfg.rate_menu_bps, dtype=float), size=n_cells)


def _empty_prepared(cfg: ScenarioConfig) -> PreparedScenario:
    shape = (0, 0)
    table = LinkTable(pl_db=np.zeros(shape), sinr_db=np.zeros(shape),
                      spec_eff=np.zeros(shape), bandwidth_hz=np.zeros(shape))
    inst = ProblemInstance(link_table=table, rates=np.zeros(0),
                           backhaul_cap_bps=cfg.backhaul_cap_bps,
                           hub_bandwidth_caps=np.zeros(0),
                           hub_link_caps=np.zeros(0, dtype=int),
                           sinr_min_db=cfg.sinr_min_db)
    return PreparedScenario(cfg=cfg, layout=Layout(cells=[], hubs=[]),
                            fleet=None, link_table=table, instance=inst)


def prepare_scenario(cfg: ScenarioConfig) -> PreparedScenario:
    """Run the pipeline up to (but not including) the solvers.

    An empty cell draw short-circuits into an empty layout with no hubs; it
    is a valid scenario that every downstream stage handles.
    """
    points = draw_cells(cfg)
    if not points:
        return _empty_prepared(cfg)
    rates = draw_rates(cfg, len(points))
    cells = [CellSite(pos=p, rate_bps=float(r)) for p, r in zip(points, rates)]

    per_hub_cap = cells_per_hub(cfg.hub_bandwidth_hz, [float(r) for r in rates],
                                cfg.avg_spec_eff)
    n_hubs = fleet_size(len(cells), cfg.hub_link_cap, per_hub_cap)
    hub_min_sep = coverage_radius(cfg.channel, cfg.hub_altitude_m, cfg.pl_max_db)
    hub_points = place_fleet(cfg, n_hubs, hub_min_sep,
                             sub_seed(cfg.seed, _STREAM_HUBS))
    hubs = [HubSite(pos=p, bandwidth_cap_hz=cfg.hub_bandwidth_hz,
                    link_cap=cfg.hub_link_cap) for p in hub_points]
    layout = Layout(cells=cells, hubs=hubs)

    mean_rate = math.fsum(float(r) for r in rates) / len(cells)
    fleet = FleetPlan(n_hubs=n_hubs, per_hub_cell_cap=per_hub_cap,
                      avg_bandwidth_hz=mean_rate / cfg.avg_spec_eff,
                      avg_spec_eff=cfg.avg_spec_eff,
                      hub_altitude_m=cfg.hub_altitude_m,
                      hub_min_sep_m=hub_min_sep)

    table = build_link_table(cfg, layout)
    inst = ProblemInstance(
        link_table=table,
        rates=np.asarray([c.rate_bps for c in cells], dtype=float),
        backhaul_cap_bps=cfg.backhaul_cap_bps,
        hub_bandwidth_caps=np.full(n_hubs, cfg.hub_bandwidth_hz, dtype=float),
        hub_link_caps=np.full(n_hubs, cfg.hub_link_cap, dtype=int),
        sinr_min_db=cfg.sinr_min_db,
    )
    return PreparedScenario(cfg=cfg, layout=layout, fleet=fleet,
                            link_table=table, instance=inst)


def relax_to_qos_only(inst: ProblemInstance) -> ProblemInstance:
    """Keep only admission, link-count and single-association constraints;
    the backhaul and bandwidth caps become unbounded."""
    return dataclasses.replace(
        inst,
        backhaul_cap_bps=math.inf,
        hub_bandwidth_caps=np.full(inst.n_hubs, math.inf),
    )


def _methods_for(solver: str) -> list[str]:
    if solver == "both":
        return ["greedy", "exact"]
    return [solver]


def solve_instance(inst: ProblemInstance, method: str,
                   node_budget: int = 100_000_000):
    if method == "greedy":
        return solve_greedy(inst)
    if method == "exact":
        return solve_exact(inst, node_budget)
    raise ValueError(f"unknown method: {method}")


def run_scenario(cfg: ScenarioConfig, out_dir: str | Path | None = None, *,
                 solver: str | None = None, constraints: str | None = None,
                 node_budget: int = 100_000_000) -> RunResult:
    """Full pipeline: prepare, solve with the selected methods, verify, emit.

    Solver outputs are re-verified with check_feasible against the solved
    instance; a failure raises SolutionRejectedError rather than writing a
    bad artifact.
    """
    solver = solver or cfg.solver
    constraints = constraints or cfg.constraints
    prepared = prepare_scenario(cfg)
    inst = prepared.instance if constraints == "all" \
        else relax_to_qos_only(prepared.instance)

    matrices: dict[str, AssociationMatrix] = {}
    reports: dict[str, SolveReport] = {}
    for method in _methods_for(solver):
        a, report = solve_instance(inst, method, node_budget)
        verdict = check_feasible(inst, a)
        if not verdict.ok:
            raise SolutionRejectedError(
                f"{method} produced an infeasible association: {verdict.violated}")
        report.seed = cfg.seed
        matrices[method] = a
        reports[method] = report

    result = RunResult(prepared=prepared, constraints=constraints,
                       matrices=matrices, reports=reports)
    if out_dir is not None:
        write_run_artifacts(Path(out_dir), result)
    return result


def sweep_constraints(cfg: ScenarioConfig, out_dir: str | Path | None = None, *,
                      solver: str = "both",
                      node_budget: int = 100_000_000) -> list[dict]:
    """Solve one instance under the qos-only subset and the full set.

    Returns one row per (constraints, method) with the association size and
    sum rate, plus which full constraints the solution would violate; the
    relaxed solutions typically break the backhaul or bandwidth caps, which
    is the point of the comparison.
    """
    prepared = prepare_scenario(cfg)
    full = prepared.instance
    rows: list[dict] = []
    for constraints in ("qos-only", "all"):
        inst = full if constraints == "all" else relax_to_qos_only(full)
        for method in _methods_for(solver):
            a, report = solve_instance(inst, method, node_budget)
            verdict = check_feasible(inst, a)
            if not verdict.ok:
                raise SolutionRejectedError(
                    f"{method}/{constraints} infeasible: {verdict.violated}")
            against_full = check_feasible(full, a)
            rows.append({
                "constraints": constraints,
                "method": method,
                "n_associated": report.n_associated,
                "sum_rate_bps": report.sum_rate_bps,
                "violates_full": ";".join(sorted({c for c, _ in against_full.violated})),
            })
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_sweep_csv(out / "sweep.csv", rows)
        write_summary(out / "summary.json", cfg,
                      _derived_block(prepared))
    return rows


def seed_search(cfg: ScenarioConfig, target_n_cells: int, max_seeds: int,
                start: int = 0) -> int:
    """Scan master seeds (ascending from `start`) until the cell draw has
    exactly `target_n_cells` points; returns the first matching seed."""
    spec = HardCoreSpec(cfg.area_side_m, cfg.cell_intensity_per_m2,
                        cfg.cell_min_sep_m)
    for seed in range(start, start + max_seeds):
        if len(matern_type1(spec, sub_seed(seed, _STREAM_CELLS))) == target_n_cells:
            return seed
    raise SeedSearchError(
        f"no seed in [{start}, {start + max_seeds}) yields {target_n_cells} cells")


def complexity_sweep(seed: int, sizes=(10, 25, 50, 100, 200), *,
                     n_hubs: int = 4, link_cap: int = 7) -> list[dict]:
    """Greedy operation counts across instance sizes at fixed hub count and
    link cap, for scaling fits and plots."""
    rows = []
    for n in sizes:
        inst = random_instance(sub_seed(seed, n), n, n_hubs, link_cap=link_cap)
        _, report = solve_greedy(inst)
        rows.append({"n_cells": n, "n_hubs": n_hubs, "link_cap": link_cap,
                     "op_count": report.op_count,
                     "sum_rate_bps": report.sum_rate_bps})
    return rows


# ---------------------------------------------------------------------------
# artifact writers


def _fmt(value) -> str:
    """Canonical cell text: floats through repr for round-trip stability."""
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _open_csv(path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline="")


def write_layout_csv(path: Path, layout: Layout):
    with _open_csv(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["kind", "id", "x_m", "y_m", "h_m", "rate_bps",
                    "bandwidth_cap_hz", "link_cap"])
        for i, cell in enumerate(layout.cells):
            w.writerow(["cell", i, _fmt(cell.pos.x), _fmt(cell.pos.y),
                        _fmt(0.0), _fmt(cell.rate_bps), "", ""])
        for j, hub in enumerate(layout.hubs):
            w.writerow(["hub", j, _fmt(hub.pos.x), _fmt(hub.pos.y),
                        _fmt(hub.pos.h), "", _fmt(hub.bandwidth_cap_hz),
                        hub.link_cap])


def write_links_csv(path: Path, table: LinkTable):
    with _open_csv(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["cell", "hub", "pl_db", "sinr_db", "spec_eff", "bw_hz"])
        for i in range(table.n_cells):
            for j in range(table.n_hubs):
                w.writerow([i, j, _fmt(float(table.pl_db[i, j])),
                            _fmt(float(table.sinr_db[i, j])),
                            _fmt(float(table.spec_eff[i, j])),
                            _fmt(float(table.bandwidth_hz[i, j]))])


def write_assoc_csv(path: Path, a: AssociationMatrix):
    with _open_csv(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["cell", "hub"])
        for i, j in zip(*np.nonzero(a)):
            w.writerow([int(i), int(j)])


REPORT_FIELDS = ["method", "sum_rate_bps", "n_associated", "per_hub_links",
                 "hubs_in_use", "feasible", "op_count", "node_count",
                 "rng_algorithm", "seed"]


def write_report_csv(path: Path, report: SolveReport):
    """One-row CSV of the report, minus wall time (kept out so reruns stay
    byte-identical; see write_timing)."""
    with _open_csv(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(REPORT_FIELDS)
        w.writerow([
            report.method,
            _fmt(report.sum_rate_bps),
            report.n_associated,
            ";".join(str(k) for k in report.per_hub_links),
            report.hubs_in_use,
            report.feasible,
            report.op_count,
            "" if report.node_count is None else report.node_count,
            report.rng_algorithm,
            _fmt(report.seed),
        ])


def write_timing(path: Path, report: SolveReport):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(f"wall_time_s={report.wall_time_s!r}\n")


def _write_sweep_csv(path: Path, rows: list[dict]):
    with _open_csv(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["constraints", "method", "n_associated", "sum_rate_bps",
                    "violates_full"])
        for r in rows:
            w.writerow([r["constraints"], r["method"], r["n_associated"],
                        _fmt(r["sum_rate_bps"]), r["violates_full"]])


def _derived_block(prepared: PreparedScenario) -> dict:
    block = {
        "n_cells": len(prepared.layout.cells),
        "n_hubs": len(prepared.layout.hubs),
    }
    if prepared.fleet is not None:
        block.update({
            "per_hub_cell_cap": prepared.fleet.per_hub_cell_cap,
            "avg_bandwidth_hz": prepared.fleet.avg_bandwidth_hz,
            "hub_min_sep_m": prepared.fleet.hub_min_sep_m,
            "hub_altitude_m": prepared.fleet.hub_altitude_m,
        })
    return block


def write_summary(path: Path, cfg: ScenarioConfig, derived: dict):
    payload = {
        "config": dataclasses.asdict(cfg),
        "derived": derived,
        "rng_algorithm": RNG_ALGORITHM,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def write_run_artifacts(out_dir: Path, result: RunResult):
    out_dir.mkdir(parents=True, exist_ok=True)
    write_layout_csv(out_dir / "layout.csv", result.prepared.layout)
    write_links_csv(out_dir / "links.csv", result.prepared.link_table)
    for method, a in result.matrices.items():
        write_assoc_csv(out_dir / f"assoc_{method}.csv", a)
        write_report_csv(out_dir / f"report_{method}.csv", result.reports[method])
        write_timing(out_dir / f"timing_{method}.txt", result.reports[method])
    derived = _derived_block(result.prepared)
    derived["constraints"] = result.constraints
    write_summary(out_dir / "summary.json", result.prepared.cfg, derived)
