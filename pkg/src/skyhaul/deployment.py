"""Fleet sizing and hub placement.

The hub count is derived from demand before any hub exists: an estimated
average spectral efficiency converts the mean demanded rate into a mean
bandwidth need, which caps how many cells one hub can carry; ceiling division
then sizes the fleet. Hubs are placed by the same hard-core process as cells,
at a fixed altitude.
"""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .geometry import HardCoreSpec, Point2, Point3, matern_type1
from .units import Seed, sub_seed

if TYPE_CHECKING:  # pragma: no cover
    from .config import ScenarioConfig

PLACEMENT_RETRIES = 8


class DeploymentError(RuntimeError):
    pass


class PlacementError(DeploymentError):
    """Hard-core draws kept coming up short of the requested hub count."""


class FleetInfeasibleError(DeploymentError):
    """Per-hub capacity is zero; no fleet size can cover the cells."""


class DegenerateDemandError(ValueError):
    """All demanded rates are zero, so average bandwidth need is undefined."""


@dataclass(frozen=True)
class CellSite:
    pos: Point2
    rate_bps: float


@dataclass(frozen=True)
class HubSite:
    pos: Point3
    bandwidth_cap_hz: float
    link_cap: int


@dataclass(frozen=True)
class Layout:
    cells: list[CellSite]
    hubs: list[HubSite]


@dataclass(frozen=True)
class FleetPlan:
    """Record of the sizing arithmetic that produced a hub fleet."""

    n_hubs: int
    per_hub_cell_cap: int
    avg_bandwidth_hz: float
    avg_spec_eff: float
    hub_altitude_m: float
    hub_min_sep_m: float


def cells_per_hub(bandwidth_cap_hz: float, rates: list[float], avg_spec_eff: float) -> int:
    """How many cells one hub's bandwidth can carry on average.

    floor(B / b_avg) with b_avg = mean(rates) / avg_spec_eff. Returns 0 when
    even one average cell does not fit; callers must treat that as
    infeasible.
    """
    if not rates:
        raise ValueError("rates must be nonempty")
    if not (avg_spec_eff > 0):
        raise ValueError("avg_spec_eff must be positive")
    mean_rate = math.fsum(rates) / len(rates)
    if mean_rate == 0:
        raise DegenerateDemandError("all demanded rates are zero")
    b_avg = mean_rate / avg_spec_eff
    return math.floor(bandwidth_cap_hz / b_avg)


def fleet_size(n_cells: int, link_cap: int, cells_per_hub: int) -> int:
    """Hubs needed to cover n_cells: ceil(n_cells / min(link_cap, cells_per_hub))."""
    per_hub = min(link_cap, cells_per_hub)
    if per_hub < 1:
        raise FleetInfeasibleError("per-hub cell capacity is zero")
    return -(-n_cells // per_hub)


def place_fleet(cfg: "ScenarioConfig", n_hubs: int, min_sep: float, seed: Seed) -> list[Point3]:
    """Place `n_hubs` hubs at the ceiling altitude with hard-core separation.

    Draws a hard-core layout at the scenario's parent intensity and takes the
    first n_hubs points in generation order. A short draw is retried with a
    derived sub-seed, up to PLACEMENT_RETRIES times; running out of retries
    means the region cannot reliably fit the fleet at this separation.
    """
    if n_hubs < 1:
        raise ValueError("n_hubs must be >= 1")
    spec = HardCoreSpec(cfg.area_side_m, cfg.cell_intensity_per_m2, min_sep)
    for attempt in range(PLACEMENT_RETRIES + 1):
        attempt_seed = seed if attempt == 0 else sub_seed(seed, attempt)
        points = matern_type1(spec, attempt_seed)
        if len(points) >= n_hubs:
            return [Point3(p.x, p.y, cfg.hub_altitude_m) for p in points[:n_hubs]]
    raise PlacementError(
        f"could not draw {n_hubs} hubs at min separation {min_sep:.0f} m "
        f"after {PLACEMENT_RETRIES + 1} attempts"
    )
