"""Air-to-ground channel model.

Line-of-sight probability follows the standard logistic model in the
elevation angle; mean path loss adds angle-weighted LoS/NLoS excess losses on
top of free-space loss. SINR treats every hub as a co-channel interferer
transmitting continuously at full power.
"""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .geometry import Point2, Point3, elevation_angle, horizontal_distance

if TYPE_CHECKING:  # pragma: no cover
    from .config import ScenarioConfig
    from .deployment import Layout

LIGHT_SPEED = 2.998e8  # m/s


class CoverageError(RuntimeError):
    """Coverage-radius inversion has no solution in the bracket."""


class BracketError(CoverageError):
    """Path loss failed the monotonicity check over the search bracket."""


@dataclass(frozen=True)
class ChannelParams:
    """Environment constants of the air-to-ground propagation model."""

    alpha: float  # logistic LoS-probability constant, environment dependent
    beta: float  # logistic LoS-probability slope, environment dependent
    eta_los_db: float  # excess loss on LoS links, dB
    eta_nlos_db: float  # excess loss on NLoS links, dB
    carrier_hz: float
    pl_exponent: float = 2.0
    light_speed: float = LIGHT_SPEED

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("alpha and beta must be positive")
        if not (0 <= self.eta_los_db <= self.eta_nlos_db):
            raise ValueError("need 0 <= eta_los_db <= eta_nlos_db")
        if not (self.carrier_hz > 0):
            raise ValueError("carrier_hz must be positive")
        if not (self.pl_exponent >= 2):
            raise ValueError("pl_exponent must be >= 2")


@dataclass(frozen=True)
class RadioParams:
    """Link-budget constants shared by every cell-to-hub link."""

    tx_power_w: float
    noise_w: float
    sinr_min_db: float
    pl_max_db: float

    def __post_init__(self):
        if not (self.tx_power_w > 0):
            raise ValueError("tx_power_w must be positive")
        if not (self.noise_w > 0):
            raise ValueError("noise_w must be positive")


@dataclass(frozen=True)
class LinkTable:
    """Per (cell, hub) link metrics, all matrices shaped n_cells x n_hubs."""

    pl_db: np.ndarray
    sinr_db: np.ndarray
    spec_eff: np.ndarray  # bits/s/Hz
    bandwidth_hz: np.ndarray  # bandwidth needed to carry the demanded rate

    @property
    def n_cells(self) -> int:
        return self.pl_db.shape[0]

    @property
    def n_hubs(self) -> int:
        return self.pl_db.shape[1]


def p_los(params: ChannelParams, theta: float) -> float:
    """Line-of-sight probability at elevation angle `theta` (radians).

    1 / (1 + alpha * exp(-beta * (theta_deg - alpha))), strictly increasing
    in theta and confined to (0, 1). Valid for 0 < theta <= pi/2.
    """
    if not (0.0 < theta <= math.pi / 2):
        raise ValueError(f"elevation angle {theta} outside (0, pi/2]")
    theta_deg = math.degrees(theta)
    return 1.0 / (1.0 + params.alpha * math.exp(-params.beta * (theta_deg - params.alpha)))


def path_loss_db(params: ChannelParams, cell: Point2, hub: Point3) -> float:
    """Mean air-to-ground path loss in dB between a cell and a hub.

    Free-space loss over the slant distance d = sqrt(h^2 + s^2), plus the
    LoS/NLoS excess losses weighted by P(LoS) and 1 - P(LoS).
    """
    s = horizontal_distance(cell, hub)
    d = math.hypot(hub.h, s)
    if d == 0.0:
        raise ValueError("cell and hub are co-located")
    fspl = 10.0 * math.log10((4.0 * math.pi * params.carrier_hz * d / params.light_speed) ** params.pl_exponent)
    p = p_los(params, elevation_angle(cell, hub))
    return fspl + p * params.eta_los_db + (1.0 - p) * params.eta_nlos_db


def received_power_w(radio: RadioParams, pl_db: float) -> float:
    """Received power in watts for a given path loss."""
    return radio.tx_power_w * 10.0 ** (-pl_db / 10.0)


def sinr_linear(radio: RadioParams, rx_powers: list[float], serving_index: int) -> float:
    """Linear SINR of the link to `serving_index`.

    Every other hub counts as a co-channel interferer; math.fsum keeps the
    interference sum independent of hub ordering.
    """
    interference = math.fsum(p for k, p in enumerate(rx_powers) if k != serving_index)
    return rx_powers[serving_index] / (interference + radio.noise_w)


def build_link_table(cfg: "ScenarioConfig", layout: "Layout") -> LinkTable:
    """Evaluate path loss, SINR, spectral efficiency and bandwidth demand for
    every (cell, hub) pair of a layout.

    Each cell demands the same rate from every hub, so the bandwidth demand
    of pair (i, j) is rate_i / spec_eff_ij.
    """
    if not layout.cells or not layout.hubs:
        raise ValueError("layout must contain at least one cell and one hub")
    n, m = len(layout.cells), len(layout.hubs)
    pl = np.empty((n, m))
    for i, cell in enumerate(layout.cells):
        for j, hub in enumerate(layout.hubs):
            pl[i, j] = path_loss_db(cfg.channel, cell.pos, hub.pos)

    rx = np.empty((n, m))
    for i in range(n):
        for j in range(m):
            rx[i, j] = received_power_w(cfg.radio, pl[i, j])

    sinr = np.empty((n, m))
    for i in range(n):
        row = [float(v) for v in rx[i]]
        for j in range(m):
            sinr[i, j] = sinr_linear(cfg.radio, row, j)

    sinr_db = 10.0 * np.log10(sinr)
    spec_eff = np.log2(1.0 + sinr)
    rates = np.array([c.rate_bps for c in layout.cells], dtype=float)
    bandwidth = rates[:, None] / spec_eff
    return LinkTable(pl_db=pl, sinr_db=sinr_db, spec_eff=spec_eff, bandwidth_hz=bandwidth)


def coverage_radius(
    params: ChannelParams,
    h: float,
    pl_max_db: float,
    *,
    residual_tol_db: float = 0.01,
    grid_points: int = 256,
) -> float:
    """Horizontal distance at which the path loss reaches `pl_max_db`.

    Solved by bisection on s at fixed altitude h, stopping once the path-loss
    residual is within `residual_tol_db`. Monotonicity of the loss over the
    bracket is verified on a grid first, since it is what makes the root
    unique.
    """

    def pl(s: float) -> float:
        return path_loss_db(params, Point2(0.0, 0.0), Point3(s, 0.0, h))

    pl0 = pl(0.0)
    if pl0 > pl_max_db:
        raise CoverageError(
            f"path loss at zero ground offset ({pl0:.2f} dB) already exceeds {pl_max_db:.2f} dB"
        )
    if pl0 == pl_max_db:
        return 0.0

    hi = max(h, 1.0)
    for _ in range(60):
        if pl(hi) >= pl_max_db:
            break
        hi *= 2.0
    else:
        raise CoverageError(f"path loss never reaches {pl_max_db:.2f} dB (unbounded bracket)")

    grid = np.linspace(0.0, hi, grid_points)
    values = [pl(float(s)) for s in grid]
    if any(b <= a for a, b in zip(values, values[1:])):
        raise BracketError("path loss is not strictly increasing over the search bracket")

    # Bisect the bracket down to micrometers, then confirm the residual:
    # stopping on the residual alone can leave the answer a meter or so off
    # the root even though the loss there is within tolerance.
    lo = 0.0
    for _ in range(200):
        if hi - lo <= 1e-6:
            break
        mid = 0.5 * (lo + hi)
        if pl(mid) < pl_max_db:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    if abs(pl(root) - pl_max_db) > residual_tol_db:
        raise CoverageError("bisection failed to reach the residual tolerance")
    return root
