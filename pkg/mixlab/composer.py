"""Generalized cellular flows: stage n runs a rescaled copy of its block inside every tile
of the tiling of side lambda^n, during [T_n, T_{n+1}]."""

from __future__ import print_function, division
import dataclasses
import numpy as np
from scipy.ndimage import map_coordinates
import mixlab.constants as constants
from mixlab.blocks import identity_map, tiled_permutation, compose_maps
from mixlab.diagnostics import (
    MixParams, geometric_mixing_scale, functional_mixing_scale,
    characteristic_length_scale, unmixedness_certificate
    )
from mixlab.grid_field import GridSpec, Tiling, indicator, mixed_level
from mixlab.helpers import MissingVelocityError, ResolutionError
from mixlab.velocity import VelocityField, Tiled, inside_q, rk4_trajectories


class SigmaSequence(object):
    """Un-mixedness index sigma(0), sigma(1), ...

    ``SigmaSequence()`` derives sigma from the stage blocks with sigma(0) = 0; use
    ``constant``, ``linear`` or an explicit list to state it."""

    def __init__(self, values=None):
        self.kind = "derived" if values is None else "custom"
        self.values = None if values is None else [int(v) for v in values]
        self.param = None

    @classmethod
    def constant(cls, c):
        sigma = cls()
        sigma.kind, sigma.param = "constant", int(c)
        return sigma

    @classmethod
    def linear(cls, a):
        sigma = cls()
        sigma.kind, sigma.param = "linear", int(a)
        return sigma

    def resolve(self, gains):
        """sigma(0..N) for N stages with the given per-stage increments"""
        stages = len(gains)
        if self.kind == "derived":
            values = [0] + list(np.cumsum(gains, dtype=np.int64))
        elif self.kind == "constant":
            values = [self.param] * (stages + 1)
        elif self.kind == "linear":
            values = [self.param * n for n in range(stages + 1)]
        else:
            if len(self.values) < stages + 1:
                raise ValueError("sigma needs %d values for %d stages" % (stages + 1, stages))
            values = self.values[:stages + 1]
        values = [int(v) for v in values]
        if min(values) < 0:
            raise ValueError("sigma must be non-negative")
        for n, gain in enumerate(gains):
            if values[n + 1] - values[n] != gain:
                raise ValueError(
                    "sigma(%d) - sigma(%d) = %d does not match the depth gain %d of stage %d"
                    % (n + 1, n, values[n + 1] - values[n], gain, n))
        return values


class Schedule(object):
    """Stage times 0 = T_0 < T_1 < ..."""

    def __init__(self, times):
        times = tuple(float(t) for t in times)
        if len(times) < 1 or times[0] != 0:
            raise ValueError("Schedule must start at T_0 = 0")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("Schedule times must be strictly increasing")
        self.times = times

    @classmethod
    def uniform(cls, stages, tau=1.0):
        return cls(tau * np.arange(stages + 1))

    @classmethod
    def from_durations(cls, taus):
        return cls(np.concatenate(([0.0], np.cumsum(taus))))

    @property
    def stages(self):
        return len(self.times) - 1

    def tau(self, n):
        return self.times[n + 1] - self.times[n]

    def tau_nk(self, n, k):
        return self.times[n + k] - self.times[n]

    def stage_at(self, t):
        if not self.times[0] <= t < self.times[-1]:
            raise ValueError("t = %g lies outside the schedule [%g, %g)" % (t, self.times[0], self.times[-1]))
        return int(np.searchsorted(self.times, t, side="right") - 1)


class StageVelocity(VelocityField):
    """Unit-time velocity of one stage on Q: every tile of the given level carries a
    rescaled block sampler, tile overrides replace it on single tiles"""

    def __init__(self, level, default, overrides=None):
        self.level = level
        self.default = Tiled(default, level)
        self.overrides = dict((tile, Tiled(v, level)) for tile, v in (overrides or {}).items())
        self.time_constant = self.default.time_constant and all(
            v.time_constant for v in self.overrides.values())

    def derivative(self, t, x, y, a, b):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        u1, u2 = self.default.derivative(t, x, y, a, b)
        if self.overrides:
            k = 2 ** self.level
            kx = np.floor((x + 0.5) * k)
            ky = np.floor((y + 0.5) * k)
            for (tx, ty), sampler in self.overrides.items():
                here = (kx == tx) & (ky == ty)
                v1, v2 = sampler.derivative(t, x, y, a, b)
                u1 = np.where(here, v1, u1)
                u2 = np.where(here, v2, u2)
        return u1, u2


class CellularFlow(object):
    """Cellular flow with tiling parameter lambda = 2^-ell0.

    Parameters
    ----------
    field : TracerField
        Initial datum; fixes the grid
    ell0 : int
        Tiling exponent, ell0 >= 1
    stage_blocks : list of Block
        One block per stage, used in every tile unless overridden
    schedule : Schedule
        Defaults to unit stage durations
    sigma : SigmaSequence
        Validated against the depth gains of the stage blocks
    tile_blocks : dict
        ``{(n, (kx, ky)): Block}`` replaces the stage-n block on one tile of level ell0 * n
    """

    def __init__(self, field, ell0, stage_blocks, schedule=None, sigma=None, tile_blocks=None):
        if int(ell0) != ell0 or ell0 < 1:
            raise ValueError("Tiling exponent ell0 must be a positive integer")
        self.ell0 = int(ell0)
        self.lam = 2.0 ** -self.ell0
        self.stage_blocks = list(stage_blocks)
        self.stages = len(self.stage_blocks)
        self.grid = field.grid
        self.tile_blocks = dict(tile_blocks or {})

        gains = [block.depth_gain(self.ell0) for block in self.stage_blocks]
        self.sigma = (sigma or SigmaSequence()).resolve(gains)
        for (n, tile), block in self.tile_blocks.items():
            if not 0 <= n < self.stages:
                raise ValueError("Tile override for stage %d outside the run" % n)
            side = 2 ** (self.ell0 * n)
            if not (0 <= tile[0] < side and 0 <= tile[1] < side):
                raise ValueError("Tile override index %s out of range at stage %d" % (tile, n))
            if block.depth_gain(self.ell0) != gains[n]:
                raise ValueError("Tile override at stage %d changes the depth gain" % n)

        for n in range(self.stages):
            for block in self._blocks_of(n):
                if self.block_level(n) + block.q > self.grid.m:
                    raise ResolutionError(
                        "Stage %d needs a grid of at least 2^%d cells per side, got 2^%d"
                        % (n, self.block_level(n) + block.q, self.grid.m))

        self.schedule = schedule or Schedule.uniform(self.stages)
        if self.schedule.stages < self.stages:
            raise ValueError("Schedule covers %d stages, flow has %d"
                             % (self.schedule.stages, self.stages))
        self.state = field
        self.stage = 0
        self.cumulative = identity_map(self.grid.m)

    def _blocks_of(self, n):
        return [self.stage_blocks[n]] + [b for (k, _), b in self.tile_blocks.items() if k == n]

    def tile_level(self, n):
        return self.ell0 * n

    def block_level(self, n):
        """Dyadic level at which the stage-n block acts"""
        return self.ell0 * (n + self.sigma[n])

    def stage_block(self, n, tile=None):
        """Block u_{Q,n} on the unit cell: the stage block subdivided by ell0 * sigma(n)"""
        block = self.tile_blocks.get((n, tile), self.stage_blocks[n]) if tile is not None \
            else self.stage_blocks[n]
        return block.subdivide(self.ell0 * self.sigma[n])

    def stage_permutation(self, n):
        m = self.grid.m
        dest = np.array(tiled_permutation(self.stage_block(n), self.tile_level(n), m))
        if any(k == n for k, _ in self.tile_blocks):
            tiling = Tiling(self.tile_level(n))
            cells = np.arange(self.grid.cell_count).reshape(self.grid.n, self.grid.n)
            for (k, tile), _ in self.tile_blocks.items():
                if k != n:
                    continue
                override = tiled_permutation(self.stage_block(n, tile), self.tile_level(n), m)
                idx = cells[tiling.cell_slices(tile, self.grid)].ravel()
                dest[idx] = override[idx]
        return dest

    def stage_velocity(self, n):
        """Unit-time sampler of stage n; raises MissingVelocityError if a block has none"""
        default = self.stage_block(n).velocity
        overrides = {}
        for (k, tile), _ in self.tile_blocks.items():
            if k == n:
                overrides[tile] = self.stage_block(n, tile).velocity
        if default is None or any(v is None for v in overrides.values()):
            raise MissingVelocityError("Stage %d block carries no velocity field" % n)
        return StageVelocity(self.tile_level(n), default, overrides)

    def predicted_level(self, k):
        """Level at which snapshot k (after k stages) is mixed when the datum suits the
        blocks; None for the datum itself or after approximate blocks"""
        if k == 0:
            return None
        if any(b.approximate for n in range(k) for b in self._blocks_of(n)):
            return None
        return self.ell0 * (k + self.sigma[k])


@dataclasses.dataclass(frozen=True)
class Snapshot:
    n: int
    t: float
    field: object
    measurements: dict


def compose_stage(flow, n):
    """Run stage n of the permutation backend and return the new state"""
    if n != flow.stage:
        raise ValueError("Stage %d requested, stage %d is next" % (n, flow.stage))
    if n >= flow.stages:
        raise ValueError("Flow has only %d stages" % flow.stages)
    dest = flow.stage_permutation(n)
    values = np.empty(flow.grid.cell_count, dtype=flow.state.values.dtype)
    values[dest] = flow.state.values.ravel()
    flow.state = flow.state.with_values(values.reshape(flow.grid.n, flow.grid.n))
    flow.cumulative = compose_maps(flow.cumulative, dest)
    flow.stage += 1
    return flow.state


def measure_field(field, measure=("G", "H1", "LS"), params=None, padding=constants.H1_PADDING):
    """Snapshot measurements: mixed level always, plus the requested mixing scales"""
    params = params or MixParams()
    result = {"mixed_level": mixed_level(field)}
    if "G" in measure:
        result["G"] = geometric_mixing_scale(field, params)
    if "H1" in measure:
        result["Hminus1"] = functional_mixing_scale(field, padding)
    if "LS" in measure and field.binary:
        result["LS"] = characteristic_length_scale(indicator(field, 1), None, params)
        level = max(result["mixed_level"], 0)
        if level <= field.grid.m - 2:
            result["alpha"] = unmixedness_certificate(field, level, params)["measured_alpha"]
    return result


def run_flow(flow, n_stages=None, measure=("G", "H1", "LS"), params=None,
             padding=constants.H1_PADDING, backend="permutation",
             substeps=constants.SUBSTEPS, verbose=False):
    """Execute stages 0 .. n_stages - 1 and record a snapshot at every T_n.

    Parameters
    ----------
    backend : str
        ``permutation`` (exact cell transport) or ``semi_lagrangian`` (continuous fields,
        needs stage velocities)

    Returns
    -------
    snapshots : list of Snapshot
    """
    if flow.stage != 0:
        raise ValueError("run_flow starts from stage 0")
    if n_stages is None:
        n_stages = flow.stages
    if not 0 <= n_stages <= flow.stages:
        raise ValueError("n_stages must lie in 0 .. %d" % flow.stages)
    if backend not in ("permutation", "semi_lagrangian"):
        raise ValueError("Unknown transport backend")

    snapshots = [Snapshot(0, flow.schedule.times[0], flow.state,
                          measure_field(flow.state, measure, params, padding))]
    for n in range(n_stages):
        if backend == "permutation":
            compose_stage(flow, n)
        else:
            flow.state = advect_semi_lagrangian(flow, n, substeps)
            flow.stage += 1
        measurements = measure_field(flow.state, measure, params, padding)
        measurements["predicted_level"] = flow.predicted_level(n + 1)
        snapshots.append(Snapshot(n + 1, flow.schedule.times[n + 1], flow.state, measurements))
        if verbose:
            print("Stage", n + 1, "of", n_stages, "t =", flow.schedule.times[n + 1],
                  "mixed level", measurements["mixed_level"])
    return snapshots


def global_velocity(flow, t, x, y):
    """u(t, x) = lambda^n / (T_{n+1} - T_n) u_{Q,n}((t - T_n) / (T_{n+1} - T_n), (x - r_Q) / lambda^n)
    on the tile Q of level ell0 * n containing x; zero outside Q and on tile edges"""
    n = flow.schedule.stage_at(t)
    if n >= flow.stages:
        raise ValueError("t = %g lies beyond the last stage" % t)
    tau = flow.schedule.tau(n)
    u1, u2 = flow.stage_velocity(n)((t - flow.schedule.times[n]) / tau, x, y)
    return u1 / tau, u2 / tau


def sample_velocity(flow, t, m=None):
    """global_velocity at the cell centers of a 2^m grid, shape (2, 2^m, 2^m)"""
    grid = flow.grid if m is None else GridSpec(m)
    X, Y = grid.mesh()
    return np.array(global_velocity(flow, t, X, Y))


def advect_semi_lagrangian(flow, n, substeps=constants.SUBSTEPS, field=None, reverse=False,
                           verbose=False):
    """Advect a continuous field over stage n by backward characteristics.

    Departure points come from RK4 on the stage velocity with ``substeps`` steps, values
    from bilinear sampling; a uniform shift restores the mean. ``reverse`` undoes the
    stage (traces forward in time)."""
    field = flow.state if field is None else field
    if field.binary:
        raise ValueError("Semi-Lagrangian transport needs a continuous field; lift it first")
    sampler = flow.stage_velocity(n)
    grid = field.grid
    X, Y = grid.mesh()
    if reverse:
        dx, dy = rk4_trajectories(sampler, X, Y, 0.0, 1.0, substeps)
    else:
        dx, dy = rk4_trajectories(sampler, X, Y, 1.0, 0.0, substeps)

    coords = np.array([(dx + 0.5) * grid.n - 0.5, (dy + 0.5) * grid.n - 0.5])
    values = map_coordinates(field.values, coords, order=1, mode="nearest")
    values = np.where(inside_q(dx, dy), values, 0.0)
    values += np.mean(field.values) - np.mean(values)
    if verbose:
        print("Stage", n, "advected with", substeps, "substeps, L2 change",
              np.sqrt(np.mean(values ** 2)) - np.sqrt(np.mean(field.values ** 2)))
    return field.with_values(values)
