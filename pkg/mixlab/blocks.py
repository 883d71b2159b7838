"""Unit-cell building blocks: an exact cell permutation (tracer transport) paired with an
optional analytic velocity sampler (Sobolev budgets)."""

from __future__ import print_function, division
import numpy as np
from scipy.special import comb
import mixlab.constants as constants
from mixlab.diagnostics import check_order, lp_norm, sobolev_norm
from mixlab.grid_field import GridSpec
from mixlab.helpers import ManifestError, MissingVelocityError, ResolutionError
from mixlab.velocity import Concatenated, Swirl, Tiled, ZeroVelocity, rk4_trajectories


class Block(object):
    """Building-block mixer.

    Parameters
    ----------
    kind : str
        ``interleave``, ``baker``, ``deep`` or ``swirl``
    q : int
        Native resolution: the permutation is defined on a 2^q x 2^q reference grid and
        acts on finer grids by moving sub-squares as a whole.
    depth : int
        Dyadic levels the block mixes its canonical datum per application.
    mapper : callable
        ``mapper(m)`` returns the destination index of every cell of a 2^m grid (m >= q),
        cells flattened as ``ix * 2^m + iy``.
    velocity : VelocityField or None
    approximate : bool
        The permutation only approximates the flow of ``velocity``.
    """

    def __init__(self, kind, q, depth, mapper, velocity=None, approximate=False, label=None):
        self.kind = kind
        self.q = int(q)
        self.depth = int(depth)
        self.velocity = velocity
        self.approximate = approximate
        self.label = label or kind
        self._mapper = mapper
        self._cache = {}

    def permutation(self, m):
        if m < self.q:
            raise ResolutionError(
                "Grid resolution 2^%d is below the native resolution 2^%d of block %s"
                % (m, self.q, self.label))
        if m not in self._cache:
            dest = np.asarray(self._mapper(m), dtype=np.int64)
            dest.flags.writeable = False
            self._cache[m] = dest
        return self._cache[m]

    def depth_gain(self, ell0=1):
        """Increment of the un-mixedness index sigma contributed in a flow with
        tiling parameter 2^-ell0. Approximate blocks predict no mixing and leave sigma alone."""
        if self.approximate:
            return 0
        if self.depth % ell0 != 0 or self.depth < ell0:
            raise ValueError(
                "Block %s mixes %d levels, not a positive multiple of the %d levels of one stage"
                % (self.label, self.depth, ell0))
        return self.depth // ell0 - 1

    def with_velocity(self, velocity, label=None):
        """Same permutation, different velocity sampler"""
        return Block(self.kind, self.q, self.depth, self._mapper, velocity,
                     self.approximate, label or self.label)

    def subdivide(self, levels):
        """Copy of the block acting independently inside every tile of T_{2^-levels}"""
        if levels == 0:
            return self
        velocity = Tiled(self.velocity, levels) if self.velocity is not None else None
        return Block(self.kind, self.q + levels, self.depth,
                     lambda m: tiled_permutation(self, levels, m), velocity,
                     self.approximate, "%s/%d" % (self.label, levels))

    def __repr__(self):
        return "Block(%s, q=%d, depth=%d)" % (self.label, self.q, self.depth)


def identity_map(m):
    return np.arange(4 ** m, dtype=np.int64)


def refine_map(native, q, m):
    """Act with a native 2^q permutation on a 2^m grid by moving sub-squares"""
    n, nq = 2 ** m, 2 ** q
    r = n // nq
    ix, iy = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    cell = (ix // r) * nq + (iy // r)
    target = native[cell]
    tx = (target // nq) * r + ix % r
    ty = (target % nq) * r + iy % r
    return (tx * n + ty).ravel()


def tiled_permutation(block, level, m):
    """Apply ``block`` inside every tile of level ``level`` of a 2^m grid"""
    local_m = m - level
    if local_m < 0:
        raise ResolutionError("Tiling level exceeds grid resolution")
    local = block.permutation(local_m)
    n, c = 2 ** m, 2 ** local_m
    ix, iy = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    target = local[(ix % c) * c + (iy % c)]
    tx = (ix // c) * c + target // c
    ty = (iy // c) * c + target % c
    return (tx * n + ty).ravel()


def compose_maps(first, second):
    """Destination map of ``second`` after ``first``"""
    return second[first]


def identity_block():
    return Block("identity", 0, 1, identity_map, ZeroVelocity(), label="identity")


def _interleave_native():
    columns = np.array([0, 2, 1, 3])
    nq = 4
    ix, iy = np.meshgrid(np.arange(nq), np.arange(nq), indexing="ij")
    return (columns[ix] * nq + iy).ravel()


def canonical_interleave_block():
    """Middle-column swap on 4 x 4 sub-squares: columns (0, 1, 2, 3) -> (0, 2, 1, 3).

    Left/right halves become four vertical stripes (+, -, +, -): mixed on every
    quadrant, un-mixed at scale 1/4."""
    native = _interleave_native()
    q = constants.INTERLEAVE_Q
    return Block("interleave", q, 1, lambda m: refine_map(native, q, m), label="interleave")


def _baker_map(m):
    # (x, y) -> (2x mod 1, (y + floor(2x)) / 2) on binary digits: x loses its leading
    # digit, which becomes the leading digit of y; the trailing digit of y wraps into x.
    n = 2 ** m
    ix, iy = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    x1 = ix >> (m - 1)
    tx = ((ix << 1) & (n - 1)) | (iy & 1)
    ty = (x1 << (m - 1)) | (iy >> 1)
    return (tx * n + ty).ravel()


def baker_block():
    """Discrete baker's map, exact at every dyadic resolution m >= 1. No velocity is
    attached: cost queries raise MissingVelocityError."""
    return Block("baker", constants.BAKER_Q, 1, _baker_map, label="baker")


def deep_block(d, q=None):
    """Canonical interleave applied recursively d times: stage j acts inside every tile
    of T_{2^-j}, j = 0 .. d-1. Mixes d levels."""
    if int(d) != d or d < 1:
        raise ValueError("deep_block needs d >= 1")
    d = int(d)
    if q is None:
        q = d + 1
    if q < d + 1:
        raise ResolutionError("deep_block(%d) needs native resolution q >= %d" % (d, d + 1))
    base = canonical_interleave_block()

    def mapper(m):
        dest = identity_map(m)
        for j in range(d):
            dest = compose_maps(dest, tiled_permutation(base, j, m))
        return dest

    native = mapper(q)
    return Block("deep", q, d, lambda m: refine_map(native, q, m), label="deep(%d)" % d)


def _snapped_flow_map(velocity, q, steps):
    grid = GridSpec(q)
    n = grid.n
    X, Y = grid.mesh()
    ex, ey = rk4_trajectories(velocity, X.ravel(), Y.ravel(), 0.0, 1.0, steps)
    snapped_x = np.clip(np.floor((ex + 0.5) * n), 0, n - 1).astype(np.int64)
    snapped_y = np.clip(np.floor((ey + 0.5) * n), 0, n - 1).astype(np.int64)
    centers = grid.centers()

    dest = np.full(n * n, -1, dtype=np.int64)
    claimed = np.zeros(n * n, dtype=bool)
    cx = np.repeat(centers, n)  # cell centers in flat order ix * n + iy
    cy = np.tile(centers, n)
    # Row-major scan: rows from the bottom, left to right within a row
    for iy in range(n):
        for ix in range(n):
            i = ix * n + iy
            target = snapped_x[i] * n + snapped_y[i]
            if claimed[target]:
                free = np.flatnonzero(~claimed)
                dist = (cx[free] - ex[i]) ** 2 + (cy[free] - ey[i]) ** 2
                target = free[np.argmin(dist)]
            claimed[target] = True
            dest[i] = target
    return dest


def swirl_block(amplitude=constants.SWIRL_AMPLITUDE, q=constants.SWIRL_Q,
                steps=constants.SWIRL_RK4_STEPS):
    """Analytic vortex from psi = A sin^2(pi(x+1/2)) sin^2(pi(y+1/2)), constant in time.

    The permutation is the grid-snapped time-1 map of cell-center trajectories (RK4);
    collisions go to the nearest unclaimed cell. Flagged ``approximate``."""
    velocity = Swirl(amplitude)
    native = _snapped_flow_map(velocity, q, steps)
    return Block("swirl", q, 0, lambda m: refine_map(native, q, m), velocity,
                 approximate=True, label="swirl")


def apply_block(block, field):
    """Time-1 transport of a field by the block's permutation at the field's resolution"""
    dest = block.permutation(field.grid.m)
    new = np.empty(field.grid.cell_count, dtype=field.values.dtype)
    new[dest] = field.values.ravel()
    return field.with_values(new.reshape(field.grid.n, field.grid.n))


def _frobenius_sq(velocity, t, x, y, s):
    """Squared Frobenius norm of the s-th derivative tensor; each mixed partial with a
    x-derivatives appears comb(s, a) times among the ordered index tuples"""
    total = 0.0
    for a in range(s + 1):
        d1, d2 = velocity.derivative(t, x, y, a, s - a)
        total = total + comb(s, a, exact=True) * (d1 ** 2 + d2 ** 2)
    return total


def velocity_norm(velocity, t, s, p, level=constants.QUAD_LEVEL):
    """||grad^s u(t)||_{L^p(Q)}: midpoint quadrature of analytic derivatives for integer s,
    the spectral multiplier on sampled values for fractional s"""
    grid = GridSpec(level)
    X, Y = grid.mesh()
    if check_order(s, p):
        return lp_norm(np.sqrt(_frobenius_sq(velocity, t, X, Y, int(s))), p, grid.h)
    return sobolev_norm(np.array(velocity(t, X, Y)), s, p)


def _nodes(count):
    return (np.arange(count) + 0.5) / count


def velocity_cost(velocity, s=1, p=2, level=constants.QUAD_LEVEL,
                  time_nodes=constants.QUAD_TIME_NODES):
    """int_0^1 ||grad^s u(t)||_{L^p(Q)} dt. Concatenations are integrated piece by piece."""
    check_order(s, p)
    if isinstance(velocity, Concatenated):
        total = 0.0
        for start, w in zip(velocity.starts, velocity.weights):
            local = velocity_cost_on(velocity, start, w, s, p, level, time_nodes)
            total += w * local
        return float(total)
    if velocity.time_constant:
        return velocity_norm(velocity, 0.5, s, p, level)
    return float(np.mean([velocity_norm(velocity, t, s, p, level) for t in _nodes(time_nodes)]))


def velocity_cost_on(velocity, start, width, s, p, level, time_nodes):
    """Mean of the norm over the sub-interval [start, start + width]"""
    j = velocity.piece(start + width / 2)
    count = 1 if velocity.samplers[j].time_constant else time_nodes
    times = start + width * _nodes(count)
    return float(np.mean([velocity_norm(velocity, t, s, p, level) for t in times]))


def velocity_sup_norm(velocity, s=1, p=2, level=constants.QUAD_LEVEL,
                      time_nodes=constants.QUAD_TIME_NODES):
    """sup_t ||grad^s u(t)||_{L^p(Q)} over the time nodes"""
    check_order(s, p)
    times = [0.5] if velocity.time_constant else _nodes(time_nodes)
    return float(max(velocity_norm(velocity, t, s, p, level) for t in times))


def _require_velocity(block):
    if block.velocity is None:
        raise MissingVelocityError("Block %s carries no velocity field" % block.label)


def block_cost(block, s=1, p=2, level=constants.QUAD_LEVEL, time_nodes=constants.QUAD_TIME_NODES):
    """Transport cost int_0^1 ||grad^s u(t)||_{L^p(Q)} dt of a block"""
    _require_velocity(block)
    return velocity_cost(block.velocity, s, p, level, time_nodes)


def block_sup_norm(block, s=1, p=2, level=constants.QUAD_LEVEL, time_nodes=constants.QUAD_TIME_NODES):
    _require_velocity(block)
    return velocity_sup_norm(block.velocity, s, p, level, time_nodes)


def block_from_descriptor(descriptor):
    """Build a block from its config form, e.g. ``{"kind": "deep", "d": 2}`` or
    ``{"kind": "swirl", "amplitude": 0.08}``. A permutation block may carry a
    ``"velocity": {"kind": "swirl", ...}`` entry (hybrid block)."""
    if not isinstance(descriptor, dict) or "kind" not in descriptor:
        raise ManifestError("Block descriptor must be an object with a kind")
    kind = descriptor["kind"]
    allowed = {
        "interleave": {"kind", "velocity"},
        "baker": {"kind", "q"},
        "deep": {"kind", "d", "q", "velocity"},
        "swirl": {"kind", "amplitude", "q"},
    }
    if kind not in constants.block_kinds:
        raise ManifestError("Unknown block kind %r" % kind)
    unknown = set(descriptor) - allowed[kind]
    if unknown:
        raise ManifestError("Unknown keys in %s block descriptor: %s" % (kind, sorted(unknown)))

    if kind == "interleave":
        block = canonical_interleave_block()
    elif kind == "baker":
        block = baker_block()
        if descriptor.get("q", block.q) < 1:
            raise ManifestError("baker block needs q >= 1")
    elif kind == "deep":
        if "d" not in descriptor:
            raise ManifestError("deep block needs d")
        block = deep_block(descriptor["d"], descriptor.get("q"))
    else:
        return swirl_block(descriptor.get("amplitude", constants.SWIRL_AMPLITUDE),
                           descriptor.get("q", constants.SWIRL_Q))

    if "velocity" in descriptor:
        sub = descriptor["velocity"]
        if not isinstance(sub, dict) or sub.get("kind") != "swirl" or set(sub) - {"kind", "amplitude"}:
            raise ManifestError("Block velocity must be {\"kind\": \"swirl\", \"amplitude\": A}")
        velocity = Swirl(sub.get("amplitude", constants.SWIRL_AMPLITUDE))
        block = block.with_velocity(velocity, "%s+swirl" % block.label)
    return block
