"""Dyadic grids over the unit square Q = (-1/2, 1/2)^2, tracer fields, tilings and tile
statistics. Fields are piecewise constant on grid cells; outside Q they are zero.

Storage convention: ``values[ix, iy]`` with ``ix`` the column counted from the left
(x = -1/2) and ``iy`` the row counted from the bottom (y = -1/2). Flattening in C-order
therefore walks the grid column by column.
"""

from __future__ import print_function, division
import numpy as np
import mixlab.constants as constants
from mixlab.helpers import ResolutionError

FILE_MAGIC = "mixlab-field"
FILE_VERSION = "v1"


class GridSpec(object):
    """Grid of 2^m x 2^m square cells of side h = 2^-m covering Q"""

    def __init__(self, m):
        if int(m) != m or m < 1:
            raise ValueError("Grid exponent m must be a positive integer")
        self.m = int(m)
        self.n = 2 ** self.m
        self.h = 2.0 ** -self.m

    @property
    def cell_count(self):
        return 4 ** self.m

    def centers(self):
        """1-d array of cell-center coordinates along either axis"""
        return -0.5 + (np.arange(self.n) + 0.5) * self.h

    def mesh(self):
        """Cell-center coordinate arrays X, Y indexed [ix, iy]"""
        c = self.centers()
        return np.meshgrid(c, c, indexing="ij")

    def __eq__(self, other):
        return isinstance(other, GridSpec) and other.m == self.m

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(("GridSpec", self.m))

    def __repr__(self):
        return "GridSpec(m=%d)" % self.m


class TracerField(object):
    """Immutable scalar on a GridSpec, binary (+1/-1) or continuous"""

    def __init__(self, grid, values, mode="binary", mean_zero=True):
        if mode not in ("binary", "continuous"):
            raise ValueError("mode must be binary or continuous")
        values = np.asarray(values)
        if values.shape == (grid.cell_count,):
            values = values.reshape(grid.n, grid.n)
        if values.shape != (grid.n, grid.n):
            raise ValueError("values must hold one entry per grid cell")

        if mode == "binary":
            if not np.all(np.abs(values) == 1):
                raise ValueError("Binary fields take only the values +1 and -1")
            values = np.array(values, dtype=np.int8)
            if mean_zero and np.sum(values, dtype=np.int64) != 0:
                raise ValueError("Binary field must hold equal counts of +1 and -1")
        else:
            values = np.array(values, dtype=np.float64)
            if mean_zero and abs(np.mean(values)) > constants.MEAN_TOL:
                raise ValueError("Continuous field must have zero mean")
        values.flags.writeable = False
        self.grid = grid
        self.values = values
        self.mode = mode

    @property
    def binary(self):
        return self.mode == "binary"

    def sup_norm(self):
        return float(np.max(np.abs(self.values)))

    def with_values(self, values):
        """New field on the same grid and mode (used by transports)"""
        return TracerField(self.grid, values, self.mode, mean_zero=False)

    def __repr__(self):
        return "TracerField(m=%d, mode=%s)" % (self.grid.m, self.mode)


class Tiling(object):
    """The 4^ell open squares of side lambda = 2^-ell tiling Q"""

    def __init__(self, ell):
        if int(ell) != ell or ell < 0:
            raise ValueError("Tiling level must be a non-negative integer")
        self.ell = int(ell)
        self.side_count = 2 ** self.ell
        self.lam = 2.0 ** -self.ell

    def tiles(self):
        """Tile indices (kx, ky), kx from the left, ky from the bottom"""
        return [(kx, ky) for kx in range(self.side_count) for ky in range(self.side_count)]

    def compatible(self, grid):
        return self.ell <= grid.m

    def cell_slices(self, tile, grid):
        """Index slices selecting the grid cells of one tile"""
        if not self.compatible(grid):
            raise ResolutionError("Tiling level exceeds grid resolution")
        kx, ky = tile
        if not (0 <= kx < self.side_count and 0 <= ky < self.side_count):
            raise ValueError("Tile index out of range")
        c = 2 ** (grid.m - self.ell)
        return slice(kx * c, (kx + 1) * c), slice(ky * c, (ky + 1) * c)

    def __repr__(self):
        return "Tiling(ell=%d)" % self.ell


def _check_level(level, grid):
    if int(level) != level or level < 0:
        raise ValueError("Tiling level must be a non-negative integer")
    if level > grid.m:
        raise ResolutionError("Tiling level exceeds grid resolution")


def init_pattern(grid, pattern, level=None, path=None, seed=None):
    """Canonical binary mean-zero initial data.

    Parameters
    ----------
    grid : GridSpec
    pattern : str
        ``left_right_halves`` (+1 for x < 0), ``top_bottom_halves`` (+1 for y > 0),
        ``checkerboard`` (squares of side 2^-level), ``stripes`` (vertical stripes of width
        2^-level, +1 first), ``random`` (balanced random signs, reproducible by ``seed``) or
        ``from_file`` (read from ``path``).
    level : int
        Pattern level for ``checkerboard`` and ``stripes``, 1 <= level <= m.

    Returns
    -------
    field : TracerField
    """
    if pattern not in constants.patterns:
        raise ValueError("Unknown pattern")

    if pattern == "from_file":
        if path is None:
            raise ValueError("from_file needs a path")
        field = load_field(path)
        if field.grid != grid:
            raise ValueError("File grid does not match the requested grid")
        return field

    n = grid.n
    if pattern in ("checkerboard", "stripes"):
        if level is None:
            raise ValueError("Pattern level must be specified")
        if level < 1:
            raise ValueError("Pattern level must be at least 1")
        _check_level(level, grid)

    ix, iy = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    if pattern == "left_right_halves":
        values = np.where(ix < n // 2, 1, -1)
    elif pattern == "top_bottom_halves":
        values = np.where(iy >= n // 2, 1, -1)
    elif pattern == "checkerboard":
        c = 2 ** (grid.m - level)
        values = np.where(((ix // c) + (iy // c)) % 2 == 0, 1, -1)
    elif pattern == "stripes":
        c = 2 ** (grid.m - level)
        values = np.where((ix // c) % 2 == 0, 1, -1)
    elif pattern == "random":
        rng = np.random.default_rng(seed)
        flat = np.ones(grid.cell_count, dtype=np.int8)
        flat[grid.cell_count // 2:] = -1
        values = rng.permutation(flat).reshape(n, n)
    return TracerField(grid, values, "binary")


def constant_field(grid, value):
    """Continuous constant field (not mean zero unless value is 0)"""
    return TracerField(grid, np.full((grid.n, grid.n), float(value)), "continuous",
                       mean_zero=(value == 0))


def tile_sums(field, level):
    """Sums of cell values over every tile of level ``level`` (exact integers in binary mode)"""
    _check_level(level, field.grid)
    k = 2 ** level
    c = 2 ** (field.grid.m - level)
    dtype = np.int64 if field.binary else np.float64
    return field.values.astype(dtype).reshape(k, c, k, c).sum(axis=(1, 3))


def tile_averages(field, level):
    """Averages over every tile of level ``level``, indexed [kx, ky]"""
    c = 4 ** (field.grid.m - level)
    # c is a power of two: the division is exact and zero sums give exactly zero
    return tile_sums(field, level) / float(c)


def tile_average(field, tiling, tile_index):
    """Exact mean of the cell values in one tile"""
    if not tiling.compatible(field.grid):
        raise ResolutionError("Tiling is incompatible with the field grid")
    sx, sy = tiling.cell_slices(tuple(tile_index), field.grid)
    block = field.values[sx, sy]
    if field.binary:
        return int(np.sum(block, dtype=np.int64)) / float(block.size)
    return float(np.mean(block))


def is_mixed_at_scale(field, k_level):
    """True iff every tile of level ``k_level`` has zero average (exact in binary mode)"""
    sums = tile_sums(field, k_level)
    if field.binary:
        return bool(np.all(sums == 0))
    return bool(np.all(np.abs(tile_averages(field, k_level)) <= constants.MEAN_TOL))


def mixed_level(field):
    """Largest level at which the field is mixed, -1 if not even globally mean zero"""
    level = -1
    for k in range(field.grid.m + 1):
        if not is_mixed_at_scale(field, k):
            break
        level = k
    return level


def refine(field, new_m):
    """Split each cell into 4^(new_m - m) equal cells with the same value"""
    if new_m < field.grid.m:
        raise ValueError("Refinement cannot lower the resolution")
    r = 2 ** (new_m - field.grid.m)
    values = np.repeat(np.repeat(field.values, r, axis=0), r, axis=1)
    return TracerField(GridSpec(new_m), values, field.mode, mean_zero=False)


def lift(field):
    """Continuous-mode copy of a field"""
    return TracerField(field.grid, field.values.astype(np.float64), "continuous",
                       mean_zero=False)


def indicator(field, sign=1):
    """0/1 array of the cells where a binary field equals ``sign``"""
    if not field.binary:
        raise ValueError("Indicator sets need a binary field")
    return (field.values == sign).astype(np.int8)


def disk_indicator(grid, radius, center=(0.0, 0.0)):
    """0/1 array of the cells whose centers lie within ``radius`` of ``center``"""
    if radius < 0:
        raise ValueError("Disk radius must be non-negative")
    X, Y = grid.mesh()
    inside = (X - center[0]) ** 2 + (Y - center[1]) ** 2 <= radius ** 2
    return inside.astype(np.int8)


def save_field(field, path, comments=()):
    """Write the plain-text field format, row 0 = top (y = +1/2)"""
    n = field.grid.n
    with open(path, "w") as f:
        f.write("%s %s m=%d mode=%s\n" % (FILE_MAGIC, FILE_VERSION, field.grid.m, field.mode))
        for line in comments:
            f.write("# %s\n" % line)
        for row in range(n):
            column = field.values[:, n - 1 - row]
            if field.binary:
                f.write(" ".join("%d" % v for v in column) + "\n")
            else:
                f.write(" ".join("%.17g" % v for v in column) + "\n")


def load_field(path, mode=None):
    """Read a field written by ``save_field``. ``mode`` overrides the header mode."""
    with open(path) as f:
        header = f.readline().split()
        if len(header) != 4 or header[0] != FILE_MAGIC or header[1] != FILE_VERSION:
            raise ValueError("Not a %s %s file" % (FILE_MAGIC, FILE_VERSION))
        try:
            m = int(header[2].split("=")[1])
            file_mode = header[3].split("=")[1]
        except (IndexError, ValueError):
            raise ValueError("Malformed field header")
        rows = [line.split() for line in f if line.strip() and not line.startswith("#")]
    grid = GridSpec(m)
    if len(rows) != grid.n or any(len(r) != grid.n for r in rows):
        raise ValueError("Field file must hold 2^m rows of 2^m values")
    table = np.array(rows, dtype=np.float64)
    values = table[::-1, :].T  # back to [ix, iy]
    mode = mode or file_mode
    if mode == "binary" and not np.all(np.abs(values) == 1):
        raise ValueError("Binary field file holds entries other than +1 and -1")
    return TracerField(grid, values, mode, mean_zero=(mode == "binary"))
