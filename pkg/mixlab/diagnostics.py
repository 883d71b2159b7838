from __future__ import print_function, division
import dataclasses
import numpy as np
from scipy.special import comb
import mixlab.constants as constants
from mixlab.disk_scan import (
    row_prefix_sums, first_unbalanced_center, first_unbalanced_center_bruteforce,
    first_filled_center, first_filled_center_bruteforce, pair_stretch
    )
from mixlab.grid_field import GridSpec, Tiling, indicator
from mixlab.helpers import (
    ResolutionError, radius_ladder, doubled_radius_sq, disk_spans, disk_cell_count
    )
from mixlab.spectral import hminus1_torus_sq, dipole_correction_sq, fractional_norm


@dataclasses.dataclass(frozen=True)
class MixParams:
    """Accuracy (kappa), gap (gamma_bar) and un-mixedness (alpha) constants"""
    kappa: float = constants.KAPPA
    gamma_bar: float = constants.GAMMA_BAR
    alpha: float = constants.ALPHA

    def __post_init__(self):
        for name in ("kappa", "gamma_bar", "alpha"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise ValueError("%s must lie in (0, 1)" % name)

    @property
    def omega(self):
        return float(np.sqrt((1 + self.gamma_bar) / 2))

    @property
    def fill_threshold(self):
        """Fraction of a ball a set must fill to count for the characteristic length scale"""
        return 1 - (1 - self.kappa) / 2 * self.gamma_bar


@dataclasses.dataclass(frozen=True)
class MixingScale:
    """Ladder radius with its bracket: ``lower`` is the largest radius tested and
    rejected (0 if none), ``center`` the node where the rejection happened"""
    value: float
    lower: float
    upper: float
    center: tuple = None

    def __float__(self):
        return float(self.value)


@dataclasses.dataclass(frozen=True)
class LusinProfile:
    fractions: tuple
    lipschitz: tuple
    cost: float
    p: float
    fitted_c: float
    bound: tuple


def _signed_values(field):
    if field.binary:
        if np.sum(field.values, dtype=np.int64) != 0:
            raise ValueError("Field must be mean zero")
        return field.values.astype(np.int64)
    if abs(np.mean(field.values)) > constants.MEAN_TOL:
        raise ValueError("Field must be mean zero")
    return np.asarray(field.values, dtype=np.float64)


def _scan_mixing_scale(field, params, bruteforce):
    params = params or MixParams()
    values = _signed_values(field)
    sup = field.sup_norm()
    if sup == 0:
        raise ValueError("Geometric mixing scale is undefined for the zero field")

    m = field.grid.m
    h = field.grid.h
    P = None if bruteforce else row_prefix_sums(values)
    lower = 0.0
    center = None
    radii = radius_ladder(m)
    for r in radii:
        r2 = doubled_radius_sq(r, m)
        offsets, lo, hi = disk_spans(r2)
        threshold = params.kappa * disk_cell_count(r2) * sup
        reach = int(np.ceil(r / h))
        if bruteforce:
            found, a, b = first_unbalanced_center_bruteforce(values, reach, r2, threshold)
        else:
            found, a, b = first_unbalanced_center(P, reach, offsets, lo, hi, threshold)
        if not found:
            return MixingScale(float(r), lower, float(r), center)
        lower = float(r)
        center = (-0.5 + a * h, -0.5 + b * h)
    return MixingScale(float(radii[-1]), lower, float(radii[-1]), center)


def geometric_mixing_scale(field, params=None):
    """Smallest ladder radius r such that every disk average of the field (exterior = 0)
    is below kappa * sup|field| in magnitude.

    Centers run over all grid nodes of Q dilated by r; disks are rasterized by cell
    centers and summed as row spans of row prefix sums.

    Returns
    -------
    scale : MixingScale
    """
    return _scan_mixing_scale(field, params, bruteforce=False)


def geometric_mixing_scale_bruteforce(field, params=None):
    """Same scan with every disk summed cell by cell"""
    return _scan_mixing_scale(field, params, bruteforce=True)


def functional_mixing_scale(field, padding=constants.H1_PADDING, dipole_correction=True):
    """Whole-plane H^-1 norm of a mean-zero field, from a spectral Poisson solve on the
    torus of side ``padding`` the field is zero-padded into"""
    if int(padding) != padding or padding < 2:
        raise ValueError("padding must be an integer of at least 2")
    padding = int(padding)
    values = np.asarray(_signed_values(field), dtype=np.float64)
    norm_sq = hminus1_torus_sq(values, padding)
    if dipole_correction:
        norm_sq += dipole_correction_sq(values, field.grid.h, padding)
    return float(np.sqrt(max(norm_sq, 0.0)))


def _region_nodes(n, m, region):
    if region is None:
        return 0, n, 0, n
    level, tile = region
    if level > m:
        raise ResolutionError("Region is not aligned with the grid")
    sx, sy = Tiling(level).cell_slices(tuple(tile), GridSpec(m))
    return sx.start, sx.stop, sy.start, sy.stop


def _check_set(J):
    J = np.asarray(J)
    if J.ndim != 2 or J.shape[0] != J.shape[1]:
        raise ValueError("Set indicator must be a square array")
    n = J.shape[0]
    m = int(round(np.log2(n)))
    if 2 ** m != n:
        raise ValueError("Set indicator side must be a power of two")
    if not np.all((J == 0) | (J == 1)):
        raise ValueError("Set indicator must hold 0 and 1 only")
    return J.astype(np.int64), n, m


def _scan_length_scale(J, region, params, bruteforce):
    params = params or MixParams()
    J, n, m = _check_set(J)
    e0x, e1x, e0y, e1y = _region_nodes(n, m, region)
    P = None if bruteforce else row_prefix_sums(J)
    fill = params.fill_threshold
    # Descending scan: rasterized fill fractions are not monotone in r, the first
    # qualifying radius from the top is the largest one
    for r in radius_ladder(m)[::-1]:
        R = r * n
        amin, amax = int(np.ceil(e0x + R)), int(np.floor(e1x - R))
        bmin, bmax = int(np.ceil(e0y + R)), int(np.floor(e1y - R))
        if amin > amax or bmin > bmax:
            continue
        r2 = doubled_radius_sq(r, m)
        threshold = fill * disk_cell_count(r2)
        if bruteforce:
            found, a, b = first_filled_center_bruteforce(J, amin, amax, bmin, bmax, r2, threshold)
        else:
            offsets, lo, hi = disk_spans(r2)
            found, a, b = first_filled_center(P, amin, amax, bmin, bmax, offsets, lo, hi, threshold)
        if found:
            return float(r)
    return 0.0


def characteristic_length_scale(J, region=None, params=None):
    """Largest ladder radius r of a disk inside the region that the set J fills to more
    than 1 - (1 - kappa) / 2 * gamma_bar; 0 if there is none.

    Parameters
    ----------
    J : array
        0/1 indicator indexed [ix, iy]
    region : tuple or None
        ``(level, (kx, ky))`` selects a tile, None the whole square
    """
    return _scan_length_scale(J, region, params, bruteforce=False)


def characteristic_length_scale_bruteforce(J, region=None, params=None):
    return _scan_length_scale(J, region, params, bruteforce=True)


def unmixedness_certificate(field, k_level, params=None):
    """Per-tile ratio max(LS(A_Q), LS(A_Q^c)) / tile side over the tiling of level k.

    Returns a dict with ``certified`` (min ratio >= alpha), ``measured_alpha`` (the min
    ratio), ``ratios`` indexed [kx, ky] and ``asymmetric`` (tiles whose two scales differ
    by more than a factor LS_ASYMMETRY)."""
    params = params or MixParams()
    if not field.binary:
        raise ValueError("Un-mixedness is certified on binary fields only")
    if k_level > field.grid.m:
        raise ResolutionError("Tiling level exceeds grid resolution")
    tiling = Tiling(k_level)
    plus = indicator(field, 1)
    minus = indicator(field, -1)
    ratios = np.zeros((tiling.side_count, tiling.side_count))
    asymmetric = []
    for tile in tiling.tiles():
        ls_plus = characteristic_length_scale(plus, (k_level, tile), params)
        ls_minus = characteristic_length_scale(minus, (k_level, tile), params)
        best, worst = max(ls_plus, ls_minus), min(ls_plus, ls_minus)
        ratios[tile] = best / tiling.lam
        if best > 0 and (worst == 0 or best / worst > constants.LS_ASYMMETRY):
            asymmetric.append(tile)
    measured = float(np.min(ratios))
    return {
        "certified": measured >= params.alpha,
        "measured_alpha": measured,
        "ratios": ratios,
        "asymmetric": asymmetric,
        }


def _tile_derivative(f, axis, cells, h):
    """First derivative along ``axis`` inside tiles of ``cells`` samples: 4th-order
    central stencil in the interior, 4th-order one-sided stencils at both tile edges"""
    g = np.moveaxis(f, axis, -1)
    shape = g.shape
    g = g.reshape(shape[:-1] + (shape[-1] // cells, cells))
    d = np.empty_like(g)
    d[..., 2:-2] = g[..., :-4] - 8 * g[..., 1:-3] + 8 * g[..., 3:-1] - g[..., 4:]
    d[..., 0] = -25 * g[..., 0] + 48 * g[..., 1] - 36 * g[..., 2] + 16 * g[..., 3] - 3 * g[..., 4]
    d[..., 1] = -3 * g[..., 0] - 10 * g[..., 1] + 18 * g[..., 2] - 6 * g[..., 3] + g[..., 4]
    d[..., -2] = 3 * g[..., -1] + 10 * g[..., -2] - 18 * g[..., -3] + 6 * g[..., -4] - g[..., -5]
    d[..., -1] = 25 * g[..., -1] - 48 * g[..., -2] + 36 * g[..., -3] - 16 * g[..., -4] + 3 * g[..., -5]
    d /= 12 * h
    return np.moveaxis(d.reshape(shape), -1, axis)


def check_order(s, p):
    if s < 1:
        raise ValueError("Derivative order s must be at least 1")
    if float(s).is_integer():
        if not p > 1:
            raise ValueError("Integrability exponent p must exceed 1")
        return True
    if p != 2:
        raise ValueError("Fractional s is supported for p = 2 only")
    return False


def lp_norm(values, p, h):
    """Discrete L^p(Q) norm of cell samples with cell area h^2; p = inf gives the max"""
    if np.isinf(p):
        return float(np.max(np.abs(values)))
    return float(np.sum(np.abs(values) ** p) * h * h) ** (1.0 / p)


def sobolev_norm(samples, s, p, tile_level=0):
    """||grad^s u||_{L^p(Q)} of a field sampled at the cell centers of Q.

    Parameters
    ----------
    samples : array
        Shape (n, n) for a scalar or (components, n, n), indexed [..., ix, iy]
    s : float
        Integer s uses finite differences inside every tile of level ``tile_level`` and
        the Frobenius norm of the derivative tensor; fractional s (p = 2 only) uses the
        multiplier |xi|^s on the even extension
    p : float
    tile_level : int
        Derivatives are not taken across edges of this tiling
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim == 2:
        samples = samples[None]
    n = samples.shape[-1]
    h = 1.0 / n
    if not check_order(s, p):
        if tile_level != 0:
            raise ValueError("Fractional norms are taken on the whole square")
        return fractional_norm(samples, s)

    s = int(s)
    cells = n // 2 ** tile_level
    if cells < constants.STENCIL_SAMPLES:
        raise ResolutionError("Tiles need at least %d samples per side" % constants.STENCIL_SAMPLES)
    total = np.zeros(samples.shape[1:])
    for a in range(s + 1):
        d = samples
        for _ in range(a):
            d = _tile_derivative(d, -2, cells, h)
        for _ in range(s - a):
            d = _tile_derivative(d, -1, cells, h)
        total += comb(s, a, exact=True) * np.sum(d ** 2, axis=0)
    return lp_norm(np.sqrt(total), p, h)


def _preimage_cells(dest):
    dest = np.asarray(dest)
    size = dest.size
    m = int(round(np.log(size) / np.log(4))) if size > 0 else -1
    if m < 1 or 4 ** m != size:
        raise ValueError("Flow map must assign a cell to every cell of a 2^m grid")
    if not np.array_equal(np.sort(dest), np.arange(size)):
        raise ValueError("Flow map must be a bijection of grid cells")
    n = 2 ** m
    inverse = np.empty(size, dtype=np.int64)
    inverse[dest] = np.arange(size)
    inverse = inverse.reshape(n, n)
    return (inverse // n).astype(np.float64), (inverse % n).astype(np.float64), m


def lusin_lipschitz_profile(dest, cost, p, fractions=constants.LUSIN_FRACTIONS, mask=None):
    """Restricted Lipschitz constants of the inverse of a cell map after greedily excluding
    the cells of largest local stretch.

    Parameters
    ----------
    dest : array
        Destination cell of every cell, flattened as ``ix * 2^m + iy``
    cost : float
        Measured int_0^1 ||grad u||_{L^p} dt of the flow that produced the map
    p : float
    fractions : sequence
        Excluded fractions of the cells, increasing
    mask : array or None
        0/1 array restricting cells and pairs

    Returns
    -------
    profile : LusinProfile
        ``bound`` holds exp(c * cost / eps^(1/p)) with c fitted through the origin
    """
    fractions = tuple(float(e) for e in fractions)
    if any(b <= a for a, b in zip(fractions, fractions[1:])) or fractions[0] < 0:
        raise ValueError("Excluded fractions must be increasing and non-negative")
    src_x, src_y, m = _preimage_cells(dest)
    n = 2 ** m
    keep = np.ones((n, n), dtype=np.int8) if mask is None else np.asarray(mask, dtype=np.int8)
    scales = 2 ** np.arange(m, dtype=np.int64)

    stat, _ = pair_stretch(src_x, src_y, keep, scales)
    candidates = np.flatnonzero(keep.ravel())
    order = candidates[np.argsort(-stat.ravel()[candidates], kind="stable")]

    lipschitz = []
    for eps in fractions:
        removed = int(np.floor(eps * len(candidates) + 0.5))
        kept = keep.ravel().copy()
        kept[order[:removed]] = 0
        _, L = pair_stretch(src_x, src_y, kept.reshape(n, n), scales)
        lipschitz.append(float(L))

    x = np.array([cost / e ** (1.0 / p) if e > 0 else 0.0 for e in fractions])
    y = np.log(np.maximum(lipschitz, 1.0))
    c = float(np.sum(x * y) / np.sum(x * x)) if np.sum(x * x) > 0 else 0.0
    return LusinProfile(fractions, tuple(lipschitz), float(cost), float(p), c,
                        tuple(float(v) for v in np.exp(c * x)))
