from __future__ import division, print_function
import hashlib
import json
import numpy as np
import mixlab.constants as constants


class ManifestError(ValueError):
    """Run manifest is malformed or internally inconsistent"""


class ResolutionError(ValueError):
    """Grid too coarse for the requested tiling level, block or stage count"""


class MissingVelocityError(ValueError):
    """A cost, budget or advection query hit a block without velocity sampler"""


def radius_ladder(m):
    """Radii h * 2^(k/4) from the cell side h = 2^-m up to (and capped at) sqrt(2)"""
    h = 2.0 ** -m
    radii = []
    k = 0
    while True:
        # every fourth rung is an exact power of two
        r = h * 2.0 ** (k // 4) * constants.LADDER_FACTOR ** (k % 4)
        if r >= constants.LADDER_TOP:
            radii.append(constants.LADDER_TOP)
            break
        radii.append(r)
        k += 1
    return np.array(radii, dtype=np.float64)


def doubled_radius_sq(r, m):
    """Squared disk radius in doubled cell units. Cell (a + di, b + dj) lies in the disk
    around node (a, b) iff (2 di + 1)^2 + (2 dj + 1)^2 <= doubled_radius_sq"""
    return (2.0 * r * 2 ** m) ** 2


def disk_spans(r2):
    """Row offsets dj and inclusive column offsets [lo, hi] of a rasterized disk.

    Membership is decided by the same float comparison a brute-force mask uses, on exact
    integers, so both paths select identical cells."""
    rows = []
    dj = 0
    while 1 + (2 * dj + 1) ** 2 <= r2:
        rows.append(dj)
        dj += 1
    half = np.zeros(len(rows), dtype=np.int64)
    for idx, dj in enumerate(rows):
        t = int(np.sqrt(max(r2 - (2 * dj + 1) ** 2, 0.0)) / 2) + 1
        while t >= 0 and (2 * t + 1) ** 2 + (2 * dj + 1) ** 2 > r2:
            t -= 1
        half[idx] = t
    # Symmetric about the node: offsets dj and -dj-1 carry the same half width
    offsets = np.array([-dj - 1 for dj in rows[::-1]] + rows, dtype=np.int64)
    widths = np.concatenate((half[::-1], half))
    return offsets, -widths - 1, widths


def disk_cell_count(r2):
    offsets, lo, hi = disk_spans(r2)
    return int(np.sum(hi - lo + 1))


def manifest_hash(manifest_dict):
    """SHA-256 of the canonical (sorted keys, compact) JSON of a manifest"""
    text = json.dumps(manifest_dict, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
