"""Compiled ball scans over rasterized disks and pair-stretch statistics.

A cell belongs to the disk around grid node (a, b) iff its center does. Nodes are indexed
like cells: node a sits at x = -1/2 + a * h. Fast kernels sum disks as per-row spans of
row prefix sums; the brute-force kernels test every cell of the grid explicitly."""

from __future__ import print_function, division
from numba import jit
import numpy as np


def row_prefix_sums(values):
    """P[i, iy] = sum of values[:i, iy]; exact for integer input"""
    n = values.shape[0]
    P = np.zeros((n + 1, n), dtype=values.dtype)
    P[1:, :] = np.cumsum(values, axis=0)
    return P


@jit(fastmath=True, nopython=True, cache=True)
def span_sum(P, a, b, offsets, lo, hi):
    """Sum of the field over the disk spans around node (a, b), exterior cells are 0"""
    n = P.shape[1]
    s = P[0, 0] * 0
    for k in range(offsets.shape[0]):
        row = b + offsets[k]
        if row < 0 or row >= n:
            continue
        i0 = max(a + lo[k], 0)
        i1 = min(a + hi[k], n - 1)
        if i0 <= i1:
            s += P[i1 + 1, row] - P[i0, row]
    return s


@jit(fastmath=True, nopython=True, cache=True)
def first_unbalanced_center(P, reach, offsets, lo, hi, threshold):
    """Scan nodes -reach .. n + reach in both directions; return (found, a, b) for the
    first disk whose |sum| reaches the threshold"""
    n = P.shape[1]
    for a in range(-reach, n + reach + 1):
        for b in range(-reach, n + reach + 1):
            s = span_sum(P, a, b, offsets, lo, hi)
            if abs(s) >= threshold:
                return 1, a, b
    return 0, 0, 0


@jit(fastmath=True, nopython=True, cache=True)
def first_unbalanced_center_bruteforce(values, reach, r2, threshold):
    n = values.shape[0]
    for a in range(-reach, n + reach + 1):
        for b in range(-reach, n + reach + 1):
            s = values[0, 0] * 0
            for ix in range(n):
                dx = 2 * (ix - a) + 1
                for iy in range(n):
                    dy = 2 * (iy - b) + 1
                    if dx * dx + dy * dy <= r2:
                        s += values[ix, iy]
            if abs(s) >= threshold:
                return 1, a, b
    return 0, 0, 0


@jit(fastmath=True, nopython=True, cache=True)
def first_filled_center(P, amin, amax, bmin, bmax, offsets, lo, hi, threshold):
    """First node in [amin, amax] x [bmin, bmax] whose disk holds more than
    ``threshold`` cells of the set"""
    for a in range(amin, amax + 1):
        for b in range(bmin, bmax + 1):
            if span_sum(P, a, b, offsets, lo, hi) > threshold:
                return 1, a, b
    return 0, 0, 0


@jit(fastmath=True, nopython=True, cache=True)
def first_filled_center_bruteforce(J, amin, amax, bmin, bmax, r2, threshold):
    n = J.shape[0]
    for a in range(amin, amax + 1):
        for b in range(bmin, bmax + 1):
            count = 0
            for ix in range(n):
                dx = 2 * (ix - a) + 1
                for iy in range(n):
                    dy = 2 * (iy - b) + 1
                    if dx * dx + dy * dy <= r2:
                        count += J[ix, iy]
            if count > threshold:
                return 1, a, b
    return 0, 0, 0


@jit(fastmath=True, nopython=True, cache=True)
def _ratio(src_x, src_y, ix, iy, jx, jy, dist):
    dx = src_x[ix, iy] - src_x[jx, jy]
    dy = src_y[ix, iy] - src_y[jx, jy]
    return np.sqrt(dx * dx + dy * dy) / dist


@jit(fastmath=True, nopython=True, cache=True)
def pair_stretch(src_x, src_y, keep, scales):
    """Per-cell maximum of |X^-1 x - X^-1 y| / |x - y| over axis pairs at the given cell
    offsets, and the maximum over all pairs with both ends kept.

    ``src_x``, ``src_y`` hold the preimage cell indices of every cell."""
    n = src_x.shape[0]
    stat = np.zeros((n, n))
    overall = 0.0
    for k in range(scales.shape[0]):
        d = scales[k]
        for ix in range(n):
            for iy in range(n):
                if keep[ix, iy] == 0:
                    continue
                if ix + d < n and keep[ix + d, iy] != 0:
                    r = _ratio(src_x, src_y, ix, iy, ix + d, iy, d)
                    stat[ix, iy] = max(stat[ix, iy], r)
                    stat[ix + d, iy] = max(stat[ix + d, iy], r)
                    overall = max(overall, r)
                if iy + d < n and keep[ix, iy + d] != 0:
                    r = _ratio(src_x, src_y, ix, iy, ix, iy + d, d)
                    stat[ix, iy] = max(stat[ix, iy], r)
                    stat[ix, iy + d] = max(stat[ix, iy + d], r)
                    overall = max(overall, r)
    return stat, overall
