"""Analytic velocity samplers on the unit square, zero on and outside its boundary"""

from __future__ import print_function, division
import numpy as np
from numpy import pi, sin, cos
import mixlab.constants as constants


def inside_q(x, y):
    return (np.abs(x) < 0.5) & (np.abs(y) < 0.5)


def _profile(xi, k):
    """k-th derivative of sin^2(pi xi)"""
    if k == 0:
        return sin(pi * xi) ** 2
    return -0.5 * (2 * pi) ** k * cos(2 * pi * xi + k * pi / 2)


class VelocityField(object):
    """Sampler (t, x, y) -> (u1, u2) on 0 <= t <= 1, with analytic derivatives"""

    time_constant = True

    def __call__(self, t, x, y):
        return self.derivative(t, x, y, 0, 0)

    def derivative(self, t, x, y, a, b):
        """Partial derivative d^a/dx^a d^b/dy^b of both components"""
        raise NotImplementedError

    def divergence(self, t, x, y):
        du1 = self.derivative(t, x, y, 1, 0)[0]
        du2 = self.derivative(t, x, y, 0, 1)[1]
        return du1 + du2


class ZeroVelocity(VelocityField):

    def derivative(self, t, x, y, a, b):
        z = np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape)
        return z, z.copy()


class Swirl(VelocityField):
    """Cellular vortex from the stream function psi = A sin^2(pi(x+1/2)) sin^2(pi(y+1/2)).

    u = (d psi/dy, -d psi/dx) is exactly divergence free; u and its normal derivative
    vanish on the boundary of Q."""

    def __init__(self, amplitude=constants.SWIRL_AMPLITUDE):
        self.amplitude = float(amplitude)

    def derivative(self, t, x, y, a, b):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        mask = inside_q(x, y)
        xi = x + 0.5
        eta = y + 0.5
        A = self.amplitude
        u1 = A * _profile(xi, a) * _profile(eta, b + 1)
        u2 = -A * _profile(xi, a + 1) * _profile(eta, b)
        return np.where(mask, u1, 0.0), np.where(mask, u2, 0.0)


class Tiled(VelocityField):
    """Copy of ``base`` rescaled into every tile of side a = 2^-level:
    u(t, y) = a * base(t, (y - r_Q) / a) on the tile Q with center r_Q"""

    def __init__(self, base, level):
        self.base = base
        self.level = int(level)
        self.time_constant = base.time_constant

    def _local(self, x, y):
        a = 2.0 ** -self.level
        k = 2 ** self.level
        kx = np.clip(np.floor((np.asarray(x) + 0.5) / a), 0, k - 1)
        ky = np.clip(np.floor((np.asarray(y) + 0.5) / a), 0, k - 1)
        rx = -0.5 + (kx + 0.5) * a
        ry = -0.5 + (ky + 0.5) * a
        return (x - rx) / a, (y - ry) / a, a

    def derivative(self, t, x, y, a, b):
        if self.level == 0:
            return self.base.derivative(t, x, y, a, b)
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        lx, ly, side = self._local(x, y)
        u1, u2 = self.base.derivative(t, lx, ly, a, b)
        scale = side ** (1 - a - b)
        mask = inside_q(x, y)
        return np.where(mask, scale * u1, 0.0), np.where(mask, scale * u2, 0.0)


class Concatenated(VelocityField):
    """Unit-time concatenation of samplers: piece j runs on a sub-interval of length w_j
    (weights sum to 1) and is sped up by 1/w_j"""

    def __init__(self, pieces):
        weights = np.array([w for w, _ in pieces], dtype=np.float64)
        if np.any(weights <= 0):
            raise ValueError("Sub-interval weights must be positive")
        self.weights = weights / np.sum(weights)
        self.samplers = [s for _, s in pieces]
        self.starts = np.concatenate(([0.0], np.cumsum(self.weights)[:-1]))
        self.time_constant = len(pieces) == 1 and self.samplers[0].time_constant

    def piece(self, t):
        j = int(np.searchsorted(self.starts, t, side="right") - 1)
        return min(max(j, 0), len(self.samplers) - 1)

    def derivative(self, t, x, y, a, b):
        j = self.piece(t)
        w = self.weights[j]
        u1, u2 = self.samplers[j].derivative((t - self.starts[j]) / w, x, y, a, b)
        return u1 / w, u2 / w


def rk4_trajectories(sampler, x, y, t0, t1, steps, sign=1.0):
    """Integrate dX/dt = sign * u(t, X) from t0 to t1 with classical RK4.

    ``sampler(t, x, y)`` returns the two velocity components."""
    x = np.array(x, dtype=np.float64)
    y = np.array(y, dtype=np.float64)
    dt = (t1 - t0) / steps
    t = t0
    for i in range(steps):
        k1x, k1y = sampler(t, x, y)
        k2x, k2y = sampler(t + dt / 2, x + sign * dt / 2 * k1x, y + sign * dt / 2 * k1y)
        k3x, k3y = sampler(t + dt / 2, x + sign * dt / 2 * k2x, y + sign * dt / 2 * k2y)
        k4x, k4y = sampler(t + dt, x + sign * dt * k3x, y + sign * dt * k3y)
        x = x + sign * dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        y = y + sign * dt / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        t += dt
    return x, y
