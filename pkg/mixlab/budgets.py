"""Transport costs, minimal-cost comparisons, budget-driven schedules and decay-law fits"""

from __future__ import print_function, division
import dataclasses
from fractions import Fraction
import numpy as np
import mixlab.constants as constants
from mixlab.blocks import block_sup_norm, velocity_cost
from mixlab.composer import Schedule, SigmaSequence
from mixlab.diagnostics import MixParams
from mixlab.helpers import MissingVelocityError
from mixlab.velocity import Concatenated, Tiled


@dataclasses.dataclass(frozen=True)
class CostReport:
    n: int
    k: int
    M_nk: float
    measured_cost: float
    mix_start: float
    mix_end: float
    c1: float
    c2: float
    c2_bar: float
    mix_bound: float
    violates_M: bool
    violates_mix_bound: bool

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class DecayFit:
    model: str
    rate_or_exponent: float
    r_squared: float
    window: tuple
    n_samples: int

    def to_dict(self):
        return dataclasses.asdict(self)


def proof_constants(params=None):
    """eta = (1 - gamma_bar) 3/16 alpha^2 pi, omega = sqrt((1 + gamma_bar) / 2) and
    C(gamma_bar) = 1 - sqrt((3 + gamma_bar) / 4)"""
    params = params or MixParams()
    g = params.gamma_bar
    return {
        "eta": (1 - g) * 3 / 16 * params.alpha ** 2 * np.pi,
        "omega": float(np.sqrt((1 + g) / 2)),
        "C_gamma": 1 - float(np.sqrt((3 + g) / 4)),
        }


def stage_norm(block, s=1, p=2, level=constants.QUAD_LEVEL):
    """sup in time of the unit-block W^{s,p} norm"""
    return block_sup_norm(block, s, p, level)


def window_velocity(flow, n, k, tile=None):
    """u_{Q,n,k}: stages n .. n+k-1 rescaled to the unit cell and concatenated in unit time,
    stage n+j on a sub-interval of length tau_{n+j} / tau_{n,k}"""
    if k < 1 or n < 0 or n + k > flow.stages:
        raise ValueError("Window [n, n+k) must lie inside the run")
    total = flow.schedule.tau_nk(n, k)
    pieces = []
    for j in range(k):
        block = flow.stage_block(n + j, tile)
        if block.velocity is None:
            raise MissingVelocityError("Stage %d block carries no velocity field" % (n + j))
        pieces.append((flow.schedule.tau(n + j) / total, Tiled(block.velocity, flow.ell0 * j)))
    return Concatenated(pieces)


def transport_cost(flow, n, k, p=2, s=1, level=constants.QUAD_LEVEL):
    """int_0^1 ||grad^s u_{Q,n,k}(t)||_{L^p(Q)} dt"""
    return velocity_cost(window_velocity(flow, n, k), s, p, level)


def minimal_cost_check(n, k, measured_cost, mix_start, mix_end, sigma, ell0=1, params=None,
                       p=2, c1=None, c2=1.0, c2_bar=1.0):
    """Compare a measured window cost with M_nk = c1 log(c2 / lambda^(k + sigma(n+k) - sigma(n)))
    and with c1 log(c2_bar mix_start / mix_end).

    Violations are reported, not raised: c1 defaults to eta^(1/p) with the unknown
    transport constant set to 1."""
    if measured_cost is None or mix_start is None or mix_end is None:
        raise ValueError("Cost check needs the measured cost and both mixing scales")
    if mix_start <= 0 or mix_end <= 0:
        raise ValueError("Mixing scales must be positive")
    if n + k >= len(sigma):
        raise ValueError("sigma does not cover stage %d" % (n + k))
    if c1 is None:
        c1 = proof_constants(params)["eta"] ** (1.0 / p)
    lam = 2.0 ** -ell0
    exponent = k + sigma[n + k] - sigma[n]
    M_nk = c1 * np.log(c2 / lam ** exponent)
    mix_bound = c1 * np.log(c2_bar * mix_start / mix_end)
    return CostReport(
        n=int(n), k=int(k), M_nk=float(M_nk), measured_cost=float(measured_cost),
        mix_start=float(mix_start), mix_end=float(mix_end), c1=float(c1), c2=float(c2),
        c2_bar=float(c2_bar), mix_bound=float(mix_bound),
        violates_M=bool(measured_cost < M_nk),
        violates_mix_bound=bool(measured_cost < mix_bound))


def first_holding_window(reports):
    """Smallest k whose report satisfies both bounds, None if no window does"""
    holding = [r.k for r in reports if not r.violates_M and not r.violates_mix_bound]
    return min(holding) if holding else None


def window_reports(flow, snapshots, n=0, p=2, quantity="Hminus1", params=None,
                   level=constants.QUAD_LEVEL, **constants_kwargs):
    """CostReports for the windows [n, n+k), k = 1 .. available snapshots"""
    reports = []
    for k in range(1, len(snapshots) - n):
        cost = transport_cost(flow, n, k, p, 1, level)
        reports.append(minimal_cost_check(
            n, k, cost, float(snapshots[n].measurements[quantity]),
            float(snapshots[n + k].measurements[quantity]), flow.sigma, flow.ell0, params, p,
            **constants_kwargs))
    return reports


def _stage_norms(blocks, s, p, ell0, sigma, level):
    sigma = (sigma or SigmaSequence()).resolve([b.depth_gain(ell0) for b in blocks])
    return [stage_norm(block.subdivide(ell0 * sigma[n]), s, p, level)
            for n, block in enumerate(blocks)]


def enstrophy_schedule(blocks, budget, p=2, ell0=1, sigma=None, level=constants.QUAD_LEVEL):
    """Stage durations tau_n = N_n / B that hold sup_t ||grad u||_{L^p} at the budget B,
    N_n the sup-in-time gradient norm of the stage-n unit block"""
    if not budget > 0:
        raise ValueError("Budget must be positive")
    norms = _stage_norms(blocks, 1, p, ell0, sigma, level)
    B = Fraction(budget)
    return Schedule.from_durations([float(Fraction(N) / B) for N in norms])


def palenstrophy_schedule(blocks, budget, s=2, p=2, ell0=1, sigma=None, level=constants.QUAD_LEVEL):
    """Stage durations tau_n = lambda^(-(s-1) n) N_n / B holding sup_t ||grad^s u||_{L^p} at
    the budget B. Times are summed in exact rational arithmetic for integer s."""
    if s <= 1:
        raise ValueError("Palenstrophy schedules need s > 1; use enstrophy_schedule")
    if not budget > 0:
        raise ValueError("Budget must be positive")
    norms = _stage_norms(blocks, s, p, ell0, sigma, level)
    if float(s).is_integer():
        growth = Fraction(2) ** (ell0 * (int(s) - 1))
        B = Fraction(budget)
        times = [Fraction(0)]
        for n, N in enumerate(norms):
            times.append(times[-1] + growth ** n * Fraction(N) / B)
        return Schedule([float(t) for t in times])
    growth = 2.0 ** (ell0 * (s - 1))
    return Schedule.from_durations([growth ** n * N / budget for n, N in enumerate(norms)])


def _r_squared(x, y, coeffs):
    residuals = y - np.polyval(coeffs, x)
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot == 0:
        return 1.0, residuals
    return 1 - float(np.sum(residuals ** 2)) / ss_tot, residuals


def decay_fit(samples):
    """Fit mix ~ exp(-rate t) and mix ~ t^exponent on the trailing half of (t, mix) samples.

    Returns
    -------
    result : dict
        ``exponential`` and ``polynomial`` DecayFits, ``verdict`` (model with the higher
        r^2), ``r2_advantage`` (polynomial minus exponential) and
        ``slower_than_exponential`` (late residuals of the exponential fit are positive and
        increasing)
    """
    samples = sorted((float(t), float(v)) for t, v in samples)
    if len(samples) < constants.MIN_DECAY_SAMPLES:
        raise ValueError("Decay fits need at least %d samples" % constants.MIN_DECAY_SAMPLES)
    t = np.array([s[0] for s in samples])
    mix = np.array([s[1] for s in samples])
    if np.any(mix <= 0):
        raise ValueError("Mixing values must be positive")

    size = max(constants.MIN_FIT_WINDOW, int(np.ceil(len(samples) / 2)))
    t, log_mix = t[-size:], np.log(mix[-size:])
    if np.any(t <= 0):
        raise ValueError("Polynomial fit needs t > 0 in the fit window")
    window = (float(t[0]), float(t[-1]))

    exp_coeffs = np.polyfit(t, log_mix, 1)
    exp_r2, residuals = _r_squared(t, log_mix, exp_coeffs)
    poly_coeffs = np.polyfit(np.log(t), log_mix, 1)
    poly_r2, _ = _r_squared(np.log(t), log_mix, poly_coeffs)

    exponential = DecayFit("exponential", float(-exp_coeffs[0]), exp_r2, window, size)
    polynomial = DecayFit("polynomial", float(poly_coeffs[0]), poly_r2, window, size)
    return {
        "exponential": exponential,
        "polynomial": polynomial,
        "verdict": "polynomial" if poly_r2 > exp_r2 else "exponential",
        "r2_advantage": poly_r2 - exp_r2,
        "slower_than_exponential": bool(residuals[-1] > 0 and residuals[-1] > residuals[-2]),
        }
