"""Spectral solves on periodic boxes: the H^-1 norm of a compactly supported tracer and
fractional Sobolev norms of sampled fields."""

from __future__ import print_function, division
import numpy as np
from scipy import fft
import mixlab.constants as constants


def _cell_spectrum(values, padding):
    """Exact Fourier coefficients of a piecewise constant field zero-padded into a torus of
    side ``padding``: DFT / N^2 times the sinc factors of a single cell"""
    n = values.shape[0]
    N = n * padding
    box = np.zeros((N, N))
    box[:n, :n] = values
    coeff = fft.rfft2(box, workers=constants.THREADS) / float(N * N)
    nx = fft.fftfreq(N, d=1.0 / N)
    ny = fft.rfftfreq(N, d=1.0 / N)
    NX, NY = np.meshgrid(nx, ny, indexing="ij")
    coeff = coeff * np.sinc(NX / N) * np.sinc(NY / N)
    return coeff, NX, NY


def hminus1_torus_sq(values, padding):
    """Squared H^-1 norm on the torus of side ``padding``, zero mode dropped"""
    L = float(padding)
    coeff, NX, NY = _cell_spectrum(values, padding)
    k2 = (2 * np.pi / L) ** 2 * (NX ** 2 + NY ** 2)
    k2[0, 0] = np.inf
    terms = np.abs(coeff) ** 2 / k2
    # rfft2 stores only ny >= 0: count the mirrored half twice, except ny = 0 and Nyquist
    weights = np.full(NY.shape[1], 2.0)
    weights[0] = 1.0
    if values.shape[0] * padding % 2 == 0:
        weights[-1] = 1.0
    return L * L * float(np.sum(terms * weights[None, :]))


def dipole_correction_sq(values, h, padding):
    """|p|^2 / (2 L^2) with p the first moment of the field. Adds back what the constant
    term of the periodic Green's function removes from a mean-zero field."""
    n = values.shape[0]
    c = -0.5 + (np.arange(n) + 0.5) * h
    px = float(np.sum(values * c[:, None])) * h * h
    py = float(np.sum(values * c[None, :])) * h * h
    return (px ** 2 + py ** 2) / (2.0 * padding ** 2)


def even_extension(samples):
    """Reflect samples on Q evenly to the 2 x 2 periodic cell (last two axes)"""
    top = np.concatenate((samples, samples[..., ::-1, :]), axis=-2)
    return np.concatenate((top, top[..., :, ::-1]), axis=-1)


def fractional_norm(samples, s):
    """|| |xi|^s u_hat ||_{L^2(Q)} on the even extension, summed over leading components.

    ``samples`` holds cell-center values on Q with the grid in the last two axes."""
    samples = np.asarray(samples, dtype=np.float64)
    n = samples.shape[-1]
    ext = even_extension(samples)
    N = 2 * n
    coeff = fft.fft2(ext, axes=(-2, -1), workers=constants.THREADS) / float(N * N)
    freq = fft.fftfreq(N, d=1.0 / N)
    KX, KY = np.meshgrid(freq, freq, indexing="ij")
    multiplier = (np.pi ** 2 * (KX ** 2 + KY ** 2)) ** s
    # Parseval on the box of side 2 gives area 4 times the coefficient sum; the box holds
    # four copies of Q, so the energy on Q is the plain sum
    return np.sqrt(float(np.sum(np.abs(coeff) ** 2 * multiplier)))
