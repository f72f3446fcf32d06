"""Evaluation of the bilinear operators and the duality pairing.

The fast path regroups the double frequency sum by output frequency
u = xi + eta.  Since on-grid sums of two frequencies land on a grid of
the same spacing but double the range, the regrouped coefficients live
on a doubled frequency grid; they are inverse-transformed there exactly
and the result restricted to the original sample points.  A literal
O(n^2)-per-point oracle backs every fast path.
"""
from __future__ import annotations

import math

import numpy as np

from .signals import (
    GridError,
    GuardError,
    SampledSignal,
    Spectrum,
    dft,
    idft,
)
from .symbols import Symbol1D, Symbol2D

__all__ = [
    "apply_bilinear",
    "apply_bilinear_direct",
    "apply_delta_symbol",
    "apply_kernel",
    "trilinear_pairing",
    "bilinear_spectrum",
    "delta_spectrum",
    "check_band",
]

#: default relative spectral mass allowed outside the inner half-band
BAND_TOL = 1e-3


def check_band(F: Spectrum, band_tol: float | None = BAND_TOL) -> None:
    """Reject spectra with significant mass outside the inner half-band.

    Bilinear output frequencies span twice the input band; inputs
    concentrated in |k| <= n/4 keep every later transform alias-free.
    Pass ``band_tol=None`` to skip the check (calibrated paths that only
    ever read the output at the sample points do this deliberately).
    """
    if band_tol is None:
        return
    n = F.grid.n
    mag = np.abs(F.coeffs)
    peak = mag.max()
    if peak == 0:
        return
    outside = mag[np.abs(F.grid.freq_index) > n // 4]
    if outside.size and outside.max() > band_tol * peak:
        raise GuardError(
            "input spectrum extends beyond the inner half-band "
            f"(relative tail {outside.max() / peak:.2e} > {band_tol:.1e})"
        )


def _same_grid(f: SampledSignal, g: SampledSignal) -> None:
    if f.grid != g.grid:
        raise GridError("signals live on different grids")


def bilinear_spectrum(m: Symbol2D, f: SampledSignal, g: SampledSignal,
                      band_tol: float | None = BAND_TOL) -> Spectrum:
    """Regrouped coefficients h(u) = dxi * sum_{xi+eta=u} F G m on the
    doubled frequency grid u in [-n, n)*dxi."""
    _same_grid(f, g)
    if m.grid != f.grid:
        raise GridError("symbol grid mismatch")
    F = dft(f)
    G = dft(g)
    check_band(F, band_tol)
    check_band(G, band_tol)
    n = f.grid.n
    out = np.zeros(2 * n, dtype=complex)
    for i in range(n):
        # xi index i contributes to output slots i..i+n-1 (u = xi_i + eta)
        out[i : i + n] += F.coeffs[i] * (m.values[i, :] * G.coeffs)
    out *= f.grid.dxi
    return Spectrum(f.grid.doubled(), out)


def _restrict(doubled: Spectrum, grid) -> SampledSignal:
    """Invert on the doubled grid and keep the original sample points."""
    big = idft(doubled)
    # doubled grid point 2j sits exactly at x_j of the original grid
    return SampledSignal(grid, big.samples[0::2])


def apply_bilinear(m: Symbol2D, f: SampledSignal, g: SampledSignal,
                   band_tol: float | None = BAND_TOL) -> SampledSignal:
    """B_m(f, g): regrouped frequency sum, O(n^2) plus one transform."""
    return _restrict(bilinear_spectrum(m, f, g, band_tol), f.grid)


def apply_bilinear_direct(m: Symbol2D, f: SampledSignal, g: SampledSignal, at) -> np.ndarray:
    """Literal double sum dxi^2 sum_{k,l} F G m e^{2 pi i (xi+eta) x_j}.

    ``at`` is a list of sample indices; O(n^2) work per requested point.
    Exists purely as a verification oracle for the fast path.
    """
    _same_grid(f, g)
    F = dft(f).coeffs
    G = dft(g).coeffs
    xi = f.grid.freqs
    out = []
    for j in at:
        xj = f.grid.x[j]
        ph_f = np.exp(2j * math.pi * xi * xj) * F
        ph_g = np.exp(2j * math.pi * xi * xj) * G
        out.append(f.grid.dxi**2 * ph_f @ m.values @ ph_g)
    return np.array(out)


def delta_spectrum(M: Symbol1D, f: SampledSignal, g: SampledSignal,
                   band_tol: float | None = BAND_TOL) -> Spectrum:
    """Doubled-grid coefficients of the one-variable operator.

    For each output frequency u the sum runs over the difference
    v = xi - eta with the half Jacobian folded into the regrouping:
    only (u, v) of equal parity hit the grid, and those are exactly the
    terms enumerated by xi + eta = u below.
    """
    _same_grid(f, g)
    if M.grid != f.grid:
        raise GridError("symbol grid mismatch")
    F = dft(f)
    G = dft(g)
    check_band(F, band_tol)
    check_band(G, band_tol)
    n = f.grid.n
    vals = M.values
    out = np.zeros(2 * n, dtype=complex)
    for i in range(n):
        # difference indices i - l for l = 0..n-1, recentered into [0, 2n)
        diag = vals[i + 1 : i + n + 1][::-1]
        out[i : i + n] += F.coeffs[i] * (diag * G.coeffs)
    out *= f.grid.dxi
    return Spectrum(f.grid.doubled(), out)


def apply_delta_symbol(M: Symbol1D, f: SampledSignal, g: SampledSignal,
                       band_tol: float | None = BAND_TOL) -> SampledSignal:
    """B_M(f, g), equal to apply_bilinear(lift(M), f, g) to round-off."""
    return _restrict(delta_spectrum(M, f, g, band_tol), f.grid)


def apply_kernel(K: SampledSignal, f: SampledSignal, g: SampledSignal) -> SampledSignal:
    """C_K(f, g)(x) = dx * sum_t f(x-t) g(x+t) K(t), periodic wrap."""
    _same_grid(f, g)
    if K.grid != f.grid:
        raise GridError("kernel grid mismatch")
    n = f.grid.n
    acc = np.zeros(n, dtype=complex)
    for j in range(n):
        shift = j - n // 2  # lag index of t_j = x_j
        acc += K.samples[j] * np.roll(f.samples, shift) * np.roll(g.samples, -shift)
    return SampledSignal(f.grid, f.grid.dx * acc)


def trilinear_pairing(m: Symbol2D, f: SampledSignal, g: SampledSignal,
                      h: SampledSignal) -> complex:
    """dxi^2 sum_{k,l} F(xi_k) G(eta_l) H(xi_k + eta_l) m(xi_k, eta_l).

    The third transform is needed at sums of grid frequencies, which
    cover the doubled range; the discrete transform of an n-point signal
    is n*dxi-periodic, so the doubled-grid values are its periodic
    extension.
    """
    _same_grid(f, g)
    _same_grid(f, h)
    if m.grid != f.grid:
        raise GridError("symbol grid mismatch")
    F = dft(f).coeffs
    G = dft(g).coeffs
    H = dft(h).coeffs
    n = f.grid.n
    # H at index u in [-n, n), folded by n*dxi-periodicity
    pos = (np.arange(2 * n) - n + n // 2) % n
    Hext = H[pos]
    acc = 0.0 + 0.0j
    for i in range(n):
        acc += F[i] * np.sum(G * m.values[i, :] * Hext[i : i + n])
    return complex(f.grid.dxi**2 * acc)
