"""Sampled signals on a uniform periodic grid.

The grid covers one period [-L/2, L/2) with n equispaced samples.  The
discrete transform is integral-normalized (a factor dx in the forward
sum, dxi in the inverse) so that discrete statements mirror their
continuous counterparts literally: Parseval holds with the measure
weights dx and dxi, the transform of a probability bump has value 1 at
the origin, and so on.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GridError",
    "GuardError",
    "GridSpec",
    "SampledSignal",
    "Spectrum",
    "ExponentTriple",
    "dft",
    "idft",
    "lp_norm",
    "make_gaussian",
    "gaussian_profile",
    "gaussian_spectrum_profile",
    "random_bandlimited",
    "eval_signal_at",
    "signal_to_csv",
    "signal_from_csv",
    "signal_to_json",
    "signal_from_json",
]


class GridError(ValueError):
    """Two objects live on incompatible grids."""


class GuardError(ValueError):
    """An aliasing guard rejected the requested configuration."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid: n samples over a period of length L.

    Sample points are x_j = -L/2 + j*dx and the dual frequencies are
    xi_k = k/L for k in [-n/2, n/2).  The spacings satisfy dx*dxi*n = 1.
    """

    n: int
    length: float

    def __post_init__(self):
        if self.n < 8 or (self.n & (self.n - 1)) != 0:
            raise ValueError("n must be a power of two, at least 8")
        if not (self.length > 0):
            raise ValueError("period length must be positive")

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def dxi(self) -> float:
        return 1.0 / self.length

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dx

    @property
    def freq_index(self) -> np.ndarray:
        return np.arange(self.n) - self.n // 2

    @property
    def freqs(self) -> np.ndarray:
        return self.freq_index * self.dxi

    def doubled(self) -> "GridSpec":
        """Same period, twice the samples: frequencies cover [-n, n)*dxi."""
        return GridSpec(2 * self.n, self.length)

    def dilated(self, t: float) -> "GridSpec":
        """Same sample count on a period stretched by t > 0."""
        if not (t > 0):
            raise ValueError("dilation factor must be positive")
        return GridSpec(self.n, t * self.length)


def _as_complex(a) -> np.ndarray:
    arr = np.ascontiguousarray(a, dtype=complex)
    if not np.all(np.isfinite(arr.real) & np.isfinite(arr.imag)):
        raise ValueError("samples must be finite")
    return arr


@dataclass(frozen=True)
class SampledSignal:
    """Complex samples of a function at the grid points x_j."""

    grid: GridSpec
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "samples", _as_complex(self.samples))
        if self.samples.shape != (self.grid.n,):
            raise ValueError("sample count does not match grid")


@dataclass(frozen=True)
class Spectrum:
    """Complex transform coefficients at the dual frequencies xi_k."""

    grid: GridSpec
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_complex(self.coeffs))
        if self.coeffs.shape != (self.grid.n,):
            raise ValueError("coefficient count does not match grid")


def _conjugate_exponent(p: float) -> float:
    if p == 1:
        return math.inf
    if p == math.inf:
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True)
class ExponentTriple:
    """Exponents (p1, p2, p3) with the derived conjugates and q-laws.

    Two different q exponents appear in the dilation covariances: the
    two-variable law uses 2/q = 1/p1 + 1/p2 - 1/p3 while the
    one-variable law uses 1/q = 1/p1 + 1/p2 - 1/p3.  Both are derived
    on demand, never stored, so they cannot go stale.
    """

    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        if not (1 <= self.p1 <= math.inf and 1 <= self.p2 <= math.inf):
            raise ValueError("p1, p2 must lie in [1, inf]")
        if not (0 < self.p3 <= math.inf):
            raise ValueError("p3 must lie in (0, inf]")

    @staticmethod
    def _inv(p: float) -> float:
        return 0.0 if p == math.inf else 1.0 / p

    @property
    def p1c(self) -> float:
        return _conjugate_exponent(self.p1)

    @property
    def p2c(self) -> float:
        return _conjugate_exponent(self.p2)

    @property
    def p3c(self) -> float:
        return _conjugate_exponent(self.p3)

    @property
    def holder_defect(self) -> float:
        """1/p1 + 1/p2 - 1/p3; zero exactly on the Hoelder line."""
        return self._inv(self.p1) + self._inv(self.p2) - self._inv(self.p3)

    @property
    def q1d(self) -> float:
        s = self.holder_defect
        return math.inf if s == 0 else 1.0 / s

    @property
    def q2d(self) -> float:
        s = self.holder_defect
        return math.inf if s == 0 else 2.0 / s


def dft(f: SampledSignal) -> Spectrum:
    """Forward transform: coeffs[k] = dx * sum_j samples[j] e^{-2 pi i x_j xi_k}.

    Implemented with an FFT; the shift bookkeeping places x = 0 and
    xi = 0 at index n/2 on both sides.
    """
    s = f.samples
    coeffs = f.grid.dx * np.fft.fftshift(np.fft.fft(np.fft.ifftshift(s)))
    return Spectrum(f.grid, coeffs)


def idft(F: Spectrum) -> SampledSignal:
    """Inverse transform: samples[j] = dxi * sum_k coeffs[k] e^{+2 pi i x_j xi_k}."""
    c = F.coeffs
    n = F.grid.n
    samples = n * F.grid.dxi * np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(c)))
    return SampledSignal(F.grid, samples)


def lp_norm(f: SampledSignal, p: float) -> float:
    """The L^p norm (dx-weighted Riemann sum); a quasi-norm when p < 1."""
    if not (p > 0):
        raise ValueError("p must be positive")
    a = np.abs(f.samples)
    if p == math.inf:
        return float(a.max())
    return float((f.grid.dx * np.sum(a**p)) ** (1.0 / p))


def gaussian_spectrum_profile(lam: float, xi) -> np.ndarray:
    """The transform of the canonical bump: e^{-2 lam^2 xi^2}."""
    return np.exp(-2.0 * lam**2 * np.asarray(xi, dtype=float) ** 2)


def gaussian_profile(lam: float, x) -> np.ndarray:
    """Closed form of the canonical bump itself.

    The inverse transform of e^{-2 lam^2 xi^2} is
    sqrt(pi/2) * lam^{-1} * e^{-pi^2 x^2 / (2 lam^2)}.
    """
    x = np.asarray(x, dtype=float)
    return math.sqrt(math.pi / 2.0) / lam * np.exp(-(math.pi**2) * x**2 / (2.0 * lam**2))


def make_gaussian(
    lam: float,
    grid: GridSpec,
    shift: float = 0.0,
    modulation: float = 0.0,
    tail_tol: float = 1e-12,
) -> SampledSignal:
    """The bump G_lam with transform e^{-2 lam^2 xi^2}, optionally shifted.

    Built in the frequency domain and inverse-transformed, so
    dft(make_gaussian(lam, grid)) reproduces the analytic transform to
    round-off.  Both tails are guarded: the frequency tail at the band
    edge and the spatial tail at the period boundary must fall below
    ``tail_tol`` or the grid is rejected as too small for this lam.
    """
    if not (lam > 0):
        raise ValueError("lam must be positive")
    xi_max = grid.n / 2 * grid.dxi
    freq_tail = math.exp(-2.0 * lam**2 * max(xi_max - abs(modulation), 0.0) ** 2)
    space_tail = math.exp(
        -(math.pi**2) * max(grid.length / 2 - abs(shift), 0.0) ** 2 / (2.0 * lam**2)
    )
    if freq_tail >= tail_tol or space_tail >= tail_tol:
        raise GuardError(
            f"grid too small for lam={lam}: tails {freq_tail:.2e} (freq), "
            f"{space_tail:.2e} (space) exceed {tail_tol:.1e}"
        )
    xi = grid.freqs
    coeffs = gaussian_spectrum_profile(lam, xi - modulation) * np.exp(
        -2j * math.pi * xi * shift
    )
    return idft(Spectrum(grid, coeffs))


def random_bandlimited(grid: GridSpec, rng: np.random.Generator, band: int | None = None) -> SampledSignal:
    """Random signal with spectrum supported on |k| <= band (default n//8).

    Coefficients are standard complex Gaussians; the narrow band keeps
    every bilinear output alias-free even after shifts of the spectrum.
    """
    if band is None:
        band = grid.n // 8
    coeffs = np.zeros(grid.n, dtype=complex)
    k = grid.freq_index
    inside = np.abs(k) <= band
    m = int(inside.sum())
    coeffs[inside] = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return idft(Spectrum(grid, coeffs))


def eval_signal_at(f: SampledSignal, y) -> np.ndarray:
    """Evaluate the band-limited interpolant of f at arbitrary points y.

    Returns dxi * sum_k F[k] e^{2 pi i xi_k y}; at grid points this
    agrees with the samples.
    """
    F = dft(f).coeffs
    y = np.atleast_1d(np.asarray(y, dtype=float))
    phases = np.exp(2j * math.pi * np.outer(y, f.grid.freqs))
    return f.grid.dxi * phases @ F


# ---------------------------------------------------------------------------
# serialization


def signal_to_csv(f: SampledSignal, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "re", "im"])
        for xj, s in zip(f.grid.x, f.samples):
            w.writerow([repr(float(xj)), repr(float(s.real)), repr(float(s.imag))])


def signal_from_csv(path) -> SampledSignal:
    xs, vals = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["x", "re", "im"]:
            raise ValueError("expected CSV header x,re,im")
        for row in reader:
            xs.append(float(row[0]))
            vals.append(float(row[1]) + 1j * float(row[2]))
    n = len(xs)
    if n < 2:
        raise ValueError("need at least two samples")
    dx = xs[1] - xs[0]
    grid = GridSpec(n, n * dx)
    if not np.allclose(xs, grid.x, atol=1e-9 * dx):
        raise ValueError("CSV sample points are not a centered uniform grid")
    return SampledSignal(grid, np.array(vals))


def signal_to_json(f: SampledSignal, path) -> None:
    doc = {
        "schema": 1,
        "grid": {"n": f.grid.n, "length": f.grid.length},
        "re": [float(v) for v in f.samples.real],
        "im": [float(v) for v in f.samples.imag],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True)


def signal_from_json(path) -> SampledSignal:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema") != 1:
        raise ValueError("unsupported signal schema")
    grid = GridSpec(int(doc["grid"]["n"]), float(doc["grid"]["length"]))
    samples = np.asarray(doc["re"], dtype=float) + 1j * np.asarray(doc["im"], dtype=float)
    return SampledSignal(grid, samples)
