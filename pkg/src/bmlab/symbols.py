"""Multiplier symbols on the frequency grid and factories that build new ones.

A two-variable symbol is tabulated on the n x n frequency square; the
one-variable class lives on a *difference* grid with 2n points and the
same spacing, so that every on-grid difference xi - eta is an exact
table lookup.  Analytic symbols additionally carry an exact evaluator
so that dilation and averaging can bypass interpolation.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .signals import GridError, GridSpec

__all__ = [
    "Symbol2D",
    "Symbol1D",
    "AtomicMeasure",
    "lift",
    "symbol_from_measure",
    "restrict",
    "smooth",
    "taper",
    "dilation_average",
    "sandwich",
    "translate_symbol",
    "modulate_symbol",
    "dilate_symbol",
    "translate_symbol1d",
    "modulate_symbol1d",
    "dilate_symbol1d",
    "symbol_to_json",
    "symbol_from_json",
]


@dataclass(frozen=True)
class Symbol2D:
    """Tabulated symbol m(xi_k, eta_l) on the frequency square."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)
    evaluator: Optional[Callable] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=complex)
        if v.shape != (self.grid.n, self.grid.n):
            raise ValueError("symbol table must be n x n")
        if not np.all(np.isfinite(v.real) & np.isfinite(v.imag)):
            raise ValueError("symbol entries must be finite")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: GridSpec, fn: Callable) -> "Symbol2D":
        xi = grid.freqs
        vals = np.asarray(fn(xi[:, None], xi[None, :]), dtype=complex)
        vals = np.broadcast_to(vals, (grid.n, grid.n)).copy()
        return cls(grid, vals, evaluator=fn)

    @classmethod
    def constant(cls, grid: GridSpec, c: complex = 1.0) -> "Symbol2D":
        return cls.from_function(grid, lambda xi, eta: np.full(np.broadcast(xi, eta).shape, c, dtype=complex))


@dataclass(frozen=True)
class Symbol1D:
    """One-variable symbol M(v) on the difference grid v = k*dxi, k in [-n, n)."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)
    evaluator: Optional[Callable] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=complex)
        if v.shape != (2 * self.grid.n,):
            raise ValueError("difference-grid table must have 2n entries")
        if not np.all(np.isfinite(v.real) & np.isfinite(v.imag)):
            raise ValueError("symbol entries must be finite")
        object.__setattr__(self, "values", v)

    @property
    def diff_freqs(self) -> np.ndarray:
        n = self.grid.n
        return (np.arange(2 * n) - n) * self.grid.dxi

    @classmethod
    def from_function(cls, grid: GridSpec, fn: Callable) -> "Symbol1D":
        n = grid.n
        v = (np.arange(2 * n) - n) * grid.dxi
        return cls(grid, np.asarray(fn(v), dtype=complex), evaluator=fn)

    @classmethod
    def constant(cls, grid: GridSpec, c: complex = 1.0) -> "Symbol1D":
        return cls.from_function(grid, lambda v: np.full(np.shape(v), c, dtype=complex))

    @classmethod
    def sign(cls, grid: GridSpec) -> "Symbol1D":
        """The odd symbol -i*sign(v), with sign(0) = 0."""
        return cls.from_function(grid, lambda v: -1j * np.sign(v))

    @classmethod
    def gaussian(cls, grid: GridSpec, a: float = 1.0) -> "Symbol1D":
        return cls.from_function(grid, lambda v: np.exp(-a * np.asarray(v, dtype=float) ** 2))

    @classmethod
    def fractional(cls, grid: GridSpec, alpha: float) -> "Symbol1D":
        """|v|^(alpha-1) with the origin value set to 0."""
        if not (0 < alpha < 1):
            raise ValueError("alpha must lie in (0, 1)")

        def fn(v):
            v = np.asarray(v, dtype=float)
            out = np.zeros(v.shape, dtype=complex)
            nz = v != 0
            out[nz] = np.abs(v[nz]) ** (alpha - 1.0)
            return out

        return cls.from_function(grid, fn)


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite list of point masses (location, complex weight)."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((float(t), complex(w)) for t, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)

    @property
    def total_variation(self) -> float:
        return float(sum(abs(w) for _, w in self.atoms))

    def transform(self, v) -> np.ndarray:
        """mu-hat(v) = sum_a w_a e^{-2 pi i v t_a}."""
        v = np.asarray(v, dtype=float)
        out = np.zeros(v.shape, dtype=complex)
        for t, w in self.atoms:
            out += w * np.exp(-2j * math.pi * v * t)
        return out


# ---------------------------------------------------------------------------
# factories


def lift(M: Symbol1D) -> Symbol2D:
    """Two-variable symbol m(xi, eta) = M(xi - eta); exact table lookups."""
    n = M.grid.n
    k = np.arange(n)
    idx = k[:, None] - k[None, :] + n  # (xi index) - (eta index), recentered
    vals = M.values[idx]
    ev = None
    if M.evaluator is not None:
        ev = lambda xi, eta, _f=M.evaluator: _f(np.asarray(xi) - np.asarray(eta))
    return Symbol2D(M.grid, vals, evaluator=ev)


def symbol_from_measure(mu: AtomicMeasure, alpha: float, beta: float, grid: GridSpec) -> Symbol2D:
    """m(xi, eta) = mu-hat(alpha*xi + beta*eta)."""
    fn = lambda xi, eta: mu.transform(alpha * np.asarray(xi) + beta * np.asarray(eta))
    return Symbol2D.from_function(grid, fn)


def restrict(m: Symbol2D, a: float, b: float, c: float, d: float) -> Symbol2D:
    """Zero the symbol outside the closed rectangle [a,b] x [c,d]."""
    xi = m.grid.freqs
    mask = ((xi >= a) & (xi <= b))[:, None] & ((xi >= c) & (xi <= d))[None, :]
    return Symbol2D(m.grid, np.where(mask, m.values, 0.0))


def smooth(m: Symbol2D, phi: Symbol2D) -> Symbol2D:
    """Periodic 2-D convolution phi * m with quadrature weight dxi^2."""
    if phi.grid != m.grid:
        raise GridError("density grid mismatch")
    a = np.fft.ifftshift(m.values)
    b = np.fft.ifftshift(phi.values)
    conv = np.fft.ifft2(np.fft.fft2(a) * np.fft.fft2(b))
    return Symbol2D(m.grid, m.grid.dxi**2 * np.fft.fftshift(conv))


def taper(m: Symbol2D, phi_hat: Symbol2D) -> Symbol2D:
    """Entrywise product phi_hat * m."""
    if phi_hat.grid != m.grid:
        raise GridError("taper grid mismatch")
    return Symbol2D(m.grid, phi_hat.values * m.values)


def _eval_symbol2d(m: Symbol2D, xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Evaluate m off-grid: exact when an evaluator exists, else bilinear
    interpolation in the table with constant extrapolation."""
    if m.evaluator is not None:
        return np.asarray(m.evaluator(xi, eta), dtype=complex)
    f = m.grid.freqs
    lo, hi = f[0], f[-1]
    xi = np.clip(xi, lo, hi)
    eta = np.clip(eta, lo, hi)
    fi = (xi - lo) / m.grid.dxi
    fj = (eta - lo) / m.grid.dxi
    i0 = np.clip(np.floor(fi).astype(int), 0, m.grid.n - 2)
    j0 = np.clip(np.floor(fj).astype(int), 0, m.grid.n - 2)
    si = fi - i0
    sj = fj - j0
    v = m.values
    return (
        v[i0, j0] * (1 - si) * (1 - sj)
        + v[i0 + 1, j0] * si * (1 - sj)
        + v[i0, j0 + 1] * (1 - si) * sj
        + v[i0 + 1, j0 + 1] * si * sj
    )


def dilation_average(m: Symbol2D, t_nodes: Sequence[float], psi_values: Sequence[float]) -> Symbol2D:
    """Trapezoid quadrature of m(t*xi, t*eta) psi(t) over the given t nodes.

    Nodes must be positive and increasing (log-spaced in typical use);
    off-grid arguments go through the symbol's evaluator when it has
    one, otherwise bilinear interpolation.
    """
    t_nodes = np.asarray(t_nodes, dtype=float)
    psi_values = np.asarray(psi_values, dtype=complex)
    if t_nodes.ndim != 1 or t_nodes.shape != psi_values.shape:
        raise ValueError("t nodes and weight samples must be 1-D and match")
    if np.any(t_nodes <= 0):
        raise ValueError("t nodes must be positive")
    if t_nodes.size == 1:
        weights = np.array([1.0])  # unit mass at a single node
    else:
        if np.any(np.diff(t_nodes) <= 0):
            raise ValueError("t nodes must be increasing")
        weights = np.empty_like(t_nodes)
        weights[0] = (t_nodes[1] - t_nodes[0]) / 2
        weights[-1] = (t_nodes[-1] - t_nodes[-2]) / 2
        weights[1:-1] = (t_nodes[2:] - t_nodes[:-2]) / 2
    xi = m.grid.freqs
    XI = xi[:, None]
    ETA = xi[None, :]
    acc = np.zeros((m.grid.n, m.grid.n), dtype=complex)
    for t, psi, w in zip(t_nodes, psi_values, weights):
        acc += w * psi * _eval_symbol2d(m, t * XI, t * ETA)
    return Symbol2D(m.grid, acc)


def _linear_multiplier_values(m1, grid: GridSpec) -> np.ndarray:
    """Values of a one-variable multiplier at the grid frequencies xi_k.

    Accepts a Symbol1D (centre slice of its difference table), a callable,
    or a plain length-n array.
    """
    if isinstance(m1, Symbol1D):
        if m1.grid != grid:
            raise GridError("multiplier grid mismatch")
        n = grid.n
        return m1.values[n // 2 : n // 2 + n].copy()  # entries at v = xi_k
    if callable(m1):
        return np.asarray(m1(grid.freqs), dtype=complex)
    a = np.asarray(m1, dtype=complex)
    if a.shape != (grid.n,):
        raise ValueError("linear multiplier must have n values")
    return a


def sandwich(m1, m: Symbol2D, m2) -> Symbol2D:
    """values[k,l] = m1(xi_k) * m(xi_k, eta_l) * m2(eta_l)."""
    a = _linear_multiplier_values(m1, m.grid)
    b = _linear_multiplier_values(m2, m.grid)
    return Symbol2D(m.grid, a[:, None] * m.values * b[None, :])


def _grid_bins(shift: float, dxi: float) -> int:
    bins = shift / dxi
    r = round(bins)
    if abs(bins - r) > 1e-9:
        raise ValueError(f"shift {shift} is not an integer multiple of dxi={dxi}")
    return int(r)


def translate_symbol(m: Symbol2D, shift: tuple) -> Symbol2D:
    """Grid-aligned translation: rotates the table indices."""
    a = _grid_bins(shift[0], m.grid.dxi)
    b = _grid_bins(shift[1], m.grid.dxi)
    return Symbol2D(m.grid, np.roll(m.values, (a, b), axis=(0, 1)))


def modulate_symbol(m: Symbol2D, point: tuple) -> Symbol2D:
    """Pointwise phase e^{2 pi i (x0 xi + y0 eta)}; any real (x0, y0)."""
    x0, y0 = point
    xi = m.grid.freqs
    phase = np.exp(2j * math.pi * (x0 * xi[:, None] + y0 * xi[None, :]))
    vals = phase * m.values
    ev = None
    if m.evaluator is not None:
        ev = lambda X, E, _f=m.evaluator: np.exp(
            2j * math.pi * (x0 * np.asarray(X) + y0 * np.asarray(E))
        ) * _f(X, E)
    return Symbol2D(m.grid, vals, evaluator=ev)


def dilate_symbol(m: Symbol2D, t: float, q: float) -> Symbol2D:
    """t^{-2/q} m(xi/t, eta/t), exact through the evaluator when present."""
    if not (t > 0):
        raise ValueError("t must be positive")
    scale = 1.0 if q == math.inf else t ** (-2.0 / q)
    xi = m.grid.freqs
    vals = scale * _eval_symbol2d(m, xi[:, None] / t, xi[None, :] / t)
    ev = None
    if m.evaluator is not None:
        ev = lambda X, E, _f=m.evaluator: scale * _f(np.asarray(X) / t, np.asarray(E) / t)
    return Symbol2D(m.grid, vals, evaluator=ev)


def translate_symbol1d(M: Symbol1D, shift: float) -> Symbol1D:
    a = _grid_bins(shift, M.grid.dxi)
    vals = np.roll(M.values, a)
    ev = None
    if M.evaluator is not None:
        ev = lambda v, _f=M.evaluator: _f(np.asarray(v) - shift)
    return Symbol1D(M.grid, vals, evaluator=ev)


def modulate_symbol1d(M: Symbol1D, y: float) -> Symbol1D:
    vals = np.exp(2j * math.pi * y * M.diff_freqs) * M.values
    ev = None
    if M.evaluator is not None:
        ev = lambda v, _f=M.evaluator: np.exp(2j * math.pi * y * np.asarray(v)) * _f(v)
    return Symbol1D(M.grid, vals, evaluator=ev)


def dilate_symbol1d(M: Symbol1D, t: float, q: float) -> Symbol1D:
    """t^{-1/q} M(v/t); exact through the evaluator, else linear interpolation."""
    if not (t > 0):
        raise ValueError("t must be positive")
    scale = 1.0 if q == math.inf else t ** (-1.0 / q)
    v = M.diff_freqs
    if M.evaluator is not None:
        vals = scale * np.asarray(M.evaluator(v / t), dtype=complex)
        ev = lambda u, _f=M.evaluator: scale * _f(np.asarray(u) / t)
        return Symbol1D(M.grid, vals, evaluator=ev)
    re = np.interp(v / t, v, M.values.real)
    im = np.interp(v / t, v, M.values.imag)
    return Symbol1D(M.grid, scale * (re + 1j * im))


# ---------------------------------------------------------------------------
# serialization


def symbol_to_json(doc_kind: str, params: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump({"schema": 1, "kind": doc_kind, "params": params}, fh, sort_keys=True)


def symbol_from_json(path, grid: GridSpec):
    """Rebuild a structured symbol from its JSON descriptor.

    Kinds: "one", "sign", "gauss" (params: a), "frac" (params: alpha),
    "measure" (params: atoms [[t, re, im], ...], alpha, beta).
    A "measure" descriptor produces a Symbol2D; the rest are Symbol1D.
    """
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema") != 1:
        raise ValueError("unsupported symbol schema")
    kind = doc.get("kind")
    params = doc.get("params", {})
    if kind == "one":
        return Symbol1D.constant(grid)
    if kind == "sign":
        return Symbol1D.sign(grid)
    if kind == "gauss":
        return Symbol1D.gaussian(grid, float(params.get("a", 1.0)))
    if kind == "frac":
        return Symbol1D.fractional(grid, float(params["alpha"]))
    if kind == "measure":
        atoms = [(t, re + 1j * im) for t, re, im in params["atoms"]]
        mu = AtomicMeasure(tuple(atoms))
        return symbol_from_measure(mu, float(params.get("alpha", 1.0)), float(params.get("beta", -1.0)), grid)
    raise ValueError(f"unknown symbol kind: {kind!r}")
