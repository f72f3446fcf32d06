"""Translation, modulation and dilation acting on sampled signals.

Translations must be grid-aligned (integer multiples of dx) so they are
exact index rotations.  Modulations are exact for any real frequency.
Dilation D_t^p is realized by rescaling the grid itself: the samples of
t^{-1/p} f(x/t) at the stretched points t*x_j are just the original
samples scaled, so the action is an exact L^p isometry for every t > 0.
"""
from __future__ import annotations

import math

import numpy as np

from .signals import SampledSignal

__all__ = ["translate", "modulate", "dilate", "d1"]


def translate(f: SampledSignal, y: float) -> SampledSignal:
    """tau_y f(x) = f(x - y); y must be an integer multiple of dx."""
    bins = y / f.grid.dx
    r = round(bins)
    if abs(bins - r) > 1e-9:
        raise ValueError(f"translation {y} is not an integer multiple of dx")
    return SampledSignal(f.grid, np.roll(f.samples, int(r)))


def modulate(f: SampledSignal, y: float) -> SampledSignal:
    """M_y f(x) = e^{2 pi i y x} f(x)."""
    phase = np.exp(2j * math.pi * y * f.grid.x)
    return SampledSignal(f.grid, phase * f.samples)


def dilate(f: SampledSignal, t: float, p: float) -> SampledSignal:
    """D_t^p f(x) = t^{-1/p} f(x/t), returned on the grid stretched by t."""
    scale = 1.0 if p == math.inf else t ** (-1.0 / p)
    return SampledSignal(f.grid.dilated(t), scale * f.samples)


def d1(f: SampledSignal, t: float) -> SampledSignal:
    """The L^1-normalized dilation f_t = D_t^1 f = (1/t) f(./t)."""
    return dilate(f, t, 1.0)
