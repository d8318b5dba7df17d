"""Composite Gauss-Legendre rules on straight segments and arcs."""

from __future__ import annotations

import functools

import numpy as np


@functools.lru_cache(maxsize=32)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def panel_nodes(lo: float, hi: float, width: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a composite rule on [lo, hi] with panels at most ``width`` wide."""
    npan = max(1, int(np.ceil((hi - lo) / width)))
    edges = np.linspace(lo, hi, npan + 1)
    x, w = gauss_legendre(order)
    half = np.diff(edges)[:, None] / 2
    mid = (edges[:-1] + edges[1:])[:, None] / 2
    return (mid + half * x).ravel(), (half * w).ravel()


def segment_rule(a: complex, b: complex, width: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes s and weights ds along the segment from a to b in the complex plane."""
    length = abs(b - a)
    u, w = panel_nodes(0.0, 1.0, width / length if length else 1.0, order)
    return a + (b - a) * u, (b - a) * w


def arc_rule(centre: complex, radius: float, theta0: float, theta1: float,
             width: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and ds weights on centre + radius e^{i theta}, theta running theta0 -> theta1."""
    span = abs(theta1 - theta0) * radius
    u, w = panel_nodes(0.0, 1.0, width / span if span else 1.0, order)
    th = theta0 + (theta1 - theta0) * u
    e = np.exp(1j * th)
    return centre + radius * e, 1j * radius * e * (theta1 - theta0) * w
