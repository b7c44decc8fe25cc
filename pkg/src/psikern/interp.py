"""Lagrange trigonometric interpolation on the 2n-1 equidistant nodes.

The interpolation operator takes samples at x_k = 2k*pi/(2n-1) to the
unique order-(n-1) trigonometric polynomial through them; its pointwise
operator norm is the Lebesgue function

    L_n(x) = (2/(2n-1)) sum_k |D_{n-1}(x - x_k)|,

which grows like (2/pi) |sin((2n-1)x/2)| ln n plus a bounded residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .trig import TrigPoly, dirichlet


@dataclass(frozen=True)
class NodeSet:
    """The 2n-1 nodes 2k*pi/(2n-1), k = 0..2n-2, strictly increasing in [0, 2pi)."""

    n: int
    nodes: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=np.float64))
        if len(self.nodes) != 2 * self.n - 1:
            raise ValueError("node count must be 2n-1")


def nodes(n: int) -> NodeSet:
    N = 2 * n - 1
    return NodeSet(n, 2.0 * math.pi * np.arange(N) / N)


def interpolate(samples, n: int) -> TrigPoly:
    """Order-(n-1) interpolant through samples[k] = f(x_k).

    Coefficients come from discrete Fourier sums over the nodes, which are
    exact quadrature for polynomials of order <= n-1:
        a_j = (2/N) sum_k f(x_k) cos(j x_k),  N = 2n-1,
    and likewise with sin for b_j; a0 = (2/N) sum_k f(x_k).
    """
    s = np.asarray(samples, dtype=np.float64)
    N = 2 * n - 1
    if s.shape != (N,):
        raise ValueError(f"expected {N} samples, got shape {s.shape}")
    xk = nodes(n).nodes
    a0 = 2.0 / N * float(np.sum(s))
    if n == 1:
        return TrigPoly(a0, np.zeros(0), np.zeros(0))
    jxk = np.outer(np.arange(1, n), xk)
    a = 2.0 / N * (np.cos(jxk) @ s)
    b = 2.0 / N * (np.sin(jxk) @ s)
    return TrigPoly(a0, a, b)


def node_sum_eval(samples, n: int, x):
    """Interpolant evaluated through the Dirichlet form
    (2/N) sum_k f(x_k) D_{n-1}(x - x_k); the coefficient-free route.

    Agrees with interpolate(...)(x) to 1e-10; kept as the dual path for
    cross-checks and for callers holding only samples.
    """
    s = np.asarray(samples, dtype=np.float64)
    N = 2 * n - 1
    if s.shape != (N,):
        raise ValueError(f"expected {N} samples, got shape {s.shape}")
    xv = np.asarray(x, dtype=np.float64)
    scalar = xv.ndim == 0
    xv = np.atleast_1d(xv)
    xk = nodes(n).nodes
    D = dirichlet(n, xv[:, None] - xk[None, :])
    out = 2.0 / N * (D @ s)
    return float(out[0]) if scalar else out


def _sample(f, xk: np.ndarray) -> np.ndarray:
    try:
        s = np.asarray(f(xk), dtype=np.float64)
        if s.shape != xk.shape:
            raise TypeError
        return s
    except (TypeError, ValueError):
        return np.array([float(f(x)) for x in xk])


def deviation(f, n: int, x):
    """rho_n(f; x) = f(x) - S_{n-1}(f; x); vanishes at every node."""
    xk = nodes(n).nodes
    p = interpolate(_sample(f, xk), n)
    xv = np.asarray(x, dtype=np.float64)
    scalar = xv.ndim == 0
    xv = np.atleast_1d(xv)
    out = _sample(f, xv) - p(xv)
    return float(out[0]) if scalar else out


def lebesgue_fn(n: int, x):
    """L_n(x) = (2/(2n-1)) sum_k |D_{n-1}(x - x_k)|; >= 1 with equality at nodes."""
    xv = np.asarray(x, dtype=np.float64)
    scalar = xv.ndim == 0
    xv = np.atleast_1d(xv)
    xk = nodes(n).nodes
    D = dirichlet(n, xv[:, None] - xk[None, :])
    out = 2.0 / (2 * n - 1) * np.sum(np.abs(D), axis=1)
    return float(out[0]) if scalar else out


def lebesgue_residual(n: int, x):
    """L_n(x) - (2/pi)|sin((2n-1)x/2)| ln n: the bounded part of the
    Lebesgue function's growth.  Equals 1 at nodes (the sine factor
    vanishes there)."""
    if n < 2:
        raise ValueError("residual needs n >= 2 (ln n term)")
    xv = np.asarray(x, dtype=np.float64)
    scalar = xv.ndim == 0
    xv = np.atleast_1d(xv)
    out = lebesgue_fn(n, xv) \
        - 2.0 / math.pi * np.abs(np.sin((2 * n - 1) * xv / 2.0)) * math.log(n)
    return float(out[0]) if scalar else out
