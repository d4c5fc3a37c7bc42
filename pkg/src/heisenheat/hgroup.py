"""Heisenberg group algebra on H^N = R^N x R^N x R.

Group law, inverses, anisotropic dilations and the homogeneous norms.
Everything here is a pure function on immutable values; the rest of the
package works on N=1 grids but these operations support general N.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class GroupParams:
    """Heisenberg index N and homogeneous dimension Q = 2N + 2."""

    n: int
    q: int

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError(f"Heisenberg index must be >= 1, got {self.n}")
        if self.q != 2 * self.n + 2:
            raise ConfigurationError(
                f"homogeneous dimension must be 2n+2 = {2 * self.n + 2}, got {self.q}"
            )

    @classmethod
    def for_n(cls, n: int) -> "GroupParams":
        return cls(n=n, q=2 * n + 2)


@dataclass(frozen=True)
class GPoint:
    """A point (x, y, tau) of H^N; tau is the degree-2 central coordinate."""

    x: np.ndarray
    y: np.ndarray
    tau: float

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "tau", float(self.tau))
        if x.shape != y.shape or x.ndim != 1:
            raise ConfigurationError(f"x and y must be 1-D of equal length, got {x.shape}, {y.shape}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y)) and np.isfinite(self.tau)):
            raise ConfigurationError("GPoint components must be finite")

    @property
    def n(self) -> int:
        return self.x.shape[0]


def identity(n: int = 1) -> GPoint:
    return GPoint(np.zeros(n), np.zeros(n), 0.0)


def _check_same_n(a: GPoint, b: GPoint) -> None:
    if a.n != b.n:
        raise ConfigurationError(f"dimension mismatch: N={a.n} vs N={b.n}")


def compose(a: GPoint, b: GPoint) -> GPoint:
    """Group law (x,y,t) o (x',y',t') = (x+x', y+y', t+t'+2(x.y' - x'.y))."""
    _check_same_n(a, b)
    twist = 2.0 * (float(a.x @ b.y) - float(b.x @ a.y))
    return GPoint(a.x + b.x, a.y + b.y, a.tau + b.tau + twist)


def inverse(a: GPoint) -> GPoint:
    return GPoint(-a.x, -a.y, -a.tau)


def dilate(r: float, a: GPoint) -> GPoint:
    """Anisotropic dilation delta_r(x,y,tau) = (rx, ry, r^2 tau), r > 0."""
    if not r > 0:
        raise ConfigurationError(f"dilation factor must be positive, got {r}")
    return GPoint(r * a.x, r * a.y, r * r * a.tau)


def koranyi_norm(a: GPoint) -> float:
    """Koranyi gauge [(|x|^2+|y|^2)^2 + tau^2]^(1/4)."""
    s = float(a.x @ a.x + a.y @ a.y)
    return (s * s + a.tau * a.tau) ** 0.25


def simple_norm(a: GPoint) -> float:
    """The equivalent homogeneous norm (|x|^2 + |y|^2 + |tau|)^(1/2)."""
    return (float(a.x @ a.x + a.y @ a.y) + abs(a.tau)) ** 0.5


def left_distance(a: GPoint, b: GPoint) -> float:
    """d(a, b) = |b^{-1} o a|_H (left-invariant gauge distance)."""
    return koranyi_norm(compose(inverse(b), a))


def koranyi_from_parts(spatial_sq, tau):
    """Vectorized gauge norm from |x|^2+|y|^2 and tau (used on grids)."""
    spatial_sq = np.asarray(spatial_sq, dtype=float)
    tau = np.asarray(tau, dtype=float)
    return (spatial_sq * spatial_sq + tau * tau) ** 0.25
