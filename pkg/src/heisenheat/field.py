"""Scalar fields on a uniform H^1 box grid and the weighted norms.

The box is [-L, L]^2 x [-L_tau, L_tau] with the half-cell offset layout by
default, so no node coincides with the group identity and the Hardy weight
|eta|^gamma stays finite at every node for gamma < 0. Fields are plain 3-D
arrays indexed (i_x, i_y, i_tau); anything non-finite poisons the field and
is rejected at construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .convolve import SemigroupTables
from .errors import ConfigurationError, PoisonedFieldError
from .hgroup import GPoint, koranyi_from_parts

CONTRACTION_SLACK = 5e-3  # discrete normalization slack asserted per apply


@dataclass(frozen=True)
class GridGeometry:
    half_width_xy: float
    half_width_tau: float
    n_xy: int
    n_tau: int
    offset: bool = True

    def __post_init__(self):
        if self.half_width_xy <= 0 or self.half_width_tau <= 0:
            raise ConfigurationError("box half-widths must be positive")
        if self.n_xy < 2 or self.n_tau < 2:
            raise ConfigurationError("need at least 2 nodes per axis")
        if not self.offset and self.n_xy % 2 == 1 and self.n_tau % 2 == 1:
            # origin is then a grid node; permitted, but Hardy weights will refuse it
            pass

    @property
    def h_xy(self) -> float:
        return 2 * self.half_width_xy / self.n_xy if self.offset \
            else 2 * self.half_width_xy / (self.n_xy - 1)

    @property
    def h_tau(self) -> float:
        return 2 * self.half_width_tau / self.n_tau if self.offset \
            else 2 * self.half_width_tau / (self.n_tau - 1)

    @property
    def xs(self) -> np.ndarray:
        if self.offset:
            return -self.half_width_xy + (np.arange(self.n_xy) + 0.5) * self.h_xy
        return np.linspace(-self.half_width_xy, self.half_width_xy, self.n_xy)

    ys = xs

    @property
    def taus(self) -> np.ndarray:
        if self.offset:
            return -self.half_width_tau + (np.arange(self.n_tau) + 0.5) * self.h_tau
        return np.linspace(-self.half_width_tau, self.half_width_tau, self.n_tau)

    @property
    def cell_volume(self) -> float:
        # Haar measure = Lebesgue measure: plain product of spacings
        return self.h_xy * self.h_xy * self.h_tau

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n_xy, self.n_xy, self.n_tau)

    def gauge(self) -> np.ndarray:
        """Koranyi norm at every node, shape (n_xy, n_xy, n_tau)."""
        return _gauge_array(self)

    def has_origin_node(self) -> bool:
        return bool(_gauge_array(self).min() < 1e-14)

    def interior_mask(self, margin: float = 0.25) -> np.ndarray:
        gx = np.abs(self.xs) <= (1 - margin) * self.half_width_xy
        gt = np.abs(self.taus) <= (1 - margin) * self.half_width_tau
        return gx[:, None, None] & gx[None, :, None] & gt[None, None, :]

    @classmethod
    def desk_default(cls) -> "GridGeometry":
        return cls(half_width_xy=6.0, half_width_tau=36.0, n_xy=33, n_tau=33)


@lru_cache(maxsize=32)
def _gauge_array(geom: GridGeometry) -> np.ndarray:
    xs, taus = geom.xs, geom.taus
    spatial_sq = xs[:, None] ** 2 + xs[None, :] ** 2
    g = koranyi_from_parts(spatial_sq[:, :, None], taus[None, None, :])
    g.setflags(write=False)
    return g


@dataclass(frozen=True)
class GridField:
    geom: GridGeometry
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.shape != self.geom.shape:
            raise ConfigurationError(f"field shape {v.shape} != geometry {self.geom.shape}")
        if not np.all(np.isfinite(v)):
            raise PoisonedFieldError("field contains NaN/inf")

    def max_abs(self) -> float:
        return float(np.abs(self.values).max())


def sample(f, geom: GridGeometry) -> GridField:
    """Sample a pointwise function f(x, y, tau) onto the grid nodes."""
    xs, taus = geom.xs, geom.taus
    vals = f(xs[:, None, None], xs[None, :, None], taus[None, None, :])
    vals = np.broadcast_to(np.asarray(vals, dtype=float), geom.shape).copy()
    return GridField(geom, vals)


@dataclass(frozen=True)
class WeightSpec:
    """Hardy-Henon weight |eta|^gamma (kind='hardy_henon') or the comparison
    weight phi(eta) = (1+|eta|)^{gamma/(p-1)} (kind='phi')."""

    gamma: float
    p: float
    kind: str = "hardy_henon"

    def __post_init__(self):
        if not self.gamma > -2:
            raise ConfigurationError(f"gamma must be > -2, got {self.gamma}")
        if not self.p > 1:
            raise ConfigurationError(f"p must be > 1, got {self.p}")
        if self.kind not in ("hardy_henon", "phi"):
            raise ConfigurationError(f"unknown weight kind {self.kind!r}")

    def weight_values(self, geom: GridGeometry) -> np.ndarray:
        g = geom.gauge()
        if self.kind == "phi":
            return (1.0 + g) ** (self.gamma / (self.p - 1.0))
        if self.gamma < 0 and geom.has_origin_node():
            raise ConfigurationError(
                "gamma < 0 with an origin node on the grid; use an offset grid")
        if self.gamma == 0:
            return np.ones(geom.shape)
        return g**self.gamma

    def at(self, p: GPoint) -> float:
        from .hgroup import koranyi_norm
        g = koranyi_norm(p)
        if self.kind == "phi":
            return (1.0 + g) ** (self.gamma / (self.p - 1.0))
        return g**self.gamma if self.gamma != 0 else 1.0


def unit_weight(p: float = 2.0) -> WeightSpec:
    """phi with gamma=0, i.e. the plain sup norm."""
    return WeightSpec(gamma=0.0, p=p, kind="phi")


def weighted_sup_norm(u: GridField, w: WeightSpec | None = None) -> float:
    if w is None:
        return u.max_abs()
    return float(np.abs(w.weight_values(u.geom) * u.values).max())


def apply_weight(u: GridField, w: WeightSpec) -> GridField:
    """Node-wise |eta|^gamma * u^p (the reaction term)."""
    if w.kind != "hardy_henon":
        raise ConfigurationError("apply_weight expects the hardy_henon weight kind")
    vals = u.values
    if not float(w.p).is_integer() and np.any(vals < 0):
        raise ConfigurationError("negative field with fractional power p")
    powered = np.power(vals, w.p)
    return GridField(u.geom, w.weight_values(u.geom) * powered)


def semigroup_apply(u: GridField, t: float, tables: SemigroupTables,
                    check_contraction: bool = True) -> GridField:
    """e^{t Delta_H} u by discrete group convolution (zero-extended box).

    Sup-norm contraction up to the discrete normalization slack is asserted
    on every apply; a violation means the lag is unresolved on this grid and
    surfaces as a numerical failure for the caller to handle.
    """
    if tables.geom != u.geom:
        raise ConfigurationError("tables built for a different geometry")
    out = tables.apply(u.values, t)
    res = GridField(u.geom, out)
    if check_contraction:
        lhs, rhs = res.max_abs(), u.max_abs() * (1.0 + CONTRACTION_SLACK)
        if lhs > rhs:
            from .errors import NumericalFailureError
            raise NumericalFailureError(
                f"semigroup apply broke sup contraction at t={t}: {lhs:.6e} > {rhs:.6e}")
    return res


def semigroup_compose_check(u: GridField, s: float, t: float,
                            tables: SemigroupTables, margin: float = 0.25) -> float:
    """Max interior relative deviation of A_t A_s u vs A_{s+t} u."""
    two_hop = semigroup_apply(semigroup_apply(u, s, tables), t, tables)
    one_hop = semigroup_apply(u, s + t, tables)
    mask = u.geom.interior_mask(margin)
    ref = np.abs(one_hop.values[mask])
    floor = 1e-8 * max(ref.max(), 1e-300)
    denom = np.maximum(ref, floor)
    return float((np.abs(two_hop.values[mask] - one_hop.values[mask]) / denom).max())


def left_translate(u: GridField, g: GPoint) -> GridField:
    """u(g o eta) by trilinear interpolation, zero outside the box.

    Used to probe left-invariance of the convolution; the twist makes the
    tau-shift position-dependent, hence the interpolation."""
    if g.n != 1:
        raise ConfigurationError("translation implemented for N=1")
    geom = u.geom
    xs, taus = geom.xs, geom.taus
    gx, gy, gt = float(g.x[0]), float(g.y[0]), g.tau
    X = xs[:, None, None] + gx
    Y = xs[None, :, None] + gy
    T = taus[None, None, :] + gt + 2.0 * (gx * xs[None, :, None] - xs[:, None, None] * gy)
    out = _trilinear(u.values, geom, X, Y, T)
    return GridField(geom, out)


def _trilinear(vals: np.ndarray, geom: GridGeometry, X, Y, T) -> np.ndarray:
    hx, ht = geom.h_xy, geom.h_tau
    x0, t0 = geom.xs[0], geom.taus[0]
    fx = (X - x0) / hx
    fy = (Y - x0) / hx
    ft = (T - t0) / ht
    out = np.zeros(np.broadcast_shapes(fx.shape, fy.shape, ft.shape))
    fx, fy, ft = np.broadcast_arrays(fx, fy, ft)
    ix = np.floor(fx).astype(int)
    iy = np.floor(fy).astype(int)
    it = np.floor(ft).astype(int)
    ok = ((ix >= 0) & (ix < geom.n_xy - 1) & (iy >= 0) & (iy < geom.n_xy - 1)
          & (it >= 0) & (it < geom.n_tau - 1))
    ixc, iyc, itc = ix[ok], iy[ok], it[ok]
    ax, ay, at = fx[ok] - ixc, fy[ok] - iyc, ft[ok] - itc
    acc = np.zeros(ixc.shape)
    for dx_, wx in ((0, 1 - ax), (1, ax)):
        for dy_, wy in ((0, 1 - ay), (1, ay)):
            for dt_, wt in ((0, 1 - at), (1, at)):
                acc += wx * wy * wt * vals[ixc + dx_, iyc + dy_, itc + dt_]
    out[ok] = acc
    return out


def field_mass(u: GridField) -> float:
    return float(u.values.sum()) * u.geom.cell_volume


def ball_mass(u: GridField, radius: float) -> float:
    """Riemann sum of u over the Koranyi ball |eta|_H <= radius."""
    mask = u.geom.gauge() <= radius
    return float(u.values[mask].sum()) * u.geom.cell_volume


def write_snapshot(u: GridField, path, t: float = 0.0, gamma: float = 0.0,
                   p: float = 0.0) -> None:
    """Portable text snapshot: geometry/time header, then 'i_x i_y i_tau value'
    rows in deterministic C order."""
    geom = u.geom
    with open(path, "w") as fh:
        fh.write(f"# heisenheat field t={t!r} gamma={gamma!r} p={p!r} "
                 f"L={geom.half_width_xy!r} Ltau={geom.half_width_tau!r} "
                 f"n_xy={geom.n_xy} n_tau={geom.n_tau} offset={int(geom.offset)}\n")
        nx, ny, nt = geom.shape
        for i in range(nx):
            for j in range(ny):
                row = u.values[i, j]
                for k in range(nt):
                    fh.write(f"{i} {j} {k} {row[k]!r}\n")


def read_snapshot(path) -> tuple[GridField, dict]:
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("# heisenheat field"):
            raise ConfigurationError(f"not a field snapshot: {path}")
        meta = {}
        for tok in header.split()[3:]:
            k, v = tok.split("=")
            meta[k] = float(v) if k not in ("n_xy", "n_tau", "offset") else int(v)
        geom = GridGeometry(half_width_xy=meta["L"], half_width_tau=meta["Ltau"],
                            n_xy=meta["n_xy"], n_tau=meta["n_tau"],
                            offset=bool(meta["offset"]))
        vals = np.empty(geom.shape)
        for line in fh:
            i, j, k, v = line.split()
            vals[int(i), int(j), int(k)] = float(v)
    return GridField(geom, vals), meta
