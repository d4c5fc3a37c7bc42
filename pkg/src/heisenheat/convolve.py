"""Discrete heat-semigroup operator: twisted group convolution on the grid.

A ConvolutionPlan freezes everything the hot loop needs for one time lag:
the tau-cell-averaged kernel table on a fine uniform (|x|, psi) lattice,
the admissible spatial offsets inside the envelope cutoff radius, and the
per-offset radial interpolation coefficients. The fine tau step divides the
grid step exactly, which turns the per-column twist into one shared
(index, weight) pair and the inner loop into a plain correlation.

Two interchangeable executors: the compiled extension (heisenheat._core) and
a pure-numpy fallback, selected at import and overridable with the
HEISENHEAT_BACKEND environment variable (auto | cython | numpy).
benchmarks/bench_convolve.py compares them.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericalFailureError
from .hgroup import GroupParams
from .kernel import (KernelBounds, KernelQuadratureSpec, KernelTable,
                     build_table, default_bounds)

try:
    from . import _core
except ImportError:  # extension not built; numpy path takes over
    _core = None


def backend() -> str:
    """Resolved executor name: 'cython' or 'numpy'."""
    forced = os.environ.get("HEISENHEAT_BACKEND", "auto")
    if forced not in ("auto", "cython", "numpy"):
        raise ConfigurationError(f"HEISENHEAT_BACKEND must be auto|cython|numpy, got {forced!r}")
    if forced == "numpy":
        return "numpy"
    if forced == "cython":
        if _core is None:
            raise ConfigurationError("HEISENHEAT_BACKEND=cython but heisenheat._core is not built")
        return "cython"
    return "cython" if _core is not None else "numpy"


@dataclass(frozen=True)
class TablePolicy:
    """Resolution / truncation knobs for the engine tables."""

    tail_tol: float = 1e-6        # envelope mass allowed beyond the gauge cutoff
    tau_res_factor: float = 5.0   # fine tau step <= t / this
    radial_res_factor: float = 6.0  # radial step <= sqrt(t) / this
    max_fine_per_cell: int = 4096


@dataclass(frozen=True)
class ConvolutionPlan:
    t: float
    table: KernelTable
    offsets: np.ndarray       # (n_off, 2) int64, fixed lexicographic order
    r_lo: np.ndarray          # (n_off,) int64
    r_frac: np.ndarray        # (n_off,) float64
    fine_per_cell: int        # P = h_tau / h_fine, exact integer
    h_fine: float
    tau_origin: float         # psi value of table column 0
    leak_fraction: float      # center-node mass outflow estimate for this lag
    gauge_cut: float


class SemigroupTables:
    """Plan/table cache for one grid geometry; shared read-only by runs."""

    def __init__(self, geom, group: GroupParams | None = None,
                 bounds: KernelBounds | None = None,
                 policy: TablePolicy | None = None):
        if geom.n_xy < 2 or geom.n_tau < 2:
            raise ConfigurationError("geometry too small for convolution")
        self.geom = geom
        self.group = group or GroupParams.for_n(1)
        if self.group.n != 1:
            raise ConfigurationError("grid convolution implemented for N=1")
        self.bounds = bounds or default_bounds(self.group.n)
        self.policy = policy or TablePolicy()
        # spatial aliasing floor: midpoint sampling of the e^{-r^2/4t} marginal
        # at step h is reliable (<~2e-3) only above this lag
        self.t_floor = 0.175 * geom.h_xy**2
        self._plans: dict[float, ConvolutionPlan] = {}
        self.apply_count = 0

    def plan(self, t: float) -> ConvolutionPlan:
        if not t > 0:
            raise ConfigurationError(f"lag must be positive, got {t}")
        if t < self.t_floor:
            raise NumericalFailureError(
                f"lag {t:.3e} below resolvable floor {self.t_floor:.3e} for h={self.geom.h_xy:.3f}")
        key = round(float(t), 12)
        got = self._plans.get(key)
        if got is None:
            got = self._build_plan(key)
            self._plans[key] = got
        return got

    def _build_plan(self, t: float) -> ConvolutionPlan:
        geom, pol = self.geom, self.policy
        h, htau = geom.h_xy, geom.h_tau
        rho = self.bounds.r_cut(t, pol.tail_tol)
        r_cut_sp = min(rho, 2.0 * geom.half_width_xy * math.sqrt(2.0) + h)
        amax = min(geom.n_xy - 1, int(r_cut_sp / h))
        axs = np.arange(-amax, amax + 1)
        A, B = np.meshgrid(axs, axs, indexing="ij")
        keep = (A * A + B * B) * h * h <= r_cut_sp * r_cut_sp
        offsets = np.stack([A[keep], B[keep]], axis=1).astype(np.int64)

        coord_max = max(abs(geom.xs).max(), abs(geom.ys).max())
        twist_max = 2.0 * h * amax * 2.0 * coord_max
        psi_need = min(rho * rho, (geom.n_tau - 1) * htau + twist_max) + htau
        hf_want = min(htau, t / pol.tau_res_factor)
        fine = min(pol.max_fine_per_cell, max(1, int(math.ceil(htau / hf_want))))
        hf = htau / fine
        m_half = int(math.ceil(psi_need / hf)) + 1
        psi_nodes = (np.arange(2 * m_half + 1) - m_half) * hf

        dr = min(h / 2.0, math.sqrt(t) / pol.radial_res_factor)
        n_r = int(r_cut_sp / dr) + 3
        r_nodes = np.arange(n_r) * dr

        quad = KernelQuadratureSpec.auto(t, tau_max=psi_need + htau, n=self.group.n)
        table = build_table(t, r_nodes, psi_nodes, quad, n=self.group.n, tau_cell=htau)

        r_off = h * np.hypot(offsets[:, 0], offsets[:, 1])
        r_lo = np.minimum((r_off / dr).astype(np.int64), n_r - 2)
        r_frac = r_off / dr - r_lo

        inside = math.erf(geom.half_width_xy / (2.0 * math.sqrt(t))) ** 2
        leak = max(0.0, 1.0 - inside) + pol.tail_tol
        return ConvolutionPlan(t=t, table=table, offsets=offsets, r_lo=r_lo,
                               r_frac=np.ascontiguousarray(r_frac),
                               fine_per_cell=fine, h_fine=hf,
                               tau_origin=float(psi_nodes[0]),
                               leak_fraction=leak, gauge_cut=rho)

    def apply(self, values: np.ndarray, t: float) -> np.ndarray:
        plan = self.plan(t)
        u = np.ascontiguousarray(values, dtype=float)
        out = np.zeros_like(u)
        self.apply_count += 1
        if backend() == "cython":
            _core.twisted_convolve(
                u, out, plan.table.values, plan.offsets, plan.r_lo, plan.r_frac,
                plan.fine_per_cell, plan.h_fine, plan.tau_origin, self.geom.h_tau,
                self.geom.h_xy, float(self.geom.xs[0]), float(self.geom.ys[0]),
                self.geom.cell_volume)
            return out
        return _apply_numpy(self.geom, plan, u, out)

    def apply_table(self, values: np.ndarray, table: KernelTable,
                    gauge_cut: float) -> np.ndarray:
        """One-shot convolution against a caller-supplied engine table
        (uniform grids; used by the Gaussian-envelope diagnostics)."""
        plan = plan_from_table(self.geom, table, gauge_cut)
        u = np.ascontiguousarray(values, dtype=float)
        out = np.zeros_like(u)
        if backend() == "cython":
            _core.twisted_convolve(
                u, out, plan.table.values, plan.offsets, plan.r_lo, plan.r_frac,
                plan.fine_per_cell, plan.h_fine, plan.tau_origin, self.geom.h_tau,
                self.geom.h_xy, float(self.geom.xs[0]), float(self.geom.ys[0]),
                self.geom.cell_volume)
            return out
        return _apply_numpy(self.geom, plan, u, out)


def plan_from_table(geom, table: KernelTable, gauge_cut: float) -> ConvolutionPlan:
    """Wrap an existing uniform-grid table as a plan (no leak model)."""
    r_nodes, psi = table.radial_nodes, table.tau_nodes
    dr = r_nodes[1] - r_nodes[0]
    hf = psi[1] - psi[0]
    if abs(dr * (r_nodes.size - 1) - (r_nodes[-1] - r_nodes[0])) > 1e-9 * dr:
        raise ConfigurationError("engine tables need uniform radial nodes")
    fine = int(round(geom.h_tau / hf))
    if abs(fine * hf - geom.h_tau) > 1e-9 * geom.h_tau:
        raise ConfigurationError("fine tau step must divide the grid step exactly")
    h = geom.h_xy
    r_cut_sp = min(gauge_cut, float(r_nodes[-1]) - dr)
    amax = min(geom.n_xy - 1, int(r_cut_sp / h))
    axs = np.arange(-amax, amax + 1)
    A, B = np.meshgrid(axs, axs, indexing="ij")
    keep = (A * A + B * B) * h * h <= r_cut_sp * r_cut_sp
    offsets = np.stack([A[keep], B[keep]], axis=1).astype(np.int64)
    r_off = h * np.hypot(offsets[:, 0], offsets[:, 1])
    r_lo = np.minimum((r_off / dr).astype(np.int64), r_nodes.size - 2)
    r_frac = r_off / dr - r_lo
    return ConvolutionPlan(t=table.t, table=table, offsets=offsets, r_lo=r_lo,
                           r_frac=np.ascontiguousarray(r_frac), fine_per_cell=fine,
                           h_fine=hf, tau_origin=float(psi[0]),
                           leak_fraction=0.0, gauge_cut=gauge_cut)


def _apply_numpy(geom, plan: ConvolutionPlan, u: np.ndarray, out: np.ndarray) -> np.ndarray:
    nx, ny, nt = u.shape
    h, hf, P = geom.h_xy, plan.h_fine, plan.fine_per_cell
    xs, ys = geom.xs, geom.ys
    tab = plan.table.values
    m_cap = tab.shape[1] - 2
    d = np.arange(-(nt - 1), nt)
    win = np.lib.stride_tricks.sliding_window_view
    for (a, b), ilo, fr in zip(plan.offsets, plan.r_lo, plan.r_frac):
        krow = (1.0 - fr) * tab[ilo] + fr * tab[ilo + 1]
        imin, imax = max(0, a), min(nx, nx + a)
        jmin, jmax = max(0, b), min(ny, ny + b)
        if imin >= imax or jmin >= jmax:
            continue
        w = 2.0 * h * (b * xs[imin:imax, None] - a * ys[None, jmin:jmax])
        base = (-w - plan.tau_origin) / hf
        m0 = np.floor(base).astype(np.int64)
        phi = base - m0
        idx = m0[:, :, None] + d[None, None, :] * P
        valid = (idx >= 0) & (idx <= m_cap)
        idxc = np.clip(idx, 0, m_cap)
        khat = (1.0 - phi)[:, :, None] * krow[idxc] + phi[:, :, None] * krow[idxc + 1]
        khat[~valid] = 0.0
        u_in = u[imin - a:imax - a, jmin - b:jmax - b, :]
        view = win(khat[:, :, ::-1], nt, axis=2)  # view[i,j,s,ki] = khat[i,j,2nt-2-s-ki]
        out[imin:imax, jmin:jmax, :] += np.einsum(
            "ijk,ijsk->ijs", u_in, view, optimize=True)[:, :, ::-1] * geom.cell_volume
    return out
