"""Compiled inner loop of the Metropolis sampler.

One kernel call performs a full sweep of N*M proposals.  All randomness is
pre-drawn by the caller (5 uniforms per proposal: move selection, target
index, displacement radius, displacement angle, acceptance), so the kernel is
a pure deterministic function of its inputs and the RNG stream stays entirely
on the numpy side where it can be checkpointed.

Pairwise interaction deltas accumulate products of squared-distance ratios
and take a log only when the running product leaves [1e-100, 1e100], which
keeps the hot loop almost log-free.  A squared distance that underflows to
zero marks the proposal singular; that is a stricter guard than the 1e-300
separation used by the reference energies in :mod:`filamentmc.ensemble`, and
it only triggers at separations below ~1.5e-154 where doubles cannot hold the
square anyway.
"""

from __future__ import annotations

import math

import numba
import numpy as np

KIND_PAIRWISE = 0
KIND_MEAN_FIELD = 1

_MIN_SEP = 1e-300       # mean-field angular-momentum guard
_FLUSH_HI = 1e100
_FLUSH_LO = 1e-100


@numba.njit(cache=True, inline="always")
def _log_ratio_bead(pos, i, k, nx, ny, ox, oy):
    """Sum of log(d_new^2 / d_old^2) over the plane-k column, or NaN if singular."""
    n = pos.shape[0]
    acc = 0.0
    prod = 1.0
    for j in range(n):
        if j == i:
            continue
        cx = pos[j, k, 0]
        cy = pos[j, k, 1]
        dxn = nx - cx
        dyn = ny - cy
        d2n = dxn * dxn + dyn * dyn
        if d2n <= 0.0:
            return np.nan
        dxo = ox - cx
        dyo = oy - cy
        d2o = dxo * dxo + dyo * dyo
        prod *= d2n / d2o
        if prod > _FLUSH_HI or prod < _FLUSH_LO:
            acc += math.log(prod)
            prod = 1.0
    return acc + math.log(prod)


@numba.njit(cache=True)
def run_sweep(
    pos: np.ndarray,        # (N, M, 2), updated in place
    rand: np.ndarray,       # (N*M, 5) uniforms in [0, 1)
    alpha: float,
    pressure: float,
    beta: float,
    kind: int,
    p_bead: float,          # probability of a single-bead proposal
    bead_step: float,
    filament_step: float,
    totals: np.ndarray,     # float64[3]: e_self, e_int, m_n; updated in place
    counts: np.ndarray,     # int64[5]: bead_acc, bead_att, fil_acc, fil_att, singular
) -> None:
    n = pos.shape[0]
    m = pos.shape[1]
    n_prop = n * m
    half_m_alpha = alpha * (0.5 * m)

    for t in range(n_prop):
        if rand[t, 0] < p_bead:
            counts[1] += 1
            idx = int(rand[t, 1] * n_prop)
            if idx >= n_prop:
                idx = n_prop - 1
            i = idx // m
            k = idx - i * m

            r = bead_step * math.sqrt(rand[t, 2])
            th = 2.0 * math.pi * rand[t, 3]
            ox = pos[i, k, 0]
            oy = pos[i, k, 1]
            nx = ox + r * math.cos(th)
            ny = oy + r * math.sin(th)

            kp = k + 1 if k + 1 < m else 0
            km = k - 1 if k >= 1 else m - 1
            ax = pos[i, kp, 0]
            ay = pos[i, kp, 1]
            bx = pos[i, km, 0]
            by = pos[i, km, 1]
            d_new = (ax - nx) ** 2 + (ay - ny) ** 2 + (nx - bx) ** 2 + (ny - by) ** 2
            d_old = (ax - ox) ** 2 + (ay - oy) ** 2 + (ox - bx) ** 2 + (oy - by) ** 2
            delta_self = half_m_alpha * (d_new - d_old)
            delta_mn = (nx * nx + ny * ny - ox * ox - oy * oy) / m

            if kind == KIND_MEAN_FIELD:
                m_old = totals[2]
                m_new = m_old + delta_mn
                if m_new <= _MIN_SEP:
                    counts[4] += 1
                    continue
                delta_int = -0.25 * n * n * (math.log(m_new) - math.log(m_old))
            else:
                log_ratio = _log_ratio_bead(pos, i, k, nx, ny, ox, oy)
                if math.isnan(log_ratio):
                    counts[4] += 1
                    continue
                delta_int = -0.5 * log_ratio / m

            delta_h = delta_self + delta_int + pressure * delta_mn
            if delta_h <= 0.0 or rand[t, 4] < math.exp(-beta * delta_h):
                pos[i, k, 0] = nx
                pos[i, k, 1] = ny
                totals[0] += delta_self
                totals[1] += delta_int
                totals[2] += delta_mn
                counts[0] += 1
        else:
            counts[3] += 1
            i = int(rand[t, 1] * n)
            if i >= n:
                i = n - 1

            r = filament_step * math.sqrt(rand[t, 2])
            th = 2.0 * math.pi * rand[t, 3]
            cx = r * math.cos(th)
            cy = r * math.sin(th)

            sum_x = 0.0
            sum_y = 0.0
            for k in range(m):
                sum_x += pos[i, k, 0]
                sum_y += pos[i, k, 1]
            # rigid translation leaves the self-energy unchanged
            delta_mn = (2.0 * (cx * sum_x + cy * sum_y)) / m + (cx * cx + cy * cy)

            if kind == KIND_MEAN_FIELD:
                m_old = totals[2]
                m_new = m_old + delta_mn
                if m_new <= _MIN_SEP:
                    counts[4] += 1
                    continue
                delta_int = -0.25 * n * n * (math.log(m_new) - math.log(m_old))
            else:
                acc = 0.0
                prod = 1.0
                singular = False
                for k in range(m):
                    nxk = pos[i, k, 0] + cx
                    nyk = pos[i, k, 1] + cy
                    for j in range(n):
                        if j == i:
                            continue
                        qx = pos[j, k, 0]
                        qy = pos[j, k, 1]
                        dxn = nxk - qx
                        dyn = nyk - qy
                        d2n = dxn * dxn + dyn * dyn
                        if d2n <= 0.0:
                            singular = True
                            break
                        dxo = pos[i, k, 0] - qx
                        dyo = pos[i, k, 1] - qy
                        d2o = dxo * dxo + dyo * dyo
                        prod *= d2n / d2o
                        if prod > _FLUSH_HI or prod < _FLUSH_LO:
                            acc += math.log(prod)
                            prod = 1.0
                    if singular:
                        break
                if singular:
                    counts[4] += 1
                    continue
                delta_int = -0.5 * (acc + math.log(prod)) / m

            delta_h = delta_int + pressure * delta_mn
            if delta_h <= 0.0 or rand[t, 4] < math.exp(-beta * delta_h):
                for k in range(m):
                    pos[i, k, 0] += cx
                    pos[i, k, 1] += cy
                totals[1] += delta_int
                totals[2] += delta_mn
                counts[2] += 1
