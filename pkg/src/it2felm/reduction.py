"""Type reduction: collapse interval firings into the endpoints [y_l, y_r].

Given M rules with firing intervals [f_j, fbar_j] and crisp consequent
values w_j, the reduced set endpoints are the extreme values of

    sum_j f*_j w_j / sum_j f*_j      with each f*_j in {f_j, fbar_j}.

Three routes are provided:

* ``sc_reduce`` - the sorting-free switch-indicator scheme.  Each rule
  carries a binary indicator z_j (1 = use the upper firing); a sweep
  compares every consequent against the running centroid and flips
  indicators in place, updating the numerator/denominator accumulators
  incrementally.  Indicators only ever flip once per endpoint, so the
  sweep loop terminates within M+1 passes without sorting anything.
* ``km_reduce`` - the classical Karnik-Mendel iteration: sort rules by
  consequent, then iterate the switch point until it is stable.
* ``brute_force_reduce`` - exhaustive enumeration of all 2^M firing
  assignments; the test oracle both fast routes must match.

``wu_mendel_bounds`` computes the closed-form inner/outer bounds that
bracket the exact endpoints (used by the controllers as a non-iterative
reducer), and ``defuzz`` averages the endpoints into a crisp output.

Batch variants (``*_batch``) run the same algorithms across whole sample
matrices for training and benchmarking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "NoRuleFiredError",
    "ConvergenceError",
    "TypeReducedSet",
    "sc_reduce",
    "km_reduce",
    "brute_force_reduce",
    "wu_mendel_bounds",
    "wu_mendel_raw_bounds",
    "defuzz",
    "sc_reduce_batch",
    "km_reduce_batch",
    "brute_force_reduce_batch",
]

BRUTE_FORCE_MAX_RULES = 20


class NoRuleFiredError(ValueError):
    """Raised when every upper firing is zero (output undefined)."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative reducer exceeds its sweep cap."""


@dataclass(frozen=True)
class TypeReducedSet:
    """Reduced endpoints plus the switch indicators that produced them.

    ``z_l[j] == 1`` means rule j contributes its upper firing to the left
    endpoint (symmetrically ``z_r`` for the right one).
    """

    y_l: float
    y_r: float
    z_l: tuple[int, ...]
    z_r: tuple[int, ...]


def defuzz(reduced: TypeReducedSet) -> float:
    """Crisp output: the midpoint of the reduced interval."""
    return 0.5 * (reduced.y_l + reduced.y_r)


def _check_inputs(f_lower, f_upper, w) -> tuple[list, list, list]:
    fl = f_lower.tolist() if isinstance(f_lower, np.ndarray) else [float(v) for v in f_lower]
    fu = f_upper.tolist() if isinstance(f_upper, np.ndarray) else [float(v) for v in f_upper]
    ws = w.tolist() if isinstance(w, np.ndarray) else [float(v) for v in w]
    if not (len(fl) == len(fu) == len(ws)) or not fl:
        raise ValueError("firing bounds and consequents must share a length >= 1")
    fired = False
    for a, b, v in zip(fl, fu, ws):
        if not (0.0 <= a <= b):  # also rejects NaN
            raise ValueError(f"invalid firing interval [{a}, {b}]")
        if not (math.isfinite(b) and math.isfinite(v)):
            raise ValueError("non-finite reduction inputs")
        fired = fired or b > 0.0
    if not fired:
        raise NoRuleFiredError("all upper firings are zero")
    return fl, fu, ws


def _degenerate_endpoints(fl, fu, ws):
    """All lower firings zero: endpoints are the extreme live consequents."""
    live = [j for j, u in enumerate(fu) if u > 0.0]
    j_min = min(live, key=lambda j: ws[j])
    j_max = max(live, key=lambda j: ws[j])
    z_l = tuple(1 if j == j_min else 0 for j in range(len(ws)))
    z_r = tuple(1 if j == j_max else 0 for j in range(len(ws)))
    return ws[j_min], ws[j_max], z_l, z_r


def _sc_endpoint(fl, fu, ws, right: bool) -> tuple[float, tuple[int, ...]]:
    # All indicators start raised and only ever lower: dropping a consequent
    # on the wrong side of the running centroid moves the centroid further
    # away from it, so no dropped rule can come back.  That bounds the total
    # flips by M and the sweep count by M+1.  A consequent exactly at the
    # centroid keeps its indicator; either choice gives the same endpoint.
    m = len(ws)
    z = [1] * m
    d1 = 0.0
    d2 = 0.0
    for j in range(m):
        d1 += fu[j]
        d2 += fu[j] * ws[j]
    for _ in range(m + 1):
        flipped = False
        for j in range(m):
            if z[j]:
                a = ws[j] * d1 - d2
                if (a < 0.0) if right else (a > 0.0):
                    dw = fu[j] - fl[j]
                    d1 -= dw
                    d2 -= dw * ws[j]
                    z[j] = 0
                    flipped = True
        if not flipped:
            break
    else:
        raise ConvergenceError("switch indicators did not stabilise in M+1 sweeps")
    # Recompute the endpoint from the settled indicators so the returned
    # value is a fresh evaluation of the interval weighted average, not the
    # drifted incremental accumulator ratio.
    num = 0.0
    den = 0.0
    for j in range(m):
        f = fu[j] if z[j] else fl[j]
        num += f * ws[j]
        den += f
    return num / den, tuple(z)


def sc_reduce(f_lower, f_upper, w) -> TypeReducedSet:
    """Sorting-free reduction via switch indicators.

    Returns the fixed point of the interval weighted average: recomputing
    the switch test against the returned endpoints flips no indicator.
    """
    fl, fu, ws = _check_inputs(f_lower, f_upper, w)
    if max(fl) <= 0.0:
        y_l, y_r, z_l, z_r = _degenerate_endpoints(fl, fu, ws)
        return TypeReducedSet(y_l, y_r, z_l, z_r)
    y_l, z_l = _sc_endpoint(fl, fu, ws, right=False)
    y_r, z_r = _sc_endpoint(fl, fu, ws, right=True)
    return TypeReducedSet(y_l, y_r, z_l, z_r)


def _km_assignment(fl_s, fu_s, ws_s, k: int, right: bool):
    m = len(ws_s)
    if right:
        # lower firings up to the switch, upper beyond it
        z_sorted = [0] * (k + 1) + [1] * (m - k - 1)
    else:
        z_sorted = [1] * (k + 1) + [0] * (m - k - 1)
    num = 0.0
    den = 0.0
    for j in range(m):
        f = fu_s[j] if z_sorted[j] else fl_s[j]
        num += f * ws_s[j]
        den += f
    return num / den, z_sorted


def _km_endpoint(order, fl_s, fu_s, ws_s, right: bool) -> tuple[float, list[int]]:
    m = len(ws_s)
    num = 0.0
    den = 0.0
    for j in range(m):
        h = 0.5 * (fl_s[j] + fu_s[j])
        num += h * ws_s[j]
        den += h
    y = num / den
    best_y = None
    best_z: list[int] = []
    seen: set[int] = set()
    # Each switch point gives a valid firing assignment, and the endpoint is
    # the extreme one, so tracking the best visited value converges even when
    # rounding makes the switch point dither between two neighbours.
    for _ in range(m + 1):
        k = 0
        for i in range(m):
            if ws_s[i] <= y:
                k = i
        k = min(max(k, 0), m - 2)
        if k in seen:
            break
        seen.add(k)
        y, z_sorted = _km_assignment(fl_s, fu_s, ws_s, k, right)
        if best_y is None or (y > best_y if right else y < best_y):
            best_y, best_z = y, z_sorted
    if best_y is None:
        raise ConvergenceError("switch point search made no progress")
    z = [0] * m
    for pos, j in enumerate(order):
        z[j] = best_z[pos]
    return best_y, z


def km_reduce(f_lower, f_upper, w) -> TypeReducedSet:
    """Karnik-Mendel reduction: sort by consequent, iterate the switch point.

    Endpoints agree with ``sc_reduce`` on every input; only the route (and
    its cost) differs.
    """
    fl, fu, ws = _check_inputs(f_lower, f_upper, w)
    if max(fl) <= 0.0:
        y_l, y_r, z_l, z_r = _degenerate_endpoints(fl, fu, ws)
        return TypeReducedSet(y_l, y_r, z_l, z_r)
    m = len(ws)
    if m == 1:
        return TypeReducedSet(ws[0], ws[0], (1,), (1,))
    order = sorted(range(m), key=lambda j: ws[j])
    fl_s = [fl[j] for j in order]
    fu_s = [fu[j] for j in order]
    ws_s = [ws[j] for j in order]
    y_l, z_l = _km_endpoint(order, fl_s, fu_s, ws_s, right=False)
    y_r, z_r = _km_endpoint(order, fl_s, fu_s, ws_s, right=True)
    return TypeReducedSet(y_l, y_r, tuple(z_l), tuple(z_r))


def brute_force_reduce(f_lower, f_upper, w) -> tuple[float, float]:
    """Exact endpoints by enumerating all 2^M firing assignments.

    Test oracle only: independent of the switch-indicator logic, limited
    to M <= 20 rules.
    """
    fl, fu, ws = _check_inputs(f_lower, f_upper, w)
    m = len(ws)
    if m > BRUTE_FORCE_MAX_RULES:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_RULES} rules")
    y_min = math.inf
    y_max = -math.inf
    for mask in range(1 << m):
        num = 0.0
        den = 0.0
        for j in range(m):
            f = fu[j] if mask >> j & 1 else fl[j]
            num += f * ws[j]
            den += f
        if den <= 0.0:
            continue
        y = num / den
        if y < y_min:
            y_min = y
        if y > y_max:
            y_max = y
    if not math.isfinite(y_min):
        raise NoRuleFiredError("no firing assignment has positive weight")
    return y_min, y_max


def wu_mendel_raw_bounds(f_lower, f_upper, w) -> tuple[float, float, float, float]:
    """Closed-form bounds (outer_l, inner_l, inner_r, outer_r).

    The inner bounds are the extremes of the two boundary weighted
    averages (all-lower and all-upper firings); the outer bounds subtract/
    add the classical uncertainty correction.  They bracket the exact
    endpoints: outer_l <= y_l <= inner_l and inner_r <= y_r <= outer_r.
    """
    fl, fu, ws = _check_inputs(f_lower, f_upper, w)
    s_lo = math.fsum(fl)
    if s_lo <= 0.0:
        raise NoRuleFiredError("bounds undefined when all lower firings are zero")
    s_hi = math.fsum(fu)
    y_lo_avg = math.fsum(l * v for l, v in zip(fl, ws)) / s_lo
    y_hi_avg = math.fsum(u * v for u, v in zip(fu, ws)) / s_hi
    inner_l = min(y_lo_avg, y_hi_avg)
    inner_r = max(y_lo_avg, y_hi_avg)
    w_min = min(ws)
    w_max = max(ws)
    gap = math.fsum(u - l for l, u in zip(fl, fu)) / (s_hi * s_lo)

    a_l = math.fsum(l * (v - w_min) for l, v in zip(fl, ws))
    b_l = math.fsum(u * (w_max - v) for u, v in zip(fu, ws))
    outer_l = inner_l if a_l + b_l <= 0.0 else inner_l - gap * (a_l * b_l) / (a_l + b_l)

    a_r = math.fsum(u * (v - w_min) for u, v in zip(fu, ws))
    b_r = math.fsum(l * (w_max - v) for l, v in zip(fl, ws))
    outer_r = inner_r if a_r + b_r <= 0.0 else inner_r + gap * (a_r * b_r) / (a_r + b_r)

    return outer_l, inner_l, inner_r, outer_r


def wu_mendel_bounds(f_lower, f_upper, w) -> tuple[float, float]:
    """Non-iterative endpoint estimates: midpoints of the bound pairs."""
    outer_l, inner_l, inner_r, outer_r = wu_mendel_raw_bounds(f_lower, f_upper, w)
    return 0.5 * (outer_l + inner_l), 0.5 * (inner_r + outer_r)


# ---------------------------------------------------------------------------
# Batch variants over (P, M) firing matrices
# ---------------------------------------------------------------------------


def _check_batch(FL, FU, W):
    FL = np.asarray(FL, dtype=float)
    FU = np.asarray(FU, dtype=float)
    W = np.asarray(W, dtype=float)
    if FL.ndim != 2 or FL.shape != FU.shape:
        raise ValueError("firing matrices must be 2-D with matching shapes")
    if W.ndim == 1:
        W = np.broadcast_to(W, FL.shape)
    if W.shape != FL.shape:
        raise ValueError("consequent matrix shape mismatch")
    if (FL < 0).any() or (FL > FU).any():
        raise ValueError("need 0 <= lower <= upper firings")
    if not (np.isfinite(FU).all() and np.isfinite(W).all()):
        raise ValueError("non-finite batch inputs")
    if (FU.max(axis=1) <= 0.0).any():
        raise NoRuleFiredError("some sample fires no rule")
    return FL, FU, W


def _degenerate_rows_batch(FL, FU, W, rows, y_l, y_r, Z_l, Z_r):
    masked = np.where(FU[rows] > 0.0, W[rows], np.inf)
    jmin = masked.argmin(axis=1)
    masked = np.where(FU[rows] > 0.0, W[rows], -np.inf)
    jmax = masked.argmax(axis=1)
    idx = np.arange(rows.size)
    y_l[rows] = W[rows][idx, jmin]
    y_r[rows] = W[rows][idx, jmax]
    Z_l[rows] = 0
    Z_r[rows] = 0
    Z_l[rows, jmin] = 1
    Z_r[rows, jmax] = 1


def _sc_endpoint_batch(FL, FU, W, active, right: bool):
    # Whole-set variant of the switch-indicator sweep: every sweep retests
    # all consequents against the current centroid at once and rebuilds the
    # accumulators from the new indicator set.  Same fixed point as the
    # scalar route, still sorting-free, and each visited indicator set is a
    # valid firing assignment, so tracking the best value per row absorbs
    # the ulp-level dither a tied consequent can cause.
    p, m = FL.shape
    dw = FU - FL
    dw_w = dw * W
    fl_sum = FL.sum(axis=1)
    flw_sum = (FL * W).sum(axis=1)
    z = np.ones((p, m), dtype=bool)
    d1 = FU.sum(axis=1)
    d2 = (FU * W).sum(axis=1)
    best_y = np.full(p, -np.inf if right else np.inf)
    best_z = z.copy()
    ok = active & (d1 > 0.0)
    for _ in range(m + 1):
        y = d2 / np.where(d1 > 0.0, d1, 1.0)
        improve = ok & ((y > best_y) if right else (y < best_y))
        best_y[improve] = y[improve]
        best_z[improve] = z[improve]
        # the switch test w_j * d1 - d2 > 0 is just w_j above the centroid
        z_new = (W > y[:, None]) if right else (W < y[:, None])
        if not (ok & (z_new != z).any(axis=1)).any():
            break
        z = z_new
        d1 = fl_sum + (dw * z).sum(axis=1)
        d2 = flw_sum + (dw_w * z).sum(axis=1)
        ok = active & (d1 > 0.0)
    y_out = np.where(active, best_y, np.nan)
    return y_out, best_z


def sc_reduce_batch(FL, FU, W):
    """Vectorised ``sc_reduce`` over rows; returns (y_l, y_r, Z_l, Z_r)."""
    FL, FU, W = _check_batch(FL, FU, W)
    p, m = FL.shape
    degenerate = FL.max(axis=1) <= 0.0
    active = ~degenerate
    y_l, Z_l = _sc_endpoint_batch(FL, FU, W, active, right=False)
    y_r, Z_r = _sc_endpoint_batch(FL, FU, W, active, right=True)
    Z_l = Z_l.astype(np.uint8)
    Z_r = Z_r.astype(np.uint8)
    rows = np.flatnonzero(degenerate)
    if rows.size:
        _degenerate_rows_batch(FL, FU, W, rows, y_l, y_r, Z_l, Z_r)
    return y_l, y_r, Z_l, Z_r


def _km_endpoint_batch(FLs, FUs, Ws, active, right: bool):
    p, m = FLs.shape
    half = 0.5 * (FLs + FUs)
    y = np.full(p, np.nan)
    y[active] = (half * Ws).sum(axis=1)[active] / half.sum(axis=1)[active]
    cum_lo = FLs.cumsum(axis=1)
    cum_hi = FUs.cumsum(axis=1)
    cum_lo_w = (FLs * Ws).cumsum(axis=1)
    cum_hi_w = (FUs * Ws).cumsum(axis=1)
    tot_lo = cum_lo[:, -1]
    tot_hi = cum_hi[:, -1]
    tot_lo_w = cum_lo_w[:, -1]
    tot_hi_w = cum_hi_w[:, -1]
    k = np.full(p, -2)
    best_y = np.full(p, -np.inf if right else np.inf)
    best_k = np.zeros(p, dtype=int)
    rows = np.arange(p)
    # Fixed sweep count with best-value tracking, mirroring the scalar route:
    # revisiting a switch point cannot change the best value any more.
    for _ in range(m + 1):
        k_new = np.clip((Ws <= y[:, None]).sum(axis=1) - 1, 0, m - 2)
        if (~active | (k_new == k)).all():
            break
        k = np.where(active, k_new, k)
        kc = np.clip(k, 0, m - 2)
        if right:
            num = cum_lo_w[rows, kc] + (tot_hi_w - cum_hi_w[rows, kc])
            den = cum_lo[rows, kc] + (tot_hi - cum_hi[rows, kc])
        else:
            num = cum_hi_w[rows, kc] + (tot_lo_w - cum_lo_w[rows, kc])
            den = cum_hi[rows, kc] + (tot_lo - cum_lo[rows, kc])
        y_new = num / np.where(den > 0, den, 1.0)
        improve = active & ((y_new > best_y) if right else (y_new < best_y))
        best_y[improve] = y_new[improve]
        best_k[improve] = kc[improve]
        y = np.where(active, y_new, y)
    z_sorted = np.zeros((p, m), dtype=np.uint8)
    pos = np.arange(m)[None, :]
    if right:
        z_sorted[pos > best_k[:, None]] = 1
    else:
        z_sorted[pos <= best_k[:, None]] = 1
    out = np.where(active, best_y, np.nan)
    return out, z_sorted


def km_reduce_batch(FL, FU, W):
    """Vectorised ``km_reduce`` over rows; returns (y_l, y_r, Z_l, Z_r)."""
    FL, FU, W = _check_batch(FL, FU, W)
    p, m = FL.shape
    if m == 1:
        ones = np.ones((p, 1), dtype=np.uint8)
        w0 = W[:, 0].copy()
        return w0, w0.copy(), ones, ones.copy()
    degenerate = FL.max(axis=1) <= 0.0
    active = ~degenerate
    order = np.argsort(W, axis=1, kind="stable")
    rows = np.arange(p)[:, None]
    FLs = FL[rows, order]
    FUs = FU[rows, order]
    Ws = W[rows, order]
    y_l, zl_sorted = _km_endpoint_batch(FLs, FUs, Ws, active, right=False)
    y_r, zr_sorted = _km_endpoint_batch(FLs, FUs, Ws, active, right=True)
    Z_l = np.zeros((p, m), dtype=np.uint8)
    Z_r = np.zeros((p, m), dtype=np.uint8)
    np.put_along_axis(Z_l, order, zl_sorted, axis=1)
    np.put_along_axis(Z_r, order, zr_sorted, axis=1)
    deg_rows = np.flatnonzero(degenerate)
    if deg_rows.size:
        _degenerate_rows_batch(FL, FU, W, deg_rows, y_l, y_r, Z_l, Z_r)
    return y_l, y_r, Z_l, Z_r


def brute_force_reduce_batch(FL, FU, W, chunk: int = 512):
    """Vectorised enumeration oracle; all rows must share one rule count."""
    FL, FU, W = _check_batch(FL, FU, W)
    p, m = FL.shape
    if m > BRUTE_FORCE_MAX_RULES:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_RULES} rules")
    masks = (np.arange(1 << m)[:, None] >> np.arange(m)[None, :]) & 1
    S = masks.astype(float)
    y_l = np.empty(p)
    y_r = np.empty(p)
    for start in range(0, p, chunk):
        sl = slice(start, min(start + chunk, p))
        num = (FU[sl] * W[sl]) @ S.T + (FL[sl] * W[sl]) @ (1.0 - S.T)
        den = FU[sl] @ S.T + FL[sl] @ (1.0 - S.T)
        valid = den > 0.0
        ratio = np.divide(num, den, out=np.full_like(num, np.nan), where=valid)
        y_l[sl] = np.nanmin(ratio, axis=1)
        y_r[sl] = np.nanmax(ratio, axis=1)
    return y_l, y_r
