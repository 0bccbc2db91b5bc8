"""Zero isolation: interior zeros of a field, tangential zeros on the boundary.

Interior search is breadth-first bisection of the bounding box with an
exclusion bound (a cell survives only while min sampled ||v|| could still be
beaten by (max sampled ||Dv||) * diameter), followed by batched Newton
polishing of the surviving cell centers.  The bound uses sampled Jacobian
norms, not certified Lipschitz constants; paranoid mode doubles depth and
probe density.

Boundary search projects a dense grid band onto {g = 0}, polishes every
sample with Newton on the augmented system {g = 0, kept components of the
tangential part = 0}, and classifies each zero by the sign of the transverse
component.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (ResolutionExhausted, SuspectedNonIsolatedZero,
                     NotTame, ZeroOnBoundary)
from .manifold import (BOUNDARY_BAND, INWARD, OUTWARD, TANGENT,
                       boundary_chart, decompose_batch, inwardness,
                       surface_samples, interval_endpoints)

INTERIOR = "InteriorZero"
BOUNDARY_TANGENTIAL = "BoundaryTangentialZero"

ZERO_NORM_TOL = 1e-9
ISOLATION_FLOOR = 1e-6
DEDUP_RADIUS = 1e-6
CLUSTER_RADIUS = 1e-4
CELL_CAP = 400_000


@dataclass
class ZeroRecord:
    position: np.ndarray
    kind: str
    isolation_radius: float
    jacobian_det: float
    transverse_sign: str = None  # boundary kind only
    v_perp: float = 0.0

    def as_dict(self):
        d = {
            "position": [float(c) for c in self.position],
            "kind": self.kind,
            "isolation_radius": self.isolation_radius,
            "jacobian_det": self.jacobian_det,
        }
        if self.kind == BOUNDARY_TANGENTIAL:
            d["transverse_sign"] = self.transverse_sign
        return d


def unit_sphere_samples(n, count=None):
    if n == 1:
        return np.array([[-1.0], [1.0]])
    if n == 2:
        count = count or 48
        th = 2.0 * np.pi * np.arange(count) / count
        return np.stack([np.cos(th), np.sin(th)], axis=-1)
    count = count or 96
    i = np.arange(count) + 0.5
    phi = np.arccos(1.0 - 2.0 * i / count)
    theta = np.pi * (1.0 + np.sqrt(5.0)) * i
    return np.stack([np.sin(phi) * np.cos(theta),
                     np.sin(phi) * np.sin(theta),
                     np.cos(phi)], axis=-1)


def tangential_at(M, collar, v, x):
    """(v_par, v_perp) of the field at points x near/on the boundary."""
    x = np.atleast_2d(np.asarray(x, float))
    vals = v.value(x)
    _, grads = M.g.jets(x)
    return decompose_batch(collar, x, grads, vals)


# --------------------------------------------------------------------------
# Interior zeros
# --------------------------------------------------------------------------

def _probe_offsets(n, per_axis):
    fr = np.linspace(0.0, 1.0, per_axis)
    return np.array(list(itertools.product(fr, repeat=n)))


def _newton_polish(v, x0, max_iter=90, step_cap=None):
    x = np.array(x0, dtype=float)
    for _ in range(max_iter):
        val = v.value(x)
        jac = v.jacobian(x)
        dets = np.abs(np.linalg.det(jac))
        ok = dets > 1e-300
        step = np.zeros_like(val)
        step[ok] = np.linalg.solve(jac[ok], val[ok][..., None])[..., 0]
        if step_cap is not None:
            norms = np.linalg.norm(step, axis=-1, keepdims=True)
            step *= np.minimum(1.0, step_cap / np.maximum(norms, 1e-300))
        x = x - step
        # linear-rate convergence at degenerate zeros needs the full budget,
        # so stop on settled steps rather than small residuals
        if np.max(np.linalg.norm(step, axis=-1)) < 1e-14:
            break
    return x


def _dedup(points, radius=DEDUP_RADIUS):
    reps = []
    for p in points:
        if not any(np.linalg.norm(p - q) < radius for q in reps):
            reps.append(p)
    return reps


def find_interior_zeros(M, v, depth=9, paranoid=False):
    """Isolated zeros of v in the interior of {g <= 0}."""
    n = M.n
    per_axis = 5 if paranoid else 3
    if paranoid:
        depth *= 2
    offsets = _probe_offsets(n, per_axis)
    lo = M.bbox[:, 0][None, :].copy()
    hi = M.bbox[:, 1][None, :].copy()
    target = (M.bbox[:, 1] - M.bbox[:, 0]) / 2.0 ** depth
    while True:
        size = hi - lo
        pending = np.any(size > target[None, :] * 1.0000001, axis=-1)
        if not np.any(pending):
            break
        # exclusion bound on the cells still to be refined
        m = len(lo)
        pts = (lo[:, None, :] + offsets[None, :, :] * (hi - lo)[:, None, :])
        flat = pts.reshape(-1, n)
        norms = v.norms(flat).reshape(m, -1)
        jacs = v.jacobian(flat)
        jnorm = np.sqrt(np.sum(jacs * jacs, axis=(-2, -1))).reshape(m, -1)
        diam = np.linalg.norm(hi - lo, axis=-1)
        keep = norms.min(axis=1) - jnorm.max(axis=1) * diam <= 0.0
        keep |= ~pending  # fully refined cells are kept for polishing as-is
        lo, hi = lo[keep], hi[keep]
        pending = pending[keep]
        if not np.any(pending):
            break
        # split pending cells along their longest axis
        size = hi - lo
        rel = size / (M.bbox[:, 1] - M.bbox[:, 0])[None, :]
        axis = np.argmax(rel, axis=-1)
        split_lo, split_hi = lo[pending], hi[pending]
        ax = axis[pending]
        mid = 0.5 * (split_lo[np.arange(len(ax)), ax] + split_hi[np.arange(len(ax)), ax])
        left_hi = split_hi.copy()
        left_hi[np.arange(len(ax)), ax] = mid
        right_lo = split_lo.copy()
        right_lo[np.arange(len(ax)), ax] = mid
        lo = np.vstack([lo[~pending], split_lo, right_lo])
        hi = np.vstack([hi[~pending], left_hi, split_hi])
        if len(lo) > CELL_CAP:
            raise ResolutionExhausted(
                f"interior subdivision exceeded {CELL_CAP} active cells")
    if len(lo) == 0:
        return []
    centers = 0.5 * (lo + hi)
    polished = _newton_polish(v, centers, step_cap=0.25 * M.diameter)
    res = v.norms(polished)
    inside = np.all((polished >= M.bbox[:, 0]) & (polished <= M.bbox[:, 1]), axis=-1)
    converged = polished[(res < ZERO_NORM_TOL * 1e-2) & inside]
    zeros = _dedup([np.array(t) for t in sorted(map(tuple, converged))])
    for z in zeros:
        nearby = sum(1 for w in zeros if np.linalg.norm(z - w) < CLUSTER_RADIUS)
        if nearby > 8:
            raise SuspectedNonIsolatedZero(
                f"{nearby} converged zeros within {CLUSTER_RADIUS} of {z}")
    records = []
    kept = []
    for z in zeros:
        gz = M.g.evaluate(z)
        if abs(gz) < BOUNDARY_BAND:
            raise ZeroOnBoundary(f"field vanishes on the boundary near {z}")
        if gz > 0:
            continue  # converged to a zero outside the domain
        kept.append(z)
    for z in kept:
        r = _isolation_radius_interior(M, v, z, kept)
        det = float(np.linalg.det(v.jacobian_at(z)))
        records.append(ZeroRecord(z, INTERIOR, r, det))
    records.sort(key=lambda rec: tuple(rec.position))
    return records


def _isolation_radius_interior(M, v, z, all_zeros):
    sphere = unit_sphere_samples(M.n)
    sep = min((np.linalg.norm(z - w) for w in all_zeros
               if np.linalg.norm(z - w) > 0), default=np.inf)
    r = 1.0
    for _ in range(45):
        pts = z[None, :] + r * sphere
        in_box = np.all((pts >= M.bbox[:, 0]) & (pts <= M.bbox[:, 1]))
        if r < 0.45 * sep and in_box:
            gvals = M.g.values(pts)
            if np.max(gvals) < 0.0 and np.min(v.norms(pts)) > ISOLATION_FLOOR:
                return r
        r *= 0.5
    raise ResolutionExhausted(f"no isolation radius found for the zero at {z}")


# --------------------------------------------------------------------------
# Boundary tangential zeros
# --------------------------------------------------------------------------

def find_boundary_tangential_zeros(M, collar, v, resolution=None,
                                   band=BOUNDARY_BAND, max_seeds=4000):
    if M.n == 1:
        return _endpoint_records(M, collar, v)
    pts = surface_samples(M, resolution)
    vals = v.value(pts)
    vnorm = np.linalg.norm(vals, axis=-1)
    scale = float(np.median(vnorm)) + 1e-30
    if np.min(vnorm) < 1e-7 * scale:
        raise ZeroOnBoundary("field appears to vanish on the boundary")
    _, grads = M.g.jets(pts)
    gnorm = np.linalg.norm(grads, axis=-1)
    v_par, v_perp = decompose_batch(collar, pts, grads, vals)
    par_norm = np.linalg.norm(v_par, axis=-1)
    if np.max(par_norm) < 1e-8 * scale:
        signs = v_perp / np.maximum(gnorm, 1e-300)
        if np.all(signs > 1e-10):
            uniform = INWARD
        elif np.all(signs < -1e-10):
            uniform = OUTWARD
        else:
            uniform = None
        raise NotTame("tangential component vanishes identically on the boundary",
                      uniform_sign=uniform)
    order = np.argsort(par_norm)
    seeds = pts[order[:max_seeds]]
    converged = _polish_boundary(M, collar, v, seeds, scale)
    zeros = _dedup([np.array(t) for t in sorted(map(tuple, converged))])
    for z in zeros:
        nearby = sum(1 for w in zeros if np.linalg.norm(z - w) < CLUSTER_RADIUS)
        if nearby > 8:
            raise SuspectedNonIsolatedZero(
                f"{nearby} tangential zeros within {CLUSTER_RADIUS} of {z}")
    records = []
    for z in zeros:
        if np.linalg.norm(v.value_at(z)) < ZERO_NORM_TOL:
            raise ZeroOnBoundary(f"field vanishes on the boundary at {z}")
        rec = _boundary_record(M, collar, v, z, zeros, scale)
        records.append(rec)
    records.sort(key=lambda rec: tuple(rec.position))
    return records


def _polish_boundary(M, collar, v, seeds, scale, max_iter=35):
    n = M.n
    if len(seeds) == 0:
        return []
    _, grads = M.g.jets(seeds)
    dropped = np.argmax(np.abs(grads), axis=-1)
    out = []
    h = 1e-6
    cap = 0.03 * M.diameter
    for axis in range(n):
        x = seeds[dropped == axis]
        if len(x) == 0:
            continue
        kept = [i for i in range(n) if i != axis]

        def system(x):
            xv = np.atleast_2d(x)
            gv, gg = M.g.jets(xv)
            vv = v.value(xv)
            v_par, _ = decompose_batch(collar, xv, gg, vv)
            return np.concatenate([gv[:, None], v_par[:, kept]], axis=-1)

        for _ in range(max_iter):
            f0 = system(x)
            cols = []
            for i in range(n):
                dx = np.zeros(n)
                dx[i] = h
                cols.append((system(x + dx) - system(x - dx)) / (2 * h))
            jac = np.stack(cols, axis=-1)
            dets = np.abs(np.linalg.det(jac))
            ok = dets > 1e-300
            step = np.zeros_like(f0)
            step[ok] = np.linalg.solve(jac[ok], f0[ok][..., None])[..., 0]
            norms = np.linalg.norm(step, axis=-1, keepdims=True)
            step *= np.minimum(1.0, cap / np.maximum(norms, 1e-300))
            x = x - step
            if np.max(norms) < 1e-14:
                break
        # accept on the full tangential norm, not just the kept components:
        # a seed polished under the wrong dropped axis can zero its kept
        # components while the remaining tangential component stays nonzero
        gv, gg = M.g.jets(x)
        v_par, _ = decompose_batch(collar, x, gg, v.value(x))
        resid = np.sqrt(gv ** 2 + np.sum(v_par ** 2, axis=-1))
        good = resid < 1e-10 * max(1.0, scale)
        good &= np.all((x >= M.bbox[:, 0]) & (x <= M.bbox[:, 1]), axis=-1)
        out.extend(x[good])
    return out


def _boundary_record(M, collar, v, z, all_zeros, scale):
    chart = boundary_chart(M, z)
    vals = v.value_at(z)
    _, grads = M.g.jets(z[None, :])
    grad = grads[0]
    v_par, v_perp = decompose_batch(collar, z[None, :], grads, vals[None, :])
    v_perp = float(v_perp[0])
    sign = inwardness(v_perp / np.linalg.norm(grad))
    det = _chart_jacobian_det(M, collar, v, chart)
    r = _isolation_radius_boundary(M, collar, v, chart, z, all_zeros)
    return ZeroRecord(z, BOUNDARY_TANGENTIAL, r, det, sign, v_perp)


def chart_tangential_field(M, collar, v, chart):
    """The tangential part of v in chart coordinates, as a batch callable."""

    def f(u):
        x = chart.point(u)
        v_par, _ = tangential_at(M, collar, v, x)
        return chart.push(v_par)

    return f


def _chart_jacobian_det(M, collar, v, chart):
    f = chart_tangential_field(M, collar, v, chart)
    k = M.n - 1
    h = min(1e-6, 0.01 * chart.radius)
    cols = []
    for i in range(k):
        du = np.zeros(k)
        du[i] = h
        cols.append((f(du[None, :]) - f(-du[None, :]))[0] / (2 * h))
    jac = np.stack(cols, axis=-1)
    return float(np.linalg.det(jac))


def _isolation_radius_boundary(M, collar, v, chart, z, all_zeros):
    f = chart_tangential_field(M, collar, v, chart)
    if M.n == 2:
        ring = np.array([[-1.0], [1.0]])
    else:
        th = 2.0 * np.pi * np.arange(32) / 32
        ring = np.stack([np.cos(th), np.sin(th)], axis=-1)
    sep = min((np.linalg.norm(z - w) for w in all_zeros
               if np.linalg.norm(z - w) > 0), default=np.inf)
    r = chart.radius
    for _ in range(45):
        if r < 0.45 * sep:
            try:
                if np.min(np.linalg.norm(f(r * ring), axis=-1)) > ISOLATION_FLOOR:
                    return r
            except Exception:
                pass
        r *= 0.5
    raise ResolutionExhausted(f"no boundary isolation radius at {z}")


def _endpoint_records(M, collar, v):
    ends = interval_endpoints(M)
    if len(ends) == 0:
        raise ZeroOnBoundary("no boundary points found for the interval domain")
    records = []
    for e in ends:
        z = np.array([e])
        val = v.value_at(z)
        if abs(val[0]) < ZERO_NORM_TOL:
            raise ZeroOnBoundary(f"field vanishes at the endpoint {e}")
        _, grads = M.g.jets(z[None, :])
        grad = grads[0]
        v_perp = float(collar.transverse(z[None, :], grads, val[None, :])[0])
        sign = inwardness(v_perp / np.linalg.norm(grad))
        if sign == TANGENT:
            raise NotTame(f"transverse component vanishes at the endpoint {e}")
        sep = min((abs(e - o) for o in ends if o != e), default=2.0)
        records.append(ZeroRecord(z, BOUNDARY_TANGENTIAL, 0.45 * sep, 1.0,
                                  sign, v_perp))
    records.sort(key=lambda rec: tuple(rec.position))
    return records


def check_transverse(record: ZeroRecord, v) -> bool:
    """0-transversality: nonsingular linearization in the relevant coordinates."""
    return abs(record.jacobian_det) > 1e-8
