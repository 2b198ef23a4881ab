"""Shared geometric primitives: directions, frames, hyperplanes, direction grids."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

UNIT_TOL = 1e-12
GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))
INVPHI = (np.sqrt(5.0) - 1.0) / 2.0
INVPHI2 = (3.0 - np.sqrt(5.0)) / 2.0


class InputError(ValueError):
    """An argument violates a documented precondition."""

    code = "input-error"


def unit(v):
    """Normalize v to a unit vector."""
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise InputError("zero vector has no direction")
    return v / n


def check_unit(u, tol=UNIT_TOL, name="direction"):
    """Validate that u is a unit vector within tol and return it as an array."""
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1.0) > tol:
        raise InputError(f"{name} must be a unit vector (|u| = {np.linalg.norm(u)!r})")
    return u


def rot90(v):
    """Rotate a 2-D vector by +90 degrees (counterclockwise)."""
    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def cross2(a, b):
    """Scalar z-component of the 2-D cross product a x b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def orthonormal_frame(normal):
    """Orthonormal basis of the complement of a unit vector, shape (dim-1, dim).

    Deterministic: the seed axis is the coordinate axis least aligned with
    the normal, so frames are reproducible across runs.
    """
    n = np.asarray(normal, dtype=float)
    dim = n.shape[0]
    if dim == 2:
        return rot90(n)[None, :]
    if dim != 3:
        raise InputError(f"frames support dim 2 or 3, got {dim}")
    k = int(np.argmin(np.abs(n)))
    e = np.zeros(3)
    e[k] = 1.0
    a1 = unit(e - n[k] * n)
    a2 = np.cross(n, a1)
    return np.stack([a1, a2])


@dataclass(frozen=True)
class Hyperplane:
    """Oriented hyperplane {x : <x, normal> = offset} with an in-plane frame.

    `axes` holds dim-1 orthonormal row vectors orthogonal to `normal`;
    `base` is the frame origin (a point on the plane).  In-plane coordinates
    of an ambient point x are (x - base) @ axes.T.
    """

    normal: np.ndarray
    offset: float
    base: np.ndarray
    axes: np.ndarray

    @property
    def dim(self):
        return self.normal.shape[0]

    def to_plane(self, points):
        points = np.asarray(points, dtype=float)
        return (points - self.base) @ self.axes.T

    def from_plane(self, coords):
        coords = np.asarray(coords, dtype=float)
        return self.base + coords @ self.axes

    def lift(self, v):
        """Map in-plane direction coordinates (..., dim-1) to ambient vectors."""
        v = np.asarray(v, dtype=float)
        return v @ self.axes


def hyperplane(normal, offset, base=None):
    """Build a Hyperplane with a deterministic in-plane frame.

    If no base point is given, the point of the plane closest to the origin
    is used.
    """
    n = check_unit(normal, name="plane normal")
    offset = float(offset)
    if base is None:
        base = offset * n
    else:
        base = np.asarray(base, dtype=float)
        if abs(float(base @ n) - offset) > 1e-9 * max(1.0, abs(offset)):
            raise InputError("base point does not lie on the plane")
    return Hyperplane(normal=n, offset=offset, base=base, axes=orthonormal_frame(n))


@dataclass(frozen=True)
class Ball:
    """Solid ball (its boundary sphere generates the tangent planes)."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if not self.radius > 0:
            raise InputError("ball radius must be positive")

    @property
    def dim(self):
        return self.center.shape[0]

    def reflected(self):
        """Central reflection -B."""
        return Ball(center=-self.center, radius=self.radius)

    def contains_origin(self):
        return float(np.linalg.norm(self.center)) <= self.radius


def circle_grid(m, seed=None):
    """m unit directions evenly spread over the full circle.

    With a seed, the whole grid is rotated by a seeded random phase
    (jitter for sweeps; None keeps the canonical grid).
    """
    if m < 1:
        raise InputError("grid size must be positive")
    offset = 0.0
    if seed is not None:
        offset = float(np.random.default_rng(seed).uniform(0.0, 1.0))
    ang = 2.0 * np.pi * (np.arange(m) + offset) / m
    return np.column_stack([np.cos(ang), np.sin(ang)])


def half_circle_pairs(m):
    """Directions v_j over the half circle plus their negatives, shape (2m, 2).

    Row j and row j+m are an antipodal pair; used by symmetry and width
    grids so h(v) and h(-v) come from one vectorized evaluation.
    """
    if m < 1:
        raise InputError("grid size must be positive")
    ang = np.pi * np.arange(m) / m
    v = np.column_stack([np.cos(ang), np.sin(ang)])
    return np.vstack([v, -v])


def fibonacci_sphere(n, seed=None):
    """Fibonacci lattice of n unit vectors on S^2, optionally seeded-rotated.

    The lattice is deterministic; a seed applies one uniform random rotation
    to the whole grid so repeated runs with the same seed are reproducible.
    """
    if n < 1:
        raise InputError("grid size must be positive")
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    phi = i * GOLDEN_ANGLE
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    if seed is not None:
        pts = pts @ random_rotation(seed).T
    return pts


def random_rotation(seed):
    """Seeded uniform-ish random rotation matrix in SO(3)."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((3, 3))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def golden_section_min(g, lo, hi, tol, polish=True):
    """Vectorized golden-section minimization of a convex function.

    g maps an array of abscissae (N,) to values (N,); [lo, hi] brackets the
    minimizer elementwise.  Shrinks every bracket below `tol`, then applies
    one parabolic polish step.  Returns (argmin, minimum) arrays.
    """
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    h = hi - lo
    c = lo + INVPHI2 * h
    d = lo + INVPHI * h
    gc = g(c)
    gd = g(d)
    width = float(np.max(h))
    if width <= tol:
        n_iter = 0
    else:
        n_iter = int(np.ceil(np.log(tol / width) / np.log(INVPHI)))
    n_iter = min(max(n_iter, 0), 200)
    for _ in range(n_iter):
        left = gc < gd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        h = hi - lo
        c_new = np.where(left, lo + INVPHI2 * h, d)
        d_new = np.where(left, c, lo + INVPHI * h)
        probe = np.where(left, c_new, d_new)
        gp = g(probe)
        gc, gd = np.where(left, gp, gd), np.where(left, gc, gp)
        c, d = c_new, d_new
    x = np.where(gc < gd, c, d)
    fx = np.minimum(gc, gd)
    if polish:
        # parabola through (c, gc), (d, gd) and the midpoint
        m = 0.5 * (lo + hi)
        gm = g(m)
        x, fx = _keep_min(x, fx, m, gm)
        denom = (c - d) * (c - m) * (d - m)
        safe = np.abs(denom) > 0
        num = (c - m) ** 2 * (gc - gd) - (c - d) ** 2 * (gc - gm)
        den = (c - m) * (gc - gd) - (c - d) * (gc - gm)
        with np.errstate(divide="ignore", invalid="ignore"):
            vertex = c - 0.5 * num / den
        ok = safe & np.isfinite(vertex) & (np.abs(den) > 0)
        vertex = np.clip(np.where(ok, vertex, x), lo, hi)
        gv = g(vertex)
        x, fx = _keep_min(x, fx, vertex, gv)
    return x, fx


def _keep_min(x, fx, y, fy):
    better = fy < fx
    return np.where(better, y, x), np.where(better, fy, fx)


def fit_plane(points):
    """Least-squares plane through a point cloud.

    Returns (unit normal, offset, max orthogonal residual); the normal is the
    singular direction of smallest spread of the centered cloud, with a
    deterministic sign (first nonzero component positive).
    """
    pts = np.asarray(points, dtype=float)
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    n = vt[-1]
    nz = np.nonzero(np.abs(n) > 1e-14)[0]
    if nz.size and n[nz[0]] < 0:
        n = -n
    offset = float(centroid @ n)
    residual = float(np.max(np.abs(centered @ n))) if len(pts) else 0.0
    return n, offset, residual
