"""Convex floating bodies of planar bodies.

For each direction u the cut offset t(u) is the support offset whose cap
{x in K : <x,u> >= t} has the prescribed area; the floating body is the
intersection of the half-planes <x,u> <= t(u).  Cap areas integrate the
chord-length function along the cut direction (composite Simpson with panel
doubling to an absolute tolerance, with a square-root substitution that
removes the boundary singularity); the offset is then root-found on the cap
area.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bodies import ConvexBody
from .geometry import InputError, check_unit, circle_grid


def chord_lengths(body, u, s_values, iters=48):
    """Lengths of the chords K ∩ {<x,u> = s}, vectorized over offsets.

    Boundary crossings are bisected on the normal-angle parametrization
    x(theta) = contact(u(theta)): <x(theta), u> is monotone on each of the
    two arcs between the angle of u and its antipode.
    """
    u = np.asarray(u, dtype=float)
    s = np.atleast_1d(np.asarray(s_values, dtype=float))
    th_u = float(np.arctan2(u[1], u[0]))
    n = len(s)

    # arc 1 (increasing): theta in [th_u - pi, th_u]; arc 2 (decreasing)
    lo = np.concatenate([np.full(n, th_u - np.pi), np.full(n, th_u)])
    hi = np.concatenate([np.full(n, th_u), np.full(n, th_u + np.pi)])
    target = np.concatenate([s, s])
    increasing = np.concatenate([np.ones(n, bool), np.zeros(n, bool)])
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        dirs = np.column_stack([np.cos(mid), np.sin(mid)])
        f = np.asarray(body.contact(dirs), dtype=float) @ u - target
        go_lo = (f < 0.0) == increasing
        lo = np.where(go_lo, mid, lo)
        hi = np.where(go_lo, hi, mid)
    mid = 0.5 * (lo + hi)
    pts = np.asarray(body.contact(np.column_stack([np.cos(mid), np.sin(mid)])), dtype=float)
    return np.linalg.norm(pts[:n] - pts[n:], axis=-1)


def _simpson_doubling(fn, length, tol, n0=32, n_max=4096):
    """Composite Simpson on [0, length] with panel doubling until the
    last refinement changes the value by at most tol."""
    if length <= 0.0:
        return 0.0
    n = n0
    prev = None
    while True:
        x = np.linspace(0.0, length, n + 1)
        y = fn(x)
        h = length / n
        val = h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum())
        if prev is not None and abs(val - prev) <= tol:
            return val
        if n >= n_max:
            return val
        prev = val
        n *= 2


def cap_area(body, u, t, tol=None):
    """Area of the cap {x in K : <x,u> >= t} of a 2-D body."""
    if body.dim != 2:
        raise InputError("cap_area needs a 2-D body")
    u = check_unit(u, name="cut direction")
    top = float(body.support(u))
    bot = -float(body.support(-u))
    if tol is None:
        tol = 1e-10 * body.scale**2
    if t >= top:
        return 0.0
    if t <= bot:
        return body_area(body, tol=tol)
    mid = 0.5 * (top + bot)
    if t >= mid:
        return _end_integral(body, u, top, t, -1.0, tol)
    total = body_area(body, tol=tol)
    return total - _end_integral(body, u, bot, t, +1.0, tol)


def _end_integral(body, u, endpoint, t, sign, tol):
    """Integral of chord length between t and an extreme offset, using the
    substitution s = endpoint + sign*xi^2 (chord length vanishes like a
    square root at the endpoint, the substitution restores smoothness)."""
    span = abs(t - endpoint)

    def fn(xi):
        s = endpoint + sign * xi**2
        return 2.0 * xi * chord_lengths(body, u, s)

    return _simpson_doubling(fn, np.sqrt(span), tol)


def body_area(body, tol=None):
    """Area of a 2-D body (two substituted end integrals, cached)."""
    cached = getattr(body, "_area_cache", None)
    if cached is not None:
        return cached
    if tol is None:
        tol = 1e-10 * body.scale**2
    u = np.array([1.0, 0.0])
    top = float(body.support(u))
    bot = -float(body.support(-u))
    mid = 0.5 * (top + bot)
    area = _end_integral(body, u, top, mid, -1.0, 0.5 * tol) + _end_integral(
        body, u, bot, mid, +1.0, 0.5 * tol
    )
    body._area_cache = area
    return area


def cut_offset(body, u, delta, tol=None):
    """Offset t with cap area exactly delta (root of cap_area - delta)."""
    u = check_unit(u, name="cut direction")
    top = float(body.support(u))
    bot = -float(body.support(-u))
    eps = 1e-12 * body.scale
    return float(
        brentq(
            lambda t: cap_area(body, u, t, tol=tol) - delta,
            bot + eps,
            top - eps,
            xtol=1e-12 * body.scale,
            rtol=8.0 * np.finfo(float).eps,
        )
    )


@dataclass
class FloatingBody2D:
    """Floating body of a 2-D parent: cut offsets t(u) with cap area delta."""

    parent: ConvexBody
    delta: float
    directions: np.ndarray
    offsets: np.ndarray
    _extra: dict = field(default_factory=dict, repr=False)

    def cut(self, u):
        """Cut offset for an arbitrary unit direction (computed on demand)."""
        u = check_unit(u, name="cut direction")
        key = u.tobytes()
        val = self._extra.get(key)
        if val is None:
            val = cut_offset(self.parent, u, self.delta)
            self._extra[key] = val
        return val

    def as_body(self):
        return SupportCutBody(self)

    def envelope(self):
        """Vertices of the envelope of the cutting lines (for plotting)."""
        u = self.directions
        t = self.offsets
        un = np.roll(u, -1, axis=0)
        tn = np.roll(t, -1)
        det = u[:, 0] * un[:, 1] - u[:, 1] * un[:, 0]
        x = (t * un[:, 1] - tn * u[:, 1]) / det
        y = (tn * u[:, 0] - t * un[:, 0]) / det
        return np.column_stack([x, y])


class SupportCutBody(ConvexBody):
    """The cut-offset table t(u) of a floating body, viewed as a support
    function.  It upper-bounds the floating body's support and coincides
    with it whenever every cutting line is tight (true for the centrally
    symmetric smooth bodies this package measures)."""

    def __init__(self, floating):
        self.floating = floating
        self.dim = 2
        self.strictly_convex = floating.parent.strictly_convex
        self.origin_symmetric = floating.parent.origin_symmetric
        self._spec = f"floating({floating.parent.spec()},{floating.delta:g})"

    def support(self, u):
        u = np.asarray(u, dtype=float)
        flat = np.atleast_2d(u)
        norms = np.linalg.norm(flat, axis=-1)
        vals = np.array(
            [n * self.floating.cut(w / n) for w, n in zip(flat, norms)]
        )
        return vals.reshape(u.shape[:-1]) if u.ndim > 1 else float(vals[0])

    def contact(self, u):
        raise InputError("cut-offset tables expose support values only")


def floating_body(body, delta, grid=256):
    """Floating body of a 2-D convex body for cap area delta.

    Requires 0 < delta < area(K)/2.
    """
    if body.dim != 2:
        raise InputError("floating_body needs a 2-D body")
    area = body_area(body)
    if not (0.0 < delta < 0.5 * area):
        raise InputError(
            f"delta must satisfy 0 < delta < area/2 = {0.5 * area:g}, got {delta:g}"
        )
    dirs = circle_grid(grid)
    offsets = np.array([cut_offset(body, u, delta) for u in dirs])
    fb = FloatingBody2D(parent=body, delta=float(delta), directions=dirs, offsets=offsets)
    for u, t in zip(dirs, offsets):
        fb._extra[u.tobytes()] = float(t)
    return fb
