"""Sections of a body by hyperplanes, in particular tangent planes of an
interior ball, exposed as (n-1)-dimensional bodies in the plane's frame.

The support of a section about the frame base point b0 is computed as the
1-D convex minimization

    h_section(v) = min_s [ h_K(V + s*n) - s*t ] - <b0, V>

where V is the ambient lift of the in-plane direction v, n the plane normal
and t its offset (Lagrangian dual of the constrained maximum over K cut by
the plane).  The minimization is bracketing + golden section with a final
parabolic polish.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bodies import ConvexBody, _as_batch
from .geometry import Ball, Hyperplane, InputError, check_unit, golden_section_min, hyperplane


class EmptySectionError(ValueError):
    code = "empty-section"


class DegenerateSectionError(ValueError):
    code = "degenerate-section"


def tangent_plane(ball, u):
    """Supporting hyperplane of the ball with outer normal u.

    The plane is {x : <x,u> = <center,u> + radius}, constructed (not solved)
    so tangency is exact; the frame base point is the tangency point.
    """
    u = check_unit(u, name="tangent normal")
    offset = float(ball.center @ u) + ball.radius
    base = ball.center + ball.radius * u
    return hyperplane(u, offset, base=base)


@dataclass(frozen=True)
class TangentFamily:
    """Family of tangent planes of one ball over a grid of outer normals."""

    ball: Ball
    grid: np.ndarray
    planes: tuple

    def __len__(self):
        return len(self.planes)


def tangent_family(ball, normals):
    normals = np.asarray(normals, dtype=float)
    planes = tuple(tangent_plane(ball, u) for u in normals)
    return TangentFamily(ball=ball, grid=normals, planes=planes)


class SectionBody(ConvexBody):
    """The (n-1)-dimensional body  plane ∩ parent  in the plane's frame."""

    def __init__(self, parent, plane, solver_tol=None):
        if plane.dim != parent.dim:
            raise InputError("plane dimension does not match body")
        if parent.dim not in (2, 3):
            raise InputError("sections need a 2-D or 3-D parent")
        scale = parent.scale
        gap_pos = float(parent.support(plane.normal)) - plane.offset
        gap_neg = float(parent.support(-plane.normal)) + plane.offset
        tol = 1e-12 * scale
        if gap_pos < -tol or gap_neg < -tol:
            raise EmptySectionError("empty-section: plane misses the body interior")
        margin = min(gap_pos, gap_neg)
        if margin <= tol:
            raise DegenerateSectionError("degenerate-section: plane tangent to the body")
        self.parent = parent
        self.plane = plane
        self.dim = parent.dim - 1
        self.strictly_convex = parent.strictly_convex
        self.origin_symmetric = bool(
            parent.origin_symmetric
            and abs(plane.offset) <= tol
            and np.linalg.norm(plane.base) <= tol
        )
        self.center_estimate = None
        # |s*| <= 4*scale/margin for the dual minimizer; see module docstring
        self._bracket = 4.0 * scale / margin + 1.0
        self._tol = 1e-10 * scale if solver_tol is None else solver_tol
        self._cache = {}
        self._spec = f"section({parent.spec()})"

    def _solve(self, v):
        """Vectorized dual solve: returns (support values, dual points s*)."""
        v = np.atleast_2d(np.asarray(v, dtype=float))
        V = self.plane.lift(v)
        n = self.plane.normal
        t = self.plane.offset

        def g(s):
            return self.parent.support(V + s[:, None] * n) - s * t

        lo = np.full(len(V), -self._bracket)
        hi = np.full(len(V), self._bracket)
        s_star, g_min = golden_section_min(g, lo, hi, self._tol)
        if not np.all(np.isfinite(g_min)):
            raise DegenerateSectionError("degenerate-section: dual minimization diverged")
        return g_min - V @ self.plane.base, s_star

    def _refine_dual(self, V, s_star):
        """Sharpen the dual points by bisecting the optimality residual
        phi(s) = <contact(V + s n), n> - t, which is monotone in s."""
        n = self.plane.normal
        t = self.plane.offset

        def phi(s):
            return self.parent.contact(V + s[:, None] * n) @ n - t

        w = np.full(len(V), max(1e-6 * self.parent.scale, 16.0 * self._tol))
        lo, hi = s_star - w, s_star + w
        for _ in range(8):
            bad = phi(lo) > 0
            if not np.any(bad):
                break
            lo = np.where(bad, lo - 4.0 * w, lo)
        for _ in range(8):
            bad = phi(hi) < 0
            if not np.any(bad):
                break
            hi = np.where(bad, hi + 4.0 * w, hi)
        for _ in range(52):
            mid = 0.5 * (lo + hi)
            neg = phi(mid) < 0
            lo = np.where(neg, mid, lo)
            hi = np.where(neg, hi, mid)
        return 0.5 * (lo + hi)

    def _cached(self, kind, v):
        v = np.asarray(v, dtype=float)
        key = (kind, v.tobytes(), v.shape)
        hit = self._cache.get(key)
        if hit is None:
            if kind == "support":
                hit = self._solve(v)[0].reshape(v.shape[:-1])
            else:
                vals, s_star = self._solve(v)
                V = self.plane.lift(np.atleast_2d(v))
                s_star = self._refine_dual(V, s_star)
                x = self.parent.contact(V + s_star[:, None] * self.plane.normal)
                hit = self.plane.to_plane(x).reshape(v.shape)
            self._cache[key] = hit
        return hit

    def support(self, v):
        v = _as_batch(v, self.dim)
        out = self._cached("support", v)
        return float(out) if out.ndim == 0 else out

    def contact(self, v):
        v = _as_batch(v, self.dim)
        return self._cached("contact", v)

    def contact_ambient(self, v):
        """Contact points of the section as ambient coordinates."""
        return self.plane.from_plane(self.contact(v))


def section_support(body, plane, v):
    """Support value(s) of the section body ∩ plane at in-plane direction v."""
    return SectionBody(body, plane).support(v)


def section_as_body(body, plane, grid_size=64):
    """SectionBody with its canonical direction grid pre-evaluated.

    Caching is transparent: pre-evaluation only warms the cache, results are
    identical with or without it.
    """
    if grid_size < 16:
        raise InputError("grid_size must be at least 16")
    section = SectionBody(body, plane)
    from .geometry import half_circle_pairs

    if section.dim == 2:
        section.support(half_circle_pairs(grid_size // 2 or 1))
    return section
