"""Alternating tangent-chord construction on a planar O-symmetric body.

From a boundary point of M, each step draws the tangent line to an interior
circle (B, then -B, alternating) chosen by the right-frame orientation rule
(the circle lies on the left of the directed chord), and follows it to the
second boundary intersection.  The limit object is a common tangent line of
B and -B through the origin; `limit_line_check` certifies it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Ball, InputError, circle_grid, golden_section_min, rot90, unit


class InteriorStartError(ValueError):
    code = "interior-start"


class GrazingError(ValueError):
    code = "grazing"


class NotConvergedError(ValueError):
    code = "not-converged"


@dataclass(frozen=True)
class ChordState:
    """One tangent chord: from boundary point a to boundary point b."""

    a: np.ndarray
    b: np.ndarray
    step_index: int
    which: str  # circle the chord is tangent to: "B" or "-B"


@dataclass
class ChordTrace:
    states: list = field(default_factory=list)
    lines: list = field(default_factory=list)  # (normal, offset) per chord
    dist_to_o: np.ndarray = None
    tangency_residual: np.ndarray = None
    limit_line: tuple = None

    @property
    def converged(self):
        return self.limit_line is not None

    @property
    def steps(self):
        return len(self.states)

    def monotone_tail(self, k=50, jitter=1e-12):
        """Whether dist-to-O is non-increasing over the last k chords."""
        d = self.dist_to_o[-k:]
        return bool(np.all(np.diff(d) <= jitter))


def _angle(v):
    return float(np.arctan2(v[1], v[0]))


def _dir(theta):
    return np.array([np.cos(theta), np.sin(theta)])


def line_intersections(body, normal, offset, iters=54):
    """Both intersection points of bd(body) with the line {<x,n> = t}.

    Uses the normal-angle parametrization x(theta) = contact(u(theta)):
    <x(theta), n> - t is monotone on each of the two arcs between the
    normal's angle and its antipode, so each root is bisected.  Requires the
    line to meet the interior.
    """
    t = offset
    th_n = _angle(normal)

    def f(theta):
        return float(body.contact(_dir(theta)) @ normal) - t

    if f(th_n) <= 0 or f(th_n + np.pi) >= 0:
        raise GrazingError("grazing: line does not cross the body interior")
    roots = []
    for lo, hi, increasing in ((th_n - np.pi, th_n, True), (th_n, th_n + np.pi, False)):
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if (fm < 0.0) == increasing:
                lo = mid
            else:
                hi = mid
        theta = 0.5 * (lo + hi)
        roots.append(np.asarray(body.contact(_dir(theta)), dtype=float))
    return roots


def _tangent_line(circle, from_pt, orientation):
    """Directed tangent line from an exterior point, circle on the left for
    orientation +1 (the paper's right-frame rule), on the right for -1."""
    c = circle.center
    r = circle.radius
    delta = c - from_pt
    d = float(np.linalg.norm(delta))
    if d <= r * (1.0 + 1e-12):
        raise InteriorStartError("interior-start: point inside the circle")
    beta = float(np.arcsin(min(1.0, r / d)))
    ca, sa = np.cos(beta), np.sin(beta)
    # rotate (c - from)/d by -orientation*beta
    dir0 = delta / d
    w = np.array([ca * dir0[0] + orientation * sa * dir0[1],
                  -orientation * sa * dir0[0] + ca * dir0[1]])
    w = w / np.linalg.norm(w)
    n_line = rot90(w)
    offset = float(c @ n_line) - orientation * r  # exact tangency by construction
    return w, n_line, offset


def tangent_step(body, circle, from_pt, orientation=1):
    """Second boundary intersection of the oriented tangent chord.

    orientation +1 follows the construction's right-frame rule (the circle
    lies in the positive half-plane of the directed chord); -1 mirrors it.
    """
    if body.dim != 2:
        raise InputError("tangent_step needs a 2-D body")
    if orientation not in (1, -1):
        raise InputError("orientation must be +1 or -1")
    b, _, _ = _tangent_step(body, circle, np.asarray(from_pt, dtype=float), orientation)
    return b


def _tangent_step(body, circle, from_pt, orientation):
    w, n_line, offset = _tangent_line(circle, from_pt, orientation)
    roots = line_intersections(body, n_line, offset)
    along = [float((q - from_pt) @ w) for q in roots]
    k = int(np.argmax(along))
    if along[k] <= 1e-9 * body.scale:
        raise GrazingError("grazing: tangent line fails to re-cross the boundary")
    return roots[k], n_line, offset


def boundary_point(body, toward):
    """Boundary point of a 2-D body along the ray from the origin toward a
    point (the body must contain the origin in its interior)."""
    w = unit(np.asarray(toward, dtype=float))
    n_line = rot90(w)
    roots = line_intersections(body, n_line, 0.0)
    along = [float(q @ w) for q in roots]
    k = int(np.argmax(along))
    if along[k] <= 0:
        raise InputError("origin ray does not exit through the boundary")
    return roots[k]


def _check_hypotheses(body, ball):
    if body.dim != 2:
        raise InputError("chord iteration runs on 2-D bodies")
    if not body.origin_symmetric:
        raise InputError("not-centered: body must be O-symmetric")
    if not body.strictly_convex:
        raise InputError("not-strict: body must be strictly convex")
    if ball.contains_origin():
        raise InputError("ball-contains-O: hypothesis requires O outside B")
    u = circle_grid(256)
    gap = body.support(u) - (u @ ball.center + ball.radius)
    if float(np.min(gap)) <= 0.0:
        raise InputError("ball-not-interior: B must lie in the interior of the body")


def iterate_chords(body, ball, start, max_steps=10000, stop_tol=1e-6, orientation=1):
    """Alternate tangent steps with B and -B until the chord line passes
    within stop_tol of the origin (or max_steps tangent steps).

    The start point is snapped to the boundary along the ray from O.  The
    stop criterion is the distance of the chord line to O: the construction
    guarantees convergence of the limit line's defining property, not of the
    endpoint sequence itself.
    """
    _check_hypotheses(body, ball)
    trace = ChordTrace()
    dists = []
    tang = []
    a = boundary_point(body, start)
    circles = (ball, ball.reflected())
    names = ("B", "-B")
    for i in range(max_steps):
        which = i % 2
        nxt, n_line, offset = _tangent_step(body, circles[which], a, orientation)
        trace.states.append(ChordState(a=a, b=nxt, step_index=i, which=names[which]))
        trace.lines.append((n_line, offset))
        c = circles[which].center
        tang.append(abs(abs(float(c @ n_line) - offset) - ball.radius))
        dists.append(abs(offset))
        a = nxt
        if dists[-1] <= stop_tol:
            trace.limit_line = (n_line, offset)
            break
    trace.dist_to_o = np.asarray(dists)
    trace.tangency_residual = np.asarray(tang)
    return trace


def line_residuals(line, ball):
    """(tangency to B, tangency to -B, distance to O) residuals of a line.

    The line is (unit normal, offset); all three vanish for a common
    supporting line of B and -B through the origin.
    """
    normal, offset = line
    normal = np.asarray(normal, dtype=float)
    c = ball.center
    r = ball.radius
    res_b = abs(abs(float(c @ normal) - offset) - r)
    res_nb = abs(abs(float(-c @ normal) - offset) - r)
    return res_b, res_nb, abs(float(offset))


def limit_line_check(trace, ball):
    """Residual triple for a trace's limit line (see line_residuals)."""
    if isinstance(trace, ChordTrace):
        if trace.limit_line is None:
            raise NotConvergedError("not-converged: trace has no limit line")
        line = trace.limit_line
    else:
        line = trace
    return line_residuals(line, ball)


def boundary_distance(body, x, coarse=512):
    """Signed distance from x to bd(body): max_u <x,u> - h(u) over unit u.

    Negative inside, zero on the boundary, positive outside; used as the
    support-based membership certificate in diagnostics and tests.
    """
    x = np.asarray(x, dtype=float)
    u = circle_grid(coarse)
    vals = u @ x - body.support(u)
    k = int(np.argmax(vals))
    th0 = 2.0 * np.pi * k / coarse
    w = 2.0 * np.pi / coarse

    def neg(theta):
        d = np.column_stack([np.cos(theta), np.sin(theta)])
        return -(d @ x - body.support(d))

    th, fv = golden_section_min(neg, np.array([th0 - w]), np.array([th0 + w]), 1e-14)
    return float(-fv[0])
