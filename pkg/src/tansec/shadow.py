"""Shadow boundaries, section-center loci, and shape-fitting residuals
(homothety, ellipse, disk, body of revolution)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .geometry import (
    InputError,
    check_unit,
    circle_grid,
    fit_plane,
    half_circle_pairs,
    orthonormal_frame,
    unit,
)
from .sections import SectionBody, tangent_plane
from .symmetry import symmetry_fit


class ShadowAmbiguousError(ValueError):
    code = "shadow-ambiguous"


class DegenerateAxisError(ValueError):
    code = "degenerate-axis"


@dataclass(frozen=True)
class ShadowSample:
    """Boundary points whose supporting plane is parallel to `direction`,
    with the best-fit plane through them."""

    direction: np.ndarray
    points: np.ndarray
    plane_normal: np.ndarray
    plane_offset: float
    residual: float


@dataclass(frozen=True)
class CenterLocusEntry:
    normal: np.ndarray
    center: np.ndarray
    distance: float


@dataclass(frozen=True)
class CenterLocusReport:
    """Symmetry centers of tangent sections parallel to the derived axis,
    with signed distances to the central reference plane."""

    pi_normal: np.ndarray
    axis: np.ndarray
    entries: tuple
    max_distance: float
    projection_hypothesis_ok: bool


@dataclass(frozen=True)
class HomothetyReport:
    """Best uniform min-max fit h_A ~ ratio*h_B + <translation, .>."""

    ratio: float
    translation: np.ndarray
    center: np.ndarray  # homothety center when ratio != 1, else None
    defect: float
    rel_defect: float


def shadow_boundary(body, direction, grid=256):
    """Sample the shadow boundary of a strictly convex 3-D body.

    Points are contact(v) for v on a grid of the unit circle orthogonal to
    `direction`; planarity is the best-fit plane with its max orthogonal
    residual.
    """
    if body.dim != 3:
        raise InputError("shadow_boundary needs a 3-D body")
    if not body.strictly_convex:
        raise ShadowAmbiguousError(
            "shadow-ambiguous: shadow boundary of a non-strict body is not a curve"
        )
    u = check_unit(direction, name="shadow direction")
    axes = orthonormal_frame(u)
    v = circle_grid(grid) @ axes
    points = np.asarray(body.contact(v), dtype=float)
    normal, offset, residual = fit_plane(points)
    return ShadowSample(
        direction=u,
        points=points,
        plane_normal=normal,
        plane_offset=offset,
        residual=residual,
    )


def section_center_locus(body, ball, pi_normal, grid=128, inplane_grid=512):
    """Centers of tangent sections parallel to the derived translation axis.

    `pi_normal` is the normal of the central reference plane through O.  The
    tangent plane of the ball parallel to that plane defines the translation
    vector of its section (twice the section's symmetry center), the sweep
    then runs over tangent planes parallel to that vector, and each fitted
    center's signed distance to the reference plane is reported.
    """
    if body.dim != 3:
        raise InputError("section_center_locus needs a 3-D body")
    n_pi = check_unit(pi_normal, name="reference plane normal")
    gamma = tangent_plane(ball, n_pi)
    s_gamma = SectionBody(body, gamma)
    fit = symmetry_fit(s_gamma, grid_size=inplane_grid)
    z_gamma = gamma.from_plane(fit.center)
    if np.linalg.norm(z_gamma) <= 1e-9 * body.scale:
        raise DegenerateAxisError(
            "degenerate-axis: reference section is centered at O"
        )
    axis = unit(z_gamma)  # translation vector direction (-2 z is parallel)

    # Lemma-3-style hypothesis flag: O outside the projected ball along axis
    perp = ball.center - (ball.center @ axis) * axis
    hypothesis_ok = bool(np.linalg.norm(perp) > ball.radius)

    frame = orthonormal_frame(axis)
    normals = circle_grid(grid) @ frame
    entries = []
    for m in normals:
        plane = tangent_plane(ball, m)
        section = SectionBody(body, plane)
        rep = symmetry_fit(section, grid_size=inplane_grid)
        center = plane.from_plane(rep.center)
        entries.append(
            CenterLocusEntry(
                normal=m, center=center, distance=float(center @ n_pi)
            )
        )
    max_distance = max(abs(e.distance) for e in entries)
    return CenterLocusReport(
        pi_normal=n_pi,
        axis=axis,
        entries=tuple(entries),
        max_distance=max_distance,
        projection_hypothesis_ok=hypothesis_ok,
    )


def homothety_defect(body_a, body_b, grid=512):
    """Fit ratio rho > 0 and translation tau minimizing
    max_v |h_A(v) - rho*h_B(v) - <tau, v>| over the direction grid.

    Rotation is deliberately excluded: the fit certifies "similar and
    similarly situated" (translates + dilation only).
    """
    if body_a.dim != 2 or body_b.dim != 2:
        raise InputError("homothety_defect compares 2-D bodies")
    dirs = half_circle_pairs(grid)
    ha = np.asarray(body_a.support(dirs), dtype=float)
    hb = np.asarray(body_b.support(dirs), dtype=float)
    m = len(dirs)
    # variables: rho, tau_x, tau_y, t ; constraints |ha - rho*hb - tau.v| <= t
    cols = np.column_stack([hb, dirs[:, 0], dirs[:, 1]])
    a_ub = np.vstack(
        [
            np.column_stack([cols, -np.ones(m)]),
            np.column_stack([-cols, -np.ones(m)]),
        ]
    )
    b_ub = np.concatenate([ha, -ha])
    res = linprog(
        np.array([0.0, 0.0, 0.0, 1.0]),
        A_ub=a_ub,
        b_ub=b_ub,
        bounds=[(1e-12, None), (None, None), (None, None), (0.0, None)],
        method="highs",
    )
    if not res.success:
        # least-squares fallback on the same linear parametrization
        sol, *_ = np.linalg.lstsq(cols, ha, rcond=None)
        rho, tau = float(sol[0]), sol[1:]
        defect = float(np.max(np.abs(ha - cols @ sol)))
    else:
        rho, tau = float(res.x[0]), res.x[1:3]
        defect = float(np.max(np.abs(ha - cols @ res.x[:3])))
    center = None if abs(1.0 - rho) < 1e-12 else tau / (1.0 - rho)
    scale = max(body_a.scale, body_b.scale)
    return HomothetyReport(
        ratio=rho,
        translation=tau,
        center=center,
        defect=defect,
        rel_defect=defect / scale,
    )


def ellipse_residual(body, fit_grid=256, val_grid=509):
    """Deviation of a 2-D O-symmetric body from its best centered ellipse.

    Fits a quadratic form <x,Qx> = 1 by least squares on boundary contact
    samples and returns max |<x,Qx> - 1| on a finer validation grid.  An
    indefinite fit means "not elliptic at all": returns +inf.
    """
    if body.dim != 2:
        raise InputError("ellipse_residual needs a 2-D body")
    q = _fit_quadratic(body, fit_grid)
    if q is None:
        return float("inf")
    x = np.asarray(body.contact(circle_grid(val_grid)), dtype=float)
    vals = np.einsum("ij,jk,ik->i", x, q, x)
    return float(np.max(np.abs(vals - 1.0)))


def _fit_quadratic(body, grid):
    x = np.asarray(body.contact(circle_grid(grid)), dtype=float)
    design = np.column_stack([x[:, 0] ** 2, 2.0 * x[:, 0] * x[:, 1], x[:, 1] ** 2])
    coef, *_ = np.linalg.lstsq(design, np.ones(len(x)), rcond=None)
    q = np.array([[coef[0], coef[1]], [coef[1], coef[2]]])
    if np.any(np.linalg.eigvalsh(q) <= 0.0):
        return None
    return q


def disk_residual(body, grid=256):
    """Max deviation of the support values from their mean radius."""
    if body.dim != 2:
        raise InputError("disk_residual needs a 2-D body")
    h = np.asarray(body.support(circle_grid(grid)), dtype=float)
    return float(np.max(np.abs(h - h.mean())))


def revolution_residual(body, axis, rings=24, azimuth=64):
    """Max spread of support values around rings of constant polar angle
    about the axis; zero for a body of revolution."""
    if body.dim != 3:
        raise InputError("revolution_residual needs a 3-D body")
    a = check_unit(axis, name="revolution axis")
    frame = orthonormal_frame(a)
    polar = np.pi * (np.arange(1, rings + 1)) / (rings + 1)
    phi = 2.0 * np.pi * np.arange(azimuth) / azimuth
    ring_dirs = (
        np.cos(polar)[:, None, None] * a
        + np.sin(polar)[:, None, None]
        * (np.cos(phi)[None, :, None] * frame[0] + np.sin(phi)[None, :, None] * frame[1])
    )
    h = np.asarray(body.support(ring_dirs), dtype=float)
    return float(np.max(h.max(axis=1) - h.min(axis=1)))
