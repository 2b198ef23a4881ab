"""Central-symmetry and constant-width defect measurements for 2-D bodies.

The symmetry center is fitted in the Chebyshev (min-max) sense: a body is
centrally symmetric about z iff h(v) - h(-v) = 2<z,v> for all directions, so
the defect is the smallest uniform bound on that identity over the grid.
Least squares provides the initial center / fallback; the min-max problem is
then solved exactly as a small linear program.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .geometry import InputError, check_unit, cross2, half_circle_pairs


class AmbiguousContactError(ValueError):
    code = "ambiguous-contact"


@dataclass(frozen=True)
class SymmetryReport:
    """Best symmetry center and the uniform (Chebyshev) defect."""

    center: np.ndarray
    defect: float
    grid_size: int


@dataclass(frozen=True)
class WidthReport:
    min_width: float
    max_width: float
    defect: float
    min_direction: np.ndarray
    max_direction: np.ndarray
    grid_size: int


@dataclass(frozen=True)
class BinormalChord:
    p: np.ndarray
    q: np.ndarray
    length: float
    residual: float


def _pair_values(body, grid_size):
    dirs = half_circle_pairs(grid_size)
    h = np.asarray(body.support(dirs), dtype=float)
    m = grid_size
    return dirs[:m], h[:m], h[m:]


def symmetry_fit(body, grid_size=512):
    """Fit the Chebyshev symmetry center of a 2-D body or section.

    Returns a SymmetryReport whose defect is
    min_z max_j |h(v_j) - h(-v_j) - 2<z, v_j>|.
    """
    if body.dim != 2:
        raise InputError("symmetry_fit needs a 2-D body")
    if grid_size < 32:
        raise InputError("grid_size must be at least 32")
    v, h_plus, h_minus = _pair_values(body, grid_size)
    d = h_plus - h_minus
    a = 2.0 * v
    z_ls, *_ = np.linalg.lstsq(a, d, rcond=None)
    defect_ls = float(np.max(np.abs(a @ z_ls - d)))
    z, defect = _chebyshev_center(a, d, z_ls, defect_ls)
    report = SymmetryReport(center=z, defect=defect, grid_size=grid_size)
    if hasattr(body, "center_estimate"):
        body.center_estimate = z
    return report


def _chebyshev_center(a, d, z_init, defect_init):
    """Exact min-max solve of |d_j - a_j.z| via an LP; falls back to the
    least-squares initializer if the solver declines."""
    m = len(d)
    c = np.array([0.0, 0.0, 1.0])
    a_ub = np.vstack(
        [
            np.column_stack([a, -np.ones(m)]),
            np.column_stack([-a, -np.ones(m)]),
        ]
    )
    b_ub = np.concatenate([d, -d])
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=b_ub,
        bounds=[(None, None), (None, None), (0.0, None)],
        method="highs",
    )
    if not res.success:
        return z_init, defect_init
    z = res.x[:2]
    defect = float(np.max(np.abs(a @ z - d)))
    if defect > defect_init:
        return z_init, defect_init
    return z, defect


def width(body, v):
    """Width of a 2-D body in direction v: h(v) + h(-v)."""
    v = check_unit(v, name="width direction")
    return float(body.support(v) + body.support(-v))


def width_report(body, grid_size=512):
    """Min/max width over the grid and the constant-width defect."""
    if body.dim != 2:
        raise InputError("width_report needs a 2-D body")
    if grid_size < 64:
        raise InputError("grid_size must be at least 64")
    v, h_plus, h_minus = _pair_values(body, grid_size)
    w = h_plus + h_minus
    i_min = int(np.argmin(w))
    i_max = int(np.argmax(w))
    return WidthReport(
        min_width=float(w[i_min]),
        max_width=float(w[i_max]),
        defect=float(w[i_max] - w[i_min]),
        min_direction=v[i_min],
        max_direction=v[i_max],
        grid_size=grid_size,
    )


def binormal_chord(body, v):
    """Chord between the contact points at v and -v, with the residual of
    the bi-normal condition (chord parallel to v)."""
    if body.dim != 2:
        raise InputError("binormal_chord needs a 2-D body")
    if not body.strictly_convex:
        raise AmbiguousContactError(
            "ambiguous-contact: binormal extraction needs a strictly convex body"
        )
    v = check_unit(v, name="binormal direction")
    p = np.asarray(body.contact(v), dtype=float)
    q = np.asarray(body.contact(-v), dtype=float)
    chord = p - q
    length = float(np.linalg.norm(chord))
    if length == 0.0:
        raise AmbiguousContactError("ambiguous-contact: degenerate chord")
    residual = float(abs(cross2(chord / length, v)))
    return BinormalChord(p=p, q=q, length=length, residual=residual)
