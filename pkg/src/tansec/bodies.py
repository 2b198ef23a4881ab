"""Convex bodies represented by support function + contact (gradient) map.

Every body is immutable and evaluated analytically; `support` accepts any
nonzero vectors (positively homogeneous extension) and `contact` returns the
boundary point touched by the supporting hyperplane with the given outer
normal.  Batched input of shape (..., dim) is evaluated vectorized.
"""

from __future__ import annotations

import re

import numpy as np

from .geometry import InputError, check_unit, orthonormal_frame, unit

DEFAULT_REL_TOL = 1e-9


class ConvexBody:
    """Base class: compact convex set with nonempty interior in R^2 or R^3."""

    dim = None
    strictly_convex = False
    origin_symmetric = False

    def support(self, u):
        raise NotImplementedError

    def contact(self, u):
        raise NotImplementedError

    @property
    def scale(self):
        """Max support over the +/- coordinate directions (tolerance unit)."""
        cached = getattr(self, "_scale", None)
        if cached is None:
            eye = np.eye(self.dim)
            dirs = np.vstack([eye, -eye])
            cached = float(np.max(self.support(dirs)))
            self._scale = cached
        return cached

    def spec(self):
        """Textual BodySpec for this body, if it came from the catalog."""
        return getattr(self, "_spec", self.__class__.__name__)

    def __repr__(self):
        return f"<{self.__class__.__name__} dim={self.dim} spec={self.spec()!r}>"


def _as_batch(u, dim):
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != dim:
        raise InputError(f"direction has dim {u.shape[-1]}, body has dim {dim}")
    return u


def support_eval(body, u, tol=1e-12):
    """(h_K(u), contact point) for a single unit direction u."""
    u = check_unit(u, tol=tol)
    _as_batch(u, body.dim)
    return float(body.support(u)), body.contact(u)


class BallBody(ConvexBody):
    """Origin-centered ball; `disk` in 2-D."""

    strictly_convex = True
    origin_symmetric = True

    def __init__(self, radius, dim=3):
        if not radius > 0:
            raise InputError("ball radius must be positive")
        if dim not in (2, 3):
            raise InputError("bodies live in dim 2 or 3")
        self.radius = float(radius)
        self.dim = dim
        self._spec = f"ball({radius:g})"

    def support(self, u):
        u = _as_batch(u, self.dim)
        return self.radius * np.linalg.norm(u, axis=-1)

    def contact(self, u):
        u = _as_batch(u, self.dim)
        n = np.linalg.norm(u, axis=-1, keepdims=True)
        return self.radius * u / n


class Ellipsoid(ConvexBody):
    """Axis-aligned ellipsoid {x : sum (x_i/a_i)^2 <= 1}."""

    strictly_convex = True
    origin_symmetric = True

    def __init__(self, semiaxes):
        semiaxes = np.asarray(semiaxes, dtype=float)
        if semiaxes.ndim != 1 or semiaxes.shape[0] not in (2, 3):
            raise InputError("ellipsoid takes 2 or 3 semiaxes")
        if not np.all(semiaxes > 0):
            raise InputError("semiaxes must be positive")
        self.semiaxes = semiaxes
        self.dim = semiaxes.shape[0]
        args = ",".join(f"{a:g}" for a in semiaxes)
        self._spec = f"ellipsoid({args})"

    def support(self, u):
        u = _as_batch(u, self.dim)
        return np.linalg.norm(u * self.semiaxes, axis=-1)

    def contact(self, u):
        u = _as_batch(u, self.dim)
        h = np.linalg.norm(u * self.semiaxes, axis=-1, keepdims=True)
        return u * self.semiaxes**2 / h


class LpBall(ConvexBody):
    """Scaled l_p unit ball, p >= 2: support is the scaled dual norm ||u||_q.

    The restriction p >= 2 keeps the dual exponent q in (1, 2], so both the
    support and its gradient (the contact map) are smooth away from 0.
    """

    strictly_convex = True
    origin_symmetric = True

    def __init__(self, p, scale=1.0, dim=3):
        if not p >= 2:
            raise InputError("lp_ball requires p >= 2")
        if not scale > 0:
            raise InputError("lp_ball scale must be positive")
        if dim not in (2, 3):
            raise InputError("bodies live in dim 2 or 3")
        self.p = float(p)
        self.q = self.p / (self.p - 1.0)
        self.factor = float(scale)
        self.dim = dim
        self._spec = f"lp_ball({p:g},{scale:g})"

    def support(self, u):
        u = _as_batch(u, self.dim)
        return self.factor * np.sum(np.abs(u) ** self.q, axis=-1) ** (1.0 / self.q)

    def contact(self, u):
        u = _as_batch(u, self.dim)
        a = np.abs(u)
        norm_q = np.sum(a**self.q, axis=-1, keepdims=True) ** (1.0 / self.q)
        return self.factor * np.sign(u) * (a / norm_q) ** (self.q - 1.0)


class ReuleauxTriangle(ConvexBody):
    """Reuleaux triangle of the given width, centroid at the origin (2-D).

    Boundary arcs are centered at the opposite vertices; supporting
    directions split into three vertex cones and three arc cones of 60
    degrees each.
    """

    strictly_convex = True
    origin_symmetric = False

    def __init__(self, width):
        if not width > 0:
            raise InputError("width must be positive")
        self.width = float(width)
        self.dim = 2
        rho = self.width / np.sqrt(3.0)
        ang = np.pi / 2.0 + 2.0 * np.pi * np.arange(3) / 3.0
        self.vertices = rho * np.column_stack([np.cos(ang), np.sin(ang)])
        self.vertex_angles = ang
        self._spec = f"reuleaux({width:g})"

    def _pieces(self, u):
        theta = np.arctan2(u[..., 1], u[..., 0])
        dv = np.stack(
            [np.abs(_wrap(theta - a)) for a in self.vertex_angles], axis=-1
        )
        jv = np.argmin(dv, axis=-1)
        at_vertex = np.take_along_axis(dv, jv[..., None], axis=-1)[..., 0] <= np.pi / 6 + 1e-15
        da = np.stack(
            [np.abs(_wrap(theta - a - np.pi)) for a in self.vertex_angles], axis=-1
        )
        ja = np.argmin(da, axis=-1)
        return at_vertex, jv, ja

    def support(self, u):
        u = _as_batch(u, self.dim)
        at_vertex, jv, ja = self._pieces(u)
        hv = np.sum(self.vertices[jv] * u, axis=-1)
        ha = np.sum(self.vertices[ja] * u, axis=-1) + self.width * np.linalg.norm(u, axis=-1)
        return np.where(at_vertex, hv, ha)

    def contact(self, u):
        u = _as_batch(u, self.dim)
        at_vertex, jv, ja = self._pieces(u)
        n = np.linalg.norm(u, axis=-1, keepdims=True)
        cv = self.vertices[jv]
        ca = self.vertices[ja] + self.width * u / n
        return np.where(at_vertex[..., None], cv, ca)


def _wrap(angle):
    return (angle + np.pi) % (2.0 * np.pi) - np.pi


class MinkowskiSum(ConvexBody):
    """Minkowski sum: supports add, contact points add."""

    def __init__(self, a, b):
        if a.dim != b.dim:
            raise InputError("msum operands must share a dimension")
        self.a = a
        self.b = b
        self.dim = a.dim
        self.strictly_convex = a.strictly_convex and b.strictly_convex
        self.origin_symmetric = a.origin_symmetric and b.origin_symmetric
        self._spec = f"msum({a.spec()},{b.spec()})"

    def support(self, u):
        return self.a.support(u) + self.b.support(u)

    def contact(self, u):
        return self.a.contact(u) + self.b.contact(u)


class LinearImage(ConvexBody):
    """Image A*K of a body under an invertible linear map A."""

    def __init__(self, body, matrix, spec=None):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (body.dim, body.dim):
            raise InputError("matrix shape must match body dimension")
        if abs(np.linalg.det(matrix)) < 1e-14:
            raise InputError("affine matrix must be invertible")
        self.body = body
        self.matrix = matrix
        self.dim = body.dim
        self.strictly_convex = body.strictly_convex
        self.origin_symmetric = body.origin_symmetric
        if spec is None:
            flat = ",".join(f"{x:g}" for x in matrix.ravel())
            spec = f"affine({body.spec()},mat({flat}))"
        self._spec = spec

    def support(self, u):
        u = _as_batch(u, self.dim)
        return self.body.support(u @ self.matrix)

    def contact(self, u):
        u = _as_batch(u, self.dim)
        return self.body.contact(u @ self.matrix) @ self.matrix.T


class TranslatedBody(ConvexBody):
    """Body shifted by a fixed offset."""

    def __init__(self, body, offset):
        offset = np.asarray(offset, dtype=float)
        if offset.shape != (body.dim,):
            raise InputError("offset must match body dimension")
        self.body = body
        self.offset = offset
        self.dim = body.dim
        self.strictly_convex = body.strictly_convex
        self.origin_symmetric = body.origin_symmetric and bool(
            np.all(offset == 0.0)
        )
        args = ",".join(f"{x:g}" for x in offset)
        self._spec = f"translate({body.spec()},{args})"

    def support(self, u):
        u = _as_batch(u, self.dim)
        return self.body.support(u) + u @ self.offset

    def contact(self, u):
        return self.body.contact(u) + self.offset


class ProjectedBody(ConvexBody):
    """Orthogonal projection of a 3-D body onto u^perp, as a 2-D body.

    The support function is the parent's support restricted to u^perp,
    expressed in a deterministic orthonormal frame of u^perp.
    """

    def __init__(self, parent, direction):
        if parent.dim != 3:
            raise InputError("projection needs a 3-D parent body")
        self.parent = parent
        self.direction = check_unit(direction, name="projection direction")
        self.axes = orthonormal_frame(self.direction)
        self.dim = 2
        self.strictly_convex = parent.strictly_convex
        self.origin_symmetric = parent.origin_symmetric
        args = ",".join(f"{x:g}" for x in self.direction)
        self._spec = f"project({parent.spec()},{args})"

    def support(self, v):
        v = _as_batch(v, 2)
        return self.parent.support(v @ self.axes)

    def contact(self, v):
        v = _as_batch(v, 2)
        return self.parent.contact(v @ self.axes) @ self.axes.T


def reflect_body(body):
    """Central reflection -K (support u -> h_K(-u))."""
    return LinearImage(body, -np.eye(body.dim), spec=f"reflect({body.spec()})")


def project_body(body, u):
    """Orthogonal projection of a 3-D body along unit direction u."""
    return ProjectedBody(body, u)


def translate_body(body, offset):
    return TranslatedBody(body, offset)


def affine_body(body, matrix):
    return LinearImage(body, matrix)


def minkowski_sum(a, b):
    return MinkowskiSum(a, b)


# --------------------------- BodySpec grammar ---------------------------
#
# name(args) with nesting, whitespace-insensitive, decimal literals:
#   ball(r) | disk(r) | ellipsoid(a,b[,c]) | ellipse(a,b) | lp_ball(p,scale)
#   | reuleaux(width) | msum(spec,spec) | translate(spec,x,y[,z])
#   | affine(spec, diag(d1,..)) | affine(spec, mat(a11,a12,.. row-major))

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|[(),]|[-+]?\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\S)")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        tok = m.group(1)
        out.append(tok)
        pos = m.end()
    if text[pos:].strip():
        raise InputError(f"cannot tokenize body spec near {text[pos:]!r}")
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise InputError("unexpected end of body spec")
        if expected is not None and tok != expected:
            raise InputError(f"expected {expected!r}, got {tok!r} in body spec")
        self.pos += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.peek() is not None:
            raise InputError(f"trailing input in body spec: {self.peek()!r}")
        return node

    def expr(self):
        tok = self.take()
        if re.fullmatch(r"[-+]?\d.*", tok):
            return float(tok)
        name = tok.lower()
        self.take("(")
        args = []
        if self.peek() != ")":
            args.append(self.expr())
            while self.peek() == ",":
                self.take(",")
                args.append(self.expr())
        self.take(")")
        return (name, args)


def parse_body_spec(text):
    """Parse the textual grammar into a (name, args) tree."""
    return _Parser(_tokenize(text)).parse()


def _need_numbers(name, args, count=None):
    if any(not isinstance(a, float) for a in args):
        raise InputError(f"{name} takes numeric arguments")
    if count is not None and len(args) != count:
        raise InputError(f"{name} takes {count} argument(s), got {len(args)}")
    return args


def _build_matrix(node, dim):
    if not isinstance(node, tuple):
        raise InputError("affine needs diag(...) or mat(...) as second argument")
    name, args = node
    vals = _need_numbers(name, args)
    if name == "diag":
        if len(vals) != dim:
            raise InputError(f"diag needs {dim} entries for a {dim}-D body")
        return np.diag(vals)
    if name == "mat":
        if len(vals) != dim * dim:
            raise InputError(f"mat needs {dim * dim} row-major entries")
        return np.asarray(vals).reshape(dim, dim)
    raise InputError(f"unknown matrix form {name!r}")


def _build(node, dim):
    if isinstance(node, float):
        raise InputError("expected a body spec, got a bare number")
    name, args = node
    if name in ("ball", "disk", "sphere"):
        (r,) = _need_numbers(name, args, 1)
        want = 2 if name == "disk" else dim
        if name == "disk" and dim != 2:
            raise InputError("disk(r) is 2-D; build with dim=2")
        return BallBody(r, dim=want)
    if name in ("ellipsoid", "ellipse"):
        vals = _need_numbers(name, args)
        if name == "ellipse" and len(vals) != 2:
            raise InputError("ellipse takes 2 semiaxes")
        if len(vals) != dim:
            raise InputError(
                f"ellipsoid with {len(vals)} semiaxes does not fit dim={dim}"
            )
        return Ellipsoid(vals)
    if name == "lp_ball":
        p, s = _need_numbers(name, args, 2)
        return LpBall(p, s, dim=dim)
    if name == "reuleaux":
        (w,) = _need_numbers(name, args, 1)
        if dim != 2:
            raise InputError("reuleaux is 2-D; build with dim=2")
        return ReuleauxTriangle(w)
    if name == "msum":
        if len(args) != 2:
            raise InputError("msum takes two body specs")
        return MinkowskiSum(_build(args[0], dim), _build(args[1], dim))
    if name == "translate":
        if len(args) != 1 + dim:
            raise InputError(f"translate takes a spec and {dim} offsets")
        body = _build(args[0], dim)
        offs = _need_numbers("translate", args[1:])
        return TranslatedBody(body, offs)
    if name == "affine":
        if len(args) != 2:
            raise InputError("affine takes a spec and a matrix")
        body = _build(args[0], dim)
        return LinearImage(body, _build_matrix(args[1], dim))
    raise InputError(f"unknown body {name!r}")


def body_from_spec(text, dim=3):
    """Build a catalog body from its textual spec, in ambient dimension dim."""
    if dim not in (2, 3):
        raise InputError("bodies live in dim 2 or 3")
    body = _build(parse_body_spec(text), dim)
    body._spec = re.sub(r"\s+", "", text)
    return body
