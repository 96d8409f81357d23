"""Primitive closed convex sets with exact Euclidean projections.

Each set knows its ambient dimension, a membership test, and the metric
projection ``argmin_{s in S} ||s - x||``. Degenerate parameters are rejected
at construction so projections never have to re-validate.
"""

import numpy as np

from .errors import DegenerateSet, DimensionMismatch

MEMBERSHIP_TOL = 1e-9


def as_point(x):
    """Coerce to a finite 1-D float64 vector."""
    p = np.asarray(x, dtype=float)
    if p.ndim == 0:
        p = p.reshape(1)
    if p.ndim != 1:
        raise ValueError(f"point must be 1-D, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point has non-finite coordinates")
    return p


def _check_dim(set_dim, x):
    if x.shape[0] != set_dim:
        raise DimensionMismatch(f"point has dim {x.shape[0]}, set has dim {set_dim}")


class PrimitiveSet:
    """Base class; subclasses implement project() and contains()."""

    dim = None

    def project(self, x):
        raise NotImplementedError

    def contains(self, x, tol=MEMBERSHIP_TOL):
        raise NotImplementedError

    def distance(self, x):
        x = as_point(x)
        _check_dim(self.dim, x)
        return float(np.linalg.norm(x - self.project(x)))


class Halfspace(PrimitiveSet):
    """{x : <normal, x> <= offset}"""

    def __init__(self, normal, offset):
        self.normal = as_point(normal)
        norm2 = float(np.dot(self.normal, self.normal))
        if norm2 <= 0.0:
            raise DegenerateSet("halfspace normal must be nonzero")
        self.offset = float(offset)
        self.dim = self.normal.shape[0]
        self._norm2 = norm2

    def project(self, x):
        x = as_point(x)
        _check_dim(self.dim, x)
        g = float(np.dot(self.normal, x)) - self.offset
        if g <= 0.0:
            return x
        return x - (g / self._norm2) * self.normal

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = as_point(x)
        _check_dim(self.dim, x)
        scale = max(1.0, float(np.linalg.norm(x)))
        return float(np.dot(self.normal, x)) - self.offset <= tol * scale


class Hyperplane(PrimitiveSet):
    """{x : <normal, x> = offset}"""

    def __init__(self, normal, offset):
        self.normal = as_point(normal)
        norm2 = float(np.dot(self.normal, self.normal))
        if norm2 <= 0.0:
            raise DegenerateSet("hyperplane normal must be nonzero")
        self.offset = float(offset)
        self.dim = self.normal.shape[0]
        self._norm2 = norm2

    def project(self, x):
        x = as_point(x)
        _check_dim(self.dim, x)
        g = float(np.dot(self.normal, x)) - self.offset
        return x - (g / self._norm2) * self.normal

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = as_point(x)
        _check_dim(self.dim, x)
        scale = max(1.0, float(np.linalg.norm(x)))
        return abs(float(np.dot(self.normal, x)) - self.offset) <= tol * scale


class Ball(PrimitiveSet):
    """{x : ||x - center|| <= radius}"""

    def __init__(self, center, radius):
        self.center = as_point(center)
        if radius < 0.0:
            raise DegenerateSet("ball radius must be >= 0")
        self.radius = float(radius)
        self.dim = self.center.shape[0]

    def project(self, x):
        x = as_point(x)
        _check_dim(self.dim, x)
        d = x - self.center
        dist = float(np.linalg.norm(d))
        if dist <= self.radius:
            return x
        return self.center + (self.radius / dist) * d

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = as_point(x)
        _check_dim(self.dim, x)
        scale = max(1.0, float(np.linalg.norm(x)))
        return float(np.linalg.norm(x - self.center)) <= self.radius + tol * scale


class Box(PrimitiveSet):
    """{x : lower <= x <= upper componentwise}"""

    def __init__(self, lower, upper):
        self.lower = as_point(lower)
        self.upper = as_point(upper)
        if self.lower.shape[0] != self.upper.shape[0]:
            raise DimensionMismatch("box bounds have different dimensions")
        if np.any(self.lower > self.upper):
            raise DegenerateSet("box requires lower <= upper componentwise")
        self.dim = self.lower.shape[0]

    def project(self, x):
        x = as_point(x)
        _check_dim(self.dim, x)
        return np.clip(x, self.lower, self.upper)

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = as_point(x)
        _check_dim(self.dim, x)
        scale = max(1.0, float(np.linalg.norm(x)))
        slack = tol * scale
        return bool(np.all(x >= self.lower - slack) and np.all(x <= self.upper + slack))


class AffineDiagonal(PrimitiveSet):
    """Agreement subspace {(u_1, ..., u_N) : u_1 = ... = u_N} of (R^d)^N.

    Its projection replaces every block with the block mean; the mean is
    accumulated in block order so repeated runs are bitwise identical.
    """

    def __init__(self, block_dim, blocks):
        if block_dim < 1 or blocks < 1:
            raise DegenerateSet("block_dim and blocks must be positive")
        self.block_dim = int(block_dim)
        self.blocks = int(blocks)
        self.dim = self.block_dim * self.blocks

    def block_mean(self, x):
        x = as_point(x)
        _check_dim(self.dim, x)
        parts = x.reshape(self.blocks, self.block_dim)
        total = parts[0].copy()
        for blk in parts[1:]:
            total += blk
        return total / self.blocks

    def project(self, x):
        mean = self.block_mean(x)
        return np.tile(mean, self.blocks)

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = as_point(x)
        _check_dim(self.dim, x)
        scale = max(1.0, float(np.linalg.norm(x)))
        return float(np.linalg.norm(x - self.project(x))) <= tol * scale


class Singleton(PrimitiveSet):
    """{point}; projection returns the point unconditionally."""

    def __init__(self, point):
        self.point = as_point(point)
        self.dim = self.point.shape[0]

    def project(self, x):
        x = as_point(x)
        _check_dim(self.dim, x)
        return self.point.copy()

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = as_point(x)
        _check_dim(self.dim, x)
        scale = max(1.0, float(np.linalg.norm(x)))
        return float(np.linalg.norm(x - self.point)) <= tol * scale


def project_exact(s, x):
    """Metric projection of x onto the primitive set s."""
    return s.project(as_point(x))
