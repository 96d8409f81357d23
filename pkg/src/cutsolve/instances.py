"""Seeded random instances and sample points for audits and stress tests.

All randomness flows from one 64-bit seed through numpy's PCG64 generator,
so audit and acceptance runs are reproducible across machines. Feasible
instances plant a known common point with an interior margin; Fejer and
convergence checks certify against that planted point, never against the
solver's own output.
"""

import numpy as np

from .sets import AffineDiagonal, Ball, Box, Halfspace, Hyperplane, Singleton

SET_KINDS = ("halfspace", "hyperplane", "ball", "box")


def rng_from_seed(seed):
    """The package-wide PRNG: PCG64 seeded with a single integer."""
    return np.random.Generator(np.random.PCG64(seed))


def sample_primitive_set(rng, dim, kind=None):
    """A random primitive set of the given kind ('halfspace', 'ball', ...)."""
    kind = kind or rng.choice(SET_KINDS)
    if kind == "halfspace":
        normal = rng.standard_normal(dim)
        while np.linalg.norm(normal) < 1e-6:
            normal = rng.standard_normal(dim)
        return Halfspace(normal, float(rng.normal(scale=2.0)))
    if kind == "hyperplane":
        normal = rng.standard_normal(dim)
        while np.linalg.norm(normal) < 1e-6:
            normal = rng.standard_normal(dim)
        return Hyperplane(normal, float(rng.normal(scale=2.0)))
    if kind == "ball":
        return Ball(rng.normal(scale=2.0, size=dim), float(rng.uniform(0.1, 3.0)))
    if kind == "box":
        a = rng.normal(scale=2.0, size=dim)
        b = rng.normal(scale=2.0, size=dim)
        return Box(np.minimum(a, b), np.maximum(a, b))
    if kind == "singleton":
        return Singleton(rng.normal(scale=2.0, size=dim))
    raise ValueError(f"unknown set kind {kind!r}")


def sample_point_in(rng, s):
    """A point guaranteed to lie in s (strictly inside where the set has interior)."""
    if isinstance(s, Halfspace):
        z = rng.normal(scale=2.0, size=s.dim)
        g = float(np.dot(s.normal, z)) - s.offset
        if g > 0.0:
            z = z - (g / float(np.dot(s.normal, s.normal))) * s.normal
        # nudge inward off the boundary
        return z - float(rng.uniform(0.01, 1.0)) * s.normal / float(np.linalg.norm(s.normal))
    if isinstance(s, Hyperplane):
        return s.project(rng.normal(scale=2.0, size=s.dim))
    if isinstance(s, Ball):
        direction = rng.standard_normal(s.dim)
        direction /= max(np.linalg.norm(direction), 1e-12)
        r = s.radius * float(rng.uniform(0.0, 0.99)) ** (1.0 / s.dim)
        return s.center + r * direction
    if isinstance(s, Box):
        return rng.uniform(s.lower, s.upper)
    if isinstance(s, AffineDiagonal):
        return np.tile(rng.normal(scale=2.0, size=s.block_dim), s.blocks)
    if isinstance(s, Singleton):
        return s.point.copy()
    raise TypeError(f"no sampler for {type(s).__name__}")


def containing_set(rng, point, kind, margin=0.2):
    """A random set of the given kind containing B(point, margin)."""
    dim = point.shape[0]
    if kind == "halfspace":
        normal = rng.standard_normal(dim)
        while np.linalg.norm(normal) < 1e-6:
            normal = rng.standard_normal(dim)
        offset = float(np.dot(normal, point)) + margin * float(np.linalg.norm(normal))
        return Halfspace(normal, offset)
    if kind == "ball":
        center = point + rng.normal(scale=1.5, size=dim)
        return Ball(center, float(np.linalg.norm(point - center)) + margin)
    if kind == "box":
        lo = point - margin - rng.uniform(0.0, 2.0, size=dim)
        hi = point + margin + rng.uniform(0.0, 2.0, size=dim)
        return Box(lo, hi)
    raise ValueError(f"unknown containing-set kind {kind!r}")


def feasible_pair(rng, dim, kinds=("halfspace", "ball", "box"), margin=0.2):
    """Two random sets sharing a planted interior point; returns (A, B, planted)."""
    planted = rng.normal(scale=2.0, size=dim)
    kind_a, kind_b = rng.choice(kinds), rng.choice(kinds)
    return (containing_set(rng, planted, kind_a, margin),
            containing_set(rng, planted, kind_b, margin),
            planted)
