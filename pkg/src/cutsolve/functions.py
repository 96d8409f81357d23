"""Convex functions (value + subgradient selection) and the built-in catalog.

A ConvexFunction powers a subgradient-projector cutter for its zero
sublevel set:

    P(x) = x - (f(x) / ||s(x)||^2) * s(x)   if f(x) > 0,   P(x) = x otherwise.

The selection s must be a valid subgradient everywhere; at nondifferentiable
points the catalog picks the right-derivative in 1-D and the lowest active
index in max-type functions, so traces are reproducible.
"""

import math

import numpy as np

from .errors import DimensionMismatch, ZeroSubgradient
from .operators import CustomCutter, SubgradientCutter
from .sets import as_point


class ConvexFunction:
    """Finite-valued function on R^dim with a deterministic subgradient selection.

    ``convex=False`` marks entries (the ellipse residual) that are shipped for
    permissive-mode experiments only; the subgradient-inequality validation is
    skipped for them.
    """

    def __init__(self, value, subgrad, dim, name="", convex=True):
        self._value = value
        self._subgrad = subgrad
        self.dim = int(dim)
        self.name = name
        self.convex = convex

    def value(self, x):
        x = as_point(x)
        if x.shape[0] != self.dim:
            raise DimensionMismatch(f"point dim {x.shape[0]} != function dim {self.dim}")
        return float(self._value(x))

    def subgrad(self, x):
        x = as_point(x)
        if x.shape[0] != self.dim:
            raise DimensionMismatch(f"point dim {x.shape[0]} != function dim {self.dim}")
        return as_point(self._subgrad(x))

    def cutter(self):
        return SubgradientCutter(self)


def subgradient_project(f, x):
    """Subgradient projector of f at x.

    Raises ZeroSubgradient when f(x) > 0 with a zero selection: that
    certifies an empty zero sublevel set, an infeasibility signal the
    caller must see rather than a silent identity.
    """
    x = as_point(x)
    fx = f.value(x)
    if fx <= 0.0:
        return x
    s = f.subgrad(x)
    norm2 = float(np.dot(s, s))
    if norm2 == 0.0:
        raise ZeroSubgradient(f"f(x)={fx} > 0 but subgradient is zero at x={x}")
    return x - (fx / norm2) * s


def check_subgradient_inequality(f, rng, samples=64, radius=4.0, tol=1e-9):
    """Sample test of f(y) >= f(x) + <s(x), y - x> for the selection's validity."""
    for _ in range(samples):
        x = radius * rng.standard_normal(f.dim)
        y = radius * rng.standard_normal(f.dim)
        lower = f.value(x) + float(np.dot(f.subgrad(x), y - x))
        scale = max(1.0, abs(f.value(y)), abs(lower))
        if f.value(y) < lower - tol * scale:
            return False
    return True


def _validated(f, seed=20260314):
    if f.convex:
        rng = np.random.Generator(np.random.PCG64(seed))
        if not check_subgradient_inequality(f, rng):
            raise ValueError(f"subgradient selection for {f.name!r} failed the sample test")
    return f


def make_abs():
    """f(x) = |x| on R; selection sign(x) with s(0) = 0 (the f <= 0 branch fires first)."""
    return _validated(ConvexFunction(
        value=lambda x: abs(x[0]),
        subgrad=lambda x: np.array([math.copysign(1.0, x[0]) if x[0] != 0.0 else 0.0]),
        dim=1,
        name="abs",
    ))


def make_maxabs2():
    """f(x, y) = max{|x|, |y|} on R^2; ties select the first coordinate."""

    def sub(p):
        x, y = p
        if abs(x) >= abs(y):
            return np.array([math.copysign(1.0, x) if x != 0.0 else 0.0, 0.0])
        return np.array([0.0, math.copysign(1.0, y) if y != 0.0 else 0.0])

    return _validated(ConvexFunction(
        value=lambda p: max(abs(p[0]), abs(p[1])),
        subgrad=sub,
        dim=2,
        name="maxabs2",
    ))


def make_kinked_abs():
    """Piecewise-linear |x| for x <= 1, 2x - 1 above, on R.

    Its subgradient projector maps (-inf, 1) to 0 and (1, inf) to 1/2, so it
    is a cutter whose Lipschitz constant blows up across the slope break;
    right-derivatives are selected at the kinks x = 0 and x = 1.
    """

    def val(p):
        x = p[0]
        return abs(x) if x <= 1.0 else 2.0 * x - 1.0

    def sub(p):
        x = p[0]
        if x < 0.0:
            return np.array([-1.0])
        if x < 1.0:
            return np.array([1.0])
        return np.array([2.0])

    return _validated(ConvexFunction(value=val, subgrad=sub, dim=1, name="kinked_abs"))


def make_distance(primitive_set):
    """f = d(., S) for a primitive set S; its subgradient projector equals P_S."""

    def val(x):
        return float(np.linalg.norm(x - primitive_set.project(x)))

    def sub(x):
        px = primitive_set.project(x)
        d = float(np.linalg.norm(x - px))
        if d == 0.0:
            return np.zeros(primitive_set.dim)
        return (x - px) / d

    return _validated(ConvexFunction(
        value=val, subgrad=sub, dim=primitive_set.dim,
        name=f"distance({type(primitive_set).__name__.lower()})",
    ))


def make_ellipse_residual(a, b):
    """((x-a)^2 + (y-b)^2 - 1)^2: squared residual of the unit circle at (a, b).

    Not convex globally; quarantined behind convex=False so construction skips
    the subgradient-inequality validation. Intended only as a permissive-mode
    demonstration of cutter iterations where exact projections are expensive.
    """

    def val(p):
        return ((p[0] - a) ** 2 + (p[1] - b) ** 2 - 1.0) ** 2

    def grad(p):
        q = (p[0] - a) ** 2 + (p[1] - b) ** 2 - 1.0
        return np.array([4.0 * q * (p[0] - a), 4.0 * q * (p[1] - b)])

    return ConvexFunction(value=val, subgrad=grad, dim=2,
                          name=f"ellipse_residual({a},{b})", convex=False)


def _reciprocal_index(x):
    # detect x == fl(1/n) exactly; returns n or None
    n = round(1.0 / x)
    if n != 0 and 1.0 / n == x:
        return n
    return None


def sublinear_map(x):
    """1-D cutter for {0} that walks the reciprocal lattice one notch per call.

    Starting from 1 and applying it twice per iteration gives the exact
    sequence 1/3, 1/5, 1/7, ...: convergent, but with ratio -> 1 (no linear
    rate), even though {0} is as regular as a fixed set can be.
    """
    if x == 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    if x < -1.0:
        return -1.0
    if not math.isfinite(1.0 / x):
        return 0.0  # reciprocal overflows below ~1e-308; collapse to the fixed point
    n = _reciprocal_index(x)
    if n is not None:
        return 1.0 / (n + 1) if n > 0 else 1.0 / (n - 1)
    if x > 0.0:
        n = math.floor(1.0 / x)  # 1/(n+1) < x < 1/n
        return 1.0 / (n + 1)
    n = math.ceil(1.0 / x)  # 1/n < x < 1/(n-1), n negative
    return 1.0 / (n - 1)


def make_sublinear_cutter():
    """Custom cutter wrapping sublinear_map; fixed set {0}."""
    return CustomCutter(
        mapping=lambda p: np.array([sublinear_map(p[0])]),
        fix_predicate=lambda p: p[0] == 0.0,
        dim=1,
        samples=[np.array([0.0])],
    )


def coordinate_tent(k):
    """phi_k(t) = max{-t/k, t/k, k t + 1 - k, -k t + 1 - k}.

    Equals |t|/k on [-1/2, 1/2] yet has slope +-k outside [-k/(k+1), k/(k+1)],
    so at t = 1 the subgradient is k while the function value is 1.
    """
    k = float(k)

    def val(t):
        return max(-t / k, t / k, k * t + 1.0 - k, -k * t + 1.0 - k)

    def slope(t):
        # right-derivative: steepest active affine piece
        pieces = [(-t / k, -1.0 / k), (t / k, 1.0 / k),
                  (k * t + 1.0 - k, k), (-k * t + 1.0 - k, -k)]
        m = max(v for v, _ in pieces)
        return max(s for v, s in pieces if v == m)

    return val, slope


def make_coordinate_tent_max(k_max):
    """f(x) = max_{k <= K} phi_k(x_k) on R^K, with phi_k the coordinate tents.

    At the k-th basis vector the cutter step has length exactly 1/k while the
    distance to the fixed set {0} stays 1: the gap a surrogate-residual
    stopping rule must not be fooled by.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    tents = [coordinate_tent(k) for k in range(1, k_max + 1)]

    def val(x):
        return max(t_val(x[i]) for i, (t_val, _) in enumerate(tents))

    def sub(x):
        vals = [t_val(x[i]) for i, (t_val, _) in enumerate(tents)]
        m = max(vals)
        i = vals.index(m)  # lowest active index
        g = np.zeros(k_max)
        g[i] = tents[i][1](x[i])
        return g

    return _validated(ConvexFunction(value=val, subgrad=sub, dim=k_max,
                                     name=f"coordinate_tent_max({k_max})"))


#: CLI-addressable builders; parameters arrive as keyword arguments.
CATALOG = {
    "abs": make_abs,
    "maxabs2": make_maxabs2,
    "kinked_abs": make_kinked_abs,
    "distance": make_distance,
    "ellipse_residual": make_ellipse_residual,
    "coordinate_tent_max": make_coordinate_tent_max,
}
