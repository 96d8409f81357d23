"""Cutters, relaxed cutters, and the averaged composed operator.

A cutter maps x to a point Px whose separating hyperplane cuts x off from
the cutter's fixed set:  <x - Px, z - Px> <= 0 for every z in Fix P.
Exact projections onto convex sets are cutters; so are subgradient
projectors of convex functions. The composed operator

    T(x) = lam * R_B^mu(R_A^gamma(x)) + (1 - lam) * x,
    R^gamma = (2 - gamma) * (P - Id) + Id,

recovers alternating projections, Douglas-Rachford, Peaceman-Rachford,
and relaxed-reflect-reflect for particular (gamma, mu, lam) cells.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import EtaNonpositive, GammaOutOfRange, InvalidParams
from .sets import as_point

INEQ_TOL = 1e-9


def slack_scale(x, y):
    """Scale factor for inequality slacks: max(1, ||x||^2, ||y||^2)."""
    return max(1.0, float(np.dot(x, x)), float(np.dot(y, y)))


class Cutter:
    """Base cutter: apply() plus a declared fixed-set membership test."""

    dim = None

    def apply(self, x):
        raise NotImplementedError

    def fix_contains(self, z, tol=INEQ_TOL):
        """Membership test for the declared fixed set."""
        raise NotImplementedError

    def fix_samples(self):
        """A few certified points of the fixed set, for audits. May be empty."""
        return []


class ExactCutter(Cutter):
    """Metric projection onto a primitive set; firmly nonexpansive."""

    def __init__(self, primitive_set):
        self.set = primitive_set
        self.dim = primitive_set.dim

    def apply(self, x):
        return self.set.project(x)

    def fix_contains(self, z, tol=INEQ_TOL):
        return self.set.contains(z, tol)


class SubgradientCutter(Cutter):
    """Subgradient projector of a convex function; fixed set is lev_{<=0} f."""

    def __init__(self, f):
        self.f = f
        self.dim = f.dim

    def apply(self, x):
        # local import: functions.py builds on this module's Cutter base
        from .functions import subgradient_project

        return subgradient_project(self.f, x)

    def fix_contains(self, z, tol=INEQ_TOL):
        z = as_point(z)
        scale = max(1.0, float(np.linalg.norm(z)))
        return self.f.value(z) <= tol * scale


class CustomCutter(Cutter):
    """Table- or rule-driven map with a caller-declared fixed set."""

    def __init__(self, mapping, fix_predicate, dim, samples=None):
        self._map = mapping
        self._fix = fix_predicate
        self.dim = dim
        self._samples = [as_point(s) for s in (samples or [])]

    def apply(self, x):
        return as_point(self._map(as_point(x)))

    def fix_contains(self, z, tol=INEQ_TOL):
        return bool(self._fix(as_point(z)))

    def fix_samples(self):
        return [s.copy() for s in self._samples]


@dataclass(frozen=True)
class OperatorParams:
    """Relaxation/averaging parameters (gamma, mu, lam).

    Strict mode enforces gamma, mu in (0, 2) and lam in (0, 1], the ranges
    under which the composed operator is strictly quasinonexpansive with
    vanishing residuals. Permissive mode widens gamma, mu to [0, 2) so the
    pure-reflection stall cases can be reproduced; it is an explicit opt-in,
    never a default, because no convergence guarantee covers gamma = 0.
    """

    gamma: float
    mu: float
    lam: float
    permissive: bool = False

    def __post_init__(self):
        lo_open = not self.permissive
        for name, v in (("gamma", self.gamma), ("mu", self.mu)):
            if not np.isfinite(v) or v >= 2.0 or v < 0.0 or (lo_open and v == 0.0):
                mode = "permissive [0,2)" if self.permissive else "strict (0,2)"
                raise InvalidParams(f"{name}={v} outside {mode}")
        if not np.isfinite(self.lam) or not 0.0 < self.lam <= 1.0:
            raise InvalidParams(f"lam={self.lam} outside (0,1]")


def classify_params(params):
    """Name the classical method a parameter cell reduces to."""
    g, m, l = params.gamma, params.mu, params.lam
    if g == 1.0 and m == 1.0 and l == 1.0:
        return "AlternatingProjections"
    if g == 0.0 and m == 0.0:
        if l == 0.5:
            return "DouglasRachford"
        if l == 1.0:
            return "PeacemanRachford"
        return "RRR"
    return "Generic"


def psi(gamma):
    """min{gamma, 2 - gamma}; satisfies psi*(psi - 2) == gamma*(gamma - 2) on [0, 2)."""
    return min(gamma, 2.0 - gamma)


def relax(cutter, gamma, x):
    """Relaxed cutter R^gamma(x) = x + (2 - gamma) * (Px - x).

    gamma = 0 is reflection, gamma = 1 the cutter itself (returned bitwise),
    gamma in (1, 2) under-relaxation, gamma in (0, 1) over-relaxation.
    """
    if not 0.0 <= gamma < 2.0:
        raise GammaOutOfRange(f"gamma={gamma} outside [0,2)")
    x = as_point(x)
    px = cutter.apply(x)
    if gamma == 1.0:
        return px
    return x + (2.0 - gamma) * (px - x)


def borwein_li_tam_gamma(eta):
    """Relaxation parameter 2*(eta+1)/(2*eta+1) of the damped-reflection scheme.

    With this gamma, R^gamma = (1/(2*eta+1)) Id + (2*eta/(2*eta+1)) P.
    Lies in (1, 2) for eta > 0 and tends to 1 (plain projection) as eta grows.
    """
    if not eta > 0.0:
        raise EtaNonpositive(f"eta={eta} must be > 0")
    return 2.0 * (eta + 1.0) / (2.0 * eta + 1.0)


@dataclass
class StepRecord:
    """One application of the averaged operator with all intermediate points.

    Keeping the intermediates avoids re-evaluating cutters: the residuals
    ||x - Pa x|| and ||x - Pb Ra x|| and the decrease bound theta are all
    defined on them.
    """

    x: np.ndarray
    pa: np.ndarray
    ra: np.ndarray
    pb: np.ndarray
    rb: np.ndarray
    next: np.ndarray
    gamma: float
    mu: float
    lam: float
    residual_a: float = field(init=False)
    residual_b: float = field(init=False)
    theta: float = field(init=False)

    def __post_init__(self):
        self.residual_a = float(np.linalg.norm(self.x - self.pa))
        self.residual_b = float(np.linalg.norm(self.x - self.pb))
        self.theta = self.mu * (self.mu - 2.0) * float(
            np.sum((self.pb - self.ra) ** 2)
        ) + self.gamma * (self.gamma - 2.0) * float(np.sum((self.x - self.pa) ** 2))


def averaged_step(cutter_a, cutter_b, params, x):
    """Evaluate T(x) = lam * R_b^mu(R_a^gamma(x)) + (1 - lam) * x once."""
    x = as_point(x)
    pa = cutter_a.apply(x)
    ra = pa if params.gamma == 1.0 else x + (2.0 - params.gamma) * (pa - x)
    pb = cutter_b.apply(ra)
    rb = pb if params.mu == 1.0 else ra + (2.0 - params.mu) * (pb - ra)
    nxt = rb if params.lam == 1.0 else params.lam * rb + (1.0 - params.lam) * x
    return StepRecord(
        x=x, pa=pa, ra=ra, pb=pb, rb=rb, next=nxt,
        gamma=params.gamma, mu=params.mu, lam=params.lam,
    )
