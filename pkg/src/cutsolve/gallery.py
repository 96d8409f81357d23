"""Preconfigured fixtures: stalls, rate pathologies, and comparison runs.

Each fixture packages a small problem, a parameter cell, and a declarative
expectation that the solver (or an audit) can check mechanically. They serve
as regression tests and as CLI demos (``cutsolve run-fixture <name>``).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParams, UnknownCatalogName
from .functions import (make_abs, make_coordinate_tent_max, make_distance,
                        make_kinked_abs, make_maxabs2, make_sublinear_cutter,
                        subgradient_project)
from .operators import CustomCutter, OperatorParams, averaged_step
from .sets import Ball
from .solver import (StopRule, TerminationReason, cutter_audit, solve,
                     sqne_audit)


@dataclass
class FixtureReport:
    name: str
    passed: bool
    messages: list = field(default_factory=list)
    traces: dict = field(default_factory=dict)

    def add(self, ok, text):
        self.messages.append(("PASS " if ok else "FAIL ") + text)
        self.passed = self.passed and ok


@dataclass
class Fixture:
    """A named problem with a machine-checkable expectation."""

    name: str
    description: str
    mode: str  # "strict" | "permissive"
    expected: str
    _runner: callable = None

    def run(self, mode=None):
        mode = mode or self.mode
        if self.mode == "permissive" and mode == "strict":
            raise InvalidParams(
                f"fixture {self.name!r} needs permissive parameters; strict mode refuses them")
        report = FixtureReport(name=self.name, passed=True)
        self._runner(report)
        return report


def _grid_1d(lo=-5.0, hi=5.0, step=0.1):
    k = int(round((hi - lo) / step))
    return [lo + i * step for i in range(k + 1)]


def fixture_separator_not_cutter():
    """A separator whose output fails to cut off its own fixed points."""

    def tmap(p):
        x = p[0]
        if x <= 0.0:
            return np.array([x])
        if x < 1.0:
            return np.array([0.0])
        return np.array([1.0])

    cutter = CustomCutter(tmap, lambda p: p[0] <= 0.0 or p[0] == 1.0, dim=1,
                          samples=[np.array([-1.0]), np.array([0.0]), np.array([1.0])])

    def runner(report):
        report.add(float(cutter.apply(np.array([-1.0]))[0]) == -1.0, "x=-1 is fixed")
        report.add(float(cutter.apply(np.array([2.0]))[0]) == 1.0, "x=2 maps to 1")
        xs = [np.array([v]) for v in (0.1, 0.25, 0.5, 0.75, 0.9)]
        audit = cutter_audit(cutter, xs, cutter.fix_samples())
        report.add(not audit.passed,
                   f"separating audit fails as expected ({audit.failures} violations)")
        inner = float((0.5 - 0.0) * (1.0 - 0.0))
        report.add(inner > 0.0, f"witness pair x=0.5, z=1: <x-Tx, z-Tx> = {inner} > 0")

    return Fixture(
        name="separator-not-cutter",
        description="1-D map whose image separates but does not cut",
        mode="strict",
        expected="separating-property audit fails on (0,1) against the fixed point 1",
        _runner=runner,
    )


def fixture_nonexpansivity_loss():
    """Subgradient projector of the kinked |x| is expansive yet strongly QNE."""
    f = make_kinked_abs()
    cutter = f.cutter()

    def runner(report):
        p_low = float(subgradient_project(f, np.array([0.9]))[0])
        p_high = float(subgradient_project(f, np.array([1.1]))[0])
        gap = abs(p_low - p_high)
        report.add(p_low == 0.0 and p_high == 0.5, f"P(0.9)={p_low}, P(1.1)={p_high}")
        report.add(gap == 0.5 and gap > abs(0.9 - 1.1),
                   f"expansive pair: |P(0.9)-P(1.1)|={gap} > |0.9-1.1|={abs(0.9 - 1.1)}")
        xs = [np.array([v]) for v in np.linspace(-3.0, 3.0, 121)]
        ys = [np.array([0.0])]
        for gamma in (0.5, 1.0, 1.5):
            audit = sqne_audit(cutter, gamma, xs, ys)
            report.add(audit.passed,
                       f"strong-QNE audit passes at gamma={gamma} "
                       f"(worst slack {audit.worst_slack:.2e})")

    return Fixture(
        name="nonexpansivity-loss",
        description="cutter with unbounded Lipschitz constant at a slope break",
        mode="strict",
        expected="|P(0.9)-P(1.1)| = 0.5 > 0.2 while the strong-QNE audit passes",
        _runner=runner,
    )


def fixture_stall_abs():
    """Pure reflections through lev |.| fix every point of the line."""
    f, g = make_abs(), make_abs()
    ca, cb = f.cutter(), g.cutter()

    def runner(report):
        grid = _grid_1d()
        for lam in (0.5, 1.0):
            params = OperatorParams(0.0, 0.0, lam, permissive=True)
            fixed = all(
                float(averaged_step(ca, cb, params, np.array([v])).next[0]) == v
                for v in grid)
            report.add(fixed, f"every grid point fixed at lam={lam}")
        into = all(float(subgradient_project(f, np.array([v]))[0]) == 0.0 for v in grid)
        report.add(into, "cutter image is 0, a common feasible point, for every grid x")
        params = OperatorParams(0.0, 0.0, 0.5, permissive=True)
        reasons = {solve(ca, cb, params, np.array([v]), StopRule(max_iter=20)).reason
                   for v in grid if v != 0.0}
        report.add(reasons == {TerminationReason.STAGNATED},
                   f"solver flags every infeasible start as stalled ({reasons})")
        at_zero = solve(ca, cb, params, np.array([0.0]), StopRule(max_iter=20))
        report.add(at_zero.reason == TerminationReason.RESIDUAL_MET,
                   "the one feasible start terminates on residuals")

    return Fixture(
        name="stall-abs",
        description="reflection parameters stall on the absolute value",
        mode="permissive",
        expected="T = Id on [-5,5]; solver reports Stagnated, never ResidualMet",
        _runner=runner,
    )


def fixture_stall_maxabs():
    """Reflections through lev max{|x|,|y|} fix the whole off-diagonal region.

    Unlike the 1-D stall, the cutter image here generally misses the common
    feasible set {(0,0)}: the one-shot feasibility recovery trick fails.
    """
    f, g = make_maxabs2(), make_maxabs2()
    ca, cb = f.cutter(), g.cutter()

    def runner(report):
        params = OperatorParams(0.0, 0.0, 0.5, permissive=True)
        ks = range(-50, 51)
        pts = [np.array([i * 0.1, j * 0.1]) for i in ks for j in ks if abs(i) != abs(j)]
        fixed = all(np.array_equal(averaged_step(ca, cb, params, p).next, p) for p in pts)
        report.add(fixed, f"all {len(pts)} off-diagonal grid points fixed")
        img = subgradient_project(f, np.array([2.0, 1.0]))
        report.add(np.array_equal(img, np.array([0.0, 1.0])),
                   f"cutter image of (2,1) is {tuple(img)}")
        report.add(f.value(img) > 0.0, "that image is not a common feasible point")
        sub = [np.array([i * 0.1, j * 0.1])
               for i in range(-50, 51, 5) for j in range(-50, 51, 5) if abs(i) != abs(j)]
        reasons = {solve(ca, cb, params, p, StopRule(max_iter=20)).reason for p in sub}
        report.add(reasons == {TerminationReason.STAGNATED},
                   f"solver flags sampled off-diagonal starts as stalled ({reasons})")

    return Fixture(
        name="stall-maxabs",
        description="2-D stall where the cutter image misses feasibility",
        mode="permissive",
        expected="off-diagonal grid fixed; cutter image of (2,1) infeasible; solver stalls",
        _runner=runner,
    )


def fixture_sublinear():
    """Reciprocal-lattice cutter: convergent but with no linear rate."""
    cutter = make_sublinear_cutter()

    def runner(report):
        params = OperatorParams(1.0, 1.0, 1.0)
        trace = solve(cutter, cutter, params, np.array([1.0]),
                      StopRule(max_iter=50, residual_tol=1e-14))
        report.traces["iterates"] = trace
        report.add(trace.reason == TerminationReason.MAX_ITER,
                   f"ran the full budget ({trace.reason.value})")
        xs = [float(s.x[0]) for s in trace.steps]
        exact = all(abs(xs[n] - 1.0 / (2 * n + 1)) <= 1e-12 for n in range(len(xs)))
        report.add(exact and len(xs) == 51, "iterates match 1/(2n+1) for n = 0..50")
        ratios = [xs[n + 1] / xs[n] for n in range(len(xs) - 1)]
        increasing = all(r2 > r1 for r1, r2 in zip(ratios, ratios[1:]))
        report.add(increasing, "contraction ratio increases monotonically")
        report.add(ratios[-1] > 0.95 and max(ratios[10:]) > 0.95,
                   f"ratio climbs above 0.95 (final {ratios[-1]:.4f}): no linear rate")

    return Fixture(
        name="sublinear",
        description="cutter iteration converging at a sublinear rate",
        mode="strict",
        expected="x_n = 1/(2n+1) for n <= 50; ratio x_{n+1}/x_n climbs to 1",
        _runner=runner,
    )


def fixture_step_vs_distance(k_max=10):
    """Vanishing cutter steps need not mean vanishing distance to the fixed set.

    At the k-th basis vector the cutter moves by exactly 1/k while the
    distance to the fixed set {0} stays 1: the residual-to-distance link
    that makes residual stopping sound has to be earned, not assumed.
    """
    f = make_coordinate_tent_max(k_max)

    def runner(report):
        for n in range(1, k_max + 1):
            e = np.zeros(k_max)
            e[n - 1] = 1.0
            p = subgradient_project(f, e)
            step = float(np.linalg.norm(e - p))
            dist = float(np.linalg.norm(e))
            report.add(step == 1.0 / n and dist == 1.0,
                       f"basis vector {n}: cutter step {step} vs distance {dist}")
        origin = np.zeros(k_max)
        report.add(np.array_equal(subgradient_project(f, origin), origin),
                   "origin is fixed")
        if k_max >= 2:
            v = f.value(np.array([0.0, 0.4] + [0.0] * (k_max - 2)))
            report.add(abs(v - 0.2) < 1e-15, f"tent value at second coord 0.4 is {v}")

    return Fixture(
        name="step-vs-distance",
        description="small cutter steps far from the fixed set",
        mode="strict",
        expected=f"cutter step 1/n at the n-th basis vector, distance 1, n = 1..{k_max}",
        _runner=runner,
    )


def fixture_comparison():
    """One problem, two parameter cells: damped reflections vs plain projections.

    The two level sets are overlapping disks reached through distance-function
    subgradient cutters. Only qualitative behaviour is asserted (both runs
    converge); iteration counts are recorded for external plotting.
    """
    f = make_distance(Ball([0.0, 0.0], 1.0))
    g = make_distance(Ball([0.5, 0.0], 1.0))

    def runner(report):
        x0 = np.array([3.0, 4.0])
        stop = StopRule(max_iter=10**5, residual_tol=1e-9)
        damped = solve(f.cutter(), g.cutter(), OperatorParams(0.1, 0.1, 0.5), x0, stop)
        alternating = solve(f.cutter(), g.cutter(), OperatorParams(1.0, 1.0, 1.0), x0, stop)
        report.traces["damped"] = damped
        report.traces["alternating"] = alternating
        for label, tr in (("damped", damped), ("alternating", alternating)):
            ra, rb = tr.final_residuals
            report.add(tr.reason == TerminationReason.RESIDUAL_MET and max(ra, rb) < 1e-8,
                       f"{label} run converged in {tr.iterations} iterations "
                       f"(residuals {ra:.1e}, {rb:.1e})")

    return Fixture(
        name="comparison",
        description="damped-reflection vs projection parameters on overlapping disks",
        mode="strict",
        expected="both parameter cells terminate on residuals; traces exported",
        _runner=runner,
    )


FIXTURES = {
    "separator-not-cutter": fixture_separator_not_cutter,
    "nonexpansivity-loss": fixture_nonexpansivity_loss,
    "stall-abs": fixture_stall_abs,
    "stall-maxabs": fixture_stall_maxabs,
    "sublinear": fixture_sublinear,
    "step-vs-distance": fixture_step_vs_distance,
    "comparison": fixture_comparison,
}


def get_fixture(name):
    try:
        return FIXTURES[name]()
    except KeyError:
        raise UnknownCatalogName(
            f"unknown fixture {name!r}; available: {', '.join(sorted(FIXTURES))}") from None
