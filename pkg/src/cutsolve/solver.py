"""Fixed-point iteration driver, stopping rules, traces, and theorem audits.

The driver iterates x_{n+1} = T(x_n) for the averaged relaxed operator and
records, per step, the two residuals ||x - Pa x|| and ||x - Pb Ra x||, the
decrease bound theta, and the step norm. Stopping is residual-based by
default: under strict-mode parameters on feasible convex instances both
residuals vanish along the iteration, which makes them the principled
stopping quantity. Spurious fixed points (pure-reflection stalls) are
flagged by an exact-zero-step window so they are never reported as residual
convergence.
"""

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (CutsolveError, EmptyReferenceSet, GammaOutOfRange,
                     ParamFloorViolated)
from .operators import INEQ_TOL, OperatorParams, averaged_step, slack_scale
from .sets import as_point

DEFAULT_RESIDUAL_TOL = 1e-10
DEFAULT_MAX_ITER = 10**5
STAGNATION_WINDOW = 3  # consecutive no-progress steps that flag a stall
DEFAULT_TRACE_CAP = 10**4
DEFAULT_PARAM_FLOOR = 1e-3


class TerminationReason(enum.Enum):
    RESIDUAL_MET = "ResidualMet"
    MAX_ITER = "MaxIter"
    STAGNATED = "Stagnated"
    ERROR = "Error"


@dataclass(frozen=True)
class StopRule:
    """Stopping policy: residual tolerance, iteration budget, stagnation window.

    residual_tol applies to max(residualA, residualB); None disables it.
    stagnation_tol is the step-norm threshold of the stall detector; the
    default 0.0 catches exactly-zero steps (spurious fixed points) while
    leaving slow-but-moving runs alone, and None disables the detector.
    At least one of max_iter / residual_tol must be active.
    """

    max_iter: int = DEFAULT_MAX_ITER
    residual_tol: float = DEFAULT_RESIDUAL_TOL
    stagnation_tol: float = 0.0

    def __post_init__(self):
        if self.max_iter is None and self.residual_tol is None:
            raise ValueError("need at least one of max_iter / residual_tol")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.residual_tol is not None and not self.residual_tol > 0.0:
            raise ValueError("residual_tol must be > 0")
        if self.stagnation_tol is not None and self.stagnation_tol < 0.0:
            raise ValueError("stagnation_tol must be >= 0 or None")


@dataclass
class TraceStep:
    n: int
    x: np.ndarray
    residual_a: float
    residual_b: float
    theta: float
    step_norm: float
    gamma: float
    mu: float


@dataclass
class IterationTrace:
    """Ordered, append-only record of an iteration.

    Stores full iterates up to ``cap`` points, then thins geometrically
    (keeping every 2^k-th step) so long runs stay bounded in memory while
    decay curves survive; the final step is always retained.
    """

    dim: int
    lam: float
    cap: int = DEFAULT_TRACE_CAP
    varying: bool = False
    steps: list = field(default_factory=list)
    reason: TerminationReason = None
    iterations: int = 0
    final_x: np.ndarray = None
    error: str = None
    _stride: int = 1

    def append(self, step):
        if step.n % self._stride == 0:
            self.steps.append(step)
            if len(self.steps) > self.cap:
                self._stride *= 2
                self.steps = [s for s in self.steps if s.n % self._stride == 0]

    def finish(self, reason, final_x, n, last_step=None, error=None):
        if last_step is not None and (not self.steps or self.steps[-1].n != last_step.n):
            self.steps.append(last_step)
        self.reason = reason
        self.final_x = as_point(final_x)
        self.iterations = n
        self.error = error
        return self

    @property
    def final_residuals(self):
        s = self.steps[-1]
        return s.residual_a, s.residual_b

    def iterates(self):
        return np.array([s.x for s in self.steps])


def theta(record):
    """Decrease bound mu(mu-2)||Pb Ra x - Ra x||^2 + gamma(gamma-2)||x - Pa x||^2.

    Nonpositive whenever gamma, mu lie in [0, 2); the squared distance from
    T(x) to any common fixed point drops by at least -lam*theta(x).
    """
    return record.theta


def _drive(cutter_a, cutter_b, param_seq, x0, stop, lam, cap, varying):
    """Shared iteration loop; param_seq yields one OperatorParams per step."""
    x = as_point(x0)
    trace = IterationTrace(dim=x.shape[0], lam=lam, cap=cap, varying=varying)
    zero_steps = 0
    n = 0
    while True:
        try:
            params = next(param_seq)
        except StopIteration:
            raise ValueError("parameter sequence exhausted before termination") from None
        try:
            rec = averaged_step(cutter_a, cutter_b, params, x)
        except (CutsolveError, ArithmeticError) as exc:
            # cutter failure: report the partial trace instead of raising
            return trace.finish(TerminationReason.ERROR, x, n,
                                error=f"{type(exc).__name__}: {exc}")
        step_norm = float(np.linalg.norm(rec.next - x))
        step = TraceStep(n=n, x=x.copy(), residual_a=rec.residual_a,
                         residual_b=rec.residual_b, theta=rec.theta,
                         step_norm=step_norm, gamma=params.gamma, mu=params.mu)
        trace.append(step)

        if (stop.residual_tol is not None
                and max(rec.residual_a, rec.residual_b) <= stop.residual_tol):
            return trace.finish(TerminationReason.RESIDUAL_MET, x, n, last_step=step)

        if stop.stagnation_tol is not None and step_norm <= stop.stagnation_tol:
            zero_steps += 1
            if zero_steps >= STAGNATION_WINDOW:
                return trace.finish(TerminationReason.STAGNATED, x, n, last_step=step)
        else:
            zero_steps = 0

        if stop.max_iter is not None and n >= stop.max_iter:
            return trace.finish(TerminationReason.MAX_ITER, x, n, last_step=step)

        x = rec.next
        n += 1


def solve(cutter_a, cutter_b, params, x0, stop=None, cap=DEFAULT_TRACE_CAP):
    """Iterate the averaged relaxed operator from x0 until a stop rule fires.

    The trace row at step n holds x_n and its residuals; termination reports
    the first satisfied rule. A feasible x0 terminates at step 0 with
    RESIDUAL_MET and x0 returned unchanged. With max_iter = k the trace holds
    iterates x_0 .. x_k.
    """
    stop = stop or StopRule()
    return _drive(cutter_a, cutter_b, itertools.repeat(params), x0, stop,
                  params.lam, cap, varying=False)


def _guarded(seq, name, floor):
    for v in seq:
        if not 0.0 < v < 2.0:
            raise ParamFloorViolated(f"{name} value {v} outside (0,2)")
        if v * (2.0 - v) < floor:
            raise ParamFloorViolated(
                f"{name} sequence reached {v}: {name}*(2-{name})={v * (2.0 - v):.3g} "
                f"below floor {floor}")
        yield v


def varying_params_solve(cutter_a, cutter_b, gamma_seq, mu_seq, lam, x0, stop=None,
                         floor=DEFAULT_PARAM_FLOOR, cap=DEFAULT_TRACE_CAP):
    """solve() with per-step relaxation parameters.

    Convergence needs liminf gamma_n(2-gamma_n) > 0 (same for mu), so a guard
    raises ParamFloorViolated as soon as either product sinks below ``floor``.
    Per-step gamma/mu are recorded in the trace.
    """
    if not floor > 0.0:
        raise ValueError("floor must be > 0")
    gammas = _guarded(gamma_seq, "gamma", floor)
    mus = _guarded(mu_seq, "mu", floor)
    params = (OperatorParams(g, m, lam) for g, m in zip(gammas, mus))
    stop = stop or StopRule()
    return _drive(cutter_a, cutter_b, params, x0, stop, lam, cap, varying=True)


@dataclass
class FejerReport:
    reference_points: list
    max_violation: float
    monotone: bool
    tolerance: float


def fejer_check(trace, refs, tol=INEQ_TOL):
    """Check ||x_{n+1} - ref|| <= ||x_n - ref|| along the stored trace.

    refs must be caller-certified members of the target set (use the
    instance generator's planted point, never the solver's own output).
    max_violation is the largest increase of distance-to-reference between
    consecutive stored iterates; <= 0 means monotone decrease throughout.
    """
    if not refs:
        raise EmptyReferenceSet("fejer_check needs at least one reference point")
    refs = [as_point(r) for r in refs]
    xs = trace.iterates()
    if len(xs) < 2:
        worst = 0.0
    else:
        worst = float("-inf")
        for r in refs:
            d = np.linalg.norm(xs - r, axis=1)
            worst = max(worst, float(np.max(np.diff(d))))
    return FejerReport(reference_points=refs, max_violation=worst,
                       monotone=worst <= tol, tolerance=tol)


@dataclass
class AuditReport:
    checked: int
    failures: int
    worst_slack: float
    witness: tuple = None  # (inequality tag, x, y) at the worst slack

    @property
    def passed(self):
        return self.failures == 0


def sqne_audit(cutter, gamma, xs, ys, tol=INEQ_TOL):
    """Verify the relaxed-cutter decrease inequalities on all (x, y) pairs.

    For y in the cutter's fixed set and R = relax(cutter, gamma, .):

        (i)  ||Rx - y||^2 <= gamma(gamma-2)||x - Px||^2 + ||x - y||^2
        (ii) ||Rx - y||^2 <= ||x - y||^2 - gamma/(2-gamma) * ||Rx - x||^2

    Slacks are normalized by max(1, ||x||^2, ||y||^2); anything below -tol
    counts as a failure. ys are caller-certified fixed points.
    """
    if not 0.0 < gamma < 2.0:
        raise GammaOutOfRange(f"gamma={gamma} must be in (0,2) for this audit")
    rho = gamma / (2.0 - gamma)
    coeff = gamma * (gamma - 2.0)
    checked = failures = 0
    worst = float("inf")
    witness = None
    for x in xs:
        x = as_point(x)
        px = cutter.apply(x)
        rx = x + (2.0 - gamma) * (px - x)
        d_px = float(np.sum((x - px) ** 2))
        d_rx = float(np.sum((rx - x) ** 2))
        for y in ys:
            y = as_point(y)
            dxy = float(np.sum((x - y) ** 2))
            dry = float(np.sum((rx - y) ** 2))
            scale = slack_scale(x, y)
            slack_i = (coeff * d_px + dxy - dry) / scale
            slack_ii = (dxy - rho * d_rx - dry) / scale
            for tag, s in (("i", slack_i), ("ii", slack_ii)):
                checked += 1
                if s < worst:
                    worst = s
                    witness = (tag, x.copy(), y.copy())
                if s < -tol:
                    failures += 1
    return AuditReport(checked=checked, failures=failures,
                       worst_slack=worst if checked else 0.0, witness=witness)


def cutter_audit(cutter, xs, zs, tol=1e-12):
    """Verify the separating property <x - Px, z - Px> <= 0 on declared fixed points.

    The inner product is normalized by ||x - Px||*||z - Px||; a positive
    normalized value above tol certifies the map is not a cutter for the
    declared set.
    """
    checked = failures = 0
    worst = float("-inf")
    witness = None
    for x in xs:
        x = as_point(x)
        px = cutter.apply(x)
        for z in zs:
            z = as_point(z)
            inner = float(np.dot(x - px, z - px))
            scale = max(1e-30, float(np.linalg.norm(x - px)) * float(np.linalg.norm(z - px)))
            v = inner / scale
            checked += 1
            if v > worst:
                worst = v
                witness = ("cutter", x.copy(), z.copy())
            if v > tol:
                failures += 1
    return AuditReport(checked=checked, failures=failures,
                       worst_slack=-worst if checked else 0.0, witness=witness)
