"""Convex feasibility via averaged relaxed cutters.

Build a cutter for each constraint (exact projection, subgradient projector,
or a custom rule), compose them through the parametrized averaged relaxed
operator, and iterate with residual-based stopping, Fejer-monotonicity
checks, and inequality audits. A gallery of fixtures reproduces the classic
stall and rate pathologies, and a CLI runs solves, sweeps, and audits from
declarative YAML configs.
"""

from .errors import (ConfigError, CutsolveError, DegenerateSet,
                     DimensionMismatch, EmptyReferenceSet, EtaNonpositive,
                     GammaOutOfRange, InvalidParams, ParamFloorViolated,
                     UnknownCatalogName, ZeroSubgradient)
from .functions import (CATALOG, ConvexFunction, make_abs,
                        make_coordinate_tent_max, make_distance,
                        make_ellipse_residual, make_kinked_abs, make_maxabs2,
                        make_sublinear_cutter, subgradient_project)
from .gallery import FIXTURES, Fixture, FixtureReport, get_fixture
from .operators import (Cutter, CustomCutter, ExactCutter, OperatorParams,
                        StepRecord, SubgradientCutter, averaged_step,
                        borwein_li_tam_gamma, classify_params, psi, relax)
from .productspace import (BlockCutter, ProductProblem, lift,
                           make_agreement_penalty, make_blockwise_violation)
from .sets import (AffineDiagonal, Ball, Box, Halfspace, Hyperplane,
                   PrimitiveSet, Singleton, as_point, project_exact)
from .solver import (AuditReport, FejerReport, IterationTrace, StopRule,
                     TerminationReason, TraceStep, cutter_audit, fejer_check,
                     solve, sqne_audit, theta, varying_params_solve)

__version__ = "0.1.0"

__all__ = [
    "AffineDiagonal", "AuditReport", "Ball", "BlockCutter", "Box", "CATALOG",
    "ConfigError", "ConvexFunction", "Cutter", "CustomCutter",
    "CutsolveError", "DegenerateSet", "DimensionMismatch",
    "EmptyReferenceSet", "EtaNonpositive", "ExactCutter", "FejerReport",
    "FIXTURES", "Fixture", "FixtureReport", "GammaOutOfRange", "Halfspace",
    "Hyperplane", "InvalidParams", "IterationTrace", "OperatorParams",
    "ParamFloorViolated", "PrimitiveSet", "ProductProblem", "Singleton",
    "StepRecord", "StopRule", "SubgradientCutter", "TerminationReason",
    "TraceStep", "UnknownCatalogName", "ZeroSubgradient", "as_point",
    "averaged_step", "borwein_li_tam_gamma", "classify_params",
    "cutter_audit", "fejer_check", "get_fixture", "lift", "make_abs",
    "make_agreement_penalty", "make_blockwise_violation",
    "make_coordinate_tent_max", "make_distance", "make_ellipse_residual",
    "make_kinked_abs", "make_maxabs2", "make_sublinear_cutter",
    "project_exact", "psi", "relax", "solve", "sqne_audit",
    "subgradient_project", "theta", "varying_params_solve",
]
