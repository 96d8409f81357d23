"""Declarative problem configs: parse, validate, normalize, serialize.

A config is one YAML document with nested sections. Either two sides
``a:``/``b:`` (each a primitive set or a catalog function) or a ``product:``
section (component list plus the diagonal-side flavor). Parameters are plain
numbers, or per-step cycles for varying-parameter runs. Validation happens
against the active mode before any computation; unknown catalog names are
rejected with the list of valid names.
"""

import itertools

import numpy as np
import yaml

from .errors import ConfigError, UnknownCatalogName
from .functions import CATALOG
from .operators import ExactCutter, OperatorParams
from .productspace import lift
from .sets import (AffineDiagonal, Ball, Box, Halfspace, Hyperplane,
                   Singleton, as_point)
from .solver import (DEFAULT_MAX_ITER, DEFAULT_PARAM_FLOOR,
                     DEFAULT_RESIDUAL_TOL, StopRule)

SET_BUILDERS = {
    "halfspace": lambda d: Halfspace(d["normal"], d["offset"]),
    "hyperplane": lambda d: Hyperplane(d["normal"], d["offset"]),
    "ball": lambda d: Ball(d["center"], d["radius"]),
    "box": lambda d: Box(d["lower"], d["upper"]),
    "affine_diagonal": lambda d: AffineDiagonal(d["block_dim"], d["blocks"]),
    "singleton": lambda d: Singleton(d["point"]),
}


def build_set(d):
    if not isinstance(d, dict) or "type" not in d:
        raise ConfigError(f"set spec needs a 'type' field, got {d!r}")
    kind = d["type"]
    if kind not in SET_BUILDERS:
        raise ConfigError(
            f"unknown set type {kind!r}; valid: {', '.join(sorted(SET_BUILDERS))}")
    try:
        return SET_BUILDERS[kind](d)
    except KeyError as exc:
        raise ConfigError(f"set type {kind!r} is missing field {exc}") from None


def build_function(d):
    if not isinstance(d, dict) or "name" not in d:
        raise ConfigError(f"function spec needs a 'name' field, got {d!r}")
    name = d["name"]
    if name not in CATALOG:
        raise UnknownCatalogName(
            f"unknown function {name!r}; valid: {', '.join(sorted(CATALOG))}")
    kwargs = {k: v for k, v in d.items() if k != "name"}
    if name == "distance":
        kwargs["primitive_set"] = build_set(kwargs.pop("set"))
    try:
        return CATALOG[name](**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for function {name!r}: {exc}") from None


def build_side(d, label):
    if not isinstance(d, dict):
        raise ConfigError(f"side {label!r} must be a mapping")
    if "set" in d:
        return ExactCutter(build_set(d["set"]))
    if "function" in d:
        return build_function(d["function"]).cutter()
    raise ConfigError(f"side {label!r} needs a 'set' or 'function' entry")


def _num(v, where):
    # YAML 1.1 reads bare '1e-3' as a string; accept it anyway
    try:
        return float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{where} must be a number, got {v!r}") from None


def _param_entry(v, name):
    """A parameter is a number (fixed) or {'cycle': [...]} (per-step)."""
    if isinstance(v, dict):
        if "cycle" not in v:
            raise ConfigError(f"params.{name} must be a number or {{cycle: [...]}}")
        vals = [_num(u, f"params.{name}.cycle") for u in v["cycle"]]
        if not vals:
            raise ConfigError(f"params.{name}.cycle must be nonempty")
        return None, vals
    return _num(v, f"params.{name}"), None


class ProblemConfig:
    """Normalized problem description with build helpers."""

    def __init__(self, data):
        if not isinstance(data, dict):
            raise ConfigError("config root must be a mapping")
        self.data = self._normalize(data)

    # -- parsing ---------------------------------------------------------

    @classmethod
    def from_text(cls, text):
        try:
            raw = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            where = f" (line {mark.line + 1}, column {mark.column + 1})" if mark else ""
            raise ConfigError(f"config is not valid YAML{where}: {exc}") from None
        return cls(raw)

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            return cls.from_text(fh.read())

    def to_text(self):
        return yaml.safe_dump(self.data, sort_keys=True)

    def __eq__(self, other):
        return isinstance(other, ProblemConfig) and self.data == other.data

    # -- normalization / validation --------------------------------------

    def _normalize(self, raw):
        data = dict(raw)
        mode = data.setdefault("mode", "strict")
        if mode not in ("strict", "permissive"):
            raise ConfigError(f"mode must be 'strict' or 'permissive', got {mode!r}")

        has_sides = "a" in data and "b" in data
        if not has_sides and "product" not in data:
            raise ConfigError("config needs sides 'a' and 'b', or a 'product' section")
        if has_sides and "product" in data:
            raise ConfigError("give either sides 'a'/'b' or 'product', not both")

        if "x0" not in data:
            raise ConfigError("config needs a starting point 'x0'")
        data["x0"] = [float(v) for v in np.atleast_1d(data["x0"])]

        params = data.setdefault("params", {})
        if not isinstance(params, dict):
            raise ConfigError("'params' must be a mapping")
        for key in ("gamma", "mu", "lambda"):
            params.setdefault(key, 1.0)
            _param_entry(params[key], key)  # shape check only
        if isinstance(params["lambda"], dict):
            raise ConfigError("params.lambda must be a fixed number")
        params.setdefault("floor", DEFAULT_PARAM_FLOOR)

        stop = data.setdefault("stop", {})
        stop.setdefault("max_iter", DEFAULT_MAX_ITER)
        stop.setdefault("residual_tol", DEFAULT_RESIDUAL_TOL)
        stop.setdefault("stagnation_tol", 0.0)

        out = data.setdefault("output", {})
        out.setdefault("path", "trace.csv")
        out.setdefault("format", "csv")
        if out["format"] not in ("csv", "jsonl"):
            raise ConfigError(f"output.format must be csv or jsonl, got {out['format']!r}")

        if "product" in data:
            prod = data["product"]
            if "block_dim" not in prod or "components" not in prod:
                raise ConfigError("'product' needs 'block_dim' and 'components'")
            prod.setdefault("lifted_b", "exact")
            if prod["lifted_b"] not in ("exact", "subgradient"):
                raise ConfigError("product.lifted_b must be 'exact' or 'subgradient'")

        data.setdefault("reference_points", [])
        return data

    # -- build helpers ----------------------------------------------------

    @property
    def mode(self):
        return self.data["mode"]

    def cutters(self):
        if "product" in self.data:
            prod = self.data["product"]
            comps = [build_side(c, f"product.components[{i}]")
                     for i, c in enumerate(prod["components"])]
            problem = lift(comps, int(prod["block_dim"]), prod["lifted_b"])
            return problem.lifted_a, problem.lifted_b
        return build_side(self.data["a"], "a"), build_side(self.data["b"], "b")

    def is_varying(self):
        p = self.data["params"]
        return isinstance(p["gamma"], dict) or isinstance(p["mu"], dict)

    def fixed_params(self):
        p = self.data["params"]
        if self.is_varying():
            raise ConfigError("config uses parameter sequences; no fixed params")
        return OperatorParams(_num(p["gamma"], "params.gamma"),
                              _num(p["mu"], "params.mu"),
                              _num(p["lambda"], "params.lambda"),
                              permissive=self.mode == "permissive")

    def param_sequences(self):
        p = self.data["params"]
        seqs = []
        for key in ("gamma", "mu"):
            fixed, cyc = _param_entry(p[key], key)
            seqs.append(itertools.repeat(fixed) if cyc is None else itertools.cycle(cyc))
        return (seqs[0], seqs[1], _num(p["lambda"], "params.lambda"),
                _num(p["floor"], "params.floor"))

    def x0(self):
        return as_point(self.data["x0"])

    def stop_rule(self):
        s = self.data["stop"]
        try:
            return StopRule(
                max_iter=None if s["max_iter"] is None else int(s["max_iter"]),
                residual_tol=None if s["residual_tol"] is None else float(s["residual_tol"]),
                stagnation_tol=None if s["stagnation_tol"] is None else float(s["stagnation_tol"]),
            )
        except ValueError as exc:
            raise ConfigError(f"bad stop rule: {exc}") from None

    def output(self):
        return self.data["output"]["path"], self.data["output"]["format"]

    def reference_points(self):
        return [as_point(r) for r in self.data["reference_points"]]

    def validate(self):
        """Full validation: structure, catalog names, mode-checked parameters."""
        ca, cb = self.cutters()
        x0 = self.x0()
        if not ca.dim == cb.dim == x0.shape[0]:
            raise ConfigError(
                f"dimension mismatch: side a is {ca.dim}-D, side b is {cb.dim}-D, "
                f"x0 is {x0.shape[0]}-D")
        if self.is_varying():
            self.param_sequences()
        else:
            self.fixed_params()
        self.stop_rule()
        return self
