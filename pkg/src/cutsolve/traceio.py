"""Trace export: CSV and JSONL, with bit-exact float round-trip.

Floats are written as their shortest round-trip decimal (Python repr), so
read_csv(write_csv(trace)) reproduces every value bitwise. The CSV schema is
one row per stored step:

    n, x0..x{d-1}, residualA, residualB, theta, stepNorm [, gamma, mu]

with the trailing parameter columns present only for varying-parameter runs.
JSONL carries the same fields, one JSON object per line.
"""

import csv
import json

import numpy as np

FIXED_FIELDS = ("residualA", "residualB", "theta", "stepNorm")


def _coord_names(dim):
    return [f"x{i}" for i in range(dim)]


def _row(step, varying):
    row = [step.n] + [repr(float(c)) for c in step.x]
    row += [repr(step.residual_a), repr(step.residual_b),
            repr(step.theta), repr(step.step_norm)]
    if varying:
        row += [repr(step.gamma), repr(step.mu)]
    return row


def write_csv(trace, path):
    header = ["n"] + _coord_names(trace.dim) + list(FIXED_FIELDS)
    if trace.varying:
        header += ["gamma", "mu"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for step in trace.steps:
            w.writerow(_row(step, trace.varying))


def read_csv(path):
    """Rows back as dicts: {'n': int, 'x': ndarray, 'residualA': float, ...}."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        coord_idx = [i for i, name in enumerate(header) if name.startswith("x")]
        out = []
        for raw in reader:
            rec = {"n": int(raw[0]),
                   "x": np.array([float(raw[i]) for i in coord_idx])}
            for name in header[len(coord_idx) + 1:]:
                rec[name] = float(raw[header.index(name)])
            out.append(rec)
        return out


def write_jsonl(trace, path):
    with open(path, "w") as fh:
        for step in trace.steps:
            obj = {
                "n": step.n,
                "x": [float(c) for c in step.x],
                "residualA": step.residual_a,
                "residualB": step.residual_b,
                "theta": step.theta,
                "stepNorm": step.step_norm,
            }
            if trace.varying:
                obj["gamma"] = step.gamma
                obj["mu"] = step.mu
            fh.write(json.dumps(obj) + "\n")


def read_jsonl(path):
    out = []
    with open(path) as fh:
        for line in fh:
            if line.strip():
                obj = json.loads(line)
                obj["x"] = np.array(obj["x"], dtype=float)
                out.append(obj)
    return out


def write_trace(trace, path, fmt="csv"):
    if fmt == "csv":
        write_csv(trace, path)
    elif fmt == "jsonl":
        write_jsonl(trace, path)
    else:
        raise ValueError(f"format must be 'csv' or 'jsonl', got {fmt!r}")
