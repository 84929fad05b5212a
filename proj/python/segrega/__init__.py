"""Segregated densities on the disk: datums, harmonic fields, certification and partitions."""

import json

from . import _core
from ._core import Datum, Field, SegregaError, State, __version__, classify_k6, harmonic

__all__ = [
    "Datum",
    "Field",
    "SegregaError",
    "State",
    "__version__",
    "classify_k6",
    "critical_points",
    "derivatives",
    "harmonic",
    "is_2s_point",
    "k6_conditions",
    "membership",
    "partition",
    "solve",
]


def critical_points(field, s, threads=1):
    return json.loads(_core.critical_points(field, s, threads))


def is_2s_point(datum, x, y, **kw):
    return json.loads(_core.is_2s_point(datum, x, y, **kw))


def k6_conditions(datum, x, y, **kw):
    return json.loads(_core.k6_conditions(datum, x, y, **kw))


def derivatives(field, x, y, amplitude):
    return json.loads(_core.derivatives(field, x, y, amplitude))


def solve(datum, schedule, n_r=128, n_theta=256, threads=1):
    """Run the continuation; returns the final State and per-step statistics."""
    state, stats = _core.solve(datum, list(schedule), n_r, n_theta, threads)
    return state, json.loads(stats)


def partition(state, datum):
    return json.loads(_core.partition(state, datum))


def membership(state):
    return json.loads(_core.membership(state))
