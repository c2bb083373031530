"""Simplicial Hopfield networks."""

import csv
import io
import json

from ._core import *  # noqa: F401,F403
from ._core import ConfigError, _run_experiment_json


def run_experiment(config):
    """Run an experiment from a config dict; returns (rows, summary) as lists of dicts."""
    rows_csv, summary_csv = _run_experiment_json(json.dumps(config))
    rows = list(csv.DictReader(io.StringIO(rows_csv)))
    summary = list(csv.DictReader(io.StringIO(summary_csv)))
    return rows, summary


__all__ = [name for name in dir() if not name.startswith("_")]
