# Copyright 2026 The bdlbench Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Referral benchmark for predictive uncertainty in binary classifiers."""

import json

from . import _bdlbench
from ._bdlbench import (
    ArgumentError,
    Dataset,
    Error,
    IncompatibleVersionError,
    IoError,
    Model,
    ParseError,
    PreparedData,
    ShapeError,
    TrainingError,
    UndefinedAucError,
    default_fractions,
    load_csv,
    oracle_referral_curve,
    predictive_entropy,
    referral_sweep,
    roc_auc,
    sample_predictive,
    score_by_entropy,
)

__version__ = _bdlbench.__version__

METHODS = ("mc_dropout", "mfvi", "deep_ensemble", "deterministic", "ensemble_mc_dropout", "random")


def _dump(config):
    return "" if config is None else json.dumps(config)


def default_config():
    """Benchmark configuration with every default filled in."""
    return json.loads(_bdlbench.resolve_config(""))


def resolve_config(config=None):
    """Fill a partial configuration dict with defaults and validate it."""
    return json.loads(_bdlbench.resolve_config(_dump(config)))


def generate_synthetic(seed, generator=None):
    """Train, val, test and shifted_test splits of the synthetic task."""
    return _bdlbench.generate_synthetic(_dump(generator), seed)


def prepare_data(config=None):
    """The four normalized splits a benchmark run would use."""
    return _bdlbench.prepare_data(_dump(config))


def train(method, data, seed, config=None):
    """Train one model of the given method on prepared data."""
    return _bdlbench.train(method, _dump(config), data, seed)


def run_benchmark(config=None):
    """Run the (method, seed) grid. Returns (report, timings) as dicts."""
    report, timings = _bdlbench.run_benchmark(_dump(config))
    return json.loads(report), json.loads(timings)


def report_to_markdown(report):
    return _bdlbench.report_to_markdown(json.dumps(report))


def report_to_csv(report):
    return _bdlbench.report_to_csv(json.dumps(report))


def emit_report(report, output_dir):
    """Write report.json/csv/md and plot CSVs; returns the plot file paths."""
    return _bdlbench.emit_report(json.dumps(report), output_dir)
