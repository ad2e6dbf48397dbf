# Copyright 2026 The alterbft-sim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""AlterBFT simulator: run scenarios, check traces, derive delay bounds."""

import json

from . import _alterbft
from ._alterbft import ConfigError, check_names, classify, percentile

__all__ = [
    "ConfigError",
    "check",
    "check_names",
    "classify",
    "derive_bounds",
    "metrics",
    "percentile",
    "run",
    "synth_large_delay",
]


def _value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_value(x) for x in v) + "]"
    if v is None:
        return "never"
    return str(v)


def run(config=None, **overrides):
    """Simulate a scenario. Keys match the config file; durations are in ms.

    Returns the trace as JSON lines.
    """
    settings = dict(config or {})
    settings.update(overrides)
    return _alterbft.run([(k, _value(v)) for k, v in settings.items()])


def check(trace, checks=("all",)):
    """Run checkers over a JSON-lines trace; returns a list of verdict dicts."""
    return json.loads(_alterbft.check(trace, list(checks)))


def metrics(trace):
    return json.loads(_alterbft.metrics(trace))


def synth_large_delay(samples, k=64, seed=1, count=1):
    return _alterbft.synth_large_delay(list(samples), k, seed, count)


def derive_bounds(samples, k=64, draws=100000, seed=1):
    return json.loads(_alterbft.derive_bounds(list(samples), k, draws, seed))
