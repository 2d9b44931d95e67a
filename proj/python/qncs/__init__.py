# Copyright 2026 The qncs Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Quantised networked control under denial-of-service attacks."""

from ._qncs import (
    ConfigError,
    DosBudgetExceeded,
    InvariantBreach,
    __version__,
    average_params,
    compare,
    decode,
    encode,
    generate_trace,
    min_rate_threshold,
    quantize,
    robustness_margin,
    select_rate,
    simulate,
    successful_instants,
)

__all__ = [
    "ConfigError",
    "DosBudgetExceeded",
    "InvariantBreach",
    "__version__",
    "average_params",
    "compare",
    "decode",
    "encode",
    "generate_trace",
    "min_rate_threshold",
    "quantize",
    "robustness_margin",
    "select_rate",
    "simulate",
    "successful_instants",
]
