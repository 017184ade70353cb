# SPDX-License-Identifier: Apache-2.0
#
# pass-aircomp: pinching-antenna aided over-the-air computation
# Copyright (C) 2026 The pass-aircomp authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

"""Pinching-antenna AirComp model, optimizer and experiment harness."""

from ._core import (
    AoConfig,
    BaselineParams,
    ConfigurationError,
    ModelError,
    SystemGeometry,
    alternating_optimize,
    channel_matrix,
    dbm_to_watts,
    initial_layout,
    mse,
    optimal_decoder,
    optimal_power,
    realization_seed,
    run_experiment,
    sample_users,
    schemes,
    simulate_aircomp,
    solve,
    validate_config,
)

__all__ = [
    "AoConfig",
    "BaselineParams",
    "ConfigurationError",
    "ModelError",
    "SystemGeometry",
    "alternating_optimize",
    "channel_matrix",
    "dbm_to_watts",
    "initial_layout",
    "mse",
    "optimal_decoder",
    "optimal_power",
    "realization_seed",
    "run_experiment",
    "sample_users",
    "schemes",
    "simulate_aircomp",
    "solve",
    "validate_config",
]
