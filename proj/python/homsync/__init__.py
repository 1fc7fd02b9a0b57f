# Copyright 2026 The homsync Authors
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


"""Synchronized two-photon interference: simulation and homodyne analysis."""

from homsync._core import *  # noqa: F401,F403
from homsync._core import ConfigError, ConvergenceError, NumericalError

__all__ = [name for name in dir() if not name.startswith("_")]
