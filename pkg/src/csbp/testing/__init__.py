# Copyright 2024 The csbp-sim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
""" Helpers for testing csbp related code.

This is kept inside the csbp package so code building on the simulator can
test against the same benchmark mechanisms.
"""
# pkg interface
from .patches import patch_context, patch_is_tty  # noqa: F401
from .util import make_path, write_config  # noqa: F401
