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
""" The ``csbp`` script. """
from csbp.cli import csbp_cli

# The declaration modules register their commands on csbp_cli when imported.
import csbp.cli.csbp  # noqa: F401 pylint: disable=unused-import
from csbp.cli import mechanism, sim  # noqa: F401 pylint: disable=unused-import


__all__ = ['csbp_cli']


if __name__ == '__main__':
    csbp_cli()
