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
""" Mechanism inspection commands implementation. """
import dataclasses
from typing import Any, Dict, List, Optional

from csbp.core import conf, exc, log, shell, util
from csbp.core.mechanism import (
    BranchingMechanism,
    Criticality,
    check_regularity,
    classify,
    phi_eval,
    psi_eval,
)


def describe(mech: Optional[str], lams: List[float]) -> None:
    mechanism = conf.from_context(mech).require_mechanism()
    print(shell.highlight(util.json_dump(_description(mechanism, lams or [1.0])), 'json'))


def validate(mech: Optional[str]) -> None:
    mechanism = conf.from_context(mech).require_mechanism()
    regularity = check_regularity(mechanism)

    problems = []
    if not regularity.conservative:
        problems.append("not conservative")
    if classify(mechanism) == Criticality.SUPERCRITICAL:
        problems.append("supercritical")
    elif not regularity.almost_sure_extinction:
        problems.append("extinction is not almost sure")

    if problems:
        raise exc.DomainError(', '.join(problems))

    log.info("Mechanism is <35>{}<32> and can be conditioned", classify(mechanism).value)


def _description(mech: BranchingMechanism, lams: List[float]) -> Dict[str, Any]:
    criticality = classify(mech)
    values = []
    for lam in lams:
        row = {'lam': lam, 'psi': float(psi_eval(mech, lam))}
        if criticality != Criticality.SUPERCRITICAL:
            row['phi'] = float(phi_eval(mech, lam))
        values.append(row)

    return {
        'mechanism': mech.to_dict(),
        'rho': mech.rho,
        'criticality': criticality.value,
        'regularity': dataclasses.asdict(check_regularity(mech)),
        'values': values,
    }
