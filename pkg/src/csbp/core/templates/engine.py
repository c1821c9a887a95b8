""" Config templates and the presets they are rendered from. """
import functools
import math
from typing import Any, Dict, Optional

import jinja2

from csbp.core import exc
from csbp.core.mechanism import BranchingMechanism

from . import filters


TemplateCtx = Dict[str, Any]
PRESETS = {
    'feller': 'Feller diffusion, subcritical: psi(lam) = lam + lam^2',
    'critical': 'Critical Feller diffusion: psi(lam) = lam^2',
    'stable': 'Critical 1.5-stable: psi(lam) = lam^1.5',
}


@functools.lru_cache(maxsize=None)
def _environment() -> jinja2.Environment:
    env = jinja2.Environment(
        loader=jinja2.PackageLoader('csbp', 'templates'),
        keep_trailing_newline=True,
        undefined=jinja2.StrictUndefined,
    )
    env.filters['number'] = filters.number_filter
    return env


class Engine(object):
    """ Renders the config templates shipped in ``src/csbp/templates``.

    Every engine shares one jinja2 environment, created on first use:

    >>> from csbp.core.templates import Engine
    >>>
    >>> Engine().env is Engine().env
    True

    Undefined template values are errors, so a preset missing a value can't
    render a broken config.
    """
    def __init__(self) -> None:
        self.env = _environment()

    def render(
        self,
        template_str: str,
        template_ctx: Optional[TemplateCtx] = None,
    ) -> str:
        """ Render a template string.

        Examples:

            >>> from csbp.core.templates import Engine
            >>>
            >>> Engine().render("{{ 0.1 | number }}")
            '0.1'

        """
        return self.env.from_string(template_str).render(template_ctx or {})

    def render_file(
        self,
        template_file: str,
        template_ctx: Optional[TemplateCtx] = None,
    ) -> str:
        return self.env.get_template(template_file).render(template_ctx or {})


def preset_context(name: str, seed: int = 0) -> TemplateCtx:
    """ Template values for the named preset. """
    if name == 'feller':
        mech = BranchingMechanism.feller(a=-1.0, sigma=math.sqrt(2.0))
    elif name == 'critical':
        mech = BranchingMechanism.feller(a=0.0, sigma=math.sqrt(2.0))
    elif name == 'stable':
        mech = BranchingMechanism.stable(alpha=1.5)
    else:
        raise exc.DomainError(
            f"unknown preset '{name}', pick one of {', '.join(PRESETS)}"
        )

    return {
        'preset': name,
        'about': PRESETS[name],
        'mechanism': mech.to_dict(),
        'seed': seed,
    }
