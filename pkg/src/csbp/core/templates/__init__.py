"""
###################
Config templates
###################

.. module:: csbp.core.templates
    :synopsis: jinja2 rendering of the starter run configs.

``csbp init`` renders ``csbp/templates/csbp.json.j2`` with the values of one
of the `PRESETS`. The rendered file is a regular JSON run config and goes
through the same validation as any hand written one.
"""
from .engine import Engine, PRESETS, preset_context


__all__ = ['Engine', 'PRESETS', 'preset_context']
