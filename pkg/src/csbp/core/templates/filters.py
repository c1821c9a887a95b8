"""
Filters available in the config templates.

.. autofunction:: number_filter
"""
from typing import Any


def number_filter(value: Any) -> str:
    """ Render a number as a JSON literal that reads back to the same float.

    **Usage:**

    .. code-block:: jinja

        "sigma": {{ mechanism.sigma | number }}

    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return str(value)
    return repr(float(value))
