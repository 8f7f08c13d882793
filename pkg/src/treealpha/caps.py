"""Exhaustive-computation caps.

All caps can be overridden per call; the environment variable
``TREEALPHA_CAP_OVERRIDE`` (an integer) replaces every default cap at once,
as a blunt escape hatch for experiments on larger instances.
"""

from __future__ import annotations

import os

DEFAULT_CAPS = {
    "alpha": 40,
    "pattern": 12,
    "mincore_budget": 5_000_000,
    "treewidth": 20,
    "constricted": 14,
    "tree_alpha": 10,
    "mwis_brute": 24,
    "mwis_states": 5_000_000,
    "path_states": 2_000_000,
}

_ENV_VAR = "TREEALPHA_CAP_OVERRIDE"


def cap(name: str, override: int | None = None) -> int:
    """Resolve a cap: explicit override > environment override > default."""
    if override is not None:
        return override
    env = os.environ.get(_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_CAPS[name]
