"""Joint LEO-satellite / UE state estimation with link geometry.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports it unchanged. ``run_scenario`` and ``monte_carlo`` return plain
dicts of numpy arrays so results drop straight into analysis scripts.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
