# SPDX-License-Identifier: Apache-2.0
"""Mars ISAC simulation core (C++ extension)."""

from ._masc import *  # noqa: F401,F403
from ._masc import __version__, run_figure, parse_config, default_config  # noqa: F401
