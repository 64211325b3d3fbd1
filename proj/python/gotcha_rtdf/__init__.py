"""Challenge-response screening for live video feeds.

Thin wrapper around the compiled extension; everything public lives there.
"""

from ._gotcha import *  # noqa: F401,F403
from ._gotcha import __version__  # noqa: F401
