"""Composite competitiveness index engine (Python bindings)."""

from ._core import *  # noqa: F401,F403
from ._core import GcikitError, __doc__  # noqa: F401
