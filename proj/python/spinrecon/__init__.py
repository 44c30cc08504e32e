"""Spin-1/2 state reconstruction with a spin or coherent-light assistant."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
