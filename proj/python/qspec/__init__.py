"""Nonlinear optical signals of multilevel systems driven by quantized light."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
