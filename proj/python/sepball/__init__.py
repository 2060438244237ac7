"""Separable-ball geometry: cone radius calculus and numerical certification
for multi-qubit systems."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
