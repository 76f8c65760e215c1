"""Quench dynamics of disordered transverse-field Ising rings."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
