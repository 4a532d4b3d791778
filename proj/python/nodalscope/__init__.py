"""Exact toral eigenfunctions, ball statistics, doubling indices and nodal sets."""

from ._nodalscope import *  # noqa: F401,F403
from ._nodalscope import NodalscopeError, __version__  # noqa: F401
