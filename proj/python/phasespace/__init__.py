"""Smoothed weak-valued states and smoothed Wigner distributions in phase space."""

from ._phasespace import *  # noqa: F401,F403
from ._phasespace import (  # noqa: F401
    OrthogonalBoundary,
    PhaseSpaceError,
    PreconditionError,
    TruncationInsufficient,
)

__version__ = "0.1.0"
