"""Quadratic character sums, L-values and related models."""

from ._qcs import *  # noqa: F401,F403
from ._qcs import __version__
