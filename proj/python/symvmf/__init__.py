"""Group-invariant von Mises-Fisher estimation on the 3-sphere."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
