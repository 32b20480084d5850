from ._core import *  # noqa: F401,F403
from ._core import engine_version

__version__ = engine_version
