"""Python face of the fairify metadata-curation core.

The compiled extension lives inside this package in an installed wheel; in a
plain CMake build it sits on PYTHONPATH as a flat module instead.
"""

try:
    from ._fairify import *  # noqa: F401,F403
    from ._fairify import __version__  # noqa: F401
except ImportError:  # pragma: no cover - development builds
    from _fairify import *  # noqa: F401,F403
    from _fairify import __version__  # noqa: F401
