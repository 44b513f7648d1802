"""Gesture motion-graph engine: Python surface over the C++ core.

The compiled extension lives inside this package in an installed wheel and as
a sibling top-level module in a plain CMake build tree; both layouts are
accepted here.
"""

try:
    from mograph import _mograph as _impl
    from mograph._mograph import *  # noqa: F401,F403
except ImportError:  # CMake build tree: extension next to the package dir
    import _mograph as _impl
    from _mograph import *  # noqa: F401,F403

__version__ = _impl.__version__
__all__ = sorted(name for name in dir(_impl) if not name.startswith("_"))
