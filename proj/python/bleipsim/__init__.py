"""IP over BLE advertising simulator."""

try:
    from ._core import *  # noqa: F401,F403
    from . import _core  # noqa: F401
except ImportError:
    # In-tree builds put the extension next to the package on sys.path.
    from _core import *  # noqa: F401,F403
    import _core  # noqa: F401

__all__ = [n for n in dir(_core) if not n.startswith("_")]
