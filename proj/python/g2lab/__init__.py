"""Curvature, heat-flow and optimal-transport verification lab."""

try:
    from ._g2lab import *  # noqa: F401,F403  (installed wheel layout)
    from ._g2lab import __doc__ as _doc
except ImportError:  # pragma: no cover - build-tree layout
    from _g2lab import *  # noqa: F401,F403
    from _g2lab import __doc__ as _doc

__doc__ = _doc
__version__ = "0.1.0"
