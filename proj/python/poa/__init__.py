"""Principles-of-art conditioned diffusion toolkit."""

try:
    from ._core import *  # noqa: F401,F403  (installed wheel layout)
    from . import _core as core  # noqa: F401
except ImportError:  # build-tree layout: _core.so sits directly on PYTHONPATH
    from _core import *  # noqa: F401,F403
    import _core as core  # noqa: F401

__all__ = [name for name in dir(core) if not name.startswith("_")]
