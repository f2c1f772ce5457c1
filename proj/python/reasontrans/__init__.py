"""Python bindings for the reasontrans harness.

Exposes the reward kernels (execution-based and length-based), CodeBLEU,
completion parsing, and prompt rendering from the C++ core.
"""

try:
    from ._reasontrans import *  # noqa: F401,F403  (installed wheel layout)
    from ._reasontrans import __version__  # noqa: F401
except ImportError:  # in-tree build: the extension sits next to the package dir
    from _reasontrans import *  # noqa: F401,F403
    from _reasontrans import __version__  # noqa: F401
