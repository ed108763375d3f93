"""Finite effect algebras, state operators, and conditional expectations.

Payloads are plain dicts and lists in the same shapes the command line tool
reads and writes; rationals come back exact as {"num": ..., "den": ...}
objects when they do not fit a small integer.
"""

try:
    from ._core import *  # noqa: F401,F403  (installed wheel layout)
except ImportError:
    from _core import *  # noqa: F401,F403  (build-tree layout)
