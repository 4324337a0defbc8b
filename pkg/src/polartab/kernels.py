"""Term kernels, compiled when available.

The Cython build of ``_speedups`` is preferred; the pure-Python ``_kernels``
module is used when the extension is missing or ``POLARTAB_PURE=1`` is set.
``BACKEND`` names the implementation in use.
"""

import os

from . import _kernels

if os.environ.get("POLARTAB_PURE", "") not in ("", "0"):
    _impl = _kernels
    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels
        BACKEND = "python"

substitute = _impl.substitute
walk = _impl.walk
resolve = _impl.resolve
occurs = _impl.occurs
unify = _impl.unify
unify_args = _impl.unify_args
match = _impl.match
match_args = _impl.match_args

__all__ = [
    "BACKEND", "substitute", "walk", "resolve", "occurs",
    "unify", "unify_args", "match", "match_args",
]
