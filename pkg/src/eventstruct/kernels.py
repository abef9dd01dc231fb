"""Kernel selection: compiled extension if built, pure Python otherwise.

Set ``EVENTSTRUCT_PURE=1`` in the environment to force the pure-Python
kernels even when the extension is available (used by the benchmark and
the equivalence tests).
"""

import os

from eventstruct import _kernels_py

if os.environ.get("EVENTSTRUCT_PURE") == "1":
    _impl = _kernels_py
else:
    try:
        from eventstruct import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

IMPLEMENTATION: str = _impl.IMPLEMENTATION
MAX_EVENTS: int = _kernels_py.MAX_EVENTS

prime_configurations = _impl.prime_configurations
stable_configurations = _impl.stable_configurations
maximal_masks = _impl.maximal_masks


def load_pure():
    """The pure-Python kernel module (for benchmarks and cross-checks)."""
    return _kernels_py


def load_compiled():
    """The compiled kernel module, or None when it was not built."""
    try:
        from eventstruct import _kernels

        return _kernels
    except ImportError:
        return None
