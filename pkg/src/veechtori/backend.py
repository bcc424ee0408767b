"""Kernel backend selection: compiled Cython core with numpy fallback.

Set VEECHTORI_BACKEND=python to force the fallback even when the compiled
extension is available (used by the benchmark and the test suite).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("VEECHTORI_BACKEND", "").lower() == "python":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

theta_jets = _impl.theta_jets
theta0_odd_jets = _impl.theta0_odd_jets
BACKEND_NAME = _impl.BACKEND_NAME


def available_backends():
    """Names of the kernel implementations importable in this install."""
    names = ["python"]
    try:
        from . import _kernels  # noqa: F401
        names.insert(0, "cython")
    except ImportError:
        pass
    return names
