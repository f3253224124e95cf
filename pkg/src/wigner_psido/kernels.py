"""Kernel dispatch: the compiled extension when built, numpy otherwise.

Set ``WIGNER_PSIDO_BACKEND=python`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("WIGNER_PSIDO_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _impl  # noqa: F811
        BACKEND = "compiled"
    except ImportError:
        pass

trig_sum = _impl.trig_sum
conv_point = _impl.conv_point


def available_backends():
    """Mapping of backend name to kernel module, for benchmarks and tests."""
    backends = {"python": _kernels_py}
    try:
        from . import _kernels
        backends["compiled"] = _kernels
    except ImportError:
        pass
    return backends
