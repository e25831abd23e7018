"""Backend selection for the tridiagonal kernels.

The compiled Cython module is used when it was built; otherwise the pure
Python module is used.  Set ``SOLITON_SPECTRA_PURE_PYTHON=1`` to force the
fallback (the test suite runs both).
"""

import os

from . import _tridiag_py

try:
    from . import _tridiag as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and os.environ.get("SOLITON_SPECTRA_PURE_PYTHON", "") in ("", "0"):
    backend = _compiled
    BACKEND = "cython"
else:
    backend = _tridiag_py
    BACKEND = "python"

sturm_count = backend.sturm_count
bisect_eigenvalues = backend.bisect_eigenvalues
shifted_solve = backend.shifted_solve


def available_backends():
    """Mapping of backend name to kernel module for every importable backend."""
    found = {"python": _tridiag_py}
    if _compiled is not None:
        found["cython"] = _compiled
    return found
