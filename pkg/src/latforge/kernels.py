"""Backend selection for the hot loops.

The compiled extension ``latforge._ckernels`` is used when it imports;
otherwise the numpy implementations in ``latforge._pykernels`` are used.
Setting ``LATFORGE_PURE=1`` forces the fallback.
"""

import os

from latforge import _pykernels

python_backend = _pykernels

if os.environ.get("LATFORGE_PURE", "") not in ("", "0"):
    compiled_backend = None
else:
    try:
        from latforge import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

closure_rows = backend.closure_rows
whitman_violation = backend.whitman_violation
modular_violation = backend.modular_violation
distributive_violation = backend.distributive_violation
semidistributive_violation = backend.semidistributive_violation
identity_violation = backend.identity_violation
