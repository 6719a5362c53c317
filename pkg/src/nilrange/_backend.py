"""Select the eigen-kernel implementation at import time.

The compiled Cython module is used when it was built; otherwise, or when
``NILRANGE_BACKEND=python`` is set, the numpy fallback is loaded.
"""

import os

if os.environ.get("NILRANGE_BACKEND", "").lower() == "python":
    from . import _jacobi_py as kernel

    BACKEND = "python"
else:
    try:
        from . import _jacobi as kernel

        BACKEND = "compiled"
    except ImportError:
        from . import _jacobi_py as kernel

        BACKEND = "python"

__all__ = ["kernel", "BACKEND"]
