"""Backend selection for the row-reduction kernel.

The compiled extension ``gkmod._kernel`` is used when it has been built;
otherwise the pure-Python ``gkmod._kernel_py`` is used.  Setting
``GKMOD_PURE_PYTHON=1`` forces the fallback.
"""

import os

if os.environ.get("GKMOD_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernel_py as _impl
else:
    try:
        from . import _kernel as _impl
    except ImportError:
        from . import _kernel_py as _impl

BACKEND = "compiled" if _impl.__name__.endswith("._kernel") else "python"

normalize = _impl.normalize
eliminate = _impl.eliminate
reduce_row = _impl.reduce_row
insert_row = _impl.insert_row

__all__ = ["BACKEND", "normalize", "eliminate", "reduce_row", "insert_row"]
