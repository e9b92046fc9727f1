"""Backend selection: compiled extension when available, pure Python otherwise.

Set ``OUFIELDS_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and by tests that pin down backend equivalence).
"""

import os

if os.environ.get("OUFIELDS_PURE_PYTHON"):
    from . import _corepy as core
else:
    try:
        from . import _corecy as core  # type: ignore[no-redef]
    except ImportError:
        from . import _corepy as core  # type: ignore[no-redef]

backend_name = core.BACKEND
