"""Hot-loop kernels with a compiled core and a pure-numpy fallback.

The compiled extension is preferred when importable. Set
DUETBENCH_KERNELS=python to force the fallback (useful for benchmarking and
for debugging suspected kernel issues).
"""

import os

from . import _python

ROLE_GOAL = _python.ROLE_GOAL
ROLE_AVOID = _python.ROLE_AVOID
ROLE_NEUTRAL = _python.ROLE_NEUTRAL

if os.environ.get("DUETBENCH_KERNELS", "").lower() in {"python", "py", "fallback"}:
    _impl = _python
    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _python
        BACKEND = "python"

pair_scores = _impl.pair_scores
