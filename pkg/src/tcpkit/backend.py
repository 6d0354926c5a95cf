"""Kernel backend selection.

The hot kernels (multilinear products, Jacobians, the multistart Newton
driver) exist twice: jit-compiled with numba and as a pure-numpy fallback.
The environment variable ``TCPKIT_BACKEND`` picks one:

* ``auto`` (default) - numba when importable, else numpy;
* ``numba`` - require numba, fail loudly if missing;
* ``numpy`` - force the fallback (useful for debugging and benchmarks).

Both backends return bitwise-identical results; see ``benchmarks/`` for a
speed comparison.
"""

import os

_choice = os.environ.get("TCPKIT_BACKEND", "auto").strip().lower()

if _choice in ("", "auto"):
    try:
        from . import _backend_numba as _impl
    except ImportError:
        from . import _backend_numpy as _impl
elif _choice == "numba":
    from . import _backend_numba as _impl
elif _choice == "numpy":
    from . import _backend_numpy as _impl
else:
    raise ValueError(
        f"TCPKIT_BACKEND must be 'auto', 'numba' or 'numpy', got {_choice!r}"
    )

NAME = _impl.NAME
apply_power = _impl.apply_power
apply_power_batch = _impl.apply_power_batch
power_jacobian = _impl.power_jacobian
newton_roots = _impl.newton_roots
gauss_solve = _impl.gauss_solve
warmup = _impl.warmup
