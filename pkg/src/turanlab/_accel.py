"""JIT selection.

Kernels are written once and compiled with numba when it is importable and
``TURANLAB_DISABLE_JIT`` is unset (or ``0``).  Otherwise the same source runs
as plain Python over numpy arrays, which is slow but exact.
"""
import os

_flag = os.environ.get("TURANLAB_DISABLE_JIT", "0").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    import numba

    JIT = True
except ImportError:
    numba = None
    JIT = False


def jit(fn):
    if JIT:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def backend():
    return "numba" if JIT else "python"
