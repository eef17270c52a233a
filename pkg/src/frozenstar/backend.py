"""Kernel backend selection.

The hot primitives (``ratio_series``, ``term_ratios``, ``sin_prod_excl``) have
a numba-jitted implementation and a pure-numpy fallback. Selection order:

* ``FROZENSTAR_BACKEND=numpy``  -- force the numpy fallback, numba never imported
* ``FROZENSTAR_BACKEND=numba``  -- require numba, raise if unavailable
* unset / ``auto``              -- numba if importable, else numpy

``set_backend`` switches at runtime (used by the benchmark and the test
suite). Both backends agree to tight relative tolerance; per-backend output
is bit-reproducible.
"""

import os

from . import _kernels_numpy

_modules = {"numpy": _kernels_numpy}
_active_name = "numpy"


def _load_numba():
    if "numba" not in _modules:
        from . import _kernels_numba

        _modules["numba"] = _kernels_numba
    return _modules["numba"]


def set_backend(name: str) -> str:
    """Activate a kernel backend ("numpy" or "numba"); returns the active name."""
    global _active_name
    name = name.lower()
    if name == "numpy":
        _active_name = "numpy"
    elif name == "numba":
        _load_numba()
        _active_name = "numba"
    else:
        raise ValueError(f"unknown backend {name!r} (expected 'numpy' or 'numba')")
    return _active_name


def active_backend() -> str:
    return _active_name


def ratio_series(z, l, w, eps):
    return _modules[_active_name].ratio_series(z, l, w, eps)


def term_ratios(z, l, n_terms, eps):
    return _modules[_active_name].term_ratios(z, l, n_terms, eps)


def sin_prod_excl(z, lengths):
    return _modules[_active_name].sin_prod_excl(z, lengths)


_env = os.environ.get("FROZENSTAR_BACKEND", "auto").lower()
if _env == "numpy":
    set_backend("numpy")
elif _env == "numba":
    set_backend("numba")
elif _env in ("", "auto"):
    try:
        set_backend("numba")
    except ImportError:
        set_backend("numpy")
else:
    raise RuntimeError(f"FROZENSTAR_BACKEND={_env!r} not recognized (use 'numpy', 'numba' or 'auto')")
