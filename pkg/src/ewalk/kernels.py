"""Kernel dispatch: compiled C extension when built, pure numpy otherwise.

BACKEND records which implementation is active; both expose walk_step_pure
and walk_step_density with identical semantics (see _kernels_py docstrings).
"""

try:
    from . import _kernels_cy as _impl

    BACKEND = "c-extension"
except ImportError:  # extension not built (no compiler / source install)
    from . import _kernels_py as _impl

    BACKEND = "numpy"

walk_step_pure = _impl.walk_step_pure
walk_step_density = _impl.walk_step_density


def available_backends():
    """(name, module) pairs of all importable kernel backends, active one first."""
    from . import _kernels_py

    out = [("numpy", _kernels_py)]
    try:
        from . import _kernels_cy

        out.insert(0, ("c-extension", _kernels_cy))
    except ImportError:
        pass
    return out
