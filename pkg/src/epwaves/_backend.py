"""Select the compiled RK4 kernel when it is built, else the Python one."""
import os

try:
    if os.environ.get("EPWAVES_PURE_PYTHON"):
        raise ImportError
    from ._rk4 import integrate_profile  # type: ignore[attr-defined]
    BACKEND = "cython"
except ImportError:
    from ._rk4_py import integrate_profile
    BACKEND = "python"

__all__ = ["integrate_profile", "BACKEND"]
