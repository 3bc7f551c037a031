"""Selects the compiled F_p kernel when it is importable.

Set ``LGSING_PURE_PYTHON=1`` to force the pure-Python implementation.
"""
import os

from . import _fpkernel_py

pure_rref_modp = _fpkernel_py.rref_modp
compiled_rref_modp = None

if os.environ.get("LGSING_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._fpkernel import rref_modp as compiled_rref_modp
    except ImportError:  # extension not built
        compiled_rref_modp = None

rref_modp = compiled_rref_modp or pure_rref_modp
BACKEND = "compiled" if compiled_rref_modp is not None else "python"
