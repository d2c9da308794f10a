"""Kernel selection: the compiled extension when importable, else Python.

Set ``SNHORSESHOE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _fallback

BACKEND = "python"
_impl = _fallback

if os.environ.get("SNHORSESHOE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _fallback

f_eval = _impl.f_eval
f_deriv = _impl.f_deriv
f_eval_array = _impl.f_eval_array
f_deriv_array = _impl.f_deriv_array
deriv_product = _impl.deriv_product
passage_count = _impl.passage_count
escape_count = _impl.escape_count
orbit_log_products = _impl.orbit_log_products
minplus_step = _impl.minplus_step
minplus_values = _impl.minplus_values

__all__ = [
    "BACKEND", "f_eval", "f_deriv", "f_eval_array", "f_deriv_array",
    "deriv_product", "passage_count", "escape_count", "orbit_log_products",
    "minplus_step", "minplus_values",
]
