"""Kernel backend selection: compiled extension if built, pure Python otherwise.

Set TIPSIM_PURE=1 to force the pure-Python kernels (used by the benchmark and
the backend-equivalence tests).
"""

import os

if os.environ.get("TIPSIM_PURE"):
    from tipsim import _pykern as _impl
else:
    try:
        from tipsim import _ckern as _impl  # type: ignore[no-redef]
    except ImportError:
        from tipsim import _pykern as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND
GEOM_EPS = 1e-12

reflect_point = _impl.reflect_point
transform_poly = _impl.transform_poly
convex_overlap = _impl.convex_overlap
point_in_convex = _impl.point_in_convex
poly_in_rect = _impl.poly_in_rect
place_on_edge = _impl.place_on_edge
revolve_step = _impl.revolve_step
