"""Kernel lane selection: compiled extension with a pure-Python fallback.

The compiled lane is preferred when available. Set HATCHECK_PURE_KERNELS=1
to force the pure lane (used by the lane-equivalence tests and benchmark).
Both lanes expose the same four functions with identical results.
"""

import os

_forced_pure = os.environ.get("HATCHECK_PURE_KERNELS", "") not in ("", "0")

if _forced_pure:
    from . import pure as _impl

    KERNEL_LANE = "pure"
else:
    try:
        from . import _fast as _impl

        KERNEL_LANE = "compiled"
    except ImportError:
        from . import pure as _impl

        KERNEL_LANE = "pure"

fixed_point_census = _impl.fixed_point_census
sample_fixed_point_counts = _impl.sample_fixed_point_counts
sample_matching_ranks = _impl.sample_matching_ranks
raw_stream = _impl.raw_stream

__all__ = [
    "KERNEL_LANE",
    "fixed_point_census",
    "sample_fixed_point_counts",
    "sample_matching_ranks",
    "raw_stream",
]
