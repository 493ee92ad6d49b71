"""Hot-loop kernel dispatch: compiled extension if built, numpy otherwise.

`BACKEND` reports which implementation is active ("cython" or "numpy").
Both expose the same two functions with identical semantics; see
`benchmarks/bench_kernels.py` for a timing comparison.
"""

try:
    from . import _kernels_cy as _impl

    BACKEND = "cython"
except ImportError:  # extension not built; numpy path is fully equivalent
    from . import _kernels_py as _impl

    BACKEND = "numpy"

response_at = _impl.response_at
power_at = _impl.power_at
