"""Tridiagonal kernels with a compiled (Cython) core and a NumPy/LAPACK fallback.

The compiled module is used when it was built and ``TUNNELCATCH_BACKEND`` is not
set to ``python``.

Functions
---------
sturm_count, bisect_eigenvalues
    Sturm-sequence eigenvalue counting and bisection.
gt_factor, gt_solve
    Pivoted LU of a real tridiagonal matrix and the matching solve.
cn_propagate
    Crank-Nicolson time stepping with occupation bookkeeping.
"""

import os

from . import _pykernels

python = _pykernels
compiled = None
if os.environ.get("TUNNELCATCH_BACKEND", "").lower() != "python":
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

backend = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None and backend is compiled else "python"

sturm_count = backend.sturm_count
bisect_eigenvalues = backend.bisect_eigenvalues
gt_factor = backend.gt_factor
gt_solve = backend.gt_solve
cn_propagate = backend.cn_propagate
pivmin_of = backend.pivmin_of

__all__ = ["BACKEND", "bisect_eigenvalues", "cn_propagate", "compiled", "gt_factor", "gt_solve",
           "pivmin_of", "python", "sturm_count"]
