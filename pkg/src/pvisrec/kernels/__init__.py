"""Hot numeric kernels with env-selected numba / pure-numpy paths.

The bound implementations depend on the ``PVISREC_NUMBA`` flag resolved in
:mod:`pvisrec.accel`; callers that need a specific path (parity tests, the
kernel benchmark) import ``stats_numba`` / ``stats_numpy`` directly.
"""

from __future__ import annotations

from .. import accel

if accel.NUMBA_ENABLED:
    from . import stats_numba as stats
    from .sparse_numba import csr_matmul_dense, scaled_rows_solve, weighted_rows_solve
else:
    from . import stats_numpy as stats  # type: ignore[no-redef]
    from .sparse_numpy import scaled_rows_solve, weighted_rows_solve  # type: ignore[no-redef]

    csr_matmul_dense = None  # numpy path multiplies through COO scatter instead

from .sparse_numpy import coo_matmul_dense

PSI_SIZE = stats.PSI_SIZE

psi_kernel = stats.psi_kernel
kmeans_1d = stats.kmeans_1d
quartiles = stats.quartiles
