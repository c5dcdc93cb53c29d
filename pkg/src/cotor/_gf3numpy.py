"""Pure-numpy GF(3) elimination kernels.

Fallback backend with the same contract as the compiled core in
``_gf3core``: row reduction, column-echelon pivot profiles and matrix
products, all on C-contiguous uint8 arrays with entries in {0, 1, 2}.
Arguments are never mutated.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"

# multiplicative inverses mod 3 (index 0 unused)
_INV = (0, 1, 2)


def rref(a):
    """Reduced row echelon form mod 3.

    Returns ``(r, rank, pivots)`` where ``r`` is the RREF of ``a`` and
    ``pivots`` lists the pivot column of each of the first ``rank`` rows.
    """
    r = np.array(a, dtype=np.uint8, order="C", copy=True)
    m, n = r.shape
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        p = row + int(nz[0])
        if p != row:
            r[[row, p], :] = r[[p, row], :]
        if r[row, col] == 2:
            r[row, :] = (r[row, :] * 2) % 3
        others = np.nonzero(r[:, col])[0]
        others = others[others != row]
        if others.size:
            mult = (3 - r[others, col].astype(np.int16)) % 3
            r[others, :] = (r[others, :] + np.outer(mult, r[row, :])) % 3
        pivots.append(col)
        row += 1
    return r, row, pivots


def col_profile(a):
    """Greedy column-echelon pivot profile.

    Columns are processed left to right and reduced against earlier pivot
    columns (always by their topmost nonzero row), so the recorded pivot
    positions ``(lead_row, col)`` determine the rank of every top-left
    submatrix: ``rank(a[:r, :c]) = #{(i, j) pivots : i < r and j < c}``.
    """
    work = np.array(a, dtype=np.uint8, order="C", copy=True)
    m, n = work.shape
    lead_of_row = {}          # leading row -> normalized pivot column
    pivots = []
    for j in range(n):
        v = work[:, j]
        while True:
            nz = np.nonzero(v)[0]
            if nz.size == 0:
                break
            r = int(nz[0])
            piv = lead_of_row.get(r)
            if piv is None:
                if v[r] == 2:
                    v = (v * 2) % 3
                lead_of_row[r] = v.copy()
                pivots.append((r, j))
                break
            v = (v + (3 - int(v[r])) * piv) % 3
            v = v.astype(np.uint8)
    return pivots


def matmul(a, b):
    """Matrix product mod 3 (int64 accumulation is exact at these sizes)."""
    return (a.astype(np.int64) @ b.astype(np.int64) % 3).astype(np.uint8)


def matvec(a, v):
    return (a.astype(np.int64) @ v.astype(np.int64) % 3).astype(np.uint8)
