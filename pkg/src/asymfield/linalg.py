"""Dense complex Gaussian elimination with partial pivoting.

The scattering systems are tiny (a few dozen unknowns) and very sparse, so
the elimination runs on Python lists and skips exact zeros; numpy call
overhead would dominate otherwise.
"""
import numpy as np

from .errors import SingularSystemError

PIVOT_TOL = 1e-12


def gauss_solve(a, b, pivot_tol=PIVOT_TOL):
    """Solve ``a @ x = b`` for square complex ``a``; ``b`` may be 1-D or 2-D.

    Rows are chosen by largest magnitude in the current column; ties go to
    the lowest row index so the elimination order is fully deterministic.
    Raises :class:`SingularSystemError` when the best pivot is below
    ``pivot_tol`` times the largest matrix entry.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    vector = b.ndim == 1
    b2 = b[:, None] if vector else b
    if b2.shape[0] != n:
        raise ValueError("right-hand side does not match the matrix size")
    m = b2.shape[1]
    scale = float(np.abs(a).max()) if n else 0.0
    if n and scale == 0:
        raise SingularSystemError("singular system: zero matrix", pivot=0.0)

    # augmented rows [a | b]
    rows = [ra + rb for ra, rb in zip(a.tolist(), b2.tolist())]
    width = n + m
    for k in range(n):
        p, best = k, abs(rows[k][k])
        for i in range(k + 1, n):
            v = abs(rows[i][k])
            if v > best:
                p, best = i, v
        if best <= pivot_tol * scale:
            raise SingularSystemError(
                f"singular system: pivot {best:.3e} in column {k} is below threshold", pivot=best
            )
        if p != k:
            rows[k], rows[p] = rows[p], rows[k]
        prow = rows[k]
        piv = prow[k]
        nz = [j for j in range(k + 1, width) if prow[j] != 0]
        for i in range(k + 1, n):
            row = rows[i]
            if row[k] != 0:
                f = row[k] / piv
                row[k] = 0j
                for j in nz:
                    row[j] -= f * prow[j]

    x = [[0j] * m for _ in range(n)]
    for k in range(n - 1, -1, -1):
        row = rows[k]
        piv = row[k]
        nz = [j for j in range(k + 1, n) if row[j] != 0]
        for c in range(m):
            acc = row[n + c]
            for j in nz:
                acc -= row[j] * x[j][c]
            x[k][c] = acc / piv
    out = np.array(x, dtype=complex).reshape(n, m)
    return out[:, 0] if vector else out
