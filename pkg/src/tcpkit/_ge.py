"""Dense Gaussian elimination used by the Newton drivers.

Kept loop-only and dtype-generic so the numba backend can jit-compile it
unchanged while the root polisher reuses it with ``np.longdouble``.
"""


def gauss_solve(a, b):
    """Solve ``a @ x = b`` by Gaussian elimination with partial pivoting.

    Inputs are copied. Pivots smaller than 1e-300 in magnitude are floored
    so an exactly singular system produces a huge step (rejected later by
    the Newton damping) instead of NaNs.
    """
    n = a.shape[0]
    m = a.copy()
    x = b.copy()
    for col in range(n):
        piv = col
        best = abs(m[col, col])
        for r in range(col + 1, n):
            v = abs(m[r, col])
            if v > best:
                best = v
                piv = r
        if piv != col:
            for c in range(col, n):
                tmp = m[col, c]
                m[col, c] = m[piv, c]
                m[piv, c] = tmp
            tmp = x[col]
            x[col] = x[piv]
            x[piv] = tmp
        p = m[col, col]
        if abs(p) < 1e-300:
            p = 1e-300 if p >= 0 else -1e-300
            m[col, col] = p
        for r in range(col + 1, n):
            f = m[r, col] / p
            if f != 0.0:
                for c in range(col + 1, n):
                    m[r, c] -= f * m[col, c]
                x[r] -= f * x[col]
    for col in range(n - 1, -1, -1):
        s = x[col]
        for c in range(col + 1, n):
            s -= m[col, c] * x[c]
        x[col] = s / m[col, col]
    return x
