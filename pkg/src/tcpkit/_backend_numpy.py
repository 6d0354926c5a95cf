"""Pure-numpy fallback kernels.

Twin of :mod:`tcpkit._backend_numba`. The vectorised expressions below
multiply and accumulate in the same order as the jitted loops (trailing
index columns left to right, entries in storage order via ``np.add.at``),
so both backends return bitwise-identical floats. Keep in sync.
"""

import numpy as np

from ._ge import gauss_solve

NAME = "numpy"


def apply_power(idx, vals, x, n):
    m = idx.shape[1]
    contrib = vals.copy()
    for k in range(1, m):
        contrib = contrib * x[idx[:, k]]
    y = np.zeros(n)
    np.add.at(y, idx[:, 0], contrib)
    return y


def apply_power_batch(idx, vals, xs, n):
    m = idx.shape[1]
    nb = xs.shape[0]
    contrib = np.broadcast_to(vals, (nb, vals.shape[0])).copy()
    for k in range(1, m):
        contrib *= xs[:, idx[:, k]]
    ys = np.zeros((nb, n))
    rows = np.broadcast_to(np.arange(nb)[:, None], contrib.shape)
    cols = np.broadcast_to(idx[:, 0][None, :], contrib.shape)
    np.add.at(ys, (rows, cols), contrib)
    return ys


def power_jacobian(idx, vals, x, n):
    m = idx.shape[1]
    jac = np.zeros((n, n))
    for k in range(1, m):
        contrib = vals.copy()
        for l in range(1, m):
            if l != k:
                contrib = contrib * x[idx[:, l]]
        np.add.at(jac, (idx[:, 0], idx[:, k]), contrib)
    return jac


def _active_residual(idx, vals, q, act, z, n):
    x = np.zeros(n)
    x[act] = z
    f = apply_power(idx, vals, x, n)
    g = f[act] + q[act]
    if g.size and not np.all(np.isfinite(g)):
        gn = np.inf
    elif g.size:
        gn = float(np.max(np.abs(g)))
    else:
        gn = 0.0
    return x, g, gn


def newton_roots(idx, vals, q, act, starts, tol_root, max_iter, max_halve):
    """Damped multistart Newton on the active-coordinate subsystem."""
    k = act.shape[0]
    n = q.shape[0]
    ns = starts.shape[0]
    roots = np.empty((ns, k))
    ok = np.zeros(ns, np.uint8)
    for s in range(ns):
        z = starts[s].copy()
        x, g, gn = _active_residual(idx, vals, q, act, z, n)
        it = 0
        while gn > tol_root and it < max_iter:
            jf = power_jacobian(idx, vals, x, n)
            a = jf[np.ix_(act, act)].copy()
            p = gauss_solve(a, -g)
            if not np.all(np.isfinite(p)):
                break
            improved = False
            alpha = 1.0
            for _ in range(max_halve):
                znew = z + alpha * p
                xnew, gnew, gnnew = _active_residual(idx, vals, q, act, znew, n)
                # demand a relative decrease so rootless subsystems bail out
                # instead of crawling for the whole iteration budget
                if gnnew < gn * 0.9999:
                    z, x, g, gn = znew, xnew, gnew, gnnew
                    improved = True
                    break
                alpha *= 0.5
            if not improved:
                break
            it += 1
        roots[s] = z
        ok[s] = 1 if gn <= tol_root else 0
    return roots, ok


def warmup():
    """No jit here; provided for interface parity with the numba twin."""
