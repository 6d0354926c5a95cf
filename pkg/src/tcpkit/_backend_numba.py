"""numba-jitted hot kernels.

Twin of :mod:`tcpkit._backend_numpy`: both expose the same functions with
the same arithmetic ordering, so results agree bitwise between backends.
Keep any change here in sync with the numpy twin.
"""

import numpy as np
from numba import njit

from ._ge import gauss_solve as _gauss_solve_src

NAME = "numba"

gauss_solve = njit(cache=True)(_gauss_solve_src)


@njit(cache=True)
def apply_power(idx, vals, x, n):
    m = idx.shape[1]
    y = np.zeros(n)
    for e in range(idx.shape[0]):
        s = vals[e]
        for k in range(1, m):
            s *= x[idx[e, k]]
        y[idx[e, 0]] += s
    return y


@njit(cache=True)
def apply_power_batch(idx, vals, xs, n):
    m = idx.shape[1]
    nb = xs.shape[0]
    ys = np.zeros((nb, n))
    for b in range(nb):
        for e in range(idx.shape[0]):
            s = vals[e]
            for k in range(1, m):
                s *= xs[b, idx[e, k]]
            ys[b, idx[e, 0]] += s
    return ys


@njit(cache=True)
def power_jacobian(idx, vals, x, n):
    m = idx.shape[1]
    jac = np.zeros((n, n))
    for k in range(1, m):
        for e in range(idx.shape[0]):
            s = vals[e]
            for l in range(1, m):
                if l != k:
                    s *= x[idx[e, l]]
            jac[idx[e, 0], idx[e, k]] += s
    return jac


@njit(cache=True)
def _active_residual(idx, vals, q, act, z, n):
    k = act.shape[0]
    x = np.zeros(n)
    for j in range(k):
        x[act[j]] = z[j]
    f = apply_power(idx, vals, x, n)
    g = np.empty(k)
    bad = False
    mx = 0.0
    for j in range(k):
        v = f[act[j]] + q[act[j]]
        g[j] = v
        if not np.isfinite(v):
            bad = True
        av = abs(v)
        if av > mx:
            mx = av
    if bad:
        mx = np.inf
    return x, g, mx


@njit(cache=True)
def newton_roots(idx, vals, q, act, starts, tol_root, max_iter, max_halve):
    """Damped multistart Newton on the active-coordinate subsystem.

    Returns the final iterate per start and a flag marking the ones whose
    residual max-norm reached ``tol_root``.
    """
    n = q.shape[0]
    k = act.shape[0]
    ns = starts.shape[0]
    roots = np.empty((ns, k))
    ok = np.zeros(ns, np.uint8)
    for s in range(ns):
        z = starts[s].copy()
        x, g, gn = _active_residual(idx, vals, q, act, z, n)
        it = 0
        while gn > tol_root and it < max_iter:
            jf = power_jacobian(idx, vals, x, n)
            a = np.empty((k, k))
            for i in range(k):
                for j in range(k):
                    a[i, j] = jf[act[i], act[j]]
            rhs = np.empty(k)
            for j in range(k):
                rhs[j] = -g[j]
            p = gauss_solve(a, rhs)
            pbad = False
            for j in range(k):
                if not np.isfinite(p[j]):
                    pbad = True
            if pbad:
                break
            improved = False
            alpha = 1.0
            for _ in range(max_halve):
                znew = z + alpha * p
                xnew, gnew, gnnew = _active_residual(idx, vals, q, act, znew, n)
                # demand a relative decrease so rootless subsystems bail out
                # instead of crawling for the whole iteration budget
                if gnnew < gn * 0.9999:
                    z = znew
                    x = xnew
                    g = gnew
                    gn = gnnew
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
    """Trigger (cached) jit compilation of every kernel on tiny inputs."""
    idx = np.array([[0, 0, 0], [1, 1, 1]], dtype=np.int64)
    vals = np.array([1.0, 1.0])
    x = np.array([1.0, 2.0])
    apply_power(idx, vals, x, 2)
    apply_power_batch(idx, vals, x.reshape(1, 2), 2)
    power_jacobian(idx, vals, x, 2)
    newton_roots(idx, vals, np.array([-4.0, 1.0]),
                 np.array([0], dtype=np.int64),
                 np.array([[1.5]]), 1e-11, 60, 40)
