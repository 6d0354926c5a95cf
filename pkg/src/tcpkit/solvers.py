"""Solution finding for desk-scale complementarity instances.

Strategy: a candidate solution with support ``J`` (the coordinates allowed
to be strictly positive) must zero out ``F`` on ``J`` while the remaining
coordinates stay at zero. For ``n <= n_max`` we enumerate all ``2^n``
supports, solve each reduced polynomial system by multistart damped Newton
(hot path, see :mod:`tcpkit.backend`), polish converged roots in extended
precision, and keep the points that verify as solutions.

Supports and probe points are independent work units: everything is pure
given ``(instance, options)``, random starts are seeded per support, and
results merge in sorted order, so parallel evaluation would not change the
output.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import backend
from ._ge import gauss_solve as _gauss_plain
from .errors import BadValueError, TooLargeError
from .tcp_model import (
    DEFAULT_TOL,
    ResidualReport,
    TcpInstance,
    instance_to_json_dict,
    is_solution,
    make_instance,
    natural_residual_norm,
    residuals,
)
from .tensor_core import Tensor, as_vector, normalize_index_set

DEFAULT_SEED = 42


@dataclass(frozen=True)
class SolveOptions:
    """Tolerances and search budgets shared by the solvers.

    ``tol`` accepts a point as a solution, ``tol_root`` accepts a Newton
    root, ``eps_pos`` is the strict-positivity floor for active
    coordinates, and ``dedupe`` is the distance below which two points
    count as the same solution. The defaults separate a double root from
    a coincident excluded boundary root at desk scale.
    """

    tol: float = DEFAULT_TOL
    tol_root: float = 1e-11
    eps_pos: float = 1e-10
    dedupe: float = 1e-6
    grid_points: int = 8
    n_random_starts: int = 8
    radius: float = 10.0
    seed: int = DEFAULT_SEED
    max_newton_iter: int = 60
    max_halvings: int = 40
    n_max: int = 6
    max_starts_per_set: Optional[int] = None
    polish_iters: int = 50

    def params_dict(self) -> dict:
        return {
            "tol": self.tol,
            "tol_root": self.tol_root,
            "eps_pos": self.eps_pos,
            "dedupe": self.dedupe,
            "grid_points": self.grid_points,
            "n_random_starts": self.n_random_starts,
            "radius": self.radius,
            "seed": self.seed,
            "max_newton_iter": self.max_newton_iter,
            "n_max": self.n_max,
        }


@dataclass(frozen=True)
class ActiveSet:
    """1-based set of coordinates allowed to be strictly positive."""

    j: tuple[int, ...]

    @classmethod
    def of(cls, indices, dim: int) -> "ActiveSet":
        if not indices:
            return cls(j=())
        return cls(j=tuple(normalize_index_set(indices, dim)))


@dataclass(frozen=True)
class SolutionSet:
    solutions: tuple[tuple[np.ndarray, ResidualReport], ...]
    search_params: dict
    exhaustive: bool

    def points(self) -> list[np.ndarray]:
        return [x for x, _ in self.solutions]

    def to_json_dict(self) -> dict:
        return {
            "solutions": [
                {"x": [float(v) for v in x], "residuals": rep.to_json_dict()}
                for x, rep in self.solutions
            ],
            "search_params": dict(self.search_params),
            "exhaustive": self.exhaustive,
        }


@dataclass(frozen=True)
class IterativeResult:
    x: np.ndarray
    converged: bool
    natural_residual: float
    report: ResidualReport
    iterations: int
    starts_tried: int

    def to_json_dict(self) -> dict:
        return {
            "x": [float(v) for v in self.x],
            "converged": self.converged,
            "natural_residual": self.natural_residual,
            "residuals": self.report.to_json_dict(),
            "iterations": self.iterations,
            "starts_tried": self.starts_tried,
        }


@dataclass(frozen=True)
class GusReport:
    records: tuple[dict, ...]
    flags: tuple[dict, ...]
    verdict: str

    def to_json_dict(self) -> dict:
        return {
            "records": [dict(r) for r in self.records],
            "flags": [dict(f) for f in self.flags],
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class BoundednessReport:
    radii: tuple[float, ...]
    sets_by_radius: tuple[tuple[float, tuple[np.ndarray, ...]], ...]
    stabilized: bool
    nonempty: bool

    def to_json_dict(self) -> dict:
        return {
            "radii": list(self.radii),
            "sets": [
                {"radius": r, "solutions": [[float(v) for v in x] for x in xs]}
                for r, xs in self.sets_by_radius
            ],
            "stabilized": self.stabilized,
            "nonempty": self.nonempty,
        }


def _check_dim(n: int, opts: SolveOptions) -> None:
    if n > opts.n_max:
        raise TooLargeError(
            f"dimension {n} exceeds n_max={opts.n_max} (2^n support enumeration)"
        )


def _grid_starts(k: int, opts: SolveOptions, radius: float) -> np.ndarray:
    axes = np.linspace(0.0, radius, opts.grid_points + 1)[1:]
    grids = np.meshgrid(*([axes] * k), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _starts_for(k: int, mask: int, opts: SolveOptions, radius: float) -> tuple[np.ndarray, bool]:
    """Deterministic start grid plus seeded random starts; flags truncation."""
    if k == 0:
        return np.zeros((1, 0)), False
    grid = _grid_starts(k, opts, radius)
    rng = np.random.default_rng([opts.seed, mask])
    rand = radius * rng.random((opts.n_random_starts, k))
    starts = np.vstack([grid, rand])
    truncated = False
    cap = opts.max_starts_per_set
    if cap is not None and starts.shape[0] > cap:
        starts = starts[:cap]
        truncated = True
    return np.ascontiguousarray(starts), truncated


def _apply_power_ld(idx, vals_ld, x_ld, n: int):
    m = idx.shape[1]
    contrib = vals_ld.copy()
    for k in range(1, m):
        contrib = contrib * x_ld[idx[:, k]]
    y = np.zeros(n, dtype=np.longdouble)
    np.add.at(y, idx[:, 0], contrib)
    return y


def _jacobian_ld(idx, vals_ld, x_ld, n: int):
    m = idx.shape[1]
    jac = np.zeros((n, n), dtype=np.longdouble)
    for k in range(1, m):
        contrib = vals_ld.copy()
        for l in range(1, m):
            if l != k:
                contrib = contrib * x_ld[idx[:, l]]
        np.add.at(jac, (idx[:, 0], idx[:, k]), contrib)
    return jac


def _polish_root(a: Tensor, q: np.ndarray, act: np.ndarray, z0: np.ndarray,
                 max_iter: int) -> tuple[np.ndarray, float]:
    """Extended-precision Newton polish of a converged float64 root.

    Double roots stall float64 Newton near ``sqrt(eps)`` of the root; a few
    80-bit iterations pull the point well inside the dedupe radius. Returns
    the best iterate and its residual max-norm.
    """
    k = act.shape[0]
    if k == 0:
        return z0.astype(np.float64), 0.0
    n = a.dim
    idx = a.idx
    vals = a.vals.astype(np.longdouble)
    qld = q.astype(np.longdouble)
    z = z0.astype(np.longdouble)

    def residual(zv):
        x = np.zeros(n, dtype=np.longdouble)
        x[act] = zv
        g = _apply_power_ld(idx, vals, x, n)[act] + qld[act]
        return x, g

    x, g = residual(z)
    gn = float(np.max(np.abs(g.astype(np.float64))))
    best_z, best_gn = z.copy(), gn
    for _ in range(max_iter):
        if gn == 0.0:
            break
        am = _jacobian_ld(idx, vals, x, n)[np.ix_(act, act)].copy()
        p = _gauss_plain(am, -g)
        if not np.all(np.isfinite(p.astype(np.float64))):
            break
        improved = False
        alpha = np.longdouble(1.0)
        for _h in range(8):
            znew = z + alpha * p
            xnew, gnew = residual(znew)
            gnn = float(np.max(np.abs(gnew.astype(np.float64))))
            if gnn < gn:
                z, x, g, gn = znew, xnew, gnew, gnn
                if gn < best_gn:
                    best_z, best_gn = z.copy(), gn
                improved = True
                break
            alpha *= np.longdouble(0.5)
        if not improved:
            break
    return np.asarray(best_z, dtype=np.float64), best_gn


def _cluster_lex(points: list[np.ndarray], radius: float) -> list[np.ndarray]:
    """Greedy dedupe keeping the lexicographically first point per cluster."""
    out: list[np.ndarray] = []
    for p in sorted(points, key=tuple):
        if all(np.linalg.norm(p - kept) > radius for kept in out):
            out.append(p)
    return out


def _solve_active_arrays(inst: TcpInstance, act: np.ndarray, mask: int,
                         opts: SolveOptions, radius: float) -> tuple[list[np.ndarray], bool]:
    """Candidate full-length points for one support. Roots keep every active
    coordinate >= eps_pos; off-support dual feasibility is not checked here."""
    a = inst.a
    n = a.dim
    k = act.shape[0]
    starts, truncated = _starts_for(k, mask, opts, radius)
    if k == 0:
        return [np.zeros(n)], truncated
    roots, ok = backend.newton_roots(
        a.idx, a.vals, inst.q, act, starts,
        opts.tol_root, opts.max_newton_iter, opts.max_halvings,
    )
    converged = [roots[i] for i in range(roots.shape[0]) if ok[i]]
    if not converged:
        return [], truncated
    # float64 Newton scatters identical roots within ~sqrt(tol_root);
    # cluster once before the (comparatively expensive) polish step
    pre_radius = max(opts.dedupe, 10.0 * np.sqrt(opts.tol_root))
    reps = _cluster_lex(converged, pre_radius)
    out: list[np.ndarray] = []
    for z in reps:
        zp, gn = _polish_root(a, inst.q, act, z, opts.polish_iters)
        if gn > opts.tol_root:
            continue
        if np.any(zp < opts.eps_pos):
            continue
        x = np.zeros(n)
        x[act] = zp
        out.append(x)
    return _cluster_lex(out, opts.dedupe), truncated


def solve_active_set(inst: TcpInstance, j, opts: SolveOptions | None = None) -> list[np.ndarray]:
    """Roots of the reduced system for the 1-based support ``j``.

    Returned points have zero off-support coordinates and active
    coordinates >= eps_pos with ``F = 0`` on the support to ``tol_root``;
    off-support sign feasibility is left to :func:`enumerate_solutions`.
    """
    opts = opts or SolveOptions()
    if isinstance(j, ActiveSet):
        indices = j.j
    else:
        indices = tuple(j)
    if indices:
        indices = tuple(normalize_index_set(indices, inst.a.dim))
    act = np.array([i - 1 for i in indices], dtype=np.int64)
    mask = 0
    for i in act:
        mask |= 1 << int(i)
    points, _ = _solve_active_arrays(inst, act, mask, opts, opts.radius)
    return points


def enumerate_solutions(inst: TcpInstance, opts: SolveOptions | None = None) -> SolutionSet:
    """All verified solutions found across the ``2^n`` supports."""
    opts = opts or SolveOptions()
    n = inst.a.dim
    _check_dim(n, opts)
    exhaustive = True
    candidates: list[np.ndarray] = []
    for mask in range(2**n):
        act = np.array([i for i in range(n) if (mask >> i) & 1], dtype=np.int64)
        points, truncated = _solve_active_arrays(inst, act, mask, opts, opts.radius)
        if truncated:
            exhaustive = False
        candidates.extend(points)
    verified = []
    for x in candidates:
        rep = residuals(inst, x)
        if rep.max_violation() <= opts.tol:
            verified.append((x, rep))
    verified.sort(key=lambda t: tuple(t[0]))
    kept: list[tuple[np.ndarray, ResidualReport]] = []
    for x, rep in verified:
        merged = False
        for i, (xk, repk) in enumerate(kept):
            if np.linalg.norm(x - xk) <= opts.dedupe:
                if rep.max_violation() < repk.max_violation():
                    kept[i] = (x, rep)
                merged = True
                break
        if not merged:
            kept.append((x, rep))
    kept.sort(key=lambda t: tuple(t[0]))
    return SolutionSet(
        solutions=tuple(kept),
        search_params=opts.params_dict(),
        exhaustive=exhaustive,
    )


def solve_iterative(inst: TcpInstance, opts: SolveOptions | None = None,
                    x0=None) -> IterativeResult:
    """Minimize the natural residual by damped semismooth Newton.

    The Newton matrix row for coordinate ``i`` is the identity row where
    ``x_i <= F_i(x)`` and the Jacobian row of ``F`` otherwise. Multistart:
    the supplied ``x0``, the origin, then seeded nonnegative random starts.
    """
    opts = opts or SolveOptions()
    a = inst.a
    n = a.dim
    starts: list[np.ndarray] = []
    if x0 is not None:
        starts.append(as_vector(x0, n))
    starts.append(np.zeros(n))
    rng = np.random.default_rng([opts.seed, 0x17E2A71])
    for _ in range(opts.n_random_starts):
        starts.append(opts.radius * rng.random(n))

    best_x = starts[0]
    best_nr = np.inf
    best_iters = 0
    tried = 0
    for s_i, start in enumerate(starts):
        tried += 1
        x = start.copy()
        f = backend.apply_power(a.idx, a.vals, x, n) + inst.q
        h = np.minimum(x, f)
        hn = float(np.linalg.norm(h))
        for it in range(opts.max_newton_iter):
            if hn <= opts.tol and is_solution(inst, x, opts.tol):
                return IterativeResult(
                    x=x, converged=True, natural_residual=hn,
                    report=residuals(inst, x), iterations=it, starts_tried=tried,
                )
            jf = backend.power_jacobian(a.idx, a.vals, x, n)
            v = np.where((x <= f)[:, None], np.eye(n), jf)
            p = _gauss_plain(np.ascontiguousarray(v), -h)
            if not np.all(np.isfinite(p)):
                break
            improved = False
            alpha = 1.0
            for _h2 in range(opts.max_halvings):
                xn = x + alpha * p
                fn = backend.apply_power(a.idx, a.vals, xn, n) + inst.q
                hnew = np.minimum(xn, fn)
                hnn = float(np.linalg.norm(hnew)) if np.all(np.isfinite(hnew)) else np.inf
                if hnn < hn * 0.9999:
                    x, f, h, hn = xn, fn, hnew, hnn
                    improved = True
                    break
                alpha *= 0.5
            if not improved:
                break
        if hn <= opts.tol and is_solution(inst, x, opts.tol):
            return IterativeResult(
                x=x, converged=True, natural_residual=hn,
                report=residuals(inst, x), iterations=opts.max_newton_iter,
                starts_tried=tried,
            )
        if hn < best_nr:
            best_x, best_nr = x, hn
    return IterativeResult(
        x=best_x, converged=False,
        natural_residual=float(natural_residual_norm(inst, best_x)),
        report=residuals(inst, best_x), iterations=opts.max_newton_iter,
        starts_tried=tried,
    )


def default_q_grid(n: int, lo: float = -2.0, hi: float = 2.0, steps: int = 9) -> list[np.ndarray]:
    """Uniform shift grid over ``[lo, hi]^n``, lexicographic order."""
    if steps < 1 or not lo < hi:
        raise BadValueError(f"bad grid spec [{lo}, {hi}] with {steps} steps")
    axes = np.linspace(lo, hi, steps)
    grids = np.meshgrid(*([axes] * n), indexing="ij")
    flat = np.stack([g.ravel() for g in grids], axis=1)
    return [flat[i].copy() for i in range(flat.shape[0])]


def gus_probe(a: Tensor, q_list: Optional[Sequence] = None,
              opts: SolveOptions | None = None) -> GusReport:
    """Count solutions per shift vector; a unique-solution tensor must show
    exactly one for every probed ``q``."""
    opts = opts or SolveOptions()
    _check_dim(a.dim, opts)
    if q_list is None:
        qs = default_q_grid(a.dim)
    else:
        qs = [as_vector(q, a.dim) for q in q_list]
    records = []
    flags = []
    for qi, q in enumerate(qs):
        ss = enumerate_solutions(make_instance(a, q), opts)
        count = len(ss.solutions)
        rec = {
            "q": [float(v) for v in q],
            "solution_count": count,
            "solutions": [[float(v) for v in x] for x, _ in ss.solutions],
        }
        records.append(rec)
        if count != 1:
            flags.append({"q": rec["q"], "solution_count": count})
    verdict = "GUS_violated" if flags else "GUS_consistent"
    return GusReport(records=tuple(records), flags=tuple(flags), verdict=verdict)


def _sets_match(xs: Sequence[np.ndarray], ys: Sequence[np.ndarray], radius: float) -> bool:
    if len(xs) != len(ys):
        return False
    used = [False] * len(ys)
    for x in xs:
        hit = False
        for i, y in enumerate(ys):
            if not used[i] and np.linalg.norm(x - y) <= radius:
                used[i] = True
                hit = True
                break
        if not hit:
            return False
    return True


def boundedness_probe(inst: TcpInstance, radii: Sequence[float],
                      opts: SolveOptions | None = None) -> BoundednessReport:
    """Re-enumerate with Newton start grids confined to growing boxes and
    check that the solution set stops changing (a bounded-set signature)."""
    opts = opts or SolveOptions()
    _check_dim(inst.a.dim, opts)
    radii = [float(r) for r in radii]
    if len(radii) < 2 or any(r < 1.0 for r in radii) or any(
        b <= a for a, b in zip(radii, radii[1:])
    ):
        raise BadValueError(f"radii must be increasing and >= 1, got {radii}")
    per_radius = []
    for r in radii:
        ss = enumerate_solutions(inst, replace(opts, radius=r))
        per_radius.append((r, tuple(ss.points())))
    stabilized = _sets_match(per_radius[-1][1], per_radius[-2][1], opts.dedupe)
    nonempty = len(per_radius[-1][1]) > 0
    return BoundednessReport(
        radii=tuple(radii),
        sets_by_radius=tuple(per_radius),
        stabilized=stabilized,
        nonempty=nonempty,
    )
