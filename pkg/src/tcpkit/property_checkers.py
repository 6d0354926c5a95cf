"""Witness searches for the structured tensor classes.

Each universally-quantified class check minimizes a sign objective and can
only *disprove* membership by exhibiting a point (or pair) that violates
the defining inequality by a margin. The tri-state verdict is therefore
asymmetric: ``fails`` carries a re-verifiable witness, ``not_disproved``
carries search statistics and no claim, and ``certified_fails`` covers the
finitely-checkable exceptions (odd order, one-dimensional tensors,
nonpositive diagonal entries found exactly).

Objectives:

* ``p_objective(a, x)``     = max_i  x_i * (A x^{m-1})_i
* ``ssp_objective(a, x)``   = max_i  min(x_i, (A x^{m-1})_i)
* ``pair_objective(a, x, y)`` = max_i (x_i - y_i) * ((A x^{m-1})_i - (A y^{m-1})_i)

The pair objective is structurally shift-free: the ``q`` of an instance
cancels in the difference, so it is computed from the tensor alone and is
bitwise identical for every ``q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import backend
from ._ge import gauss_solve as _gauss_plain
from .errors import BadValueError, TooLargeError
from .tcp_model import TcpInstance
from .tensor_core import Tensor, as_vector, principal_subtensor

STATUS_FAILS = "fails"
STATUS_NOT_DISPROVED = "not_disproved"
STATUS_CERTIFIED_FAILS = "certified_fails"


@dataclass(frozen=True)
class CheckOptions:
    """Search schedule and tolerances for the class checkers."""

    samples: int = 20000
    top_refine: int = 50
    refine_iters: int = 500
    shrink: float = 0.5
    seed: int = 42
    tau_wit: float = 1e-10
    delta_sep: float = 1e-8
    n_max: int = 6
    grid_points: int = 4
    n_random_starts: int = 8
    tol_root: float = 1e-11
    eps_pos: float = 1e-10
    max_newton_iter: int = 60
    max_halvings: int = 40


@dataclass(frozen=True)
class PropertyVerdict:
    """Outcome of one class check.

    ``witness`` is a point ``x``, a pair ``(x, y)``, or a pair ``(x, t)``
    depending on the property. ``exact`` marks verdicts obtained by exact
    finite evaluation (axis points, one-dimensional rules) rather than
    sampling; their margin may legitimately be zero.
    """

    property: str
    status: str
    witness: Optional[tuple]
    reason: Optional[str]
    min_value: Optional[float]
    samples: int
    seed: int
    stats: dict
    exact: bool = False

    @property
    def failed(self) -> bool:
        return self.status != STATUS_NOT_DISPROVED

    def to_json_dict(self) -> dict:
        wit = None
        if self.witness is not None:
            wit = [
                [float(v) for v in w] if np.ndim(w) else float(w)
                for w in self.witness
            ]
        return {
            "property": self.property,
            "status": self.status,
            "witness": wit,
            "reason": self.reason,
            "min_value": self.min_value,
            "samples": self.samples,
            "seed": self.seed,
            "exact": self.exact,
            "stats": dict(self.stats),
        }


def p_objective(a: Tensor, x) -> float:
    """Largest coordinatewise product ``x_i * (A x^{m-1})_i``."""
    x = as_vector(x, a.dim)
    y = backend.apply_power(a.idx, a.vals, x, a.dim)
    return float(np.max(x * y))


def ssp_objective(a: Tensor, x) -> float:
    """Largest coordinatewise ``min(x_i, (A x^{m-1})_i)``."""
    x = as_vector(x, a.dim)
    y = backend.apply_power(a.idx, a.vals, x, a.dim)
    return float(np.max(np.minimum(x, y)))


def pair_objective_components(a: Tensor, x, y) -> np.ndarray:
    """The n products ``(x_i - y_i) * ((A x^{m-1})_i - (A y^{m-1})_i)``."""
    x = as_vector(x, a.dim)
    y = as_vector(y, a.dim)
    ax = backend.apply_power(a.idx, a.vals, x, a.dim)
    ay = backend.apply_power(a.idx, a.vals, y, a.dim)
    return (x - y) * (ax - ay)


def pair_objective(a: Tensor, x, y) -> float:
    return float(np.max(pair_objective_components(a, x, y)))


def pair_objective_for(inst_or_tensor, x, y) -> float:
    """Pair objective for an instance; the shift vector cancels in the
    difference and never enters the computation."""
    a = inst_or_tensor.a if isinstance(inst_or_tensor, TcpInstance) else inst_or_tensor
    return pair_objective(a, x, y)


def _p_values(a: Tensor, xs: np.ndarray) -> np.ndarray:
    ys = backend.apply_power_batch(a.idx, a.vals, xs, a.dim)
    return np.max(xs * ys, axis=1)


def _ssp_values(a: Tensor, xs: np.ndarray) -> np.ndarray:
    ys = backend.apply_power_batch(a.idx, a.vals, xs, a.dim)
    return np.max(np.minimum(xs, ys), axis=1)


def _pair_values(a: Tensor, us: np.ndarray) -> np.ndarray:
    n = a.dim
    xs = np.ascontiguousarray(us[:, :n])
    ys = np.ascontiguousarray(us[:, n:])
    axs = backend.apply_power_batch(a.idx, a.vals, xs, n)
    ays = backend.apply_power_batch(a.idx, a.vals, ys, n)
    return np.max((xs - ys) * (axs - ays), axis=1)


def _unit_rows(m: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(m, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return m / norms


def _structured_points(n: int, signed: bool) -> np.ndarray:
    pts = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        pts.append(e)
        if signed:
            pts.append(-e)
    ones = np.ones(n) / np.sqrt(n)
    pts.append(ones)
    if signed:
        pts.append(-ones)
    return np.array(pts)


def _compass_min(f_batch, x0: np.ndarray, fx0: float, opts: CheckOptions,
                 nonneg: bool = False, sep_split: Optional[int] = None):
    """Direct coordinate search on the unit sphere.

    Perturbs one coordinate at a time, optionally clamps to the nonnegative
    orthant, renormalizes, and shrinks the step when no candidate improves.
    With ``sep_split = n`` the vector is a concatenated pair and candidates
    whose halves come closer than ``delta_sep`` are discarded.
    """
    x = x0.copy()
    fx = fx0
    dim = x.shape[0]
    step = 0.25
    used = 0
    for _ in range(opts.refine_iters):
        used += 1
        cands = []
        for j in range(dim):
            for s in (step, -step):
                c = x.copy()
                c[j] += s
                if nonneg:
                    c = np.maximum(c, 0.0)
                nrm = np.linalg.norm(c)
                if nrm < 1e-12:
                    continue
                c = c / nrm
                if sep_split is not None:
                    if np.linalg.norm(c[:sep_split] - c[sep_split:]) < opts.delta_sep:
                        continue
                cands.append(c)
        if not cands:
            break
        cm = np.array(cands)
        vals = f_batch(cm)
        bi = int(np.argmin(vals))
        if vals[bi] < fx:
            x = cm[bi]
            fx = float(vals[bi])
        else:
            step *= opts.shrink
            if step < 1e-13:
                break
    return x, fx, used


def _search_min(a: Tensor, f_batch, structured: np.ndarray, opts: CheckOptions,
                nonneg: bool = False, sep_split: Optional[int] = None):
    """Seeded sampling plus refinement; returns (argmin, min, stats)."""
    dim = structured.shape[1]
    rng = np.random.default_rng([opts.seed, dim, 0xC0DE])
    samples = rng.standard_normal((opts.samples, dim))
    if nonneg:
        samples = np.abs(samples)
    if sep_split is not None and opts.samples > 0:
        # bias half the budget toward nearby pairs, where monotonicity
        # failures of odd-degree coordinate maps hide
        half = opts.samples // 2
        base = samples[half:, :sep_split]
        scale = 0.1 * rng.random((samples.shape[0] - half, 1))
        drift = rng.standard_normal((samples.shape[0] - half, sep_split))
        samples[half:, sep_split:] = base - scale * drift
    xs = _unit_rows(np.vstack([structured, samples]))
    if sep_split is not None:
        sep = np.linalg.norm(xs[:, :sep_split] - xs[:, sep_split:], axis=1)
        xs = xs[sep >= opts.delta_sep]
    vals = f_batch(xs)
    order = np.argsort(vals, kind="stable")
    best_x = xs[order[0]].copy()
    best_v = float(vals[order[0]])
    refined = 0
    for i in order[: opts.top_refine]:
        xr, vr, used = _compass_min(
            f_batch, xs[i], float(vals[i]), opts, nonneg=nonneg, sep_split=sep_split
        )
        refined += used
        if vr < best_v or (vr == best_v and tuple(xr) < tuple(best_x)):
            best_x, best_v = xr, vr
    return best_x, best_v, {"sampled": int(xs.shape[0]), "refine_iterations": refined}


def _verdict(prop: str, status: str, *, witness=None, reason=None, min_value=None,
             samples=0, seed=0, stats=None, exact=False) -> PropertyVerdict:
    return PropertyVerdict(
        property=prop, status=status, witness=witness, reason=reason,
        min_value=min_value, samples=samples, seed=seed,
        stats=stats or {}, exact=exact,
    )


def p_tensor_check(a: Tensor, opts: CheckOptions | None = None) -> PropertyVerdict:
    """Look for ``x`` with every ``x_i (A x^{m-1})_i <= 0``; by degree-m
    homogeneity the unit sphere decides the sign question."""
    opts = opts or CheckOptions()
    if a.order % 2 == 1:
        return _verdict("p", STATUS_CERTIFIED_FAILS, reason="odd order",
                        seed=opts.seed, exact=True)
    if a.dim == 1:
        d = float(a.diagonal()[0])
        if d > 0.0:
            return _verdict("p", STATUS_NOT_DISPROVED, min_value=d,
                            seed=opts.seed, exact=True,
                            stats={"rule": "n=1 diagonal sign"})
        if d <= -opts.tau_wit:
            return _verdict("p", STATUS_FAILS, witness=(np.ones(1),),
                            min_value=d, seed=opts.seed, exact=True)
        return _verdict("p", STATUS_CERTIFIED_FAILS,
                        reason="nonpositive diagonal (n=1 exact)",
                        min_value=d, seed=opts.seed, exact=True)
    f = lambda xs: _p_values(a, xs)
    x, v, stats = _search_min(a, f, _structured_points(a.dim, signed=True), opts)
    v = p_objective(a, x)
    if v <= -opts.tau_wit:
        return _verdict("p", STATUS_FAILS, witness=(x,), min_value=v,
                        samples=opts.samples, seed=opts.seed, stats=stats)
    return _verdict("p", STATUS_NOT_DISPROVED, min_value=v,
                    samples=opts.samples, seed=opts.seed, stats=stats)


def ssp_check(a: Tensor, opts: CheckOptions | None = None) -> PropertyVerdict:
    """Look for nonzero ``x >= 0`` with no coordinate having both ``x_i > 0``
    and ``(A x^{m-1})_i > 0``. Axis points are decided exactly first: the
    unit vector ``e_i`` witnesses failure precisely when ``a_{ii..i} <= 0``."""
    opts = opts or CheckOptions()
    d = a.diagonal()
    for i in range(a.dim):
        if d[i] <= 0.0:
            e = np.zeros(a.dim)
            e[i] = 1.0
            return _verdict("ssp", STATUS_FAILS, witness=(e,),
                            min_value=ssp_objective(a, e), seed=opts.seed,
                            exact=True, stats={"rule": "axis diagonal sign"})
    if a.dim == 1:
        return _verdict("ssp", STATUS_NOT_DISPROVED, min_value=float(min(1.0, d[0])),
                        seed=opts.seed, exact=True,
                        stats={"rule": "n=1 diagonal sign"})
    f = lambda xs: _ssp_values(a, xs)
    x, v, stats = _search_min(a, f, _structured_points(a.dim, signed=False),
                              opts, nonneg=True)
    v = ssp_objective(a, x)
    if v <= -opts.tau_wit:
        return _verdict("ssp", STATUS_FAILS, witness=(x,), min_value=v,
                        samples=opts.samples, seed=opts.seed, stats=stats)
    return _verdict("ssp", STATUS_NOT_DISPROVED, min_value=v,
                    samples=opts.samples, seed=opts.seed, stats=stats)


def strong_p_check(a: Tensor, opts: CheckOptions | None = None) -> PropertyVerdict:
    """Look for a pair ``x != y`` whose coordinatewise difference products
    are all nonpositive with margin. The shift-free pair objective is
    jointly degree-m homogeneous, so pairs live on the unit sphere of
    ``R^{2n}`` with separation at least ``delta_sep``."""
    opts = opts or CheckOptions()
    if a.order % 2 == 1:
        return _verdict("strong_p", STATUS_CERTIFIED_FAILS, reason="odd order",
                        seed=opts.seed, exact=True)
    if a.dim == 1:
        d = float(a.diagonal()[0])
        if d > 0.0:
            return _verdict("strong_p", STATUS_NOT_DISPROVED, min_value=d,
                            seed=opts.seed, exact=True,
                            stats={"rule": "n=1 diagonal sign"})
        if d <= -opts.tau_wit:
            return _verdict("strong_p", STATUS_FAILS,
                            witness=(np.ones(1), np.zeros(1)),
                            min_value=d, seed=opts.seed, exact=True)
        return _verdict("strong_p", STATUS_CERTIFIED_FAILS,
                        reason="nonpositive diagonal (n=1 exact)",
                        min_value=d, seed=opts.seed, exact=True)
    n = a.dim
    f = lambda us: _pair_values(a, us)
    singles = _structured_points(n, signed=True)
    structured = []
    zero = np.zeros(n)
    for u in singles:
        structured.append(np.concatenate([u, zero]))
        structured.append(np.concatenate([zero, u]))
        for alpha in (0.5, 0.9):
            structured.append(np.concatenate([u, alpha * u]))
    u, v, stats = _search_min(a, f, np.array(structured), opts, sep_split=n)
    x, y = u[:n].copy(), u[n:].copy()
    v = pair_objective(a, x, y)
    if v <= -opts.tau_wit and np.linalg.norm(x - y) >= opts.delta_sep:
        return _verdict("strong_p", STATUS_FAILS, witness=(x, y), min_value=v,
                        samples=opts.samples, seed=opts.seed, stats=stats)
    return _verdict("strong_p", STATUS_NOT_DISPROVED, min_value=v,
                    samples=opts.samples, seed=opts.seed, stats=stats)


def _r_newton(a: Tensor, act: np.ndarray, z0: np.ndarray, opts: CheckOptions):
    """Newton on the degenerate-direction system for one support:
    equalized products across the support plus the unit-norm equation."""
    n = a.dim
    k = act.shape[0]

    def residual(z):
        x = np.zeros(n)
        x[act] = z
        ax = backend.apply_power(a.idx, a.vals, x, n)
        g = np.empty(k)
        g[: k - 1] = ax[act[1:]] - ax[act[0]]
        g[k - 1] = np.dot(z, z) - 1.0
        return x, ax, g

    z = z0.copy()
    x, ax, g = residual(z)
    gn = float(np.max(np.abs(g))) if np.all(np.isfinite(g)) else np.inf
    for _ in range(opts.max_newton_iter):
        if gn <= opts.tol_root:
            break
        jf = backend.power_jacobian(a.idx, a.vals, x, n)
        jac = np.empty((k, k))
        jac[: k - 1] = jf[act[1:]][:, act] - jf[act[0]][act]
        jac[k - 1] = 2.0 * z
        p = _gauss_plain(jac, -g)
        if not np.all(np.isfinite(p)):
            break
        improved = False
        alpha = 1.0
        for _h in range(opts.max_halvings):
            zn = z + alpha * p
            xn, axn, gnew = residual(zn)
            gnn = float(np.max(np.abs(gnew))) if np.all(np.isfinite(gnew)) else np.inf
            if gnn < gn * 0.9999:
                z, x, ax, g, gn = zn, xn, axn, gnew, gnn
                improved = True
                break
            alpha *= 0.5
        if not improved:
            break
    return z, x, ax, gn


def r_tensor_check(a: Tensor, opts: CheckOptions | None = None) -> PropertyVerdict:
    """Search for a degenerate direction: nonzero ``x >= 0`` and ``t >= 0``
    with ``(A x^{m-1})_i + t = 0`` on the support of ``x`` and ``>= 0`` off
    it. The system is positively homogeneous, so roots are normalized to
    the unit sphere, support by support."""
    opts = opts or CheckOptions()
    n = a.dim
    if n > opts.n_max:
        raise TooLargeError(f"dimension {n} exceeds n_max={opts.n_max}")
    starts_checked = 0
    for mask in range(1, 2**n):
        act = np.array([i for i in range(n) if (mask >> i) & 1], dtype=np.int64)
        k = act.shape[0]
        axes = np.linspace(0.0, 1.0, opts.grid_points + 1)[1:]
        grids = np.meshgrid(*([axes] * k), indexing="ij")
        grid = np.stack([g.ravel() for g in grids], axis=1)
        rng = np.random.default_rng([opts.seed, mask, 0x12])
        starts = np.vstack([grid, rng.random((opts.n_random_starts, k))])
        starts = _unit_rows(starts)
        for s in range(starts.shape[0]):
            starts_checked += 1
            z, x, ax, gn = _r_newton(a, act, starts[s], opts)
            if gn > opts.tol_root:
                continue
            if np.any(z < opts.eps_pos):
                continue
            t = -float(ax[act[0]])
            if t < -1e-12:
                continue
            t = max(t, 0.0)
            if np.max(np.abs(ax[act] + t)) > 1e-9:
                continue
            off = np.array([i for i in range(n) if not (mask >> i) & 1], dtype=np.int64)
            if off.size and np.min(ax[off] + t) < -1e-12:
                continue
            return _verdict("r", STATUS_FAILS, witness=(x, t),
                            min_value=float(np.max(ax[act] + t)),
                            samples=starts_checked, seed=opts.seed,
                            stats={"support": [int(i) + 1 for i in act]})
    return _verdict("r", STATUS_NOT_DISPROVED, samples=starts_checked,
                    seed=opts.seed, stats={"supports": 2**n - 1})


@dataclass(frozen=True)
class ModulusEstimate:
    mu_hat: float
    x: np.ndarray
    y: np.ndarray
    samples: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "mu_hat": self.mu_hat,
            "x": [float(v) for v in self.x],
            "y": [float(v) for v in self.y],
            "samples": self.samples,
            "seed": self.seed,
        }


def uniform_p_modulus(a: Tensor, region, opts: CheckOptions | None = None) -> ModulusEstimate:
    """Sampled lower-envelope estimate of the uniform monotonicity modulus:
    the minimum of ``pair_objective(a, x, y) / |x - y|^2`` over box pairs.
    A negative estimate doubles as a pair witness against the strong class."""
    opts = opts or CheckOptions()
    if opts.samples <= 0:
        raise BadValueError("sample budget must be positive")
    n = a.dim
    region = np.asarray(region, dtype=np.float64)
    if region.ndim == 1:
        lo = np.full(n, region[0])
        hi = np.full(n, region[1])
    else:
        lo, hi = region[:, 0].copy(), region[:, 1].copy()
    if lo.shape[0] != n or np.any(lo >= hi):
        raise BadValueError(f"bad box for dimension {n}")

    def ratios(us):
        d = us[:, :n] - us[:, n:]
        dist2 = np.sum(d * d, axis=1)
        vals = _pair_values(a, us)
        out = np.full(us.shape[0], np.inf)
        good = dist2 > 0.0
        out[good] = vals[good] / dist2[good]
        return out

    rng = np.random.default_rng([opts.seed, n, 0xB0])
    xs = lo + (hi - lo) * rng.random((opts.samples, n))
    ys = lo + (hi - lo) * rng.random((opts.samples, n))
    near = opts.samples // 2
    ys[near:] = xs[near:] + 0.05 * (hi - lo) * (rng.random((opts.samples - near, n)) - 0.5)
    ys = np.clip(ys, lo, hi)
    us = np.hstack([xs, ys])
    vals = ratios(us)
    order = np.argsort(vals, kind="stable")
    best = us[order[0]].copy()
    best_v = float(vals[order[0]])

    span = float(np.max(hi - lo))

    def refine(u0, v0):
        u = u0.copy()
        v = v0
        step = 0.1 * span
        for _ in range(opts.refine_iters):
            cands = []
            for j in range(2 * n):
                for s in (step, -step):
                    c = u.copy()
                    c[j] += s
                    c[:n] = np.clip(c[:n], lo, hi)
                    c[n:] = np.clip(c[n:], lo, hi)
                    if np.linalg.norm(c[:n] - c[n:]) < 1e-9:
                        continue
                    cands.append(c)
            if not cands:
                break
            cm = np.array(cands)
            cv = ratios(cm)
            bi = int(np.argmin(cv))
            if cv[bi] < v:
                u, v = cm[bi], float(cv[bi])
            else:
                step *= opts.shrink
                if step < 1e-12 * span:
                    break
        return u, v

    for i in order[: min(opts.top_refine, 10)]:
        u, v = refine(us[i], float(vals[i]))
        if v < best_v:
            best, best_v = u, v
    return ModulusEstimate(mu_hat=best_v, x=best[:n].copy(), y=best[n:].copy(),
                           samples=opts.samples, seed=opts.seed)


def diagonal_positivity(a: Tensor) -> bool:
    """Exact check that every ``a_{ii...i}`` is strictly positive."""
    return bool(np.all(a.diagonal() > 0.0))


@dataclass(frozen=True)
class AuditReport:
    entries: tuple[tuple[str, dict], ...]
    inconsistencies: tuple[str, ...]
    consistent: bool

    def to_json_dict(self) -> dict:
        return {
            "entries": [{"tensor": label, **summary} for label, summary in self.entries],
            "inconsistencies": list(self.inconsistencies),
            "consistent": self.consistent,
        }


def _first_point(verdict: PropertyVerdict) -> Optional[np.ndarray]:
    if verdict.witness is None:
        return None
    w = verdict.witness[0]
    return np.asarray(w, dtype=np.float64)


def implication_audit(a: Tensor, opts: CheckOptions | None = None) -> AuditReport:
    """Cross-check the verdicts against the implication chain
    strong >= plain >= {strictly semi-positive, degenerate-free}, diagonal
    positivity, and principal-sub-tensor closure of the strong class. Any
    flagged line is a checker bug signal, not a mathematical finding."""
    opts = opts or CheckOptions()
    n = a.dim
    if n > opts.n_max:
        raise TooLargeError(f"dimension {n} exceeds n_max={opts.n_max}")
    subsets = []
    for mask in range(1, 2**n - 1 if n > 1 else 1):
        js = [i + 1 for i in range(n) if (mask >> i) & 1]
        subsets.append(tuple(js))
    subsets.sort(key=lambda js: (len(js), js))

    tau = opts.tau_wit
    entries = []
    issues: list[str] = []

    def check_one(label: str, t: Tensor) -> dict:
        vp = p_tensor_check(t, opts)
        vs = ssp_check(t, opts)
        vr = r_tensor_check(t, opts)
        vsp = strong_p_check(t, opts)
        diag = diagonal_positivity(t)
        if vp.status == STATUS_FAILS and vp.min_value is not None \
                and vp.min_value <= -tau and vsp.status == STATUS_NOT_DISPROVED:
            issues.append(f"{label}: plain-class witness found but strong class not disproved")
        if vs.status == STATUS_FAILS and vp.status == STATUS_NOT_DISPROVED:
            w = _first_point(vs)
            if w is not None and p_objective(t, w) <= -tau:
                issues.append(f"{label}: semi-positivity witness transports but plain class not disproved")
        if vr.status == STATUS_FAILS and vp.status == STATUS_NOT_DISPROVED:
            w = _first_point(vr)
            if w is not None and p_objective(t, w) <= -tau:
                issues.append(f"{label}: degenerate-direction witness transports but plain class not disproved")
        if not diag and vsp.status == STATUS_NOT_DISPROVED:
            if np.any(t.diagonal() <= -tau):
                issues.append(f"{label}: strictly negative diagonal but strong class not disproved")
        return {
            "p": vp.to_json_dict(),
            "ssp": vs.to_json_dict(),
            "r": vr.to_json_dict(),
            "strong_p": vsp.to_json_dict(),
            "diagonal_positive": diag,
        }

    full = check_one("full", a)
    entries.append(("full", full))
    parent_strong_nd = full["strong_p"]["status"] == STATUS_NOT_DISPROVED
    for js in subsets:
        label = "J=" + ",".join(str(j) for j in js)
        sub = principal_subtensor(a, js)
        summary = check_one(label, sub)
        entries.append((label, summary))
        sub_sp = summary["strong_p"]
        strict_sub_fail = (
            sub_sp["status"] != STATUS_NOT_DISPROVED
            and sub_sp.get("min_value") is not None
            and sub_sp["min_value"] <= -tau
        )
        if parent_strong_nd and strict_sub_fail:
            issues.append(f"{label}: strong-class failure in a principal sub-tensor "
                          "while the full tensor is not disproved")
    return AuditReport(entries=tuple(entries), inconsistencies=tuple(issues),
                       consistent=not issues)
