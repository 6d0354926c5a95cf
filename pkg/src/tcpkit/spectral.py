"""Eigenpair computation for sparse coordinate tensors.

Two eigenpair conventions are supported for ``y = A x^{m-1}``:

* kind ``H``: ``y = lambda * x^[m-1]`` (componentwise power), any scale;
* kind ``Z``: ``y = lambda * x`` with ``|x| = 1``.

For ``n <= 2`` the spectra are computed exactly: the defining equations
reduce to a single cross function on the unit circle, whose sign changes
are located on a dense angle grid and bisected. An identically vanishing
cross function means a continuum of eigenvectors; that degenerate case is
reported as a flag with representative directions instead of thousands of
pairs. For ``n >= 3`` shifted power iterations provide a best-effort
search flagged ``heuristic``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import BadEigenvectorError
from .tensor_core import Tensor, as_vector

TAU_EIG = 1e-10


@dataclass(frozen=True)
class SpectralOptions:
    grid_points: int = 10000
    bisect_tol: float = 1e-13
    dedupe: float = 1e-6
    tau_eig: float = TAU_EIG
    seed: int = 42
    power_starts: int = 20
    power_iters: int = 500


@dataclass(frozen=True)
class EigenPair:
    kind: str
    lam: float
    x: np.ndarray
    residual: float

    def to_json_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "x": [float(v) for v in self.x],
            "residual": self.residual,
        }


@dataclass(frozen=True)
class EigenReport:
    kind: str
    pairs: tuple[EigenPair, ...]
    heuristic: bool
    degenerate: bool

    def lambdas(self) -> list[float]:
        return [p.lam for p in self.pairs]

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "pairs": [p.to_json_dict() for p in self.pairs],
            "heuristic": self.heuristic,
            "degenerate": self.degenerate,
        }


def eigen_residual(a: Tensor, kind: str, lam: float, x) -> float:
    """Norm of the defining-equation defect for the given candidate pair."""
    x = as_vector(x, a.dim)
    if np.linalg.norm(x) == 0.0:
        raise BadEigenvectorError("eigenvector candidate must be nonzero")
    y = backend.apply_power(a.idx, a.vals, x, a.dim)
    if kind.upper() == "H":
        return float(np.linalg.norm(y - lam * x ** (a.order - 1)))
    if kind.upper() == "Z":
        return float(np.linalg.norm(y - lam * x))
    raise ValueError(f"kind must be 'H' or 'Z', got {kind!r}")


def _canonical(x: np.ndarray) -> np.ndarray:
    """Flip sign so the first nonzero component is positive."""
    for v in x:
        if v != 0.0:
            return -x if v < 0.0 else x
    return x


def _dedupe_pairs(pairs: list[EigenPair], tol: float,
                  identify_sign: bool) -> list[EigenPair]:
    kept: list[EigenPair] = []
    for p in sorted(pairs, key=lambda p: (p.lam, tuple(p.x))):
        x = _canonical(p.x) if identify_sign else p.x
        p = EigenPair(p.kind, p.lam, x, p.residual)
        dup = False
        for q in kept:
            if abs(p.lam - q.lam) <= tol and np.linalg.norm(p.x - q.x) <= tol:
                dup = True
                break
        if not dup:
            kept.append(p)
    kept.sort(key=lambda p: (p.lam, tuple(p.x)))
    return kept


def _scale_bound(a: Tensor) -> float:
    return float(np.sum(np.abs(a.vals))) if a.nnz else 0.0


def _circle_points(thetas: np.ndarray) -> np.ndarray:
    return np.stack([np.cos(thetas), np.sin(thetas)], axis=1)


def _cross_values(a: Tensor, xs: np.ndarray, kind: str) -> np.ndarray:
    ys = backend.apply_power_batch(a.idx, a.vals, xs, a.dim)
    if kind == "Z":
        return ys[:, 0] * xs[:, 1] - ys[:, 1] * xs[:, 0]
    p = a.order - 1
    return ys[:, 0] * xs[:, 1] ** p - ys[:, 1] * xs[:, 0] ** p


def _pair_from_direction(a: Tensor, x: np.ndarray, kind: str) -> EigenPair:
    y = backend.apply_power(a.idx, a.vals, x, a.dim)
    if kind == "Z":
        lam = float(np.dot(x, y))
    else:
        i = int(np.argmax(np.abs(x)))
        lam = float(y[i] / x[i] ** (a.order - 1))
    res = eigen_residual(a, kind, lam, x)
    return EigenPair(kind, lam, x, res)


def _representative_directions(n: int) -> list[np.ndarray]:
    dirs = [np.eye(n)[i] for i in range(n)]
    dirs.append(np.ones(n) / np.sqrt(n))
    if n >= 2:
        d = np.ones(n)
        d[0] = -1.0
        dirs.append(d / np.linalg.norm(d))
    return dirs


def _scan_n2(a: Tensor, kind: str, opts: SpectralOptions) -> EigenReport:
    grid = opts.grid_points
    thetas = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    xs = _circle_points(thetas)
    g = _cross_values(a, xs, kind)
    deg_tol = 1e-13 * (1.0 + _scale_bound(a)) ** 2
    if np.max(np.abs(g)) <= deg_tol:
        pairs = []
        for d in _representative_directions(2):
            p = _pair_from_direction(a, d, kind)
            if p.residual <= opts.tau_eig:
                pairs.append(p)
        identify = kind == "H" or a.order % 2 == 0
        return EigenReport(kind, tuple(_dedupe_pairs(pairs, opts.dedupe, identify)),
                           heuristic=False, degenerate=True)

    def g_at(theta: float) -> float:
        x = np.array([np.cos(theta), np.sin(theta)])
        return float(_cross_values(a, x.reshape(1, 2), kind)[0])

    step = 2.0 * np.pi / grid
    roots: list[float] = []
    for i in range(grid):
        gi = g[i]
        gj = g[(i + 1) % grid]
        ti = thetas[i]
        tj = ti + step
        if gi == 0.0:
            roots.append(ti)
            continue
        if gi * gj < 0.0:
            lo, hi = ti, tj
            glo = gi
            while hi - lo > opts.bisect_tol:
                mid = 0.5 * (lo + hi)
                gm = g_at(mid)
                if gm == 0.0:
                    lo = hi = mid
                    break
                if glo * gm < 0.0:
                    hi = mid
                else:
                    lo = mid
                    glo = gm
            roots.append(0.5 * (lo + hi))
    pairs = []
    for theta in roots:
        x = np.array([np.cos(theta), np.sin(theta)])
        p = _pair_from_direction(a, x, kind)
        if p.residual <= opts.tau_eig:
            pairs.append(p)
    identify = kind == "H" or a.order % 2 == 0
    return EigenReport(kind, tuple(_dedupe_pairs(pairs, opts.dedupe, identify)),
                       heuristic=False, degenerate=False)


def _n1_report(a: Tensor, kind: str, opts: SpectralOptions) -> EigenReport:
    pairs = [_pair_from_direction(a, np.ones(1), kind)]
    if kind == "Z" and a.order % 2 == 1:
        pairs.append(_pair_from_direction(a, -np.ones(1), kind))
    identify = kind == "H" or a.order % 2 == 0
    pairs = [p for p in pairs if p.residual <= opts.tau_eig]
    return EigenReport(kind, tuple(_dedupe_pairs(pairs, opts.dedupe, identify)),
                       heuristic=False, degenerate=False)


def _power_heuristic(a: Tensor, kind: str, opts: SpectralOptions) -> EigenReport:
    """Shifted fixed-point iterations from seeded starts; best effort only."""
    n = a.dim
    m = a.order
    shift = 1.0 + _scale_bound(a)
    rng = np.random.default_rng([opts.seed, n, 0xE16])
    starts = [np.eye(n)[i] for i in range(n)]
    starts.append(np.ones(n) / np.sqrt(n))
    for _ in range(opts.power_starts):
        v = rng.standard_normal(n)
        starts.append(v / np.linalg.norm(v))
    pairs = []
    for sign in (1.0, -1.0):
        vals = sign * a.vals
        for x0 in starts:
            x = x0.copy()
            for _ in range(opts.power_iters):
                y = backend.apply_power(a.idx, vals, x, n)
                if kind == "Z":
                    z = y + shift * x
                else:
                    z = np.sign(y) * np.abs(y) ** (1.0 / (m - 1)) + shift * x
                nz = np.linalg.norm(z)
                if nz < 1e-14 or not np.all(np.isfinite(z)):
                    break
                z = z / nz
                if np.linalg.norm(z - x) < 1e-14:
                    x = z
                    break
                x = z
            y = backend.apply_power(a.idx, a.vals, x, n)
            if kind == "Z":
                lam = float(np.dot(x, y))
            else:
                i = int(np.argmax(np.abs(x)))
                if x[i] == 0.0:
                    continue
                lam = float(y[i] / x[i] ** (m - 1))
            res = eigen_residual(a, kind, lam, x)
            if res <= opts.tau_eig:
                pairs.append(EigenPair(kind, lam, x, res))
    identify = kind == "H" or m % 2 == 0
    return EigenReport(kind, tuple(_dedupe_pairs(pairs, opts.dedupe, identify)),
                       heuristic=True, degenerate=False)


def z_eigenpairs(a: Tensor, opts: SpectralOptions | None = None) -> EigenReport:
    opts = opts or SpectralOptions()
    if a.dim == 1:
        return _n1_report(a, "Z", opts)
    if a.dim == 2:
        return _scan_n2(a, "Z", opts)
    return _power_heuristic(a, "Z", opts)


def h_eigenpairs(a: Tensor, opts: SpectralOptions | None = None) -> EigenReport:
    opts = opts or SpectralOptions()
    if a.dim == 1:
        return _n1_report(a, "H", opts)
    if a.dim == 2:
        return _scan_n2(a, "H", opts)
    return _power_heuristic(a, "H", opts)


@dataclass(frozen=True)
class PositivityReport:
    z_report: EigenReport
    h_report: EigenReport
    min_lambda_z: float | None
    min_lambda_h: float | None
    all_positive: bool | None
    strong_p_status: str
    contradiction: bool
    heuristic: bool

    def to_json_dict(self) -> dict:
        return {
            "z": self.z_report.to_json_dict(),
            "h": self.h_report.to_json_dict(),
            "min_lambda_z": self.min_lambda_z,
            "min_lambda_h": self.min_lambda_h,
            "all_positive": self.all_positive,
            "strong_p_status": self.strong_p_status,
            "contradiction": self.contradiction,
            "heuristic": self.heuristic,
        }


def positivity_report(a: Tensor, opts: SpectralOptions | None = None,
                      strong_p_verdict=None) -> PositivityReport:
    """Compute both spectra, report the minimum eigenvalue of each kind,
    and flag the bug signal 'strong class not disproved yet a nonpositive
    eigenvalue was computed'."""
    from .property_checkers import CheckOptions, strong_p_check

    opts = opts or SpectralOptions()
    zr = z_eigenpairs(a, opts)
    hr = h_eigenpairs(a, opts)
    lz = min(zr.lambdas()) if zr.pairs else None
    lh = min(hr.lambdas()) if hr.pairs else None
    computed = [v for v in (zr.lambdas() + hr.lambdas())]
    all_positive = None if not computed else bool(min(computed) > 0.0)
    if strong_p_verdict is None:
        strong_p_verdict = strong_p_check(a, CheckOptions(seed=opts.seed))
    contradiction = (
        strong_p_verdict.status == "not_disproved"
        and all_positive is False
    )
    return PositivityReport(
        z_report=zr,
        h_report=hr,
        min_lambda_z=lz,
        min_lambda_h=lh,
        all_positive=all_positive,
        strong_p_status=strong_p_verdict.status,
        contradiction=contradiction,
        heuristic=zr.heuristic or hr.heuristic,
    )
