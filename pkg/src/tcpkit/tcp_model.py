"""Complementarity instances, residuals, and solution verification.

An instance pairs a tensor ``A`` with a shift vector ``q`` and asks for
``x >= 0`` with ``F(x) = apply_power(A, x) + q >= 0`` and ``x . F(x) = 0``.
A point is accepted as a solution at tolerance ``tol`` when the primal
violation, dual violation, and complementarity gap all sit below ``tol``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .errors import BadToleranceError, BadValueError, DimMismatchError
from .tensor_core import (
    Tensor,
    as_vector,
    tensor_from_json_dict,
    tensor_to_json_dict,
)

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class TcpInstance:
    a: Tensor
    q: np.ndarray = field(repr=False)

    def __str__(self) -> str:
        return f"TcpInstance(order={self.a.order}, dim={self.a.dim})"


def make_instance(a: Tensor, q) -> TcpInstance:
    qv = as_vector(q, a.dim)
    qv.flags.writeable = False
    return TcpInstance(a=a, q=qv)


@dataclass(frozen=True)
class ResidualReport:
    """How far a point is from satisfying the complementarity conditions.

    ``primal_violation`` is ``max(0, -min_i x_i)``, ``dual_violation`` is
    ``max(0, -min_i F_i(x))``, ``complementarity_gap`` is ``|x . F(x)|``,
    and ``componentwise_products`` lists each ``x_i * F_i(x)``.
    """

    primal_violation: float
    dual_violation: float
    complementarity_gap: float
    componentwise_products: tuple[float, ...]

    def max_violation(self) -> float:
        return max(self.primal_violation, self.dual_violation, self.complementarity_gap)

    def to_json_dict(self) -> dict:
        return {
            "primal_violation": self.primal_violation,
            "dual_violation": self.dual_violation,
            "complementarity_gap": self.complementarity_gap,
            "componentwise_products": list(self.componentwise_products),
        }


def eval_F(inst: TcpInstance, x) -> np.ndarray:
    """``apply_power(A, x) + q``."""
    x = as_vector(x, inst.a.dim)
    return backend.apply_power(inst.a.idx, inst.a.vals, x, inst.a.dim) + inst.q


def residuals(inst: TcpInstance, x) -> ResidualReport:
    x = as_vector(x, inst.a.dim)
    f = backend.apply_power(inst.a.idx, inst.a.vals, x, inst.a.dim) + inst.q
    primal = float(max(0.0, -np.min(x)))
    dual = float(max(0.0, -np.min(f)))
    gap = float(abs(np.dot(x, f)))
    products = tuple(float(p) for p in x * f)
    return ResidualReport(primal, dual, gap, products)


def is_solution(inst: TcpInstance, x, tol: float = DEFAULT_TOL) -> bool:
    if not (isinstance(tol, (int, float)) and np.isfinite(tol) and tol > 0):
        raise BadToleranceError(f"tolerance must be a positive number, got {tol!r}")
    return residuals(inst, x).max_violation() <= tol


def plus_part(v) -> np.ndarray:
    """Componentwise max with zero."""
    return np.maximum(np.asarray(v, dtype=np.float64), 0.0)


def natural_residual_norm(inst: TcpInstance, x) -> float:
    """Euclidean norm of ``min(x, F(x))``; zero exactly at solutions."""
    x = as_vector(x, inst.a.dim)
    f = backend.apply_power(inst.a.idx, inst.a.vals, x, inst.a.dim) + inst.q
    return float(np.linalg.norm(np.minimum(x, f)))


def instance_to_json_dict(inst: TcpInstance) -> dict:
    return {"tensor": tensor_to_json_dict(inst.a), "q": [float(v) for v in inst.q]}


def instance_from_json_dict(d: dict) -> TcpInstance:
    try:
        a = tensor_from_json_dict(d["tensor"])
        q = d["q"]
    except (KeyError, TypeError) as exc:
        raise BadValueError(f"malformed instance object: {exc}") from exc
    if len(q) != a.dim:
        raise DimMismatchError(f"q has length {len(q)}, tensor dimension is {a.dim}")
    return make_instance(a, q)


def load_instance(path) -> TcpInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_json_dict(json.load(fh))


def save_instance(inst: TcpInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_json_dict(inst), fh, indent=2)
        fh.write("\n")
