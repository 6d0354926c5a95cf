"""Sparse coordinate tensors and multilinear products.

A :class:`Tensor` is an order-``m``, dimension-``n`` real tensor stored as
a sorted coordinate list with no symmetry assumption. External indices
(constructors, JSON, index sets) are 1-based; internally everything is
0-based numpy arrays. Tensors are immutable after construction and all
operations here are pure, so they are safe to call from multiple threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .errors import (
    BadIndexError,
    BadIndexSetError,
    BadValueError,
    DimMismatchError,
    DuplicateEntryError,
    TooLargeError,
)

_MAX_DENSE_TUPLES = 5_000_000


@dataclass(frozen=True)
class Tensor:
    """Real m-th order n-dimensional tensor in sparse coordinate form.

    ``idx`` holds the 0-based index tuples as an ``(nnz, order)`` int64
    array sorted lexicographically; ``vals`` the matching entry values.
    Absent tuples are zero. Use :func:`tensor_from_entries` or
    :func:`tensor_from_json_dict` instead of constructing directly.
    """

    order: int
    dim: int
    idx: np.ndarray = field(repr=False)
    vals: np.ndarray = field(repr=False)

    @property
    def nnz(self) -> int:
        return int(self.vals.shape[0])

    def entries(self) -> dict[tuple[int, ...], float]:
        """Entry map with 1-based index tuples (the external convention)."""
        return {
            tuple(int(i) + 1 for i in row): float(v)
            for row, v in zip(self.idx, self.vals)
        }

    def diagonal(self) -> np.ndarray:
        """The n values a_{ii...i}; absent diagonal entries are 0."""
        d = np.zeros(self.dim)
        for row, v in zip(self.idx, self.vals):
            first = row[0]
            if np.all(row == first):
                d[first] = v
        return d

    def __add__(self, other: "Tensor") -> "Tensor":
        if not isinstance(other, Tensor):
            return NotImplemented
        if self.order != other.order or self.dim != other.dim:
            raise DimMismatchError(
                f"cannot add tensors of shape (m={self.order}, n={self.dim}) "
                f"and (m={other.order}, n={other.dim})"
            )
        merged: dict[tuple[int, ...], float] = dict(self.entries())
        for key, v in other.entries().items():
            merged[key] = merged.get(key, 0.0) + v
        pairs = [(k, v) for k, v in merged.items() if v != 0.0]
        return tensor_from_entries(self.order, self.dim, pairs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.order == other.order
            and self.dim == other.dim
            and self.idx.shape == other.idx.shape
            and bool(np.all(self.idx == other.idx))
            and bool(np.all(self.vals == other.vals))
        )

    def __str__(self) -> str:
        return f"Tensor(order={self.order}, dim={self.dim}, nnz={self.nnz})"


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _build(order: int, dim: int, idx: np.ndarray, vals: np.ndarray) -> Tensor:
    # canonical sort by index tuple makes equal tensors bitwise identical
    if idx.shape[0] > 1:
        perm = np.lexsort(idx.T[::-1])
        idx = idx[perm]
        vals = vals[perm]
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    vals = np.ascontiguousarray(vals, dtype=np.float64)
    return Tensor(order=order, dim=dim, idx=_freeze(idx), vals=_freeze(vals))


def tensor_from_entries(order, dim, entries) -> Tensor:
    """Build a tensor from 1-based ``(index_tuple, value)`` pairs.

    ``entries`` may be a dict or an iterable of pairs. Duplicate tuples are
    rejected (they signal a data error, values are never summed).
    """
    order = int(order)
    dim = int(dim)
    if order < 2:
        raise BadIndexError(f"tensor order must be >= 2, got {order}")
    if dim < 1:
        raise BadIndexError(f"tensor dimension must be >= 1, got {dim}")
    if isinstance(entries, dict):
        items = list(entries.items())
    else:
        items = [(tuple(t), v) for t, v in entries]
    seen: set[tuple[int, ...]] = set()
    rows = np.empty((len(items), order), dtype=np.int64)
    vals = np.empty(len(items), dtype=np.float64)
    for r, (tup, v) in enumerate(items):
        tup = tuple(int(i) for i in tup)
        if len(tup) != order:
            raise BadIndexError(f"index tuple {tup} does not have {order} components")
        for i in tup:
            if not 1 <= i <= dim:
                raise BadIndexError(f"index {i} in tuple {tup} outside 1..{dim}")
        if tup in seen:
            raise DuplicateEntryError(f"duplicate index tuple {tup}")
        seen.add(tup)
        v = float(v)
        if not np.isfinite(v):
            raise BadValueError(f"non-finite value {v} at index tuple {tup}")
        rows[r] = np.array(tup, dtype=np.int64) - 1
        vals[r] = v
    return _build(order, dim, rows, vals)


def zero_tensor(order: int, dim: int) -> Tensor:
    return tensor_from_entries(order, dim, [])


def as_vector(x, dim: int) -> np.ndarray:
    """Validate and convert ``x`` to a float64 vector of length ``dim``."""
    v = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
    if v.ndim != 1 or v.shape[0] != dim:
        raise DimMismatchError(f"expected a vector of length {dim}, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise BadValueError("vector has non-finite components")
    return v


def apply_power(a: Tensor, x) -> np.ndarray:
    """The vector whose i-th component sums entry * product of the trailing
    ``order - 1`` coordinates of ``x``, accumulated into the lead index."""
    x = as_vector(x, a.dim)
    return backend.apply_power(a.idx, a.vals, x, a.dim)


def apply_power_batch(a: Tensor, xs: np.ndarray) -> np.ndarray:
    """Row-wise :func:`apply_power` for an ``(nb, dim)`` stack of vectors."""
    xs = np.ascontiguousarray(np.asarray(xs, dtype=np.float64))
    if xs.ndim != 2 or xs.shape[1] != a.dim:
        raise DimMismatchError(f"expected shape (nb, {a.dim}), got {xs.shape}")
    return backend.apply_power_batch(a.idx, a.vals, xs, a.dim)


def power_jacobian(a: Tensor, x) -> np.ndarray:
    """Jacobian matrix of ``x -> apply_power(a, x)``."""
    x = as_vector(x, a.dim)
    return backend.power_jacobian(a.idx, a.vals, x, a.dim)


def form_value(a: Tensor, x) -> float:
    """The homogeneous form value ``dot(x, apply_power(a, x))``."""
    x = as_vector(x, a.dim)
    return float(np.dot(x, backend.apply_power(a.idx, a.vals, x, a.dim)))


def normalize_index_set(j, dim: int) -> list[int]:
    """Validate a 1-based index set; returns it sorted and deduplicated."""
    js = sorted({int(i) for i in j})
    if not js:
        raise BadIndexSetError("index set must be nonempty")
    if js[0] < 1 or js[-1] > dim:
        raise BadIndexSetError(f"index set {js} not within 1..{dim}")
    return js


def principal_subtensor(a: Tensor, j) -> Tensor:
    """Restrict every tensor index to the 1-based set ``j``, reindexed by
    the sorted order of ``j``."""
    js = normalize_index_set(j, a.dim)
    keep = set(i - 1 for i in js)
    remap = {old: new for new, old in enumerate(sorted(keep))}
    pairs = []
    for row, v in zip(a.idx, a.vals):
        if all(int(i) in keep for i in row):
            pairs.append((tuple(remap[int(i)] + 1 for i in row), float(v)))
    return tensor_from_entries(a.order, len(js), pairs)


def random_tensor(order, dim, density, value_range, seed) -> Tensor:
    """Deterministic random sparse tensor; entry values uniform over
    ``value_range``, each index tuple kept with probability ``density``."""
    order = int(order)
    dim = int(dim)
    if order < 2 or dim < 1:
        raise BadIndexError("need order >= 2 and dim >= 1")
    if not 0.0 < density <= 1.0:
        raise BadValueError(f"density must be in (0, 1], got {density}")
    lo, hi = float(value_range[0]), float(value_range[1])
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise BadValueError(f"empty value range [{lo}, {hi}]")
    total = dim**order
    if total > _MAX_DENSE_TUPLES:
        raise TooLargeError(f"dim**order = {total} exceeds the desk-scale limit")
    rng = np.random.default_rng(seed)
    mask = rng.random(total) < density
    values = lo + (hi - lo) * rng.random(total)
    rows = np.argwhere(mask).ravel()
    idx = np.empty((rows.shape[0], order), dtype=np.int64)
    for k in range(order - 1, -1, -1):
        idx[:, k] = rows % dim
        rows = rows // dim
    return _build(order, dim, idx, values[mask])


def tensor_to_json_dict(a: Tensor) -> dict:
    return {
        "order": a.order,
        "dim": a.dim,
        "entries": [
            {"idx": [int(i) + 1 for i in row], "val": float(v)}
            for row, v in zip(a.idx, a.vals)
        ],
    }


def tensor_from_json_dict(d: dict) -> Tensor:
    try:
        order = d["order"]
        dim = d["dim"]
        raw = d["entries"]
    except (KeyError, TypeError) as exc:
        raise BadValueError(f"malformed tensor object: missing {exc}") from exc
    pairs = []
    for ent in raw:
        try:
            pairs.append((tuple(ent["idx"]), ent["val"]))
        except (KeyError, TypeError) as exc:
            raise BadValueError(f"malformed tensor entry {ent!r}") from exc
    return tensor_from_entries(order, dim, pairs)


def load_tensor(path) -> Tensor:
    with open(path, "r", encoding="utf-8") as fh:
        return tensor_from_json_dict(json.load(fh))


def save_tensor(a: Tensor, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(tensor_to_json_dict(a), fh, indent=2)
        fh.write("\n")
