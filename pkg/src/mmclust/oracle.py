"""Brute-force reference computations used to cross-check the solver.

Everything here materializes objects the solver deliberately avoids forming:
the full weight tensor, the dense system matrix of the view-factor update, and
explicit outer products.  These paths share no code with the solver module, so
agreement between the two is evidence, not tautology.  Intended for tests and
the ``oracle-check`` command; sizes are capped to keep runs at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

__all__ = [
    "DenseTensor",
    "outer_product",
    "tensor_inner",
    "materialize_cp",
    "full_tensor_predict",
    "dense_H",
]

MATERIALIZE_ENTRY_CAP = 1_000_000
DENSE_SYSTEM_SIZE_CAP = 5_000


@dataclass(frozen=True)
class DenseTensor:
    """Explicit dense tensor, stored flat in column-major multi-index order."""

    dims: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"invalid tensor dims {dims}")
        values = np.asarray(self.values, dtype=np.float64).ravel()
        if values.size != int(np.prod(dims)):
            raise ValueError(
                f"values length {values.size} does not match dims {dims}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("tensor entries must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "values", values)

    @property
    def n_modes(self) -> int:
        return len(self.dims)

    def entry(self, *index: int) -> float:
        """Entry at a multi-index, resolved with column-major strides."""
        if len(index) != len(self.dims):
            raise IndexError(f"expected {len(self.dims)} indices, got {len(index)}")
        offset, stride = 0, 1
        for i, d in zip(index, self.dims):
            if not 0 <= i < d:
                raise IndexError(f"index {index} out of bounds for dims {self.dims}")
            offset += i * stride
            stride *= d
        return float(self.values[offset])


def outer_product(vectors) -> DenseTensor:
    """Outer product of a list of vectors: entry (i_1..i_M) is the product of
    the i_m-th element of each vector."""
    vecs = [np.asarray(v, dtype=np.float64).ravel() for v in vectors]
    if not vecs or any(v.size == 0 for v in vecs):
        raise ValueError("need at least one nonempty vector")
    full = reduce(np.multiply.outer, vecs)
    return DenseTensor(tuple(v.size for v in vecs), np.asarray(full).ravel(order="F"))


def tensor_inner(a: DenseTensor, b: DenseTensor) -> float:
    """Sum of elementwise products over all multi-indices."""
    if a.dims != b.dims:
        raise ValueError(f"dimension mismatch: {a.dims} vs {b.dims}")
    return float(np.dot(a.values, b.values))


def materialize_cp(weights, max_entries: int = MATERIALIZE_ENTRY_CAP) -> DenseTensor:
    """Expand factor matrices into the full weight tensor as an explicit sum of
    rank-1 outer products.

    ``weights`` is anything exposing ``view_factors`` (a sequence of matrices
    with a common column count) and ``cluster_factor``; component ``r`` is the
    outer product of the r-th columns.
    """
    factors = [np.asarray(f, dtype=np.float64) for f in weights.view_factors]
    factors.append(np.asarray(weights.cluster_factor, dtype=np.float64))
    rank = factors[0].shape[1]
    if any(f.ndim != 2 or f.shape[1] != rank for f in factors):
        raise ValueError("factor matrices must share one column count")
    dims = tuple(f.shape[0] for f in factors)
    total = int(np.prod(dims))
    if total > max_entries:
        raise ValueError(
            f"materializing {total} entries exceeds the cap of {max_entries}"
        )
    flat = np.zeros(total)
    for r in range(rank):
        flat += outer_product([f[:, r] for f in factors]).values
    return DenseTensor(dims, flat)


def full_tensor_predict(z, w_full: DenseTensor, n: int, k: int) -> float:
    """Score of instance ``n`` against cluster ``k`` evaluated the slow way:
    inner product of the instance's augmented rank-1 data tensor (extended by
    the cluster's one-hot vector) with the explicit weight tensor."""
    vectors = [np.asarray(zv, dtype=np.float64)[:, n] for zv in z.z_views]
    k_size = w_full.dims[-1]
    expected = tuple(v.size for v in vectors) + (k_size,)
    if w_full.dims != expected:
        raise ValueError(f"weight tensor dims {w_full.dims}, expected {expected}")
    onehot = np.zeros(k_size)
    onehot[k] = 1.0
    return tensor_inner(outer_product(vectors + [onehot]), w_full)


def dense_H(A, B, C, D_diag, gamma: float, max_size: int = DENSE_SYSTEM_SIZE_CAP) -> np.ndarray:
    """Explicitly assemble the (M*R) x (M*R) system matrix of the view-factor
    update via Kronecker products:

        kron(I_R, gamma*diag(D_diag))
          + kron(I_R, A) @ diag(vec B) @ kron(C.T, I_N) @ diag(vec B) @ kron(I_R, A.T)

    with vec taken column-major.  Symmetric whenever ``C`` is symmetric.
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    C = np.asarray(C, dtype=np.float64)
    D_diag = np.asarray(D_diag, dtype=np.float64).ravel()
    m, n = A.shape
    r = B.shape[1]
    if B.shape[0] != n or C.shape != (r, r) or D_diag.size != m:
        raise ValueError(
            f"inconsistent shapes: A {A.shape}, B {B.shape}, C {C.shape}, "
            f"D_diag {D_diag.shape}"
        )
    if m * r > max_size:
        raise ValueError(f"dense system of order {m * r} exceeds cap {max_size}")
    eye_r = np.eye(r)
    weight = np.diag(B.ravel(order="F"))
    interaction = (
        np.kron(eye_r, A) @ weight @ np.kron(C.T, np.eye(n)) @ weight @ np.kron(eye_r, A.T)
    )
    return np.kron(eye_r, gamma * np.diag(D_diag)) + interaction
