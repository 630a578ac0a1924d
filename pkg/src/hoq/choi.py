"""Choi vectors, Choi matrices, and the link product.

Conventions: an operator V mapping system A to system B has Choi vector
|V>> = sum_i |i>_A (x) V|i>_A, living on the layout (A, B) with the input
factor on the left. A linear map has Choi matrix sum_ij |i><j| (x) M(|i><j|)
on the same ordering. Contraction over shared systems is driven purely by
label names: callers rename labels to control what gets linked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .tensor import CMatrix, Layout, Subsystem, aligned

#: A Choi matrix is an ordinary labeled matrix; the alias marks intent.
ChoiMatrix = CMatrix


@dataclass(frozen=True)
class ChoiVector:
    """A complex vector bound to a Layout (the `pure` Choi representation)."""

    layout: Layout
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if arr.shape != (self.layout.total_dim,):
            raise ValueError(
                f"amplitude length {arr.shape[0]} inconsistent with layout dimension {self.layout.total_dim}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("amplitudes must be finite")
        arr = np.array(arr, order="C")
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @property
    def dim(self) -> int:
        return self.layout.total_dim

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.dims)

    def relabeled(self, mapping: dict[str, str]) -> "ChoiVector":
        return ChoiVector(self.layout.relabeled(mapping), self.amplitudes)

    def permuted(self, new_order: Sequence[str]) -> "ChoiVector":
        new_order = list(new_order)
        if sorted(new_order) != sorted(self.layout.labels):
            raise ValueError(f"{new_order} is not a permutation of {list(self.layout.labels)}")
        src = [self.layout.position(l) for l in new_order]
        layout = Layout(tuple(self.layout.subsystems[p] for p in src))
        return ChoiVector(layout, self.as_tensor().transpose(src).reshape(-1))

    def outer(self) -> ChoiMatrix:
        """Rank-1 Choi matrix |v>><<v| on the same layout."""
        return CMatrix(self.layout, np.outer(self.amplitudes, self.amplitudes.conj()))

    def tensor(self, other: "ChoiVector") -> "ChoiVector":
        layout = self.layout.concat(other.layout)
        return ChoiVector(layout, np.kron(self.amplitudes, other.amplitudes))


def _as_layout(spec, default_dim: int | None = None) -> Layout:
    if isinstance(spec, Layout):
        return spec
    if isinstance(spec, Subsystem):
        return Layout((spec,))
    if isinstance(spec, str):
        if default_dim is None:
            raise ValueError("dimension required when passing a bare label")
        return Layout((Subsystem(spec, default_dim),))
    return Layout(tuple(spec))


def operator_choi_vector(op: np.ndarray, ins, outs) -> ChoiVector:
    """Choi vector of a (possibly rectangular) operator between labeled blocks.

    ``op`` has shape (out dim, in dim); ``ins`` / ``outs`` are Layouts,
    Subsystems, or sequences of Subsystems naming the two sides.
    """
    op = np.asarray(op, dtype=np.complex128)
    in_layout = _as_layout(ins, op.shape[1] if op.ndim == 2 else None)
    out_layout = _as_layout(outs, op.shape[0] if op.ndim == 2 else None)
    if op.ndim != 2 or op.shape != (out_layout.total_dim, in_layout.total_dim):
        raise ValueError(
            f"operator shape {op.shape} does not map dim {in_layout.total_dim} to dim {out_layout.total_dim}"
        )
    layout = in_layout.concat(out_layout)
    return ChoiVector(layout, np.ascontiguousarray(op.T).reshape(-1))


def choi_vector_of(op: np.ndarray, in_label: str, out_label: str) -> ChoiVector:
    """Choi vector |V>> = sum_i |i> (x) V|i> on the layout (in, out)."""
    op = np.asarray(op, dtype=np.complex128)
    if op.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {op.shape}")
    return operator_choi_vector(
        op, Subsystem(in_label, op.shape[1]), Subsystem(out_label, op.shape[0])
    )


def choi_vector_to_operator(v: ChoiVector, in_labels: Sequence[str], out_labels: Sequence[str]) -> np.ndarray:
    """Invert :func:`operator_choi_vector`: recover the (out dim, in dim) matrix."""
    ordered = v.permuted(list(in_labels) + list(out_labels))
    d_in = ordered.layout.restrict(in_labels).total_dim
    d_out = ordered.layout.restrict(out_labels).total_dim
    return ordered.amplitudes.reshape(d_in, d_out).T.copy()


def kraus_choi_matrix(kraus: Sequence[np.ndarray], ins, outs) -> ChoiMatrix:
    """PSD Choi matrix sum_k |K_k>><<K_k| of a Kraus family."""
    ops = [np.asarray(k, dtype=np.complex128) for k in kraus]
    if not ops:
        raise ValueError("empty Kraus list")
    shape = ops[0].shape
    for k in ops[1:]:
        if k.shape != shape:
            raise ValueError(f"Kraus shape mismatch: {k.shape} vs {shape}")
    vecs = [operator_choi_vector(k, ins, outs) for k in ops]
    layout = vecs[0].layout
    entries = np.zeros((layout.total_dim, layout.total_dim), dtype=np.complex128)
    for v in vecs:
        entries += np.outer(v.amplitudes, v.amplitudes.conj())
    return CMatrix(layout, entries)


def choi_matrix_of_kraus(kraus: Sequence[np.ndarray], in_label: str, out_label: str) -> ChoiMatrix:
    """Choi matrix of a map given by Kraus operators on single named systems."""
    ops = [np.asarray(k, dtype=np.complex128) for k in kraus]
    if not ops:
        raise ValueError("empty Kraus list")
    d_out, d_in = ops[0].shape
    return kraus_choi_matrix(ops, Subsystem(in_label, d_in), Subsystem(out_label, d_out))


def max_entangled(label_a: str, label_b: str, dim: int) -> ChoiVector:
    """Unnormalized maximally entangled vector sum_i |i>|i> (squared norm = dim)."""
    return choi_vector_of(np.eye(dim), label_a, label_b)


def _shared_labels(a: Layout, b: Layout) -> list[str]:
    shared = [l for l in a.labels if b.has(l)]
    for l in shared:
        if a.dim_of(l) != b.dim_of(l):
            raise ValueError(
                f"shared label {l!r} has mismatched dims {a.dim_of(l)} vs {b.dim_of(l)}"
            )
    return shared


def link_product(q: ChoiMatrix, r: ChoiMatrix) -> ChoiMatrix:
    """Link product Q * R = Tr_B[(Q^{T_B} (x) 1)(1 (x) R)] over shared labels B.

    Shared systems are identified by label name (dims must agree) and are
    contracted away; the result lives on Q's private labels followed by R's,
    so the operation is commutative up to a subsystem permutation. With no
    shared labels it degenerates to the tensor product.
    """
    shared = _shared_labels(q.layout, r.layout)
    nq, nr = len(q.layout), len(r.layout)
    counter = 0
    q_row = {}
    q_col = {}
    out_idx: list[int] = []
    q_idx = [0] * (2 * nq)
    for i, s in enumerate(q.layout):
        q_idx[i] = counter
        q_row[s.label] = counter
        counter += 1
    for i, s in enumerate(q.layout):
        q_idx[nq + i] = counter
        q_col[s.label] = counter
        counter += 1
    r_idx = [0] * (2 * nr)
    # Shared systems: Q's row index pairs with R's row index and Q's column
    # index with R's column index; that is exactly the partial transpose on B
    # inside the trace formula.
    for i, s in enumerate(r.layout):
        if s.label in q_row:
            r_idx[i] = q_row[s.label]
        else:
            r_idx[i] = counter
            counter += 1
    for i, s in enumerate(r.layout):
        if s.label in q_col:
            r_idx[nr + i] = q_col[s.label]
        else:
            r_idx[nr + i] = counter
            counter += 1
    shared_set = set(shared)
    out_rows = [q_idx[i] for i, s in enumerate(q.layout) if s.label not in shared_set]
    out_rows += [r_idx[i] for i, s in enumerate(r.layout) if s.label not in shared_set]
    out_cols = [q_idx[nq + i] for i, s in enumerate(q.layout) if s.label not in shared_set]
    out_cols += [r_idx[nr + i] for i, s in enumerate(r.layout) if s.label not in shared_set]
    out_idx = out_rows + out_cols

    layout = q.layout.drop(shared).concat(r.layout.drop(shared))
    res = np.einsum(q.as_tensor(), q_idx, r.as_tensor(), r_idx, out_idx, optimize=True)
    d = layout.total_dim
    return CMatrix(layout, np.asarray(res, dtype=np.complex128).reshape(d, d))


def link_product_vectors(q: ChoiVector, r: ChoiVector) -> ChoiVector:
    """Pure link product: contract shared labels of two Choi vectors.

    |q> * |r> = sum_i (1 (x) <i|_B)|q> (x) (<i|_B (x) 1)|r>; the basis sum
    turns into a plain index contraction with no conjugation.
    """
    shared = _shared_labels(q.layout, r.layout)
    shared_set = set(shared)
    counter = 0
    q_idx = []
    index_of = {}
    for s in q.layout:
        q_idx.append(counter)
        index_of[s.label] = counter
        counter += 1
    r_idx = []
    for s in r.layout:
        if s.label in shared_set:
            r_idx.append(index_of[s.label])
        else:
            r_idx.append(counter)
            counter += 1
    out_idx = [q_idx[i] for i, s in enumerate(q.layout) if s.label not in shared_set]
    out_idx += [r_idx[i] for i, s in enumerate(r.layout) if s.label not in shared_set]
    layout = q.layout.drop(shared).concat(r.layout.drop(shared))
    res = np.einsum(q.as_tensor(), q_idx, r.as_tensor(), r_idx, out_idx, optimize=True)
    return ChoiVector(layout, np.asarray(res, dtype=np.complex128).reshape(-1))


def aligned_choi(m: ChoiMatrix, reference) -> ChoiMatrix:
    """Alias of :func:`hoq.tensor.aligned` for readability at call sites."""
    return aligned(m, reference)
