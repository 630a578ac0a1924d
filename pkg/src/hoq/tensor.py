"""Dense complex linear algebra over labeled, ordered tensor factors.

Every object in this package lives on a :class:`Layout`: an ordered list of
named subsystems with dimensions. The index convention is computational
basis, big-endian: the leftmost subsystem is the most significant digit of
the row/column index. All serialization and all test oracles share this
convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

#: Absolute max-norm tolerance for Hermiticity / PSD checks.
HERMITICITY_TOL = 1e-9

#: Relative singular-value threshold for numeric rank.
RANK_REL_TOL = 1e-10


@dataclass(frozen=True)
class Subsystem:
    """A named tensor factor with a Hilbert-space dimension."""

    label: str
    dim: int

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise ValueError(f"subsystem label must be a nonempty string, got {self.label!r}")
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError(f"subsystem {self.label!r}: dim must be a positive integer, got {self.dim!r}")


@dataclass(frozen=True)
class Layout:
    """Ordered, duplicate-free list of subsystems; fixes the index encoding."""

    subsystems: tuple[Subsystem, ...]

    def __post_init__(self):
        object.__setattr__(self, "subsystems", tuple(self.subsystems))
        labels = [s.label for s in self.subsystems]
        if len(set(labels)) != len(labels):
            dupes = sorted({l for l in labels if labels.count(l) > 1})
            raise ValueError(f"duplicate labels in layout: {dupes}")

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> "Layout":
        """Build a layout from (label, dim) pairs."""
        return cls(tuple(Subsystem(l, d) for l, d in pairs))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.subsystems)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.subsystems)

    @property
    def total_dim(self) -> int:
        out = 1
        for s in self.subsystems:
            out *= s.dim
        return out

    def __len__(self) -> int:
        return len(self.subsystems)

    def __iter__(self):
        return iter(self.subsystems)

    def position(self, label: str) -> int:
        for i, s in enumerate(self.subsystems):
            if s.label == label:
                return i
        raise KeyError(f"unknown label {label!r}; layout has {list(self.labels)}")

    def dim_of(self, label: str) -> int:
        return self.subsystems[self.position(label)].dim

    def has(self, label: str) -> bool:
        return label in self.labels

    def restrict(self, labels: Iterable[str]) -> "Layout":
        """Sub-layout of the given labels, in this layout's order."""
        keep = set(labels)
        unknown = keep - set(self.labels)
        if unknown:
            raise KeyError(f"unknown labels {sorted(unknown)}; layout has {list(self.labels)}")
        return Layout(tuple(s for s in self.subsystems if s.label in keep))

    def drop(self, labels: Iterable[str]) -> "Layout":
        gone = set(labels)
        unknown = gone - set(self.labels)
        if unknown:
            raise KeyError(f"unknown labels {sorted(unknown)}; layout has {list(self.labels)}")
        return Layout(tuple(s for s in self.subsystems if s.label not in gone))

    def concat(self, other: "Layout") -> "Layout":
        overlap = set(self.labels) & set(other.labels)
        if overlap:
            raise ValueError(f"label collision: {sorted(overlap)}")
        return Layout(self.subsystems + other.subsystems)

    def relabeled(self, mapping: dict[str, str]) -> "Layout":
        """Rename subsystems; labels absent from the mapping are kept."""
        return Layout(tuple(Subsystem(mapping.get(s.label, s.label), s.dim) for s in self.subsystems))


@dataclass(frozen=True)
class CMatrix:
    """A square complex matrix bound to a Layout.

    Entries are complex double precision, row-major, big-endian over the
    layout's subsystems. Instances are immutable; all operations return new
    values, so concurrent use is safe.
    """

    layout: Layout
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.complex128)
        d = self.layout.total_dim
        if arr.shape != (d, d):
            raise ValueError(f"entries shape {arr.shape} inconsistent with layout dimension {d}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("entries must be finite")
        arr = np.array(arr, order="C")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def identity(cls, layout: Layout) -> "CMatrix":
        return cls(layout, np.eye(layout.total_dim, dtype=np.complex128))

    @property
    def dim(self) -> int:
        return self.layout.total_dim

    def dagger(self) -> "CMatrix":
        return CMatrix(self.layout, self.entries.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries))) if self.entries.size else 0.0

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return self.hermiticity_residual() <= tol

    def relabeled(self, mapping: dict[str, str]) -> "CMatrix":
        return CMatrix(self.layout.relabeled(mapping), self.entries)

    def as_tensor(self) -> np.ndarray:
        """Reshape to one axis per row subsystem followed by one per column subsystem."""
        dims = self.layout.dims
        return self.entries.reshape(dims + dims)


def _tensor_axes(layout: Layout, label: str) -> tuple[int, int]:
    """(row axis, column axis) of a label in the tensor view."""
    p = layout.position(label)
    return p, p + len(layout)


def kron(a: CMatrix, b: CMatrix) -> CMatrix:
    """Tensor product; the result layout is a's subsystems followed by b's.

    Raises ValueError on a label collision.
    """
    layout = a.layout.concat(b.layout)
    return CMatrix(layout, np.kron(a.entries, b.entries))


def kron_all(mats: Sequence[CMatrix]) -> CMatrix:
    if not mats:
        raise ValueError("kron_all needs at least one factor")
    out = mats[0]
    for m in mats[1:]:
        out = kron(out, m)
    return out


def partial_trace(m: CMatrix, labels: Iterable[str]) -> CMatrix:
    """Trace out the named subsystems; the result keeps the remaining order.

    ``partial_trace(m, all labels)`` yields a 1x1 matrix holding Tr(m).
    """
    gone = list(dict.fromkeys(labels))
    for l in gone:
        m.layout.position(l)  # raises KeyError on unknown label
    n = len(m.layout)
    tensor = m.as_tensor()
    in_idx = list(range(2 * n))
    for l in gone:
        r, c = _tensor_axes(m.layout, l)
        in_idx[c] = in_idx[r]
    keep = [i for i, s in enumerate(m.layout) if s.label not in gone]
    out_idx = [in_idx[i] for i in keep] + [in_idx[i + n] for i in keep]
    out_layout = m.layout.drop(gone)
    res = np.einsum(tensor, in_idx, out_idx)
    d = out_layout.total_dim
    return CMatrix(out_layout, np.asarray(res, dtype=np.complex128).reshape(d, d))


def partial_transpose(m: CMatrix, labels: Iterable[str]) -> CMatrix:
    """Transpose the named subsystems in place; involutive, full set = transpose."""
    sel = list(dict.fromkeys(labels))
    for l in sel:
        m.layout.position(l)
    n = len(m.layout)
    tensor = m.as_tensor()
    perm = list(range(2 * n))
    for l in sel:
        r, c = _tensor_axes(m.layout, l)
        perm[r], perm[c] = perm[c], perm[r]
    d = m.dim
    return CMatrix(m.layout, tensor.transpose(perm).reshape(d, d))


def permute_subsystems(m: CMatrix, new_order: Sequence[str]) -> CMatrix:
    """Reorder the tensor factors to ``new_order`` (a permutation of the labels)."""
    new_order = list(new_order)
    if sorted(new_order) != sorted(m.layout.labels):
        raise ValueError(f"new order {new_order} is not a permutation of {list(m.layout.labels)}")
    n = len(m.layout)
    src = [m.layout.position(l) for l in new_order]
    perm = src + [p + n for p in src]
    tensor = m.as_tensor()
    layout = Layout(tuple(m.layout.subsystems[p] for p in src))
    d = m.dim
    return CMatrix(layout, tensor.transpose(perm).reshape(d, d))


def aligned(m: CMatrix, reference: Layout | Sequence[str]) -> CMatrix:
    """Permute m's subsystems to match a reference ordering."""
    order = reference.labels if isinstance(reference, Layout) else tuple(reference)
    if m.layout.labels == order:
        return m
    return permute_subsystems(m, order)


def hermitian_eig(m: CMatrix, tol: float = HERMITICITY_TOL) -> tuple[np.ndarray, CMatrix]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector matrix V as a CMatrix whose
    columns are eigenvectors), so that m = V diag(w) V^dag.

    Raises ValueError if the Hermiticity residual exceeds ``tol``.
    """
    res = m.hermiticity_residual()
    if res > tol:
        raise ValueError(f"matrix is not Hermitian: max |m - m^dag| = {res:.3e} > {tol:.1e}")
    w, v = np.linalg.eigh((m.entries + m.entries.conj().T) / 2.0)
    return w, CMatrix(m.layout, v)


def numeric_rank(m: CMatrix | np.ndarray, rel_tol: float = RANK_REL_TOL) -> int:
    """Count singular values above ``rel_tol`` times the largest one.

    Accepts a CMatrix or a bare (possibly rectangular) ndarray; returns 0 for
    the zero matrix.
    """
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    arr = m.entries if isinstance(m, CMatrix) else np.asarray(m, dtype=np.complex128)
    if arr.size == 0:
        return 0
    sv = np.linalg.svd(arr, compute_uv=False)
    top = sv[0] if sv.size else 0.0
    if top == 0.0:
        return 0
    return int(np.count_nonzero(sv > rel_tol * top))


def min_eigenvalue(m: CMatrix) -> float:
    """Smallest eigenvalue of the Hermitian part of m."""
    h = (m.entries + m.entries.conj().T) / 2.0
    return float(np.linalg.eigvalsh(h)[0])
