"""Quantum channels: Choi/Kraus conversion, Pauli and unitary families, sampling.

A :class:`Channel` is a Choi matrix tagged with input and output label groups
(layout order: inputs first). Constructors in this module produce channels
that satisfy the CP and TP conditions up to the default tolerances; the
``validate`` method reports the residuals for externally loaded data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .choi import ChoiMatrix, kraus_choi_matrix, link_product
from .tensor import CMatrix, Layout, Subsystem, aligned, hermitian_eig, min_eigenvalue, partial_trace

CPTP_TOL = 1e-9

_PAULI = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


@dataclass(frozen=True)
class Channel:
    """A CPTP map in Choi form, with optional Kraus operators."""

    choi: ChoiMatrix
    in_labels: tuple[str, ...]
    out_labels: tuple[str, ...]
    kraus: tuple[np.ndarray, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        labels = set(self.in_labels) | set(self.out_labels)
        if labels != set(self.choi.layout.labels):
            raise ValueError(
                f"in/out labels {sorted(labels)} do not cover the Choi layout {list(self.choi.layout.labels)}"
            )
        if set(self.in_labels) & set(self.out_labels):
            raise ValueError("in_labels and out_labels must be disjoint")
        object.__setattr__(self, "in_labels", tuple(self.in_labels))
        object.__setattr__(self, "out_labels", tuple(self.out_labels))
        if self.kraus is not None:
            object.__setattr__(self, "kraus", tuple(np.asarray(k, dtype=np.complex128) for k in self.kraus))

    @property
    def in_dim(self) -> int:
        return self.choi.layout.restrict(self.in_labels).total_dim

    @property
    def out_dim(self) -> int:
        return self.choi.layout.restrict(self.out_labels).total_dim

    def tp_residual(self) -> float:
        """Max-norm distance of Tr_out(choi) from the identity on the inputs."""
        reduced = partial_trace(self.choi, self.out_labels)
        reduced = aligned(reduced, [l for l in self.choi.layout.labels if l in self.in_labels])
        return float(np.max(np.abs(reduced.entries - np.eye(self.in_dim))))

    def cp_residual(self) -> float:
        """How far below zero the smallest Choi eigenvalue sits (0 when PSD)."""
        return max(0.0, -min_eigenvalue(self.choi))

    def validate(self, tol: float = CPTP_TOL) -> dict[str, float]:
        residuals = {
            "tp": self.tp_residual(),
            "cp": self.cp_residual(),
            "hermiticity": self.choi.hermiticity_residual(),
        }
        bad = {k: v for k, v in residuals.items() if v > tol}
        if bad:
            raise ValueError(f"channel violates CPTP conditions beyond {tol:.1e}: {bad}")
        return residuals

    def relabeled(self, mapping: dict[str, str]) -> "Channel":
        return Channel(
            self.choi.relabeled(mapping),
            tuple(mapping.get(l, l) for l in self.in_labels),
            tuple(mapping.get(l, l) for l in self.out_labels),
            self.kraus,
        )


@dataclass(frozen=True)
class KrausSet:
    """A list of in->out operators with sum_k K^dag K = identity (within tol)."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=np.complex128) for k in self.operators)
        if not ops:
            raise ValueError("empty Kraus set")
        shape = ops[0].shape
        for k in ops[1:]:
            if k.shape != shape:
                raise ValueError(f"Kraus shape mismatch: {k.shape} vs {shape}")
        object.__setattr__(self, "operators", ops)

    def completeness_residual(self) -> float:
        d_in = self.operators[0].shape[1]
        acc = sum(k.conj().T @ k for k in self.operators)
        return float(np.max(np.abs(acc - np.eye(d_in))))


def pauli(indices: Sequence[int] | int) -> CMatrix:
    """n-qubit Pauli operator: the tensor product of sigma_{r_i} over r.

    Index values 0..3 name identity, X, Y, Z. Returns a CMatrix on qubit
    subsystems labeled q0, q1, ...; unitary and Hermitian by construction.
    """
    if isinstance(indices, (int, np.integer)):
        indices = [int(indices)]
    idx = [int(i) for i in indices]
    if not idx:
        raise ValueError("need at least one Pauli index")
    for i in idx:
        if i not in (0, 1, 2, 3):
            raise ValueError(f"Pauli index out of range: {i}")
    op = _PAULI[idx[0]]
    for i in idx[1:]:
        op = np.kron(op, _PAULI[i])
    layout = Layout.of(*[(f"q{k}", 2) for k in range(len(idx))])
    return CMatrix(layout, op)


def pauli_operator(indices: Sequence[int] | int) -> np.ndarray:
    """Bare ndarray version of :func:`pauli`."""
    return np.asarray(pauli(indices).entries)


def _check_unitary(u: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    res = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if res > tol:
        raise ValueError(f"matrix is not unitary: max |U^dag U - 1| = {res:.3e}")
    return u


def unitary_channel(u: np.ndarray, in_label: str = "I", out_label: str = "O") -> Channel:
    """Conjugation channel rho -> U rho U^dag; rank-1 Choi."""
    u = _check_unitary(u)
    choi = kraus_choi_matrix([u], Subsystem(in_label, u.shape[0]), Subsystem(out_label, u.shape[0]))
    return Channel(choi, (in_label,), (out_label,), kraus=(u,))


def mixed_unitary(
    probs: Sequence[float],
    unitaries: Sequence[np.ndarray],
    in_label: str = "I",
    out_label: str = "O",
) -> Channel:
    """Convex mixture of unitary conjugations."""
    p = np.asarray(probs, dtype=float)
    if len(p) != len(unitaries):
        raise ValueError(f"{len(p)} probabilities for {len(unitaries)} unitaries")
    if np.any(p < -1e-12):
        raise ValueError("probabilities must be nonnegative")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {p.sum()}, expected 1")
    us = [_check_unitary(u) for u in unitaries]
    d = us[0].shape[0]
    for u in us:
        if u.shape[0] != d:
            raise ValueError("unitaries must share a dimension")
    kraus = tuple(np.sqrt(pi) * u for pi, u in zip(p, us))
    choi = kraus_choi_matrix(kraus, Subsystem(in_label, d), Subsystem(out_label, d))
    return Channel(choi, (in_label,), (out_label,), kraus=kraus)


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Deterministic Haar-random unitary: QR of a seeded complex Gaussian.

    The R diagonal phases are normalized away so the distribution is Haar.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_mixed_unitary(
    dim: int, k: int, seed: int, in_label: str = "I", out_label: str = "O"
) -> Channel:
    """Mixture of k seeded Haar unitaries with Dirichlet-uniform weights."""
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(k))
    us = [random_unitary(dim, seed * 1000 + 7 * j + 1) for j in range(k)]
    return mixed_unitary(p, us, in_label, out_label)


def random_channel(
    dim_in: int,
    dim_out: int,
    kraus_rank: int,
    seed: int,
    in_label: str = "I",
    out_label: str = "O",
) -> Channel:
    """Random CPTP channel from a Haar isometry (Stinespring dilation)."""
    if kraus_rank < 1:
        raise ValueError("kraus_rank must be positive")
    big = random_unitary(dim_out * kraus_rank, seed)
    iso = big[:, :dim_in]
    kraus = tuple(iso[j * dim_out : (j + 1) * dim_out, :] for j in range(kraus_rank))
    choi = kraus_choi_matrix(kraus, Subsystem(in_label, dim_in), Subsystem(out_label, dim_out))
    return Channel(choi, (in_label,), (out_label,), kraus=kraus)


def identity_channel(dim: int, in_label: str = "I", out_label: str = "O") -> Channel:
    return unitary_channel(np.eye(dim), in_label, out_label)


def apply_channel(c: Channel, rho: CMatrix) -> CMatrix:
    """Propagate a state through a channel via the Choi link product."""
    if set(rho.layout.labels) != set(c.in_labels):
        raise ValueError(
            f"state labels {list(rho.layout.labels)} do not match channel inputs {list(c.in_labels)}"
        )
    out = link_product(c.choi, rho)
    return aligned(out, [l for l in c.choi.layout.labels if l in c.out_labels])


def choi_to_kraus(c: Channel, cutoff: float = 1e-10) -> KrausSet:
    """Kraus operators from the Choi eigendecomposition.

    Eigenvectors with eigenvalue above ``cutoff`` are kept, which makes the
    rank handling of degenerate Chois deterministic.
    """
    cp = min_eigenvalue(c.choi)
    if cp < -CPTP_TOL:
        raise ValueError(f"Choi matrix is not PSD: min eigenvalue {cp:.3e}")
    ordered = aligned(c.choi, list(c.in_labels) + list(c.out_labels))
    w, v = hermitian_eig(ordered, tol=10 * CPTP_TOL)
    d_in = c.in_dim
    d_out = c.out_dim
    ops = []
    for i in range(len(w)):
        if w[i] > cutoff:
            vec = np.sqrt(w[i]) * v.entries[:, i]
            ops.append(vec.reshape(d_in, d_out).T.copy())
    if not ops:
        raise ValueError("Choi matrix is numerically zero; no Kraus operators")
    return KrausSet(tuple(ops))


def channel_from_kraus(
    kraus: Sequence[np.ndarray], in_label: str = "I", out_label: str = "O"
) -> Channel:
    ops = [np.asarray(k, dtype=np.complex128) for k in kraus]
    d_out, d_in = ops[0].shape
    choi = kraus_choi_matrix(ops, Subsystem(in_label, d_in), Subsystem(out_label, d_out))
    return Channel(choi, (in_label,), (out_label,), kraus=tuple(ops))
