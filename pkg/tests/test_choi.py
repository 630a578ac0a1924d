"""Choi calculus: link product against the literal trace formula and pure form."""

import numpy as np
import pytest

from hoq.choi import (
    ChoiVector,
    choi_matrix_of_kraus,
    choi_vector_of,
    choi_vector_to_operator,
    link_product,
    link_product_vectors,
    max_entangled,
    operator_choi_vector,
)
from hoq.tensor import (
    CMatrix,
    Layout,
    aligned,
    kron,
    min_eigenvalue,
    partial_trace,
    partial_transpose,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


def random_matrix(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_cmatrix(rng, *pairs):
    layout = Layout.of(*pairs)
    d = layout.total_dim
    return CMatrix(layout, random_matrix(rng, d))


# ---------------------------------------------------------------------------
# Oracle: the link product spelled out as Tr_B[(Q^{T_B} x 1)(1 x R)], built
# from kron / partial_transpose / partial_trace primitives only.
# ---------------------------------------------------------------------------

def link_product_trace_formula(q: CMatrix, r: CMatrix) -> CMatrix:
    shared = [l for l in q.layout.labels if r.layout.has(l)]
    q_only = [s for s in q.layout if s.label not in shared]
    r_only = [s for s in r.layout if s.label not in shared]
    left = kron(partial_transpose(q, shared), CMatrix.identity(Layout(tuple(r_only))))
    right = kron(CMatrix.identity(Layout(tuple(q_only))), r)
    right = aligned(right, left.layout)
    prod = CMatrix(left.layout, left.entries @ right.entries)
    return partial_trace(prod, shared)


# ---------------------------------------------------------------------------
# choi_vector_of
# ---------------------------------------------------------------------------

def test_choi_vector_identity():
    v = choi_vector_of(np.eye(2), "A", "B")
    assert v.layout.labels == ("A", "B")
    assert np.array_equal(v.amplitudes, np.array([1, 0, 0, 1], dtype=complex))


def test_choi_vector_pauli_x():
    v = choi_vector_of(X, "A", "B")
    assert np.array_equal(v.amplitudes, np.array([0, 1, 1, 0], dtype=complex))


def test_choi_vector_rectangular_matches_elementwise_definition():
    rng = np.random.default_rng(21)
    op = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    v = choi_vector_of(op, "in", "out")
    # oracle: direct double loop over the definition sum_i |i> (x) V|i>
    expected = np.zeros(6, dtype=complex)
    for i in range(3):
        for j in range(2):
            expected[i * 2 + j] = op[j, i]
    assert np.array_equal(v.amplitudes, expected)


def test_choi_vector_dimension_mismatch():
    with pytest.raises(ValueError):
        operator_choi_vector(np.eye(2), Layout.of(("a", 3)), Layout.of(("b", 2)))


def test_choi_vector_operator_roundtrip():
    rng = np.random.default_rng(22)
    op = random_matrix(rng, 4)
    v = operator_choi_vector(op, Layout.of(("a", 2), ("b", 2)), Layout.of(("c", 2), ("d", 2)))
    back = choi_vector_to_operator(v, ["a", "b"], ["c", "d"])
    assert np.allclose(back, op, atol=0)


# ---------------------------------------------------------------------------
# choi_matrix_of_kraus
# ---------------------------------------------------------------------------

def test_kraus_choi_identity():
    c = choi_matrix_of_kraus([np.eye(2)], "in", "out")
    v = np.array([1, 0, 0, 1], dtype=complex)
    assert np.array_equal(c.entries, np.outer(v, v))


def test_kraus_choi_dephasing_is_diagonal():
    k0 = np.diag([1.0, 0.0]).astype(complex)
    k1 = np.diag([0.0, 1.0]).astype(complex)
    c = choi_matrix_of_kraus([k0, k1], "in", "out")
    # oracle: sum of outer products computed by hand
    expected = np.diag([1.0, 0.0, 0.0, 1.0]).astype(complex)
    assert np.allclose(c.entries, expected, atol=0)


def test_kraus_choi_xz_mixture():
    c = choi_matrix_of_kraus([X / np.sqrt(2), Z / np.sqrt(2)], "in", "out")
    expected = np.zeros((4, 4), dtype=complex)
    for k in (X / np.sqrt(2), Z / np.sqrt(2)):
        v = np.ascontiguousarray(k.T).reshape(-1)
        expected += np.outer(v, v.conj())
    assert np.allclose(c.entries, expected, atol=0)
    assert np.isclose(c.trace(), 2.0)
    reduced = partial_trace(c, {"out"})
    assert np.allclose(reduced.entries, np.eye(2), atol=1e-14)


def test_kraus_choi_rejects_empty_and_mismatched():
    with pytest.raises(ValueError, match="empty"):
        choi_matrix_of_kraus([], "in", "out")
    with pytest.raises(ValueError, match="mismatch"):
        choi_matrix_of_kraus([np.eye(2), np.eye(3)], "in", "out")


def test_kraus_choi_always_psd():
    rng = np.random.default_rng(23)
    for _ in range(20):
        ops = [random_matrix(rng, 3) for _ in range(rng.integers(1, 4))]
        c = choi_matrix_of_kraus(ops, "in", "out")
        assert min_eigenvalue(c) >= -1e-10


# ---------------------------------------------------------------------------
# link_product (matrix form)
# ---------------------------------------------------------------------------

def test_link_identity_channel_acts_trivially():
    rng = np.random.default_rng(24)
    rho = random_cmatrix(rng, ("A", 2))
    rho = CMatrix(rho.layout, rho.entries + rho.entries.conj().T)
    ident = choi_matrix_of_kraus([np.eye(2)], "A", "B")
    out = link_product(ident, rho)
    assert out.layout.labels == ("B",)
    assert np.allclose(out.entries, rho.entries, atol=1e-13)


def test_link_disjoint_labels_is_tensor_product():
    rng = np.random.default_rng(25)
    q = random_cmatrix(rng, ("A", 2))
    r = random_cmatrix(rng, ("B", 3))
    out = link_product(q, r)
    assert np.allclose(out.entries, kron(q, r).entries, atol=1e-14)


def test_link_unitary_channel_conjugates():
    rng = np.random.default_rng(26)
    rho = random_cmatrix(rng, ("A", 2))
    x_choi = choi_matrix_of_kraus([X], "A", "B")
    out = link_product(x_choi, rho)
    assert np.allclose(out.entries, X @ rho.entries @ X.conj().T, atol=1e-13)


def test_link_shared_dim_mismatch():
    q = CMatrix.identity(Layout.of(("A", 2), ("B", 2)))
    r = CMatrix.identity(Layout.of(("B", 3), ("C", 2)))
    with pytest.raises(ValueError, match="mismatched dims"):
        link_product(q, r)


def test_link_matches_literal_trace_formula():
    rng = np.random.default_rng(27)
    for _ in range(10):
        q = random_cmatrix(rng, ("A", 2), ("B", 3))
        r = random_cmatrix(rng, ("B", 3), ("C", 2))
        got = link_product(q, r)
        expected = link_product_trace_formula(q, r)
        assert got.layout.labels == expected.layout.labels
        assert np.allclose(got.entries, expected.entries, atol=1e-12)


def test_link_three_party_matches_literal_trace_formula():
    rng = np.random.default_rng(28)
    q = random_cmatrix(rng, ("A", 2), ("B", 2), ("C", 2))
    r = random_cmatrix(rng, ("C", 2), ("B", 2), ("D", 3))
    got = link_product(q, r)
    expected = aligned(link_product_trace_formula(q, r), got.layout)
    assert np.allclose(got.entries, expected.entries, atol=1e-12)


def test_link_bilinear():
    rng = np.random.default_rng(29)
    q1 = random_cmatrix(rng, ("A", 2), ("B", 2))
    q2 = random_cmatrix(rng, ("A", 2), ("B", 2))
    r = random_cmatrix(rng, ("B", 2), ("C", 2))
    alpha, beta = 0.7 - 0.2j, -1.3 + 0.5j
    combo = CMatrix(q1.layout, alpha * q1.entries + beta * q2.entries)
    lhs = link_product(combo, r)
    rhs = alpha * link_product(q1, r).entries + beta * link_product(q2, r).entries
    assert np.allclose(lhs.entries, rhs, atol=1e-12)


def test_link_commutative_up_to_permutation():
    rng = np.random.default_rng(30)
    q = random_cmatrix(rng, ("A", 2), ("B", 2))
    r = random_cmatrix(rng, ("B", 2), ("C", 3))
    qr = link_product(q, r)
    rq = aligned(link_product(r, q), qr.layout)
    assert np.allclose(qr.entries, rq.entries, atol=1e-12)


# ---------------------------------------------------------------------------
# link_product_vectors (pure form)
# ---------------------------------------------------------------------------

def test_vector_link_identity_passthrough():
    rng = np.random.default_rng(31)
    psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    one = max_entangled("A", "B", 2)
    state = ChoiVector(Layout.of(("A", 2)), psi)
    out = link_product_vectors(one, state)
    assert out.layout.labels == ("B",)
    assert np.allclose(out.amplitudes, psi, atol=0)


def test_vector_link_composes_operators():
    # |U>>^{AB} * |V>>^{BC} = |VU>>^{AC}, checked against the matrix product.
    rng = np.random.default_rng(32)
    u = random_matrix(rng, 2)
    v = random_matrix(rng, 2)
    uv = link_product_vectors(choi_vector_of(u, "A", "B"), choi_vector_of(v, "B", "C"))
    expected = choi_vector_of(v @ u, "A", "C")
    assert np.allclose(uv.amplitudes, expected.amplitudes, atol=1e-14)


def test_vector_link_disjoint_is_tensor():
    rng = np.random.default_rng(33)
    a = ChoiVector(Layout.of(("A", 2)), rng.standard_normal(2))
    b = ChoiVector(Layout.of(("B", 3)), rng.standard_normal(3))
    out = link_product_vectors(a, b)
    assert np.allclose(out.amplitudes, np.kron(a.amplitudes, b.amplitudes), atol=0)


def test_max_entangled_norms_and_self_link():
    assert np.isclose(max_entangled("A", "B", 2).norm() ** 2, 2.0)
    assert np.isclose(max_entangled("A", "B", 4).norm() ** 2, 4.0)
    chain = link_product_vectors(max_entangled("A", "B", 3), max_entangled("B", "C", 3))
    assert np.allclose(chain.amplitudes, max_entangled("A", "C", 3).amplitudes, atol=0)


def test_purity_identity_200_pairs():
    # |Q>><<Q| * |R>><<R| equals the outer product of |Q>> * |R>>.
    for seed in range(200):
        rng = np.random.default_rng(seed)
        q = ChoiVector(Layout.of(("A", 2), ("B", 2)), rng.standard_normal(4) + 1j * rng.standard_normal(4))
        r = ChoiVector(Layout.of(("B", 2), ("C", 2)), rng.standard_normal(4) + 1j * rng.standard_normal(4))
        lhs = link_product(q.outer(), r.outer())
        pure = link_product_vectors(q, r)
        rhs = pure.outer()
        assert np.linalg.norm(lhs.entries - rhs.entries) < 1e-10
