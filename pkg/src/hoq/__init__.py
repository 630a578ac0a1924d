"""Verification laboratory for higher-order quantum operations."""

__version__ = "0.1.0"

from .tensor import (
    CMatrix,
    Layout,
    Subsystem,
    aligned,
    hermitian_eig,
    kron,
    numeric_rank,
    partial_trace,
    partial_transpose,
    permute_subsystems,
)
from .choi import (
    ChoiMatrix,
    ChoiVector,
    choi_matrix_of_kraus,
    choi_vector_of,
    link_product,
    link_product_vectors,
    max_entangled,
)
from .channels import (
    Channel,
    KrausSet,
    apply_channel,
    choi_to_kraus,
    mixed_unitary,
    pauli,
    random_unitary,
    unitary_channel,
)

__all__ = [
    "CMatrix",
    "Layout",
    "Subsystem",
    "aligned",
    "hermitian_eig",
    "kron",
    "numeric_rank",
    "partial_trace",
    "partial_transpose",
    "permute_subsystems",
    "ChoiMatrix",
    "ChoiVector",
    "choi_matrix_of_kraus",
    "choi_vector_of",
    "link_product",
    "link_product_vectors",
    "max_entangled",
    "Channel",
    "KrausSet",
    "apply_channel",
    "choi_to_kraus",
    "mixed_unitary",
    "pauli",
    "random_unitary",
    "unitary_channel",
]
