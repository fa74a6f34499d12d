"""Operator-space constructions against brute-force oracles."""

import numpy as np
import pytest

from rangecompat.algebra import (GF, Subspace, all_vectors, enumerate_subspaces,
                                 sample_subspace)
from rangecompat.errors import DomainError
from rangecompat.opspace import (Direction, OperatorSpace, all_directions,
                                 apply_to_vector, concat_columns,
                                 orthogonal_complement, perp_image,
                                 quotient_space, special_type_witness,
                                 upper_block_join)


def _space_from_subspace(field, n, p, sub):
    from rangecompat.algebra import AffineFlat

    return OperatorSpace(field, n, p, AffineFlat(sub, np.zeros(n * p, dtype=np.uint8)))


def _all_operator_spaces(field, n, p, max_codim=None):
    d = n * p
    for k in range(d + 1):
        if max_codim is not None and d - k > max_codim:
            continue
        for sub in enumerate_subspaces(field, d, k):
            yield _space_from_subspace(field, n, p, sub)


def test_direction_normalization():
    F3 = GF(3)
    assert Direction(F3, [2, 1]).vector.tolist() == [1, 2]
    assert len(all_directions(F3, 3)) == 13
    assert len(all_directions(GF(2), 4)) == 15
    with pytest.raises(DomainError):
        Direction(F3, [0, 0])


def test_orthogonal_complement_examples():
    F2, F3 = GF(2), GF(3)
    assert orthogonal_complement(OperatorSpace.full(F2, 2, 2)).dim == 0
    # S = all [[a,c],[0,b]] over F3: brute force tr(T A) = 0 over all 81 T
    S = OperatorSpace.from_matrices(
        F3, 2, 2, [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [0, 1]]])
    perp = orthogonal_complement(S)
    brute = []
    for tv in all_vectors(F3, 4):
        T = tv.reshape(2, 2).astype(int)
        if all(np.trace(T @ A.astype(int)) % 3 == 0 for A in S.elements()):
            brute.append(tv)
    assert perp.translation == Subspace.from_vectors(F3, np.array(brute), ambient_dim=4)
    assert perp.dim == 1 and perp.basis_matrices[0].tolist() == [[0, 1], [0, 0]]
    # S = span(E11) in Mat_2(F2): complement is {T : T[0,0] = 0}, dim 3
    S = OperatorSpace.from_matrices(F2, 2, 2, [[[1, 0], [0, 0]]])
    perp = orthogonal_complement(S)
    assert perp.dim == 3 and all(m[0, 0] == 0 for m in perp.basis_matrices)


def test_orthogonal_complement_rejects_affine():
    F2 = GF(2)
    space = OperatorSpace.from_matrices(F2, 2, 1, [[[1], [0]]], offset=[[0], [1]])
    with pytest.raises(DomainError):
        orthogonal_complement(space)


def test_duality_involution_and_dimension_exhaustive():
    # every subspace of Mat_{2,2}(F2): dim S + dim S_perp = 4 and (S_perp)_perp = S
    F2 = GF(2)
    count = 0
    for space in _all_operator_spaces(F2, 2, 2):
        perp = orthogonal_complement(space)
        assert space.dim + perp.dim == 4
        assert orthogonal_complement(perp) == space
        count += 1
    assert count == 67


def test_perp_image_examples():
    F3 = GF(3)
    S = OperatorSpace.from_matrices(
        F3, 2, 2, [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [0, 1]]])
    perp = orthogonal_complement(S)
    assert perp_image(OperatorSpace.zero(F3, 2, 2), [1, 0]).dim == 0
    assert perp_image(perp, [0, 0]).dim == 0
    assert perp_image(perp, [0, 1]).basis.tolist() == [[1, 0]]
    assert perp_image(perp, [1, 0]).dim == 0


def test_apply_to_vector_examples():
    F3 = GF(3)
    full = OperatorSpace.full(F3, 2, 3)
    assert apply_to_vector(full, [0, 0, 0]).dim == 0
    assert apply_to_vector(full, [1, 2, 0]).dim == 2
    S = upper_block_join(OperatorSpace.full(F3, 1, 1), OperatorSpace.full(F3, 2, 1))
    flat = apply_to_vector(S, [1, 0])
    assert flat.is_linear and flat.space.basis.tolist() == [[1, 0, 0]]


def test_apply_to_vector_brute_force(small_field, rng):
    for _ in range(5):
        n, p = 2, 2
        sub = sample_subspace(small_field, n * p, int(rng.integers(0, 4)), rng)
        off = rng.integers(0, small_field.q, size=n * p, dtype=np.uint8)
        from rangecompat.algebra import AffineFlat

        space = OperatorSpace(small_field, n, p, AffineFlat(sub, off))
        for x in all_vectors(small_field, p):
            flat = apply_to_vector(space, x)
            brute = {tuple(map(int, space.apply(M, x))) for M in space.elements()}
            assert {tuple(map(int, v)) for v in flat.elements()} == brute


def test_special_type_witness():
    F3 = GF(3)
    assert special_type_witness(OperatorSpace.full(F3, 2, 2), 1) is None
    S = upper_block_join(OperatorSpace.full(F3, 1, 1), OperatorSpace.full(F3, 2, 1))
    assert special_type_witness(S, 1).tolist() == [1, 0]
    with pytest.raises(DomainError):
        special_type_witness(S, 3)


def test_quotient_examples():
    F3 = GF(3)
    S = OperatorSpace.from_matrices(
        F3, 2, 2, [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [0, 1]]])
    q0 = quotient_space(S, Subspace.zero(F3, 2))
    assert q0.n == 2 and q0.dim == S.dim
    qfull = quotient_space(S, Subspace.full(F3, 2))
    assert qfull.n == 0 and qfull.codim == 0
    # mod e1 -> codim 1 in Mat_{1,2}; mod e2 -> codim 0
    q1 = quotient_space(S, Subspace.from_vectors(F3, [[1, 0]]))
    assert q1.n == 1 and q1.codim == 1
    q2 = quotient_space(S, Subspace.from_vectors(F3, [[0, 1]]))
    assert q2.codim == 0


@pytest.mark.parametrize("n,p,max_codim", [(2, 2, None), (3, 2, 2)])
def test_quotient_codimension_formula(n, p, max_codim):
    # codim(S mod y) = codim S - dim(S_perp y) for every S and direction y
    F2 = GF(2)
    for space in _all_operator_spaces(F2, n, p, max_codim=max_codim):
        perp = orthogonal_complement(space)
        for d in all_directions(F2, n):
            quot = quotient_space(space, d.line())
            assert quot.codim == space.codim - perp_image(perp, d.vector).dim


def test_upper_block_join_dims():
    F3 = GF(3)
    a = OperatorSpace.zero(F3, 1, 1)
    b = OperatorSpace.zero(F3, 1, 1)
    assert upper_block_join(a, b).dim == 1  # the free corner block
    n, p = 4, 3
    K = OperatorSpace.full(F3, 1, 1)
    S = upper_block_join(K, OperatorSpace.full(F3, n - 1, p - 1))
    assert S.codim == n - 1
    alt = OperatorSpace.from_matrices(
        F3, 3, 2,
        [[[0, 2], [1, 0], [0, 0]], [[0, 0], [0, 0], [1, 0]], [[0, 0], [0, 0], [0, 1]]])
    ext = upper_block_join(alt, OperatorSpace.full(F3, n - 3, p - 2))
    assert ext.codim == 2 * n - 3


def test_upper_block_join_dim_formula(small_field, rng):
    for _ in range(5):
        m, n1 = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        p2, q2 = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        A = _space_from_subspace(small_field, m, n1,
                                 sample_subspace(small_field, m * n1, int(rng.integers(0, m * n1 + 1)), rng))
        B = _space_from_subspace(small_field, p2, q2,
                                 sample_subspace(small_field, p2 * q2, int(rng.integers(0, p2 * q2 + 1)), rng))
        assert upper_block_join(A, B).dim == A.dim + B.dim + m * q2


def test_concat_columns():
    F2 = GF(2)
    col = OperatorSpace.full(F2, 3, 1)
    both = concat_columns(col, col)
    assert both == OperatorSpace.full(F2, 3, 2)
    zero = OperatorSpace.zero(F2, 3, 1)
    left = concat_columns(zero, col)
    assert left.dim == col.dim
    assert all(not m[:, 0].any() for m in left.basis_matrices)
    # V1 coprod Mat_{n,p-1} with V1 = K^2 x {0}: codim n - 2
    n, p = 4, 3
    V1 = OperatorSpace.from_matrices(F2, n, 1, [[[1], [0], [0], [0]], [[0], [1], [0], [0]]])
    S = concat_columns(V1, OperatorSpace.full(F2, n, p - 1))
    assert S.codim == n - 2


def test_concat_columns_dim_formula(small_field, rng):
    n = 2
    for _ in range(5):
        A = _space_from_subspace(small_field, n, 2,
                                 sample_subspace(small_field, 2 * n, int(rng.integers(0, 2 * n + 1)), rng))
        B = _space_from_subspace(small_field, n, 1,
                                 sample_subspace(small_field, n, int(rng.integers(0, n + 1)), rng))
        assert concat_columns(A, B).dim == A.dim + B.dim


def test_field_mismatch_rejected():
    with pytest.raises(DomainError):
        upper_block_join(OperatorSpace.full(GF(2), 1, 1), OperatorSpace.full(GF(3), 1, 1))
    with pytest.raises(DomainError):
        concat_columns(OperatorSpace.full(GF(2), 2, 1), OperatorSpace.full(GF(2), 3, 1))
