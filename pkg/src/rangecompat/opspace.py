"""Spaces of n x p matrices as flats of the flattened ambient F_q^(n*p).

Covers the structural constructions the decision procedures rely on:
trace-form orthogonal complements, quotients by a subspace of the
codomain, the block splittings (upper-triangular join and column
concatenation), and special-type detection.  Flattening is row-major
throughout, and the duality pairing is tr(T @ A) with T of shape p x n.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import kernels
from .algebra import AffineFlat, Subspace, as_array
from .errors import DomainError


class OperatorSpace:
    """A linear or affine subspace of Mat_{n,p}(F_q)."""

    __slots__ = ("field", "n", "p", "flat")

    def __init__(self, field, n, p, flat):
        if flat.ambient_dim != n * p:
            raise DomainError("flat ambient dimension must be n*p")
        self.field = field
        self.n = int(n)
        self.p = int(p)
        self.flat = flat

    @classmethod
    def from_matrices(cls, field, n, p, mats, offset=None):
        rows = [as_array(field, m).reshape(n * p) for m in mats]
        space = Subspace.from_vectors(field, np.array(rows, dtype=np.uint8).reshape(len(rows), n * p),
                                      ambient_dim=n * p)
        off = np.zeros(n * p, dtype=np.uint8) if offset is None \
            else as_array(field, offset).reshape(n * p)
        return cls(field, n, p, AffineFlat(space, off))

    @classmethod
    def full(cls, field, n, p):
        return cls(field, n, p, AffineFlat(Subspace.full(field, n * p),
                                           np.zeros(n * p, dtype=np.uint8)))

    @classmethod
    def zero(cls, field, n, p):
        return cls(field, n, p, AffineFlat(Subspace.zero(field, n * p),
                                           np.zeros(n * p, dtype=np.uint8)))

    # -- basic structure ---------------------------------------------------

    @property
    def translation(self):
        """Translation vector space of the flat (a Subspace of F_q^(n*p))."""
        return self.flat.space

    @property
    def dim(self):
        return self.flat.dim

    @property
    def codim(self):
        return self.n * self.p - self.dim

    @property
    def is_linear(self):
        return self.flat.is_linear

    @property
    def offset_matrix(self):
        return self.flat.offset.reshape(self.n, self.p)

    @property
    def basis_matrices(self):
        return [row.reshape(self.n, self.p) for row in self.translation.basis]

    def translation_space(self):
        """The same space with the offset dropped (always linear)."""
        if self.is_linear:
            return self
        return OperatorSpace(self.field, self.n, self.p,
                             AffineFlat(self.translation, np.zeros(self.n * self.p, dtype=np.uint8)))

    def element_count(self):
        return self.field.q**self.dim

    def elements(self, guard=2**20):
        """All member matrices, in the canonical coefficient order."""
        for v in self.flat.elements(guard=guard):
            yield v.reshape(self.n, self.p)

    def contains(self, mat):
        return as_array(self.field, mat).reshape(self.n * self.p) in self.flat

    def apply(self, mat, x):
        """mat @ x over the field."""
        x = as_array(self.field, x, ndim=1)
        return kernels.mat_mul(np.ascontiguousarray(mat), x[:, None], self.field.tables)[:, 0]

    def __eq__(self, other):
        return (
            isinstance(other, OperatorSpace)
            and self.field == other.field
            and (self.n, self.p) == (other.n, other.p)
            and self.flat == other.flat
        )

    def __hash__(self):
        return hash((self.field, self.n, self.p, self.flat))

    def __repr__(self):
        kind = "linear" if self.is_linear else "affine"
        return (f"OperatorSpace({self.field.name}, {self.n}x{self.p}, "
                f"dim={self.dim}, codim={self.codim}, {kind})")


class Direction:
    """A 1-dimensional subspace of the codomain F_q^n, held as the
    normalized generator (first nonzero coordinate equal to 1)."""

    __slots__ = ("field", "vector")

    def __init__(self, field, vector):
        v = as_array(field, vector, ndim=1)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            raise DomainError("a direction must be a nonzero vector")
        lead = int(v[nz[0]])
        if lead != 1:
            v = field.tables.mul[field.inv(lead), v]
        self.field = field
        self.vector = np.ascontiguousarray(v)
        self.vector.flags.writeable = False

    def line(self):
        return Subspace.from_vectors(self.field, self.vector[None, :])

    def __eq__(self, other):
        return (
            isinstance(other, Direction)
            and self.field == other.field
            and bool(np.all(self.vector == other.vector))
        )

    def __hash__(self):
        return hash((self.field, self.vector.tobytes()))

    def __repr__(self):
        return f"Direction({tuple(int(x) for x in self.vector)})"


def all_directions(field, n):
    """All (q^n - 1)/(q - 1) directions, by lexicographic normalized
    generator; this order is the contract for quasi-mode sweeps."""
    out = []
    for t in itertools.product(range(field.q), repeat=n):
        v = np.array(t, dtype=np.uint8)
        nz = np.nonzero(v)[0]
        if nz.size and v[nz[0]] == 1:
            out.append(Direction(field, v))
    return out


# -- duality ---------------------------------------------------------------


def orthogonal_complement(space):
    """Trace-form orthogonal of a linear space: all T in Mat_{p,n} with
    tr(T @ A) = 0 for every A in the space."""
    if not space.is_linear:
        raise DomainError("orthogonal complement is defined for linear spaces; "
                          "pass the translation space explicitly")
    n, p = space.n, space.p
    if space.dim == 0:
        return OperatorSpace.full(space.field, p, n)
    # tr(T @ A) = <vec(T), vec(A^T)> in row-major flattening
    rows = np.array([m.T.reshape(p * n) for m in space.basis_matrices], dtype=np.uint8)
    from .algebra import nullspace

    perp = nullspace(space.field, rows)
    return OperatorSpace(space.field, p, n,
                         AffineFlat(perp, np.zeros(p * n, dtype=np.uint8)))


def perp_image(sperp, y):
    """The subspace {T @ y : T in Sperp} of F_q^p."""
    y = as_array(sperp.field, y, ndim=1)
    if sperp.dim == 0:
        return Subspace.zero(sperp.field, sperp.n)
    vecs = np.array([sperp.apply(m, y) for m in sperp.basis_matrices], dtype=np.uint8)
    return Subspace.from_vectors(sperp.field, vecs, ambient_dim=sperp.n)


def apply_to_vector(space, x):
    """The set {s(x) : s in the space} as an affine flat of F_q^n."""
    x = as_array(space.field, x, ndim=1)
    gens = np.array([space.apply(m, x) for m in space.basis_matrices], dtype=np.uint8)
    if gens.size == 0:
        gens = gens.reshape(0, space.n)
    sub = Subspace.from_vectors(space.field, gens, ambient_dim=space.n)
    return AffineFlat(sub, space.apply(space.offset_matrix, x))


def special_type_witness(space, i):
    """Lexicographically first normalized x with dim(S x) = i, or None.

    S is the translation space, so for an affine space this witnesses
    dim of the image flat.
    """
    if i not in (1, 2):
        raise DomainError("special type is 1 or 2")
    mats = space.basis_matrices
    for t in itertools.product(range(space.field.q), repeat=space.p):
        x = np.array(t, dtype=np.uint8)
        nz = np.nonzero(x)[0]
        if nz.size == 0 or x[nz[0]] != 1:
            continue
        vecs = np.array([space.apply(m, x) for m in mats], dtype=np.uint8)
        if vecs.size == 0:
            vecs = vecs.reshape(0, space.n)
        if Subspace.from_vectors(space.field, vecs, ambient_dim=space.n).dim == i:
            return x
    return None


# -- quotients --------------------------------------------------------------


def quotient_projection(field, v0):
    """Matrix P of the canonical projection F_q^n -> F_q^(n - dim V0).

    Coordinates of the quotient are the non-pivot coordinates of V0's
    echelon basis, in increasing order.
    """
    n = v0.ambient_dim
    red = np.eye(n, dtype=np.uint8)
    kernels.reduce_rows(red, v0.basis, v0.pivots, field.tables)
    # row i of red is e_i reduced; pi(v) = v @ red restricted to free coords
    return np.ascontiguousarray(red[:, list(v0.complement_coords())].T)


def quotient_space(space, v0):
    """The space {pi o s} in Mat_{n - dim V0, p}."""
    if v0.ambient_dim != space.n:
        raise DomainError("V0 must live in the codomain F_q^n")
    P = quotient_projection(space.field, v0)
    nq = P.shape[0]
    mats = [kernels.mat_mul(P, m, space.field.tables) for m in space.basis_matrices]
    off = kernels.mat_mul(P, space.offset_matrix, space.field.tables)
    if not mats:
        mats = [np.zeros((nq, space.p), dtype=np.uint8)]
    return OperatorSpace.from_matrices(space.field, nq, space.p, mats, offset=off)


# -- splittings --------------------------------------------------------------


def upper_block_join(a, b):
    """Block space {[A C; 0 B]} with a free upper-right block C.

    dim = dim A + dim B + (rows of A) * (cols of B).
    """
    if a.field != b.field:
        raise DomainError("operands live over different fields")
    if not (a.is_linear and b.is_linear):
        raise DomainError("block join is defined for linear spaces")
    field = a.field
    n = a.n + b.n
    p = a.p + b.p
    mats = []
    for m in a.basis_matrices:
        big = np.zeros((n, p), dtype=np.uint8)
        big[: a.n, : a.p] = m
        mats.append(big)
    for m in b.basis_matrices:
        big = np.zeros((n, p), dtype=np.uint8)
        big[a.n :, a.p :] = m
        mats.append(big)
    for i in range(a.n):
        for j in range(b.p):
            big = np.zeros((n, p), dtype=np.uint8)
            big[i, a.p + j] = 1
            mats.append(big)
    if not mats:
        return OperatorSpace.zero(field, n, p)
    return OperatorSpace.from_matrices(field, n, p, mats)


def concat_columns(a, b):
    """Column concatenation {[A B]}; dim = dim A + dim B."""
    if a.field != b.field:
        raise DomainError("operands live over different fields")
    if a.n != b.n:
        raise DomainError("operands must share the codomain dimension")
    field = a.field
    n, p = a.n, a.p + b.p
    mats = []
    for m in a.basis_matrices:
        big = np.zeros((n, p), dtype=np.uint8)
        big[:, : a.p] = m
        mats.append(big)
    for m in b.basis_matrices:
        big = np.zeros((n, p), dtype=np.uint8)
        big[:, a.p :] = m
        mats.append(big)
    off = np.concatenate([a.offset_matrix, b.offset_matrix], axis=1)
    if not mats:
        mats = [np.zeros((n, p), dtype=np.uint8)]
    return OperatorSpace.from_matrices(field, n, p, mats, offset=off)
