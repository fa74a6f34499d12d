"""Exact arithmetic in small finite fields and canonical linear algebra.

Elements of GF(p^k) are canonical integers 0..q-1 read as base-p digit
vectors in the polynomial basis (little endian: the generator x encodes
as p).  All vectors and matrices are numpy uint8 arrays of such codes,
and every subspace is held as its unique reduced-echelon row basis, so
equality of subspaces is plain array equality.
"""

from __future__ import annotations

import itertools
from collections import namedtuple

import numpy as np

from . import kernels
from .errors import DomainError, ResourceLimitError

FieldTables = namedtuple("FieldTables", "add sub mul inv neg")

#: fixed moduli for the non-prime fields, ascending coefficient order
_MODULI = {
    4: (1, 1, 1),      # x^2 + x + 1
    8: (1, 1, 0, 1),   # x^3 + x + 1
    9: (1, 0, 1),      # x^2 + 1
}

_SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9)
_PRIMES = (2, 3, 5, 7)


def _poly_eval(coeffs, a, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * a + c) % p
    return acc


class FieldSpec:
    """A small finite field GF(p^k) with a fixed modulus polynomial.

    All arithmetic is exact and goes through dense lookup tables, which
    the matrix kernels consume directly.
    """

    def __init__(self, p, k=1, modulus=None):
        if p not in _PRIMES:
            raise DomainError(f"characteristic must be one of {_PRIMES}, got {p}")
        if k < 1:
            raise DomainError("degree must be >= 1")
        q = p**k
        if q not in _SUPPORTED_ORDERS:
            raise DomainError(f"unsupported field order {q}; supported: {_SUPPORTED_ORDERS}")
        if k == 1:
            if modulus is not None:
                raise DomainError("prime fields take no modulus")
        else:
            modulus = tuple(int(c) % p for c in (modulus if modulus is not None else _MODULI[q]))
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise DomainError("modulus must be monic of degree k")
            # degree <= 3, so irreducible over F_p iff it has no root there
            for a in range(p):
                if _poly_eval(modulus, a, p) == 0:
                    raise DomainError(f"modulus {modulus} has root {a} mod {p}: not irreducible")
        self.p = p
        self.k = k
        self.q = q
        self.modulus = modulus
        self.name = f"F{q}"
        self._build_tables()

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        digits = [self.decompose(a) for a in range(q)]

        def polymul(da, db):
            conv = [0] * (2 * k - 1)
            for i, x in enumerate(da):
                for j, y in enumerate(db):
                    conv[i + j] = (conv[i + j] + x * y) % p
            # reduce by the monic modulus
            for deg in range(2 * k - 2, k - 1, -1):
                c = conv[deg]
                if c:
                    conv[deg] = 0
                    for j in range(k):
                        conv[deg - k + j] = (conv[deg - k + j] - c * self.modulus[j]) % p
            return self.compose(conv[:k])

        add = np.zeros((q, q), dtype=np.uint8)
        sub = np.zeros((q, q), dtype=np.uint8)
        mul = np.zeros((q, q), dtype=np.uint8)
        for a in range(q):
            for b in range(q):
                add[a, b] = self.compose([(x + y) % p for x, y in zip(digits[a], digits[b])])
                sub[a, b] = self.compose([(x - y) % p for x, y in zip(digits[a], digits[b])])
                mul[a, b] = (a * b) % p if k == 1 else polymul(digits[a], digits[b])
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            for b in range(1, q):
                if mul[a, b] == 1:
                    inv[a] = b
                    break
        neg = sub[0]
        self.tables = FieldTables(add, sub, mul, inv, neg.copy())
        # digit action of multiplication by each scalar: mult_digits[mu][e, d]
        # is digit e of mu * x^d, so that digits(mu*v) = mult_digits[mu] @ digits(v)
        md = np.zeros((q, self.k, self.k), dtype=np.uint8)
        for mu in range(q):
            for d in range(self.k):
                md[mu, :, d] = self.decompose(int(mul[mu, p**d]))
        self.mult_digits = md

    # -- scalar arithmetic -------------------------------------------------

    def add(self, a, b):
        return int(self.tables.add[a, b])

    def sub(self, a, b):
        return int(self.tables.sub[a, b])

    def mul(self, a, b):
        return int(self.tables.mul[a, b])

    def neg(self, a):
        return int(self.tables.neg[a])

    def inv(self, a):
        if a == 0:
            raise DomainError("inversion of zero")
        return int(self.tables.inv[a])

    def decompose(self, a):
        """Base-p digits of a in the polynomial basis (little endian)."""
        return tuple((a // self.p**j) % self.p for j in range(self.k))

    def compose(self, digits):
        return sum(int(d) % self.p * self.p**j for j, d in enumerate(digits))

    @property
    def prime_scalars(self):
        """Encodings of the prime-basis scalars 1, x, ..., x^(k-1)."""
        return tuple(self.p**j for j in range(self.k))

    @property
    def prime_subfield(self):
        return GF(self.p)

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"GF({self.q})"


_FIELD_CACHE = {}


def GF(spec):
    """Field registry: GF(4), GF("F4") and GF("4") all work."""
    if isinstance(spec, FieldSpec):
        return spec
    if isinstance(spec, str):
        spec = spec.upper().lstrip("F")
        try:
            spec = int(spec)
        except ValueError:
            raise DomainError(f"unknown field name {spec!r}") from None
    q = int(spec)
    if q not in _FIELD_CACHE:
        if q not in _SUPPORTED_ORDERS:
            raise DomainError(f"unsupported field order {q}; supported: {_SUPPORTED_ORDERS}")
        p = next(r for r in _PRIMES if q % r == 0)
        k = 1
        while p**k < q:
            k += 1
        _FIELD_CACHE[q] = FieldSpec(p, k)
    return _FIELD_CACHE[q]


def as_array(field, data, ndim=None):
    """Validate and convert to a canonical uint8 array of field elements."""
    raw = np.asarray(data, dtype=np.int64)
    if raw.size and (raw.min() < 0 or raw.max() >= field.q):
        raise DomainError(f"entries must be canonical codes 0..{field.q - 1}")
    if ndim is not None and raw.ndim != ndim:
        raise DomainError(f"expected a {ndim}-d array")
    return np.ascontiguousarray(raw.astype(np.uint8))


# -- elimination ----------------------------------------------------------


def rref(field, mat):
    """Reduced row echelon form, preserving shape.

    Returns (R, rank, pivot_columns); R has the input's shape with zero
    rows at the bottom.
    """
    M = as_array(field, mat, ndim=2)
    R, piv = kernels.rref(M, field.tables)
    out = np.zeros_like(M)
    out[: R.shape[0]] = R
    return out, R.shape[0], tuple(int(c) for c in piv)


def nullspace(field, mat):
    """{x : mat @ x = 0} as a canonical Subspace of F_q^cols."""
    M = as_array(field, mat, ndim=2)
    raw = kernels.column_annihilator(np.ascontiguousarray(M.T), field.tables)
    return Subspace.from_vectors(field, raw, ambient_dim=M.shape[1])


def solve_system(field, A, b):
    """Full solution flat of A @ x = b, or None when inconsistent."""
    A = as_array(field, A, ndim=2)
    b = as_array(field, b, ndim=1)
    if A.shape[0] != b.shape[0]:
        raise DomainError("A and b row counts differ")
    aug = np.concatenate([A, b[:, None]], axis=1)
    R, piv = kernels.rref(aug, field.tables)
    n = A.shape[1]
    if len(piv) and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.uint8)
    for i, c in enumerate(piv):
        x[c] = R[i, n]
    return AffineFlat(nullspace(field, A), x)


# -- subspaces ------------------------------------------------------------


class Subspace:
    """Linear subspace of F_q^d held as its reduced-echelon row basis."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field, ambient_dim, basis, pivots):
        # internal: callers must pass a canonical RREF basis
        self.field = field
        self.ambient_dim = int(ambient_dim)
        self.basis = basis
        self.pivots = pivots
        basis.flags.writeable = False

    @classmethod
    def from_vectors(cls, field, vectors, ambient_dim=None):
        vecs = np.asarray(vectors, dtype=np.uint8)
        if vecs.size == 0:
            if ambient_dim is None:
                ambient_dim = vecs.shape[1] if vecs.ndim == 2 else 0
            return cls.zero(field, ambient_dim)
        vecs = as_array(field, np.atleast_2d(vecs), ndim=2)
        if ambient_dim is not None and vecs.shape[1] != ambient_dim:
            raise DomainError("ambient dimension mismatch")
        R, piv = kernels.rref(vecs, field.tables)
        return cls(field, vecs.shape[1], R, piv)

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls(field, ambient_dim, np.zeros((0, ambient_dim), dtype=np.uint8),
                   np.zeros(0, dtype=np.int64))

    @classmethod
    def full(cls, field, ambient_dim):
        return cls(field, ambient_dim, np.eye(ambient_dim, dtype=np.uint8),
                   np.arange(ambient_dim, dtype=np.int64))

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def codim(self):
        return self.ambient_dim - self.dim

    def reduce(self, v):
        """Residual of v after elimination against the basis."""
        w = as_array(self.field, v, ndim=1)[None, :].copy()
        kernels.reduce_rows(w, self.basis, self.pivots, self.field.tables)
        return w[0]

    def __contains__(self, v):
        return not self.reduce(v).any()

    def contains_space(self, other):
        self._check_compatible(other)
        return all(row in self for row in other.basis)

    def __add__(self, other):
        self._check_compatible(other)
        return Subspace.from_vectors(
            self.field, np.concatenate([self.basis, other.basis]), self.ambient_dim
        )

    def __and__(self, other):
        self._check_compatible(other)
        stacked = np.concatenate([self.annihilator(), other.annihilator()])
        return nullspace(self.field, stacked)

    def annihilator(self):
        """Canonical (d-dim) x d matrix whose rows kill exactly this space."""
        if self.dim == 0:
            return np.eye(self.ambient_dim, dtype=np.uint8)
        return nullspace(self.field, self.basis).basis

    def complement_coords(self):
        pivset = set(self.pivots.tolist())
        return tuple(c for c in range(self.ambient_dim) if c not in pivset)

    def element_count(self):
        return self.field.q**self.dim

    def elements(self, guard=2**20):
        """All vectors of the subspace, deterministic order."""
        if self.element_count() > guard:
            raise ResourceLimitError(
                f"subspace has {self.element_count()} elements (guard {guard})",
                count=self.element_count(),
            )
        for coeffs in itertools.product(range(self.field.q), repeat=self.dim):
            v = np.zeros(self.ambient_dim, dtype=np.uint8)
            t = self.field.tables
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = t.add[v, t.mul[c, row]]
            yield v

    def _check_compatible(self, other):
        if self.field != other.field or self.ambient_dim != other.ambient_dim:
            raise DomainError("subspaces live in different ambient spaces")

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.basis.shape == other.basis.shape
            and bool(np.all(self.basis == other.basis))
        )

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace({self.field.name}, d={self.ambient_dim}, dim={self.dim})"


def annihilator(space):
    """Spec surface for Subspace.annihilator."""
    return space.annihilator()


class AffineFlat:
    """Coset of a Subspace; the offset is fully reduced against the basis,
    so equal cosets compare equal and the offset is the lex-least member."""

    __slots__ = ("space", "offset")

    def __init__(self, space, offset):
        off = as_array(space.field, offset, ndim=1)
        if off.shape[0] != space.ambient_dim:
            raise DomainError("offset length does not match ambient dimension")
        self.space = space
        self.offset = space.reduce(off)
        self.offset.flags.writeable = False

    @property
    def field(self):
        return self.space.field

    @property
    def ambient_dim(self):
        return self.space.ambient_dim

    @property
    def dim(self):
        return self.space.dim

    @property
    def is_linear(self):
        return not self.offset.any()

    def __contains__(self, v):
        v = as_array(self.field, v, ndim=1)
        return self.field.tables.sub[v, self.offset] in self.space

    def elements(self, guard=2**20):
        add = self.field.tables.add
        for v in self.space.elements(guard=guard):
            yield add[self.offset, v]

    def element_count(self):
        return self.space.element_count()

    def __eq__(self, other):
        return (
            isinstance(other, AffineFlat)
            and self.space == other.space
            and bool(np.all(self.offset == other.offset))
        )

    def __hash__(self):
        return hash((self.space, self.offset.tobytes()))

    def __repr__(self):
        kind = "linear" if self.is_linear else "affine"
        return f"AffineFlat({self.field.name}, d={self.ambient_dim}, dim={self.dim}, {kind})"


# -- enumeration and sampling ---------------------------------------------


def gaussian_binomial(d, k, q):
    """Number of k-dimensional subspaces of F_q^d (exact integer)."""
    if k < 0 or k > d:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (d - i) - 1
        den *= q ** (k - i) - 1
    return num // den

def subspace_count(field, d, k):
    return gaussian_binomial(d, k, field.q)


def enumerate_subspaces(field, d, k, guard=10**6):
    """Every k-dimensional subspace of F_q^d exactly once.

    Order: pivot-column pattern (lexicographic combinations), then the
    free entries in row-major position order, each running through
    0..q-1 lexicographically.  This order is part of the contract.
    """
    total = gaussian_binomial(d, k, field.q)
    if total > guard:
        raise ResourceLimitError(
            f"{total} subspaces of dimension {k} in F_{field.q}^{d} (guard {guard})",
            count=total,
        )
    if k == 0:
        yield Subspace.zero(field, d)
        return
    for piv in itertools.combinations(range(d), k):
        pivset = set(piv)
        free = [
            (i, c)
            for i in range(k)
            for c in range(piv[i] + 1, d)
            if c not in pivset
        ]
        base = np.zeros((k, d), dtype=np.uint8)
        for i, c in enumerate(piv):
            base[i, c] = 1
        pivarr = np.array(piv, dtype=np.int64)
        for values in itertools.product(range(field.q), repeat=len(free)):
            B = base.copy()
            for (i, c), v in zip(free, values):
                B[i, c] = v
            yield Subspace(field, d, B, pivarr.copy())


def enumerate_cosets(space, guard=10**6):
    """One canonical representative per coset, origin coset first.

    Representatives range lexicographically over the complement (non-
    pivot) coordinates of the subspace basis.
    """
    field = space.field
    free = space.complement_coords()
    total = field.q ** len(free)
    if total > guard:
        raise ResourceLimitError(
            f"{total} cosets (guard {guard})", count=total
        )
    for values in itertools.product(range(field.q), repeat=len(free)):
        off = np.zeros(space.ambient_dim, dtype=np.uint8)
        for c, v in zip(free, values):
            off[c] = v
        yield AffineFlat(space, off)


def sample_subspace(field, d, k, rng):
    """Uniformly random k-dimensional subspace (row space of a uniform
    full-rank k x d matrix), deterministic given the rng state."""
    if k > d:
        raise DomainError("k must not exceed d")
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    if k == 0:
        return Subspace.zero(field, d)
    while True:
        M = rng.integers(0, field.q, size=(k, d), dtype=np.uint8)
        R, piv = kernels.rref(M, field.tables)
        if R.shape[0] == k:
            return Subspace(field, d, R, piv)


def all_vectors(field, d):
    """All of F_q^d in lexicographic order."""
    for t in itertools.product(range(field.q), repeat=d):
        yield np.array(t, dtype=np.uint8)
