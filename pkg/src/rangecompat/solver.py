"""Decision procedures for (quasi-)range-compatible maps.

A map F on an operator space is encoded by its value at the canonical
offset (affine classes only) plus the values of its linear part on the
generator slots of the translation space: the F_q-basis elements for the
F_q-linear classes, or the prime-subfield basis elements x^j * t_i for
the additive classes.  Coefficient vectors are stored over the prime
subfield with digits innermost, base value first; all solution spaces,
witnesses and reports are expressed in that fixed encoding.

The compatibility conditions are homogeneous-linear in the encoding, so
the full set of compatible maps of a class is the nullspace of one big
constraint system assembled from every member of the space (the image of
a member varies nonlinearly, so no spanning-set shortcut exists).  One
sound shortcut is used: local maps satisfy every mode, so once the
accumulated system already cuts the solution down to the local space,
the remaining members cannot remove anything further and assembly stops.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import kernels
from .algebra import AffineFlat, Subspace, as_array, solve_system
from .errors import DomainError, ResourceLimitError
from .opspace import Direction, OperatorSpace, all_directions, apply_to_vector, \
    concat_columns, quotient_projection, quotient_space


class MapClass(enum.Enum):
    LINEAR = "linear"
    ADDITIVE = "additive"
    AFFINE = "affine"
    SEMI_AFFINE = "semiaffine"

    @property
    def has_base(self):
        return self in (MapClass.AFFINE, MapClass.SEMI_AFFINE)

    @property
    def prime_generators(self):
        """True when generator slots run over the prime-subfield basis."""
        return self in (MapClass.ADDITIVE, MapClass.SEMI_AFFINE)

    @classmethod
    def parse(cls, name):
        for m in cls:
            if m.value == name.lower():
                return m
        raise DomainError(f"unknown map class {name!r}")


_CLASS_ORDER = {
    MapClass.LINEAR: frozenset(),
    MapClass.ADDITIVE: frozenset({MapClass.LINEAR}),
    MapClass.AFFINE: frozenset({MapClass.LINEAR}),
    MapClass.SEMI_AFFINE: frozenset({MapClass.LINEAR, MapClass.ADDITIVE, MapClass.AFFINE}),
}


def class_join(a, b):
    if a == b or b in _CLASS_ORDER[a]:
        return a
    if a in _CLASS_ORDER[b]:
        return b
    return MapClass.SEMI_AFFINE


@dataclass(frozen=True)
class CompatMode:
    """Range, QuasiRange(D), or the quasi-any sweep over all directions."""

    kind: str
    direction: Direction | None = None

    def __post_init__(self):
        if self.kind not in ("range", "quasi", "quasi_any"):
            raise DomainError(f"unknown mode kind {self.kind!r}")
        if self.kind == "quasi" and self.direction is None:
            raise DomainError("quasi mode needs a direction")

    def describe(self):
        if self.kind == "quasi":
            return f"quasi:{','.join(str(int(x)) for x in self.direction.vector)}"
        return self.kind.replace("_", "-")


RANGE = CompatMode("range")
QUASI_ANY = CompatMode("quasi_any")


def quasi(direction):
    return CompatMode("quasi", direction)


# -- digit helpers -----------------------------------------------------------


def _digits(fld, arr):
    """Base-p digit expansion along the last axis, digits innermost."""
    if fld.k == 1:
        return np.asarray(arr, dtype=np.uint8).copy()
    a = np.asarray(arr, dtype=np.int64)
    exps = fld.p ** np.arange(fld.k, dtype=np.int64)
    out = (a[..., :, None] // exps) % fld.p
    return out.reshape(*a.shape[:-1], a.shape[-1] * fld.k).astype(np.uint8)


def _compose(fld, digits):
    if fld.k == 1:
        return np.asarray(digits, dtype=np.uint8).copy()
    d = np.asarray(digits, dtype=np.int64)
    L = d.shape[-1] // fld.k
    exps = fld.p ** np.arange(fld.k, dtype=np.int64)
    vals = (d.reshape(*d.shape[:-1], L, fld.k) * exps).sum(axis=-1)
    return vals.astype(np.uint8)


def _slot_matrices(space, map_class):
    """Generator-slot matrices: t_i, or x^j * t_i with i outer, j inner."""
    mats = space.basis_matrices
    if not map_class.prime_generators:
        return mats
    t = space.field.tables
    out = []
    for m in mats:
        for lam in space.field.prime_scalars:
            out.append(t.mul[lam, m])
    return out


# -- operator maps -----------------------------------------------------------


class OperatorMap:
    """A map on an operator space, held by base value and generator values."""

    __slots__ = ("space", "map_class", "base_value", "gen_values")

    def __init__(self, space, map_class, base_value, gen_values):
        field = space.field
        n_gens = space.dim * (field.k if map_class.prime_generators else 1)
        base = as_array(field, base_value, ndim=1)
        gens = as_array(field, np.asarray(gen_values, dtype=np.uint8).reshape(n_gens, space.n)) \
            if n_gens else np.zeros((0, space.n), dtype=np.uint8)
        if base.shape[0] != space.n:
            raise DomainError("base value must live in F_q^n")
        if map_class in (MapClass.LINEAR, MapClass.ADDITIVE):
            if not space.is_linear:
                raise DomainError(f"{map_class.value} maps require a linear space")
            if base.any():
                raise DomainError("homomorphisms map 0 to 0; base value must vanish")
        self.space = space
        self.map_class = map_class
        self.base_value = base
        self.gen_values = gens
        base.flags.writeable = False
        gens.flags.writeable = False

    # -- evaluation --------------------------------------------------------

    def _gen_coeffs(self, translation_coords):
        """Per-slot scalars for a translation element with the given
        F_q coordinates: the coordinates themselves, or their digits."""
        fld = self.space.field
        if self.map_class.prime_generators:
            return _digits(fld, translation_coords)
        return translation_coords

    def linear_part(self, tmat):
        """Value of the linear/additive part on a translation element."""
        fld = self.space.field
        t = fld.tables
        vec = as_array(fld, tmat).reshape(self.space.n * self.space.p)
        sub = self.space.translation
        if sub.reduce(vec).any():
            raise DomainError("matrix is not in the translation space")
        coords = vec[sub.pivots] if sub.dim else np.zeros(0, dtype=np.uint8)
        coeffs = self._gen_coeffs(coords)
        out = np.zeros(self.space.n, dtype=np.uint8)
        for c, g in zip(coeffs, self.gen_values):
            if c:
                out = t.add[out, t.mul[c, g]]
        return out

    def __call__(self, mat):
        fld = self.space.field
        t = fld.tables
        vec = as_array(fld, mat).reshape(self.space.n * self.space.p)
        diff = t.sub[vec, self.space.flat.offset]
        lin = self.linear_part(diff.reshape(self.space.n, self.space.p))
        return t.add[self.base_value, lin]

    # -- encoding ------------------------------------------------------------

    def encode(self):
        """Prime-subfield coefficient vector: base first, generator values
        in slot order, digits innermost."""
        fld = self.space.field
        parts = ([self.base_value] if self.map_class.has_base else []) + [self.gen_values.ravel()]
        return _digits(fld, np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint8))

    @classmethod
    def from_encoding(cls, space, map_class, digits):
        fld = space.field
        vals = _compose(fld, as_array(fld.prime_subfield, digits, ndim=1))
        if map_class.has_base:
            base, gens = vals[: space.n], vals[space.n :]
        else:
            base, gens = np.zeros(space.n, dtype=np.uint8), vals
        return cls(space, map_class, base, gens)

    def as_class(self, target):
        """Re-encode in a superclass (e.g. a linear map as an additive one)."""
        if target == self.map_class:
            return self
        if not (self.map_class == target or self.map_class in _CLASS_ORDER[target]):
            raise DomainError(f"cannot view a {self.map_class.value} map as {target.value}")
        fld = self.space.field
        t = fld.tables
        gens = self.gen_values
        if target.prime_generators and not self.map_class.prime_generators:
            gens = np.array(
                [t.mul[lam, g] for g in self.gen_values for lam in fld.prime_scalars],
                dtype=np.uint8,
            ).reshape(self.space.dim * fld.k, self.space.n)
        return OperatorMap(self.space, target, self.base_value, gens)

    def is_zero(self):
        return not (self.base_value.any() or self.gen_values.any())

    def __eq__(self, other):
        return (
            isinstance(other, OperatorMap)
            and self.space == other.space
            and self.map_class == other.map_class
            and bool(np.all(self.base_value == other.base_value))
            and self.gen_values.shape == other.gen_values.shape
            and bool(np.all(self.gen_values == other.gen_values))
        )

    def __hash__(self):
        return hash((self.space, self.map_class,
                     self.base_value.tobytes(), self.gen_values.tobytes()))

    def __repr__(self):
        return (f"OperatorMap({self.map_class.value} on {self.space.n}x{self.space.p} "
                f"{self.space.field.name} space, dim={self.space.dim})")


def evaluate_map(F, mat):
    return F(mat)


def local_map(space, x, map_class=None):
    """The map s -> s(x)."""
    if map_class is None:
        map_class = MapClass.LINEAR if space.is_linear else MapClass.AFFINE
    x = as_array(space.field, x, ndim=1)
    gens = [space.apply(m, x) for m in _slot_matrices(space, map_class)]
    base = space.apply(space.offset_matrix, x) if map_class.has_base \
        else np.zeros(space.n, dtype=np.uint8)
    return OperatorMap(space, map_class, base,
                       np.array(gens, dtype=np.uint8).reshape(len(gens), space.n))


def _domain_prime_basis(space):
    fld = space.field
    for c in range(space.p):
        for lam in fld.prime_scalars:
            x = np.zeros(space.p, dtype=np.uint8)
            x[c] = lam
            yield x


def local_space(space, map_class=None):
    """Coefficient subspace (over the prime subfield) of all local maps."""
    if map_class is None:
        map_class = MapClass.LINEAR if space.is_linear else MapClass.AFFINE
    fld = space.field
    rows = [local_map(space, x, map_class).encode() for x in _domain_prime_basis(space)]
    ambient = _encoding_length(space, map_class)
    return Subspace.from_vectors(fld.prime_subfield, np.array(rows, dtype=np.uint8),
                                 ambient_dim=ambient)


def _encoding_length(space, map_class):
    fld = space.field
    slots = space.dim * (fld.k if map_class.prime_generators else 1)
    if map_class.has_base:
        slots += 1
    return slots * space.n * fld.k


# -- solution spaces ----------------------------------------------------------


@dataclass
class SolutionSpace:
    """All compatible maps of a class, with the local maps inside it."""

    space: OperatorSpace
    mode: CompatMode
    map_class: MapClass
    coefficient_space: Subspace
    local_subspace: Subspace
    all_local: bool
    witness: OperatorMap | None

    @property
    def dim(self):
        """Dimension over the prime subfield."""
        return self.coefficient_space.dim

    @property
    def local_dim(self):
        return self.local_subspace.dim

    def dim_over_field(self):
        """F_q-dimension (only meaningful for the F_q-linear classes)."""
        if self.map_class.prime_generators:
            raise DomainError("additive solution spaces are prime-subfield spaces")
        return self.dim // self.space.field.k

    def contains(self, F):
        G = F.as_class(self.map_class)
        if G.space != self.space:
            raise DomainError("map lives on a different space")
        return G.encode() in self.coefficient_space

    def maps(self, guard=2**16):
        for digits in self.coefficient_space.elements(guard=guard):
            yield OperatorMap.from_encoding(self.space, self.map_class, digits)

    def encodings(self, guard=2**16):
        return frozenset(v.tobytes() for v in self.coefficient_space.elements(guard=guard))


def _nullspace_from_rref(fld, R, piv, N):
    pivset = set(int(c) for c in piv)
    free = [c for c in range(N) if c not in pivset]
    t = fld.tables
    B = np.zeros((len(free), N), dtype=np.uint8)
    for l, c in enumerate(free):
        B[l, c] = 1
        for i, pc in enumerate(piv):
            B[l, pc] = t.neg[R[i, c]]
    return Subspace.from_vectors(fld, B, ambient_dim=N)


def _expand_over_prime(fld, sub):
    """Digit expansion of an F_q subspace into the prime-subfield space."""
    fp = fld.prime_subfield
    if fld.k == 1:
        return Subspace.from_vectors(fp, sub.basis.copy(), ambient_dim=sub.ambient_dim)
    t = fld.tables
    rows = [_digits(fld, t.mul[lam, w]) for w in sub.basis for lam in fld.prime_scalars]
    rows = np.array(rows, dtype=np.uint8).reshape(len(rows), sub.ambient_dim * fld.k)
    return Subspace.from_vectors(fp, rows, ambient_dim=sub.ambient_dim * fld.k)


def _element_chunks(space, chunk=1024):
    """Stream (coords, flattened members) in canonical coefficient order."""
    fld = space.field
    m = space.dim
    total = fld.q**m
    basis = space.translation.basis
    offset = space.flat.offset
    t = fld.tables
    exps = fld.q ** np.arange(m - 1, -1, -1, dtype=np.int64) if m else np.zeros(0, np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        coords = ((idx[:, None] // exps) % fld.q).astype(np.uint8) if m \
            else np.zeros((idx.size, 0), dtype=np.uint8)
        vecs = kernels.mat_mul(coords, basis, fld.tables) if m \
            else np.zeros((idx.size, space.n * space.p), dtype=np.uint8)
        yield coords, t.add[vecs, offset[None, :]]


def _quasi_waived(ann, dvec, t):
    """True when D is inside the image (constraint does not apply)."""
    if ann.shape[0] == 0:
        return True
    prod = np.zeros(ann.shape[0], dtype=np.uint8)
    for r in range(ann.shape[1]):
        if dvec[r]:
            prod = t.add[prod, t.mul[dvec[r], ann[:, r]]]
    return not prod.any()


class _SolveMeta:
    """Per (space, class) solve context: encoding sizes, solve field and
    the local subspace expressed over the solve field."""

    def __init__(self, space, map_class):
        fld = space.field
        self.space = space
        self.map_class = map_class
        self.fld = fld
        self.over_fq = not map_class.prime_generators
        self.solve_fld = fld if self.over_fq else fld.prime_subfield
        self.has_base = map_class.has_base
        self.m, self.n = space.dim, space.n
        if self.over_fq:
            n_slots = self.m + (1 if self.has_base else 0)
            self.N = n_slots * self.n
            loc_rows = []
            for c in range(space.p):
                x = np.zeros(space.p, dtype=np.uint8)
                x[c] = 1
                F = local_map(space, x, map_class)
                parts = ([F.base_value] if self.has_base else []) + [F.gen_values.ravel()]
                loc_rows.append(np.concatenate(parts))
            self.loc_solve = Subspace.from_vectors(
                fld, np.array(loc_rows, dtype=np.uint8).reshape(space.p, self.N)
                if self.N else np.zeros((0, 0), np.uint8), ambient_dim=self.N)
        else:
            self.N = _encoding_length(space, map_class)
            self.loc_solve = local_space(space, map_class)

    def row_block(self, a, ann):
        """Constraint rows contributed by one member (coords a,
        annihilator ann of its image); direction-independent."""
        fld, n, m = self.fld, self.n, self.m
        t = fld.tables
        if self.over_fq:
            gen = t.mul[a[:, None], ann[None, :, :].swapaxes(0, 1)].reshape(ann.shape[0], m * n)
            return np.concatenate([ann, gen], axis=1) if self.has_base else gen
        c = _digits(fld, a)
        k = fld.k
        B = np.zeros((ann.shape[0], k, n * k), dtype=np.uint8)
        for r in range(n):
            B[:, :, r * k : (r + 1) * k] = fld.mult_digits[ann[:, r]]
        B = B.reshape(ann.shape[0] * k, n * k)
        gen = (c[None, :, None].astype(np.int64) * B[:, None, :]) % fld.p
        gen = gen.reshape(B.shape[0], c.size * n * k).astype(np.uint8)
        return np.concatenate([B, gen], axis=1) if self.has_base else gen


def _constraint_stream(meta, chunk):
    """(annihilator, constraint rows) per member with deficient image."""
    space, t = meta.space, meta.fld.tables
    for coords, vecs in _element_chunks(space, chunk=chunk):
        for i in range(vecs.shape[0]):
            M = vecs[i].reshape(meta.n, space.p)
            ann = kernels.column_annihilator(M, t)
            if ann.shape[0] == 0:
                continue
            yield ann, meta.row_block(coords[i], ann)


def _solve_stream(meta, mode, stream, fold_every=None):
    """Fold a constraint stream into the SolutionSpace.

    Stops early once the accumulated system already pins the solutions
    down to the local maps (sound: local maps satisfy every mode, so
    further constraints cannot remove anything else).
    """
    fld, solve_fld, N = meta.fld, meta.solve_fld, meta.N
    t = fld.tables
    if fold_every is None:
        fold_every = min(1024, max(64, 2 * N))
    dvec = mode.direction.vector if mode.kind == "quasi" else None
    R_acc = np.zeros((0, N), dtype=np.uint8)
    piv_acc = np.zeros(0, dtype=np.int64)
    buf, pending = [], 0
    stopped = False

    def fold():
        nonlocal R_acc, piv_acc, pending
        if buf:
            R_acc, piv_acc = kernels.rref(np.concatenate([R_acc] + buf), solve_fld.tables)
            buf.clear()
        pending = 0

    for ann, rows in stream:
        if dvec is not None and _quasi_waived(ann, dvec, t):
            continue
        buf.append(rows)
        pending += 1
        if pending >= fold_every:
            fold()
            if N - R_acc.shape[0] == meta.loc_solve.dim:
                stopped = True
                break
    if not stopped:
        fold()

    sol_solve = _nullspace_from_rref(solve_fld, R_acc, piv_acc, N)
    if meta.over_fq:
        sol_fp = _expand_over_prime(fld, sol_solve)
        loc_fp = _expand_over_prime(fld, meta.loc_solve)
    else:
        sol_fp, loc_fp = sol_solve, meta.loc_solve
    if not sol_fp.contains_space(loc_fp):
        raise AssertionError("local maps escaped the solution space; solver bug")
    all_local = sol_fp.dim == loc_fp.dim
    witness = None
    if not all_local:
        for row in sol_fp.basis:
            if row not in loc_fp:
                witness = OperatorMap.from_encoding(meta.space, meta.map_class, row)
                break
    return SolutionSpace(meta.space, mode, meta.map_class, sol_fp, loc_fp,
                         all_local, witness)


#: spaces at most this large have their constraint blocks cached across
#: the directions of a quasi-any sweep
_QUASI_ANY_CACHE_LIMIT = 2**16


def solve_compatible_maps(space, mode, map_class, element_guard=2**20, chunk=1024):
    """Compute the space of mode-compatible maps of the given class.

    Returns a SolutionSpace, or a list of them (one per direction, in
    normalized lexicographic order) for the quasi-any mode.
    """
    if map_class in (MapClass.LINEAR, MapClass.ADDITIVE) and not space.is_linear:
        raise DomainError(f"{map_class.value} maps require a linear space")
    fld = space.field
    total = fld.q**space.dim
    if total > element_guard:
        raise ResourceLimitError(
            f"space has {total} members (guard {element_guard})", count=total)
    if mode.kind == "quasi_any":
        dirs = all_directions(fld, space.n)
        meta = _SolveMeta(space, map_class)
        if total <= _QUASI_ANY_CACHE_LIMIT:
            data = list(_constraint_stream(meta, chunk))
            return [_solve_stream(meta, quasi(d), iter(data)) for d in dirs]
        return [_solve_stream(meta, quasi(d), _constraint_stream(meta, chunk))
                for d in dirs]
    if mode.kind == "quasi" and mode.direction.vector.shape[0] != space.n:
        raise DomainError("direction must live in the codomain F_q^n")
    meta = _SolveMeta(space, map_class)
    return _solve_stream(meta, mode, _constraint_stream(meta, chunk))


def is_local(F):
    """Decide locality; returns (flag, witness x or None), x lex-least."""
    space = F.space
    fld = space.field
    slot_mats = _slot_matrices(space, F.map_class)
    lhs = [space.offset_matrix] if F.map_class.has_base else []
    rhs = [F.base_value] if F.map_class.has_base else []
    lhs += slot_mats
    rhs += list(F.gen_values)
    if not lhs:
        return True, np.zeros(space.p, dtype=np.uint8)
    A = np.concatenate([np.asarray(M, dtype=np.uint8) for M in lhs], axis=0)
    b = np.concatenate(rhs) if rhs else np.zeros(0, dtype=np.uint8)
    flat = solve_system(fld, A, b)
    if flat is None:
        return False, None
    return True, flat.offset


# -- quotient transport --------------------------------------------------------


def induced_quotient_map(F, v0, mode):
    """Push F through the quotient by V0: the unique map G on the
    quotient space with G(pi o s) = pi(F(s)).

    Raises DomainError naming the violating translation element when the
    map does not descend, and when a quasi direction lies inside V0.
    """
    space = F.space
    fld = space.field
    t = fld.tables
    if v0.ambient_dim != space.n:
        raise DomainError("V0 must be a subspace of the codomain")
    if mode.kind == "quasi" and mode.direction.vector in v0:
        raise DomainError("quasi direction lies inside V0; quotient undefined")

    # translation elements whose image sits inside V0
    ann0 = v0.annihilator()
    m = space.dim
    if m:
        cols = [kernels.mat_mul(ann0, M, t).reshape(-1) for M in space.basis_matrices]
        K = np.array(cols, dtype=np.uint8).T.copy()
        from .algebra import nullspace

        inner = nullspace(fld, K) if K.size else Subspace.full(fld, m)
    else:
        inner = Subspace.zero(fld, 0)
    basis = space.translation.basis
    for coeff in inner.basis:
        tmat = kernels.mat_mul(coeff[None, :], basis, t)[0].reshape(space.n, space.p)
        for lam in fld.prime_scalars:
            tt = t.mul[lam, tmat]
            val = F.linear_part(tt)
            if v0.reduce(val).any():
                raise DomainError(
                    "map does not descend: translation element with image inside V0 "
                    f"has linear part {list(map(int, val))} outside V0 "
                    f"(element {tt.tolist()})")

    P = quotient_projection(fld, v0)
    sq = quotient_space(space, v0)

    def pull_back(target_mat, affine):
        """Some member/translation preimage of target under P composed with s."""
        rhs = target_mat.reshape(-1)
        if affine:
            rhs = t.sub[rhs, kernels.mat_mul(P, space.offset_matrix, t).reshape(-1)]
        cols = [kernels.mat_mul(P, M, t).reshape(-1) for M in space.basis_matrices]
        A = np.array(cols, dtype=np.uint8).T.copy() if cols else np.zeros((rhs.size, 0), np.uint8)
        flat = solve_system(fld, A, rhs)
        if flat is None:
            raise AssertionError("quotient pull-back failed; construction bug")
        tmat = kernels.mat_mul(flat.offset[None, :], basis, t)[0] if m \
            else np.zeros(space.n * space.p, dtype=np.uint8)
        return tmat.reshape(space.n, space.p)

    if F.map_class.has_base:
        s_pre = t.add[space.offset_matrix, pull_back(sq.offset_matrix, affine=True)]
        base = kernels.mat_mul(P, F(s_pre)[:, None], t)[:, 0]
    else:
        base = np.zeros(sq.n, dtype=np.uint8)
    gens = []
    for G in _slot_matrices(sq, F.map_class):
        tmat = pull_back(G, affine=False)
        gens.append(kernels.mat_mul(P, F.linear_part(tmat)[:, None], t)[:, 0])
    gens = np.array(gens, dtype=np.uint8).reshape(len(gens), sq.n)
    return OperatorMap(sq, F.map_class, base, gens)


def quotient_direction(field, v0, direction):
    """Image of a direction under the quotient projection."""
    P = quotient_projection(field, v0)
    return Direction(field, kernels.mat_mul(P, direction.vector[:, None], field.tables)[:, 0])


def coprod_map(f, g):
    """The map [A B] -> f(A) + g(B) on the column concatenation."""
    if f.space.field != g.space.field or f.space.n != g.space.n:
        raise DomainError("codomains do not match")
    cls = class_join(f.map_class, g.map_class)
    space = concat_columns(f.space, g.space)
    if not space.is_linear and not cls.has_base:
        cls = MapClass.AFFINE if cls == MapClass.LINEAR else MapClass.SEMI_AFFINE
    fld = space.field
    t = fld.tables
    pa = f.space.p

    def split_eval(mat, linear_part):
        A, B = mat[:, :pa], mat[:, pa:]
        if linear_part:
            return t.add[f.linear_part(A), g.linear_part(B)]
        return t.add[f(A), g(B)]

    base = split_eval(space.offset_matrix, linear_part=False) if cls.has_base \
        else np.zeros(space.n, dtype=np.uint8)
    gens = [split_eval(G, linear_part=True) for G in _slot_matrices(space, cls)]
    return OperatorMap(space, cls, base,
                       np.array(gens, dtype=np.uint8).reshape(len(gens), space.n))


# -- decomposition of non-local quasi-compatible maps ---------------------------


@dataclass
class DecompositionReport:
    """Outcome of expressing F as s -> phi(s(x)) + s(x'), phi additive on
    the span of the image flat at x."""

    feasible: bool
    x_prime: np.ndarray | None = None
    phi_basis: np.ndarray | None = None
    phi_values: np.ndarray | None = None
    classification: dict = dc_field(default_factory=dict)
    branch: str | None = None

    def phi(self, fld, v):
        """Evaluate the additive map phi at a vector of the span."""
        span = Subspace.from_vectors(fld, self.phi_basis) if self.phi_basis.size else None
        coords = v[span.pivots] if span is not None and span.dim else np.zeros(0, np.uint8)
        digits = _digits(fld, coords)
        t = fld.tables
        out = np.zeros(self.phi_values.shape[1] if self.phi_values.size else v.shape[0],
                       dtype=np.uint8)
        for c, val in zip(digits, self.phi_values):
            if c:
                out = t.add[out, t.mul[c, val]]
        return out


def _phi_classify(fld, P_span, values, direction, n):
    """Classification entries for a candidate phi (values on the prime
    basis x^j * b_l of the span, l outer)."""
    t = fld.tables
    k = fld.k

    def phi_of(v):
        coords = v[P_span.pivots] if P_span.dim else np.zeros(0, np.uint8)
        digits = _digits(fld, coords)
        out = np.zeros(n, dtype=np.uint8)
        for c, val in zip(digits, values):
            if c:
                out = t.add[out, t.mul[c, val]]
        return out

    zero = not values.any()
    endo = all(not P_span.reduce(val).any() for val in values)
    k_linear = True
    for l in range(P_span.dim):
        b = P_span.basis[l]
        fb = values[l * k]  # value at 1 * b_l
        for mu in range(fld.q):
            if phi_of(t.mul[mu, b]).tobytes() != t.mul[mu, fb].tobytes():
                k_linear = False
                break
        if not k_linear:
            break
    image = Subspace.from_vectors(fld, values, ambient_dim=n) if values.size else \
        Subspace.zero(fld, n)
    rank = image.dim
    projection = False
    if endo:
        projection = all(
            phi_of(val).tobytes() == val.tobytes() for val in values
        )
    dline = direction.line() if direction is not None else None
    kernel = None
    eig_differ = None
    if projection:
        kernel_vecs = [v for v in P_span.elements(guard=2**12) if not phi_of(v).any()]
        kernel = Subspace.from_vectors(fld, np.array(kernel_vecs, dtype=np.uint8),
                                       ambient_dim=n)
        if dline is not None:
            eig_differ = (image != dline) and (kernel != dline)
    return {
        "phi_zero": zero,
        "phi_K_linear": k_linear,
        "phi_endomorphism_of_Sx": endo,
        "phi_is_projection": projection,
        "phi_rank": rank,
        "eigenspaces_differ_from_D": eig_differ,
        "D_inside_Sx": dline is not None and P_span.contains_space(dline),
        "D_equals_Sx": dline is not None and P_span == dline,
    }


def _branch_of(cls_entries, span_dim):
    if cls_entries["phi_zero"]:
        return "phi_zero"
    if span_dim == 1:
        if cls_entries["D_equals_Sx"]:
            return "b"
        if cls_entries["phi_endomorphism_of_Sx"] and not cls_entries["phi_K_linear"]:
            return "a"
    elif span_dim == 2:
        if (cls_entries["phi_is_projection"] and cls_entries["phi_rank"] == 1
                and cls_entries["eigenspaces_differ_from_D"] and cls_entries["D_inside_Sx"]):
            return "projection"
    return None


def decompose_special(F, x, direction, solution_guard=4096):
    """Solve F(s) = phi(s(x)) + s(x') and classify phi.

    Among all decompositions the report prefers phi = 0, then one whose
    classification matches a stated branch for the span dimension, then
    the lexicographically least solution.  Infeasibility is a valid
    report, not an error.
    """
    space = F.space
    fld = space.field
    fp = fld.prime_subfield
    t = fld.tables
    k, n, p = fld.k, space.n, space.p
    x = as_array(fld, x, ndim=1)

    img = apply_to_vector(space, x)
    P_span = Subspace.from_vectors(
        fld, np.concatenate([img.offset[None, :], img.space.basis]), ambient_dim=n)
    dimP = P_span.dim
    n_phi = dimP * k  # prime-basis size of the span

    N = p * k + n_phi * n * k

    def tau_block(tau):
        """F_p matrix of x' -> tau @ x' in digit coordinates."""
        D = np.zeros((n * k, p * k), dtype=np.uint8)
        for r in range(n):
            for c in range(p):
                D[r * k : (r + 1) * k, c * k : (c + 1) * k] = fld.mult_digits[tau[r, c]]
        return D

    def phi_block(w):
        """F_p matrix of the phi unknowns -> phi(w) in digit coordinates."""
        coords = w[P_span.pivots] if dimP else np.zeros(0, np.uint8)
        gamma = _digits(fld, coords)
        blk = np.zeros((n * k, n_phi * n * k), dtype=np.uint8)
        eye = np.eye(n * k, dtype=np.uint8)
        for idx, gcoef in enumerate(gamma):
            if gcoef:
                blk[:, idx * n * k : (idx + 1) * n * k] = (gcoef * eye) % fld.p
        return blk

    rows, rhs = [], []

    def add_constraint(tau, w, val):
        rows.append(np.concatenate([tau_block(tau), phi_block(w)], axis=1))
        rhs.append(_digits(fld, val))

    if not space.is_linear or F.map_class.has_base:
        s0 = space.offset_matrix
        add_constraint(s0, space.apply(s0, x), F(s0))
    for tm in space.basis_matrices:
        for lam in fld.prime_scalars:
            tt = t.mul[lam, tm]
            add_constraint(tt, space.apply(tt, x), F.linear_part(tt))

    if rows:
        A = np.concatenate(rows).astype(np.uint8)
        b = np.concatenate(rhs).astype(np.uint8)
        flat = solve_system(fp, A, b)
    else:
        flat = AffineFlat(Subspace.full(fp, N), np.zeros(N, dtype=np.uint8))
    if flat is None:
        return DecompositionReport(feasible=False)

    def build_report(sol):
        xp = _compose(fld, sol[: p * k])
        phi_vals = _compose(fld, sol[p * k :]).reshape(n_phi, n) if n_phi else \
            np.zeros((0, n), dtype=np.uint8)
        entries = _phi_classify(fld, P_span, phi_vals, direction, n)
        return DecompositionReport(
            feasible=True, x_prime=xp, phi_basis=P_span.basis.copy(),
            phi_values=phi_vals, classification=entries,
            branch=_branch_of(entries, dimP))

    def recheck(rep):
        # the decomposition must hold member by member, by evaluation
        def phi_of(v):
            coords = v[P_span.pivots] if dimP else np.zeros(0, np.uint8)
            out = np.zeros(n, dtype=np.uint8)
            for cdig, val in zip(_digits(fld, coords), rep.phi_values):
                if cdig:
                    out = t.add[out, t.mul[cdig, val]]
            return out

        for M in space.elements(guard=2**16):
            rhs = t.add[phi_of(space.apply(M, x)), space.apply(M, rep.x_prime)]
            if F(M).tolist() != rhs.tolist():
                raise AssertionError("decomposition fails pointwise; solver bug")
        return rep

    canonical = build_report(flat.offset)
    if canonical.branch in ("phi_zero",) or flat.element_count() > solution_guard:
        return recheck(canonical)
    best_branch = None
    for sol in flat.elements(guard=solution_guard):
        rep = build_report(sol)
        if rep.branch == "phi_zero":
            return recheck(rep)
        if rep.branch is not None and best_branch is None:
            best_branch = rep
    return recheck(best_branch if best_branch is not None else canonical)


def pointwise_compatible(F, mode, guard=2**16):
    """Check the defining condition member by member.

    Independent of the solver (image bases by elimination, membership by
    reduction); returns (ok, offending matrix or None).
    """
    space = F.space
    fld = space.field
    t = fld.tables
    if space.element_count() > guard:
        raise ResourceLimitError(
            f"space has {space.element_count()} members (guard {guard})",
            count=space.element_count())
    for M in space.elements(guard=guard):
        B, piv = kernels.rref(np.ascontiguousarray(M.T), t)
        if B.shape[0] == space.n:
            continue
        if mode.kind == "quasi":
            red = mode.direction.vector[None, :].copy()
            kernels.reduce_rows(red, B, piv, t)
            if not red.any():
                continue
        val = F(M)[None, :].copy()
        kernels.reduce_rows(val, B, piv, t)
        if val.any():
            return False, M
    return True, None


# -- independent brute-force oracle ----------------------------------------------


def oracle_enumerate_maps(space, mode, map_class, guard=2**16):
    """Exact set of compatible maps, found by enumerating every map of
    the class and testing the defining condition pointwise.

    The membership test reduces F(s) against the echelonized column
    space of s; no constraint system or nullspace is involved, so this
    path is independent of solve_compatible_maps.  Returns a frozenset
    of encoded coefficient vectors (bytes).
    """
    if map_class in (MapClass.LINEAR, MapClass.ADDITIVE) and not space.is_linear:
        raise DomainError(f"{map_class.value} maps require a linear space")
    fld = space.field
    fp = fld.prime_subfield
    t = fld.tables
    N = _encoding_length(space, map_class)
    count = fp.q**N
    if count > guard:
        raise ResourceLimitError(
            f"{count} candidate maps (guard {guard})", count=count)

    k, n = fld.k, space.n
    exps = fp.q ** np.arange(N - 1, -1, -1, dtype=np.int64) if N else np.zeros(0, np.int64)
    U = ((np.arange(count, dtype=np.int64)[:, None] // exps) % fp.q).astype(np.uint8) \
        if N else np.zeros((1, 0), dtype=np.uint8)
    slots = _compose(fld, U).reshape(count, N // (n * k) if N else 0, n) if N else \
        np.zeros((count, 0, n), dtype=np.uint8)
    has_base = map_class.has_base
    base_vals = slots[:, 0, :] if has_base else np.zeros((count, n), dtype=np.uint8)
    gen_vals = slots[:, 1:, :] if has_base else slots

    dvec = mode.direction.vector if mode.kind == "quasi" else None
    if mode.kind == "quasi_any":
        raise DomainError("oracle takes a single mode; loop directions explicitly")

    alive = np.ones(count, dtype=bool)
    for coords, vecs in _element_chunks(space, chunk=256):
        for row in range(vecs.shape[0]):
            M = vecs[row].reshape(n, space.p)
            B, piv = kernels.rref(np.ascontiguousarray(M.T), t)
            if B.shape[0] == n:
                continue  # full image: condition vacuous
            if dvec is not None:
                red = dvec[None, :].copy()
                kernels.reduce_rows(red, B, piv, t)
                if not red.any():
                    continue  # D inside the image: waived
            a = coords[row]
            coeffs = _digits(fld, a) if map_class.prime_generators else a
            vals = base_vals.copy()
            for g in range(coeffs.shape[0]):
                cg = coeffs[g]
                if cg:
                    vals = t.add[vals, t.mul[cg, gen_vals[:, g, :]]]
            for l in range(B.shape[0]):
                f = vals[:, piv[l]]
                vals = t.sub[vals, t.mul[f[:, None], B[l][None, :]]]
            alive &= ~vals.any(axis=1)
        if not alive.any():
            break
    return frozenset(U[i].tobytes() for i in np.nonzero(alive)[0])
