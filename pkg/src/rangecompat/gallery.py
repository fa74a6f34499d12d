"""The eight explicit non-local examples, parameterized and bundled with
their claimed properties.

Each case sits exactly one codimension beyond a theorem's bound, which
is how the optimality of every bound is certified mechanically.  The
map of a case is built from its entry formula, so it evaluates exactly
as written.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import GF
from .errors import DomainError
from .opspace import (Direction, OperatorSpace, apply_to_vector,
                      special_type_witness, upper_block_join)
from .solver import (CompatMode, MapClass, OperatorMap, RANGE, is_local,
                     pointwise_compatible, quasi)


@dataclass
class GalleryCase:
    name: str
    n: int
    p: int
    field: object
    space: OperatorSpace
    map: OperatorMap
    direction: Direction | None
    mode: CompatMode
    map_class: MapClass
    codim: int
    bound: int
    bound_theorem: str


@dataclass
class CheckEntry:
    check: str
    passed: bool
    detail: str = ""


@dataclass
class CaseReport:
    case: str
    params: dict
    entries: list = dc_field(default_factory=list)

    @property
    def passed(self):
        return all(e.passed for e in self.entries)


def map_from_formula(space, map_class, formula):
    """OperatorMap for an entry formula M -> vector that is affine in the
    entries of M (linear when the class has no base value)."""
    fld = space.field
    t = fld.tables
    s0 = space.offset_matrix
    base = np.asarray(formula(s0), dtype=np.uint8) if map_class.has_base \
        else np.zeros(space.n, dtype=np.uint8)
    gens = []
    from .solver import _slot_matrices

    for G in _slot_matrices(space, map_class):
        val = t.sub[np.asarray(formula(t.add[s0, G]), dtype=np.uint8),
                    np.asarray(formula(s0), dtype=np.uint8)]
        gens.append(val)
    return OperatorMap(space, map_class, base,
                       np.array(gens, dtype=np.uint8).reshape(len(gens), space.n))


def _first_column_space(field, n, p, col_span, col_offset=None):
    """Matrices whose first column lies in a fixed coset of a span, with
    every other column free."""
    mats = []
    for g in col_span:
        M = np.zeros((n, p), dtype=np.uint8)
        M[:, 0] = g
        mats.append(M)
    for c in range(1, p):
        for r in range(n):
            M = np.zeros((n, p), dtype=np.uint8)
            M[r, c] = 1
            mats.append(M)
    offset = None
    if col_offset is not None:
        offset = np.zeros((n, p), dtype=np.uint8)
        offset[:, 0] = col_offset
    if not mats:
        mats = [np.zeros((n, p), dtype=np.uint8)]
    return OperatorSpace.from_matrices(field, n, p, mats, offset=offset)


def _e(n, i, *more):
    v = np.zeros(n, dtype=np.uint8)
    v[i] = 1
    for j in more:
        v[j] = 1
    return v


def _require(cond, msg):
    if not cond:
        raise DomainError(msg)


# -- case builders -----------------------------------------------------------


def _build_affine_f2(n, p, field):
    _require(field.q == 2, "affine-f2 is an F2 example")
    _require(n >= 2 and p >= 1, "affine-f2 needs n >= 2, p >= 1")
    space = _first_column_space(field, n, p, [_e(n, 0)], col_offset=_e(n, 1))

    def formula(M):
        v = np.zeros(n, dtype=np.uint8)
        v[1] = field.add(int(M[0, 0]), 1)
        return v

    F = map_from_formula(space, MapClass.AFFINE, formula)
    return space, F, None, RANGE, MapClass.AFFINE


def _build_affine_big(n, p, field):
    _require(field.q > 2, "affine-big needs a field with more than 2 elements")
    _require(n >= 2 and p >= 2, "affine-big needs n >= 2, p >= 2")
    space = _first_column_space(field, n, p, [], col_offset=_e(n, 0))

    def formula(M):
        v = np.zeros(n, dtype=np.uint8)
        v[0] = int(M[1, 1])
        return v

    F = map_from_formula(space, MapClass.AFFINE, formula)
    return space, F, None, RANGE, MapClass.AFFINE


def _build_qrc_hom_1(n, p, field):
    _require(n >= 2 and p >= 1, "qrc-hom-1 needs n >= 2, p >= 1")
    space = _first_column_space(field, n, p, [_e(n, 0)])

    def formula(M):
        v = np.zeros(n, dtype=np.uint8)
        v[1] = int(M[0, 0])
        return v

    F = map_from_formula(space, MapClass.LINEAR, formula)
    d = Direction(field, _e(n, 0))
    return space, F, d, quasi(d), MapClass.LINEAR


def _build_qrc_hom_f2(n, p, field):
    _require(field.q == 2, "qrc-hom-f2 is an F2 example")
    _require(n >= 3 and p >= 1, "qrc-hom-f2 needs n >= 3, p >= 1")
    space = _first_column_space(field, n, p, [_e(n, 0), _e(n, 1)])

    def formula(M):
        v = np.zeros(n, dtype=np.uint8)
        v[0] = int(M[0, 0])
        return v

    F = map_from_formula(space, MapClass.LINEAR, formula)
    d = Direction(field, _e(n, 0, 1))
    return space, F, d, quasi(d), MapClass.LINEAR


def _alternating_block(field):
    a = np.array([[0, field.neg(1)], [1, 0], [0, 0]], dtype=np.uint8)
    b = np.array([[0, 0], [0, 0], [1, 0]], dtype=np.uint8)
    c = np.array([[0, 0], [0, 0], [0, 1]], dtype=np.uint8)
    return OperatorSpace.from_matrices(field, 3, 2, [a, b, c])


def _build_alternating(n, p, field):
    _require(n >= 3 and p >= 2, "alternating needs n >= 3, p >= 2")
    space = upper_block_join(_alternating_block(field), OperatorSpace.full(field, n - 3, p - 2))

    def formula(M):
        v = np.zeros(n, dtype=np.uint8)
        v[0] = field.neg(int(M[2, 0]))
        v[1] = field.neg(int(M[2, 1]))
        return v

    F = map_from_formula(space, MapClass.LINEAR, formula)
    d = Direction(field, _e(n, 2))
    return space, F, d, quasi(d), MapClass.LINEAR


def _build_sym2_f3(n, p, field):
    _require(field.q == 3, "sym2-f3 is an F3 example")
    _require(n == 2 and p == 2, "sym2-f3 is the 2x2 symmetric space")
    mats = [[[1, 0], [0, 0]], [[0, 1], [1, 0]], [[0, 0], [0, 1]]]
    space = OperatorSpace.from_matrices(field, 2, 2, mats)

    def formula(M):
        return np.array([field.sub(int(M[1, 1]), int(M[0, 0])), 0], dtype=np.uint8)

    F = map_from_formula(space, MapClass.LINEAR, formula)
    d = Direction(field, [0, 1])
    return space, F, d, quasi(d), MapClass.LINEAR


_EXT_GENERATOR = {2: [[0, 1], [1, 1]], 3: [[0, 2], [1, 0]]}


def _build_field_ext(n, p, field):
    _require(field.q in (2, 3), "field-ext embeds the quadratic extension of F2 or F3")
    _require(n == 2 and p == 2, "field-ext lives in Mat_2")
    X = np.array(_EXT_GENERATOR[field.q], dtype=np.uint8)
    space = OperatorSpace.from_matrices(field, 2, 2, [np.eye(2, dtype=np.uint8), X])

    def formula(M):
        # the matrix of a + b*x has a at the (0,0) spot for both generators
        return np.array([int(M[0, 0]), 0], dtype=np.uint8)

    F = map_from_formula(space, MapClass.LINEAR, formula)
    return space, F, None, RANGE, MapClass.LINEAR


def _f2_5param_block(field):
    pat = [
        [[1, 0], [0, 0], [0, 0]],
        [[0, 1], [1, 0], [0, 0]],
        [[0, 0], [0, 1], [0, 0]],
        [[0, 0], [0, 0], [1, 0]],
        [[0, 0], [0, 0], [0, 1]],
    ]
    return OperatorSpace.from_matrices(field, 3, 2, pat)


def _build_f2_5param(n, p, field):
    _require(field.q == 2, "f2-5param is an F2 example")
    _require(n >= 3 and p >= 2, "f2-5param needs n >= 3, p >= 2")
    space = upper_block_join(_f2_5param_block(field), OperatorSpace.full(field, n - 3, p - 2))

    def formula(M):
        v = np.zeros(n, dtype=np.uint8)
        v[0] = field.add(int(M[0, 0]), int(M[0, 1]))
        return v

    F = map_from_formula(space, MapClass.LINEAR, formula)
    d = Direction(field, _e(n, 0, 2))
    return space, F, d, quasi(d), MapClass.LINEAR


@dataclass(frozen=True)
class _CaseSpec:
    name: str
    build: callable
    codim: callable
    bound: callable
    bound_theorem: str
    constraints: str
    minimal: tuple  # (n, p, field name)


_CASES = {
    spec.name: spec
    for spec in [
        _CaseSpec("affine-f2", _build_affine_f2,
                  lambda n, p: n - 1, lambda n, p: n - 2, "AFF_GEN",
                  "field=F2, n>=2, p>=1", (2, 2, "F2")),
        _CaseSpec("affine-big", _build_affine_big,
                  lambda n, p: n, lambda n, p: n - 1, "AFF_BIG",
                  "#K>2, n>=2, p>=2", (2, 2, "F3")),
        _CaseSpec("qrc-hom-1", _build_qrc_hom_1,
                  lambda n, p: n - 1, lambda n, p: n - 2, "QRC_HOM",
                  "any field, n>=2, p>=1", (2, 2, "F3")),
        _CaseSpec("qrc-hom-f2", _build_qrc_hom_f2,
                  lambda n, p: n - 2, lambda n, p: n - 3, "QRC_HOM",
                  "field=F2, n>=3, p>=1", (3, 2, "F2")),
        _CaseSpec("alternating", _build_alternating,
                  lambda n, p: 2 * n - 3, lambda n, p: 2 * n - 4, "QRC2B",
                  "any field, n>=3, p>=2", (3, 2, "F2")),
        _CaseSpec("sym2-f3", _build_sym2_f3,
                  lambda n, p: 1, lambda n, p: 0, "QRC2B",
                  "field=F3, n=p=2", (2, 2, "F3")),
        _CaseSpec("field-ext", _build_field_ext,
                  lambda n, p: 2, lambda n, p: 1, "QRC2A",
                  "field in {F2, F3}, n=p=2", (2, 2, "F2")),
        _CaseSpec("f2-5param", _build_f2_5param,
                  lambda n, p: 2 * n - 5, lambda n, p: 2 * n - 6, "QRC2C",
                  "field=F2, n>=3, p>=2", (3, 2, "F2")),
    ]
}


def list_cases():
    """Case names with their parameter constraints and minimal parameters."""
    return [
        {"name": s.name, "constraints": s.constraints,
         "minimal": {"n": s.minimal[0], "p": s.minimal[1], "field": s.minimal[2]},
         "bound_theorem": s.bound_theorem}
        for s in _CASES.values()
    ]


def build_case(name, n, p, field):
    if name not in _CASES:
        raise DomainError(f"unknown gallery case {name!r}; have {sorted(_CASES)}")
    spec = _CASES[name]
    field = GF(field)
    space, F, d, mode, cls = spec.build(n, p, field)
    return GalleryCase(
        name=name, n=n, p=p, field=field, space=space, map=F, direction=d,
        mode=mode, map_class=cls, codim=spec.codim(n, p),
        bound=spec.bound(n, p), bound_theorem=spec.bound_theorem,
    )


def _image_dim_everywhere(space, minimum=None, exact=None):
    """Check dim(S X) against a bound for every nonzero X."""
    from .algebra import all_vectors

    for x in all_vectors(space.field, space.p):
        if not x.any():
            continue
        d = apply_to_vector(space, x).dim
        if exact is not None and d != exact:
            return False, x
        if minimum is not None and d < minimum:
            return False, x
    return True, None


def check_case(case, element_guard=2**16):
    """Re-derive every claim of a case by direct computation."""
    report = CaseReport(case.name, {"n": case.n, "p": case.p, "field": case.field.name})
    entries = report.entries

    ok, bad = pointwise_compatible(case.map, case.mode, guard=element_guard)
    entries.append(CheckEntry(
        "mode", ok, f"{case.mode.describe()} holds pointwise" if ok
        else f"violated at {bad.tolist()}"))

    loc, _ = is_local(case.map)
    entries.append(CheckEntry("nonlocal", not loc, "map is non-local" if not loc
                              else "map unexpectedly local"))

    entries.append(CheckEntry(
        "codim", case.space.codim == case.codim,
        f"codim {case.space.codim} vs stated {case.codim}"))

    entries.append(CheckEntry(
        "tightness", case.codim == case.bound + 1,
        f"codim {case.codim} = {case.bound_theorem} bound {case.bound} + 1"))

    if case.name == "alternating":
        base = _alternating_block(case.field)
        ok, bad = _image_dim_everywhere(base, minimum=2)
        entries.append(CheckEntry("image-dims", ok,
                                  "dim(S X) >= 2 for all X != 0" if ok
                                  else f"dim too small at X={bad.tolist()}"))
        entries.append(CheckEntry(
            "no-special-1", special_type_witness(case.space, 1) is None,
            "extended space is not special of type 1"))
    elif case.name == "f2-5param":
        base = _f2_5param_block(case.field)
        ok, bad = _image_dim_everywhere(base, exact=3)
        entries.append(CheckEntry("image-dims", ok,
                                  "dim(T X) = 3 for all X != 0" if ok
                                  else f"wrong dim at X={bad.tolist()}"))
        entries.append(CheckEntry(
            "no-special-1-or-2",
            special_type_witness(case.space, 1) is None
            and special_type_witness(case.space, 2) is None,
            "extended space is special of neither type"))
    elif case.name in ("field-ext", "sym2-f3"):
        entries.append(CheckEntry(
            "no-special-1", special_type_witness(case.space, 1) is None,
            "space is not special of type 1"))
    return report
