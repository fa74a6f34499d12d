"""Theorem-verification harness.

Each theorem id carries its hypothesis (codimension bound as a function
of the codomain dimension and the field, plus side conditions) and a
conclusion checker.  ``verify_theorem`` sweeps every operator space
within the hypothesis (exhaustively, or by seeded sampling when
exhaustion is infeasible), runs the matching solves and reports every
space whose conclusion fails, serialized so it can be re-checked
independently.  An empty violation list is a pass.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import documents, kernels
from .algebra import GF, AffineFlat, Subspace, all_vectors, enumerate_cosets, \
    enumerate_subspaces, sample_subspace, solve_system
from .errors import DomainError
from .opspace import Direction, OperatorSpace, apply_to_vector, special_type_witness
from .solver import MapClass, OperatorMap, RANGE, decompose_special, is_local, \
    pointwise_compatible, quasi, solve_compatible_maps


@dataclass(frozen=True)
class Exhaustive:
    def describe(self):
        return "exhaustive"


@dataclass(frozen=True)
class Sample:
    count: int
    seed: int

    def describe(self):
        return f"sample:{self.count}:{self.seed}"


def parse_strategy(text):
    if text == "exhaustive":
        return Exhaustive()
    if text.startswith("sample:"):
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError("sample strategy is sample:COUNT:SEED")
        return Sample(int(parts[1]), int(parts[2]))
    raise DomainError(f"unknown strategy {text!r}")


@dataclass
class VerificationReport:
    theorem: str
    params: dict
    strategy: str
    spaces_checked: int = 0
    violations: list = dc_field(default_factory=list)
    side_stats: dict = dc_field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self):
        return not self.violations

    def to_doc(self):
        # elapsed is runtime metadata and is kept out of the canonical
        # document so identical runs serialize to identical bytes
        return {
            "theorem": self.theorem,
            "params": self.params,
            "strategy": self.strategy,
            "spaces_checked": self.spaces_checked,
            "violations": self.violations,
            "side_stats": self.side_stats,
        }

    def to_json(self):
        return documents.canonical_json(self.to_doc())


# -- theorem registry ---------------------------------------------------------


def _f2_adjusted(n, q, general, f2):
    return f2 if q == 2 else general


_BOUNDS = {
    "TOTAL": lambda n, q: 0,
    "LIN1": lambda n, q: n - 2,
    "HOM": lambda n, q: n - 2,
    "LIN2": lambda n, q: _f2_adjusted(n, q, 2 * n - 3, 2 * n - 4),
    "AFF_GEN": lambda n, q: n - 2,
    "AFF_BIG": lambda n, q: n - 1,
    "QRC_HOM": lambda n, q: _f2_adjusted(n, q, n - 2, n - 3),
    "QRC_DEG1": lambda n, q: _f2_adjusted(n, q, 2 * n - 3, 2 * n - 4),
    "QRC_DEG2": lambda n, q: 2 * n - 5,
    "QRC2A": lambda n, q: 2 * n - 3,
    "QRC2B": lambda n, q: 2 * n - 4,
    "QRC2C": lambda n, q: 2 * n - 6,
    "QRC_AFF1": lambda n, q: _f2_adjusted(n, q, n - 2, n - 3),
    "QRC_AFF2": lambda n, q: n - 1,
    "QRC_AFF3": lambda n, q: n - 1,
    "DESC_F3": lambda n, q: n - 1,
}

_AFFINE_IDS = {"AFF_GEN", "AFF_BIG", "QRC_AFF1", "QRC_AFF2", "QRC_AFF3"}
_EXACT_CODIM_IDS = {"QRC_AFF2", "QRC_AFF3"}

THEOREM_IDS = tuple(_BOUNDS)


def _check_hypothesis(theorem, n, p, field):
    q = field.q
    if theorem == "LIN2" and p < 2:
        raise DomainError("LIN2 requires dim U >= 2")
    if theorem == "AFF_BIG" and q <= 2:
        raise DomainError("AFF_BIG requires more than 2 field elements")
    if theorem == "QRC_DEG2" and q != 2:
        raise DomainError("QRC_DEG2 is an F2 statement")
    if theorem == "QRC2A" and not (q > 3 and n == 2):
        raise DomainError("QRC2A requires #K > 3 and dim V = 2")
    if theorem == "QRC2B" and q <= 2:
        raise DomainError("QRC2B requires more than 2 field elements")
    if theorem == "QRC2C" and q != 2:
        raise DomainError("QRC2C is an F2 statement")
    if theorem == "QRC_AFF2" and not ((n >= 3 and q > 2) or (n >= 2 and q > 3)):
        raise DomainError("QRC_AFF2 requires dim V >= 3 with #K > 2, or dim V >= 2 with #K > 3")
    if theorem == "QRC_AFF3" and not (q > 2 and n >= 2):
        raise DomainError("QRC_AFF3 requires #K > 2 and dim V >= 2")
    if theorem == "DESC_F3" and not (q == 3 and n == 2):
        raise DomainError("DESC_F3 is the F3, dim V = 2 description")


def _bump(stats, key, by=1):
    stats[key] = stats.get(key, 0) + by


def _violation(space, reason, direction=None, witness=None):
    entry = {"space": documents.space_to_doc(space, direction), "reason": reason}
    if witness is not None:
        entry["witness"] = documents.map_to_doc(witness)
    return entry


def _nonlocal_members(sol):
    """Non-local solution-basis maps, in deterministic basis order."""
    out = []
    for row in sol.coefficient_space.basis:
        if row not in sol.local_subspace:
            out.append(OperatorMap.from_encoding(sol.space, sol.map_class, row))
    return out


def _special_xs(space, dim):
    """All normalized x with dim(S x) = dim (S the translation space)."""
    out = []
    for x in all_vectors(space.field, space.p):
        nz = np.nonzero(x)[0]
        if nz.size == 0 or x[nz[0]] != 1:
            continue
        if apply_to_vector(space, x).dim == dim:
            out.append(x)
    return out


# -- per-theorem space checkers -------------------------------------------------


def _check_all_local(space, mode, map_class, stats, element_guard):
    sol = solve_compatible_maps(space, mode, map_class, element_guard=element_guard)
    if sol.all_local:
        return []
    d = mode.direction if mode.kind == "quasi" else None
    return [_violation(space, f"non-local {map_class.value} solution under {mode.describe()}",
                       direction=d, witness=sol.witness)]


def _check_all_local_every_direction(space, map_class, stats, element_guard):
    from .solver import QUASI_ANY

    out = []
    for sol in solve_compatible_maps(space, QUASI_ANY, map_class,
                                     element_guard=element_guard):
        if not sol.all_local:
            out.append(_violation(
                space, f"non-local {map_class.value} solution under {sol.mode.describe()}",
                direction=sol.mode.direction, witness=sol.witness))
    return out


def _check_special_escape(space, types, map_class, stats, element_guard):
    for i in types:
        if special_type_witness(space, i) is not None:
            _bump(stats, f"special_type_{i}")
            return []
    return _check_all_local_every_direction(space, map_class, stats, element_guard)


def _check_degenerate(space, sx_dim, branches, stats, element_guard):
    """Propositions 4.2 / 4.3: every non-local quasi-compatible
    homomorphism decomposes along one of the stated branches."""
    xs = _special_xs(space, sx_dim)
    if not xs:
        _bump(stats, "skipped_not_special")
        return []
    _bump(stats, f"special_type_{sx_dim}")
    from .solver import QUASI_ANY

    out = []
    range_sol = None
    for sol in solve_compatible_maps(space, QUASI_ANY, MapClass.ADDITIVE,
                                     element_guard=element_guard):
        if sol.all_local:
            continue
        d = sol.mode.direction
        for F in _nonlocal_members(sol):
            matched = None
            for x in xs:
                rep = decompose_special(F, x, d)
                if rep.feasible and rep.branch in branches:
                    matched = rep
                    break
            if matched is None:
                out.append(_violation(space, "no decomposition matches a stated branch",
                                      direction=d, witness=F))
                continue
            _bump(stats, f"branch_{matched.branch}")
            if matched.branch == "a":
                # case (a) maps are claimed fully range-compatible
                if range_sol is None:
                    range_sol = solve_compatible_maps(space, RANGE, MapClass.ADDITIVE,
                                                      element_guard=element_guard)
                if not range_sol.contains(F):
                    out.append(_violation(space, "case (a) map is not range-compatible",
                                          direction=d, witness=F))
    return out


def _check_aff2(space, stats, element_guard):
    if _special_xs(space, 1):
        _bump(stats, "image_dim_1_escape")
        return []
    return _check_all_local_every_direction(space, MapClass.AFFINE, stats, element_guard)


def _feasible_translate_into_span(F, span):
    """Is there x' with F(s) - s(x') inside the span, for all s?"""
    space = F.space
    fld = space.field
    AP = span.annihilator()
    rows, rhs = [], []
    mats = [space.offset_matrix] + space.basis_matrices
    vals = [F(space.offset_matrix)] + [F.linear_part(t) for t in space.basis_matrices]
    for M, v in zip(mats, vals):
        rows.append(kernels.mat_mul(AP, M, fld.tables))
        rhs.append(kernels.mat_mul(AP, v[:, None], fld.tables)[:, 0])
    A = np.concatenate(rows) if rows else np.zeros((0, space.p), np.uint8)
    b = np.concatenate(rhs) if rhs else np.zeros(0, np.uint8)
    return solve_system(fld, A, b) is not None


def _feasible_endo_decomposition(F, x, span):
    """Is there a span endomorphism psi and x' with F(s) = psi(s(x)) + s(x')?"""
    space = F.space
    fld = space.field
    t = fld.tables
    n, p = space.n, space.p
    dimP = span.dim
    ncols = dimP * dimP + p
    rows, rhs = [], []
    mats = [space.offset_matrix] + space.basis_matrices
    vals = [F(space.offset_matrix)] + [F.linear_part(tm) for tm in space.basis_matrices]
    for M, v in zip(mats, vals):
        w = space.apply(M, x)
        alpha = w[span.pivots] if dimP else np.zeros(0, np.uint8)
        block = np.zeros((n, ncols), dtype=np.uint8)
        for l in range(dimP):
            if alpha[l]:
                for m_ in range(dimP):
                    block[:, l * dimP + m_] = t.mul[alpha[l], span.basis[m_]]
        block[:, dimP * dimP :] = M
        rows.append(block)
        rhs.append(v)
    A = np.concatenate(rows)
    b = np.concatenate(rhs)
    return solve_system(fld, A, b) is not None


def _check_aff3(space, stats, element_guard):
    quals = []
    for x in _special_xs(space, 1):
        flat = apply_to_vector(space, x)
        if not flat.is_linear:
            quals.append((x, flat))
    if not quals:
        _bump(stats, "skipped_no_nonlinear_image_line")
        return []
    _bump(stats, "hypothesis_spaces")
    from .solver import QUASI_ANY

    fld = space.field
    out = []
    for sol in solve_compatible_maps(space, QUASI_ANY, MapClass.AFFINE,
                                     element_guard=element_guard):
        d0 = sol.mode.direction
        for F in _nonlocal_members(sol):
            _bump(stats, "nonlocal_maps")
            if fld.q != 3:
                out.append(_violation(
                    space, "non-local quasi-affine map over a field with #K != 3",
                    direction=d0, witness=F))
                continue
            ok = False
            for x, flat in quals:
                meets = any(
                    fld.tables.mul[lam, d0.vector] in flat for lam in range(fld.q)
                )
                if not meets:
                    continue
                span = Subspace.from_vectors(
                    fld, np.concatenate([flat.offset[None, :], flat.space.basis]),
                    ambient_dim=space.n)
                if not _feasible_translate_into_span(F, span):
                    continue
                if space.n > 2 and not _feasible_endo_decomposition(F, x, span):
                    continue
                ok = True
                break
            if ok:
                _bump(stats, "conclusions_verified")
            else:
                out.append(_violation(space, "theorem conclusions (ii)-(iv) fail",
                                      direction=d0, witness=F))
    return out


def _desc_f3_space(p):
    """The canonical F3 space with first column (a, 1-a) and free rest."""
    F3 = GF(3)
    mats = []
    M = np.zeros((2, p), dtype=np.uint8)
    M[0, 0], M[1, 0] = 1, 2
    mats.append(M)
    for c in range(1, p):
        for r in range(2):
            M = np.zeros((2, p), dtype=np.uint8)
            M[r, c] = 1
            mats.append(M)
    offset = np.zeros((2, p), dtype=np.uint8)
    offset[1, 0] = 1
    return OperatorSpace.from_matrices(F3, 2, p, mats, offset=offset)


def desc_f3_family(space):
    """The described generators: (m) -> (eps*m11, sum_j a_j m2j)."""
    from .gallery import map_from_formula

    gens = []

    def eps_formula(M):
        return np.array([int(M[0, 0]), 0], dtype=np.uint8)

    gens.append(map_from_formula(space, MapClass.AFFINE, eps_formula))
    for j in range(1, space.p):
        def col_formula(M, j=j):
            return np.array([0, int(M[1, j])], dtype=np.uint8)

        gens.append(map_from_formula(space, MapClass.AFFINE, col_formula))
    return gens


def _check_desc_f3(space, stats, element_guard):
    fld = space.field
    d0 = Direction(fld, [1, 1])
    sol = solve_compatible_maps(space, quasi(d0), MapClass.AFFINE,
                                element_guard=element_guard)
    out = []
    family = desc_f3_family(space)
    expected = sol.local_dim + 1 + (space.p - 1)
    if sol.dim != expected:
        out.append(_violation(
            space, f"solution dimension {sol.dim} != local {sol.local_dim} + {space.p}",
            direction=d0, witness=sol.witness))
    for i, G in enumerate(family):
        if not sol.contains(G):
            out.append(_violation(space, f"described generator {i} is not a solution",
                                  direction=d0, witness=G))
    # the described family together with the local maps spans everything
    rows = np.concatenate([sol.local_subspace.basis] + [G.encode()[None, :] for G in family])
    span = Subspace.from_vectors(fld.prime_subfield, rows,
                                 ambient_dim=sol.coefficient_space.ambient_dim)
    if span.dim != sol.dim:
        out.append(_violation(space, "local maps + family do not span the solutions",
                              direction=d0))
    stats["solution_dim"] = sol.dim
    stats["local_dim"] = sol.local_dim
    return out


# -- sweep engine ----------------------------------------------------------------


def _iter_spaces(theorem, field, n, p, codims, strategy, guard):
    d = n * p
    affine = theorem in _AFFINE_IDS
    if isinstance(strategy, Exhaustive):
        for c in codims:
            if c < 0 or c > d:
                continue
            for sub in enumerate_subspaces(field, d, d - c, guard=guard):
                if affine:
                    for flat in enumerate_cosets(sub, guard=guard):
                        yield c, OperatorSpace(field, n, p, flat)
                else:
                    yield c, OperatorSpace(
                        field, n, p, AffineFlat(sub, np.zeros(d, dtype=np.uint8)))
    else:
        rng = np.random.default_rng(strategy.seed)
        usable = [c for c in codims if 0 <= c <= d]
        if not usable:
            return
        for _ in range(strategy.count):
            c = usable[int(rng.integers(len(usable)))]
            sub = sample_subspace(field, d, d - c, rng)
            if affine:
                off = rng.integers(0, field.q, size=d, dtype=np.uint8)
                yield c, OperatorSpace(field, n, p, AffineFlat(sub, off))
            else:
                yield c, OperatorSpace(field, n, p,
                                       AffineFlat(sub, np.zeros(d, dtype=np.uint8)))


def verify_theorem(theorem, n, p, field, strategy=Exhaustive(), max_codim=None,
                   map_class=None, guard=10**6, element_guard=2**20):
    """Sweep all spaces within a theorem's hypothesis and check its
    conclusion.  Returns a VerificationReport; violations empty = pass."""
    if theorem not in _BOUNDS:
        raise DomainError(f"unknown theorem id {theorem!r}; have {THEOREM_IDS}")
    field = GF(field)
    _check_hypothesis(theorem, n, p, field)
    if map_class is not None and theorem != "AFF_GEN":
        raise DomainError("map class can only be overridden for AFF_GEN (semi-affine remark)")
    if theorem == "AFF_GEN":
        map_class = map_class or MapClass.AFFINE
        if map_class not in (MapClass.AFFINE, MapClass.SEMI_AFFINE):
            raise DomainError("AFF_GEN verifies affine or semi-affine maps")

    bound = _BOUNDS[theorem](n, field.q)
    if theorem in _EXACT_CODIM_IDS:
        codims = [bound] if bound >= 0 else []
    else:
        top = bound if max_codim is None else min(bound, max_codim)
        codims = list(range(0, top + 1))

    params = {"n": n, "p": p, "field": field.name,
              "max_codim": max(codims) if codims else None}
    report = VerificationReport(theorem=theorem, params=params,
                                strategy=strategy.describe())
    stats = report.side_stats
    start = time.perf_counter()

    if theorem == "DESC_F3":
        space = _desc_f3_space(p)
        report.violations.extend(_check_desc_f3(space, stats, element_guard))
        report.spaces_checked = 1
        report.elapsed = time.perf_counter() - start
        return report

    seen = {}
    for c, space in _iter_spaces(theorem, field, n, p, codims, strategy, guard):
        report.spaces_checked += 1
        _bump(stats, f"codim_{c}")
        if space in seen:
            # sampling can redraw a space; the check is deterministic,
            # so only count the duplicate (violations already recorded)
            _bump(stats, "duplicate_draws")
            continue
        seen[space] = True
        if theorem in ("TOTAL", "LIN1", "LIN2"):
            v = _check_all_local(space, RANGE, MapClass.LINEAR, stats, element_guard)
        elif theorem == "HOM":
            v = _check_all_local(space, RANGE, MapClass.ADDITIVE, stats, element_guard)
        elif theorem in ("AFF_GEN", "AFF_BIG"):
            cls = map_class if theorem == "AFF_GEN" else MapClass.AFFINE
            v = _check_all_local(space, RANGE, cls, stats, element_guard)
        elif theorem == "QRC_HOM":
            v = _check_all_local_every_direction(space, MapClass.ADDITIVE, stats, element_guard)
        elif theorem == "QRC_DEG1":
            v = _check_degenerate(space, 1, ("a", "b"), stats, element_guard)
        elif theorem == "QRC_DEG2":
            v = _check_degenerate(space, 2, ("projection",), stats, element_guard)
        elif theorem == "QRC2A":
            v = _check_special_escape(space, (1,), MapClass.LINEAR, stats, element_guard)
        elif theorem == "QRC2B":
            v = _check_special_escape(space, (1,), MapClass.ADDITIVE, stats, element_guard)
        elif theorem == "QRC2C":
            v = _check_special_escape(space, (1, 2), MapClass.ADDITIVE, stats, element_guard)
        elif theorem == "QRC_AFF1":
            v = _check_all_local_every_direction(space, MapClass.AFFINE, stats, element_guard)
        elif theorem == "QRC_AFF2":
            v = _check_aff2(space, stats, element_guard)
        elif theorem == "QRC_AFF3":
            v = _check_aff3(space, stats, element_guard)
        else:  # pragma: no cover
            raise AssertionError(theorem)
        report.violations.extend(v)
    report.elapsed = time.perf_counter() - start
    return report


def verify_gallery(entries=None, element_guard=2**16):
    """check_case over the gallery; default entries are the minimal
    parameters of all eight cases."""
    from .gallery import build_case, check_case, list_cases

    if entries is None:
        entries = [(c["name"], c["minimal"]["n"], c["minimal"]["p"], c["minimal"]["field"])
                   for c in list_cases()]
    report = VerificationReport(theorem="GALLERY", params={"cases": len(entries)},
                                strategy="exhaustive")
    start = time.perf_counter()
    for name, n, p, fieldname in entries:
        case = build_case(name, n, p, fieldname)
        rep = check_case(case, element_guard=element_guard)
        report.spaces_checked += 1
        for e in rep.entries:
            if not e.passed:
                report.violations.append(
                    _violation(case.space, f"{name} [{e.check}]: {e.detail}",
                               direction=case.direction))
        _bump(report.side_stats, "checks", len(rep.entries))
    report.elapsed = time.perf_counter() - start
    return report


def search_hom_counterexample(n, p, field, codim, strategy=Exhaustive(),
                              guard=10**6, element_guard=2**20):
    """First space of the given codimension carrying a non-local
    range-compatible additive map, with the witness re-validated
    pointwise.  Only meaningful over non-prime fields."""
    field = GF(field)
    if field.k == 1:
        raise DomainError("over prime fields additive maps are linear; "
                          "search targets non-prime fields")
    d = n * p
    if isinstance(strategy, Exhaustive):
        spaces = (s for s in enumerate_subspaces(field, d, d - codim, guard=guard))
    else:
        rng = np.random.default_rng(strategy.seed)
        spaces = (sample_subspace(field, d, d - codim, rng) for _ in range(strategy.count))
    for sub in spaces:
        space = OperatorSpace(field, n, p, AffineFlat(sub, np.zeros(d, dtype=np.uint8)))
        sol = solve_compatible_maps(space, RANGE, MapClass.ADDITIVE,
                                    element_guard=element_guard)
        if sol.witness is None:
            continue
        ok, _ = pointwise_compatible(sol.witness, RANGE)
        local, _ = is_local(sol.witness)
        if not ok or local:
            raise AssertionError("witness failed re-validation; solver bug")
        return space, sol.witness
    return None
