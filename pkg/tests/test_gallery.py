"""Every explicit example from the gallery re-checked from scratch."""

import numpy as np
import pytest

from rangecompat.algebra import GF
from rangecompat.errors import DomainError
from rangecompat.gallery import build_case, check_case, list_cases

MINIMAL = {c["name"]: c["minimal"] for c in list_cases()}


def test_list_cases_contract():
    cases = list_cases()
    assert len(cases) == 8
    names = {c["name"] for c in cases}
    assert "affine-f2" in names and "alternating" in names


@pytest.mark.parametrize("name", sorted(MINIMAL))
def test_case_passes_at_minimal_params(name):
    m = MINIMAL[name]
    case = build_case(name, m["n"], m["p"], m["field"])
    report = check_case(case)
    assert report.passed, [(e.check, e.detail) for e in report.entries if not e.passed]


def test_invalid_params_rejected():
    with pytest.raises(DomainError):
        build_case("affine-f2", 2, 2, "F3")  # wrong field
    with pytest.raises(DomainError):
        build_case("alternating", 2, 2, "F2")  # n too small
    with pytest.raises(DomainError):
        build_case("no-such-case", 2, 2, "F2")


def test_qrc_hom_1_codim():
    case = build_case("qrc-hom-1", 3, 2, "F3")
    assert case.space.codim == 2


def test_alternating_shape():
    case = build_case("alternating", 3, 2, "F2")
    assert case.space.dim == 3 and case.space.n * case.space.p == 6


def test_sym2_map_value():
    case = build_case("sym2-f3", 2, 2, "F3")
    M = np.array([[1, 0], [0, 0]], dtype=np.uint8)
    assert case.map(M).tolist() == [2, 0]  # c - a = -1 = 2


def test_field_ext_space_is_field_image():
    # the space must be closed under matrix multiplication (it is a field)
    for fname in ("F2", "F3"):
        case = build_case("field-ext", 2, 2, fname)
        field = GF(fname)
        els = list(case.space.elements())
        for A in els:
            for B in els:
                prod = (A.astype(int) @ B.astype(int)) % field.p
                assert case.space.contains(prod.astype(np.uint8))
        # nonzero members are invertible: rank 2
        from rangecompat.algebra import rref

        for A in els:
            if A.any():
                assert rref(field, A)[1] == 2


_SMALL_PARAM_GRID = {
    "affine-f2": [(2, 1, "F2"), (2, 2, "F2"), (3, 2, "F2"), (4, 3, "F2"), (6, 2, "F2")],
    "affine-big": [(2, 2, "F3"), (3, 2, "F3"), (2, 2, "F5"), (2, 2, "F4"), (3, 4, "F3")],
    "qrc-hom-1": [(2, 1, "F3"), (3, 2, "F3"), (4, 2, "F2"), (2, 2, "F4"), (6, 2, "F2"),
                  (2, 2, "F7"), (2, 1, "F9")],
    "qrc-hom-f2": [(3, 1, "F2"), (3, 2, "F2"), (4, 3, "F2"), (6, 2, "F2")],
    "alternating": [(3, 2, "F2"), (3, 2, "F3"), (4, 3, "F2"), (3, 2, "F5")],
    "sym2-f3": [(2, 2, "F3")],
    "field-ext": [(2, 2, "F2"), (2, 2, "F3")],
    "f2-5param": [(3, 2, "F2"), (4, 3, "F2"), (6, 2, "F2")],
}


@pytest.mark.parametrize(
    "name,n,p,fname",
    [(name, *params) for name, grid in sorted(_SMALL_PARAM_GRID.items()) for params in grid],
)
def test_cases_across_parameter_grid(name, n, p, fname):
    # all valid parameters with n*p <= 12 and a tractable member count
    assert n * p <= 12
    case = build_case(name, n, p, fname)
    if case.space.element_count() > 2**16:
        pytest.skip("member count beyond the pointwise guard")
    report = check_case(case)
    assert report.passed, [(e.check, e.detail) for e in report.entries if not e.passed]
