"""Verification harness: small exhaustive sweeps, report determinism,
strategy handling and the counterexample search."""

import pytest

from rangecompat.errors import DomainError
from rangecompat.solver import MapClass, RANGE, is_local, pointwise_compatible, quasi
from rangecompat.verify import (Exhaustive, Sample, parse_strategy,
                                search_hom_counterexample, verify_gallery,
                                verify_theorem)



def test_total_small():
    r = verify_theorem("TOTAL", 2, 2, "F3")
    assert r.passed and r.spaces_checked == 1


def test_lin1_exhaustive_f2():
    r = verify_theorem("LIN1", 3, 2, "F2")
    assert r.passed
    assert r.side_stats["codim_1"] == 63 and r.spaces_checked == 64


def test_hom_f2_small():
    r = verify_theorem("HOM", 2, 2, "F2")
    assert r.passed


def test_hom_f4_additive_codim1():
    # homomorphism bound holds over a non-prime field with class Additive
    r = verify_theorem("HOM", 3, 1, "F4", max_codim=1)
    assert r.passed and r.side_stats["codim_1"] == 21


def test_hom_f4_exhaustive_3x2():
    r = verify_theorem("HOM", 3, 2, "F4", max_codim=1)
    assert r.passed and r.spaces_checked == 1366


def test_lin2_small():
    r = verify_theorem("LIN2", 2, 2, "F3", max_codim=1)
    assert r.passed and r.side_stats["codim_1"] == 40


def test_lin2_needs_dim_u_2():
    with pytest.raises(DomainError):
        verify_theorem("LIN2", 3, 1, "F3")


def test_qrc_hom_small():
    r = verify_theorem("QRC_HOM", 3, 1, "F3")
    assert r.passed and r.spaces_checked == 1 + 13


def test_aff_gen_exhaustive_tiny():
    r = verify_theorem("AFF_GEN", 3, 1, "F2")
    assert r.passed
    # codim <= 1: 1 linear space + 7 hyperplanes x 2 cosets
    assert r.spaces_checked == 1 + 7 * 2


def test_aff_gen_semi_affine_variant():
    r = verify_theorem("AFF_GEN", 3, 1, "F4", map_class=MapClass.SEMI_AFFINE)
    assert r.passed
    with pytest.raises(DomainError):
        verify_theorem("LIN1", 2, 2, "F2", map_class=MapClass.SEMI_AFFINE)


def test_aff_big_hypothesis():
    with pytest.raises(DomainError):
        verify_theorem("AFF_BIG", 2, 2, "F2")
    r = verify_theorem("AFF_BIG", 2, 1, "F3")
    assert r.passed


def test_qrc2a_hypothesis_and_sweep():
    with pytest.raises(DomainError):
        verify_theorem("QRC2A", 3, 2, "F5")
    with pytest.raises(DomainError):
        verify_theorem("QRC2A", 2, 2, "F3")
    r = verify_theorem("QRC2A", 2, 1, "F5")
    assert r.passed


def test_qrc2c_tiny():
    r = verify_theorem("QRC2C", 3, 1, "F2")
    assert r.passed and r.spaces_checked == 1


def test_qrc_aff1_tiny():
    r = verify_theorem("QRC_AFF1", 3, 1, "F3", max_codim=1)
    assert r.passed


def test_qrc_aff2_small_exhaustive():
    r = verify_theorem("QRC_AFF2", 2, 1, "F5")
    assert r.passed
    assert r.side_stats.get("image_dim_1_escape", 0) > 0


def test_qrc_aff3_exhaustive_f3():
    r = verify_theorem("QRC_AFF3", 2, 1, "F3")
    assert r.passed
    assert r.side_stats.get("hypothesis_spaces", 0) > 0
    assert r.side_stats.get("nonlocal_maps", 0) > 0
    assert r.side_stats.get("conclusions_verified", 0) > 0


def test_qrc_aff3_no_nonlocal_over_f5():
    # conclusion (i): over #K != 3 the hypothesis spaces carry no
    # non-local quasi-compatible affine maps at all
    r = verify_theorem("QRC_AFF3", 2, 1, "F5")
    assert r.passed
    assert r.side_stats.get("nonlocal_maps", 0) == 0


def test_desc_f3_dimensions():
    r = verify_theorem("DESC_F3", 2, 2, "F3")
    assert r.passed
    assert r.side_stats["solution_dim"] == r.side_stats["local_dim"] + 2
    with pytest.raises(DomainError):
        verify_theorem("DESC_F3", 2, 2, "F5")


def test_qrc_deg1_harvests_decompositions():
    r = verify_theorem("QRC_DEG1", 2, 1, "F3")
    assert r.passed
    branches = sum(v for k, v in r.side_stats.items() if k.startswith("branch_"))
    assert branches > 0


def test_report_determinism():
    a = verify_theorem("QRC_HOM", 2, 2, "F3", strategy=Sample(25, 42)).to_json()
    b = verify_theorem("QRC_HOM", 2, 2, "F3", strategy=Sample(25, 42)).to_json()
    assert a == b
    c = verify_theorem("LIN1", 3, 2, "F2").to_json()
    d = verify_theorem("LIN1", 3, 2, "F2").to_json()
    assert c == d


def test_parse_strategy():
    assert parse_strategy("exhaustive") == Exhaustive()
    assert parse_strategy("sample:100:7") == Sample(100, 7)
    with pytest.raises(DomainError):
        parse_strategy("sample:100")
    with pytest.raises(DomainError):
        parse_strategy("guess")


def test_unknown_theorem():
    with pytest.raises(DomainError):
        verify_theorem("NOPE", 2, 2, "F2")


def test_verify_gallery_default():
    r = verify_gallery()
    assert r.passed and r.spaces_checked == 8


def test_search_hom_counterexample():
    res = search_hom_counterexample(3, 1, "F4", 2)
    assert res is not None
    space, witness = res
    assert space.codim == 2
    assert pointwise_compatible(witness, RANGE)[0]
    assert not is_local(witness)[0]


def test_search_hom_rejects_prime_field():
    with pytest.raises(DomainError):
        search_hom_counterexample(3, 1, "F3", 2)


def test_search_hom_absent_within_bound():
    # codim <= dim V - 2 carries no counterexample (theorem territory)
    assert search_hom_counterexample(3, 1, "F4", 1) is None


def test_violations_are_recheckable_from_serialization():
    # a violation entry carries enough to reconstruct and re-confirm it
    from rangecompat import documents
    from rangecompat.gallery import build_case
    from rangecompat.verify import _violation

    case = build_case("qrc-hom-1", 3, 2, "F3")
    entry = _violation(case.space, "demo", direction=case.direction, witness=case.map)
    space, direction = documents.space_from_doc(entry["space"])
    witness = documents.map_from_doc(space, entry["witness"])
    assert space == case.space and direction == case.direction
    assert pointwise_compatible(witness, quasi(direction))[0]
    assert not is_local(witness)[0]
