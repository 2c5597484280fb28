import warnings

import pytest

from lrcodes.bounds import generalized_singleton
from lrcodes.constructions import (
    ConstructionError,
    ConstructionResult,
    concatenated_rlocal,
    product_lrc,
    reversible_binary,
    rm_qary,
    simplex_lrc,
)
from lrcodes.cyclic import bch_bound, generator_from_defset, normalize_defset
from lrcodes.linear import weight_report
from lrcodes.locality import locality_availability_profile

CYCLIC = [
    (reversible_binary, (5,), (33, 12)),
    (reversible_binary, (7,), (129, 72)),
    (simplex_lrc, (3, 6), (63, 21)),
    (simplex_lrc, (2, 4), (15, 6)),
    (simplex_lrc, (2, 6), (63, 36)),
    (simplex_lrc, (3, 9), (511, 210)),
    (rm_qary, (3, 4), (80, 16)),
    (rm_qary, (4, 4), (255, 30)),
]


@pytest.mark.parametrize("factory,args,nk", CYCLIC)
def test_cyclic_factories_realise_their_predictions(factory, args, nk):
    res = factory(*args)
    assert (res.n, res.k) == nk
    assert res.predicted.k == res.k == res.n - len(res.cyclic.defset)
    assert res.cyclic.defset.is_closed()
    assert res.cyclic.divides_xn_minus_1()
    assert bch_bound(res.cyclic.defset) >= res.predicted.d
    # every block of the code is inside the locality code
    for b in res.blocks[:3]:
        for row in res.code.G[:4]:
            assert res.locality_code.contains(row[b])


def test_locality_codes_are_the_expected_short_codes():
    assert (simplex_lrc(3, 6).locality_code.n, simplex_lrc(3, 6).locality_code.k) == (7, 3)
    L = rm_qary(3, 4).locality_code
    rep = weight_report(L)
    assert (L.n, L.k, rep.d, rep.omega) == (8, 2, 6, 6)
    L4 = rm_qary(4, 4).locality_code
    assert (L4.n, L4.k, weight_report(L4).d) == (15, 2, 12)


def test_small_instances_distance_by_enumeration():
    assert weight_report(simplex_lrc(2, 4).code).d == 6
    assert weight_report(concatenated_rlocal(2).code).d == 6


@pytest.mark.parametrize("r,nk", [(2, (15, 6)), (3, (36, 21)), (4, (85, 60))])
def test_concatenated_parameters_and_locality(r, nk):
    res = concatenated_rlocal(r)
    assert (res.n, res.k) == nk
    prof = locality_availability_profile(res.code, r)
    assert prof.r is not None and prof.r <= r


def test_degenerate_and_invalid_parameters():
    with pytest.raises(ConstructionError):
        reversible_binary(3)  # k = 0
    with pytest.raises(ConstructionError):
        reversible_binary(4)
    with pytest.raises(ConstructionError):
        simplex_lrc(3, 4)
    with pytest.raises(ConstructionError):
        simplex_lrc(2, 2)
    with pytest.raises(ConstructionError):
        rm_qary(2, 4)
    with pytest.raises(ConstructionError):
        rm_qary(3, 3)
    with pytest.raises(ConstructionError):
        concatenated_rlocal(9)


def test_rm_flags_untested_regimes():
    assert rm_qary(3, 4).notes == []
    assert any("m=6" in n for n in rm_qary(3, 6).notes)


def _spc3():
    ds, _ = normalize_defset(3, 2, [0])
    return generator_from_defset(ds)


def test_product_with_parity_blocks_is_singleton_optimal():
    res = product_lrc(_spc3(), 15)
    assert (res.n, res.k) == (15, 10)
    d = weight_report(res.code).d
    assert d == res.predicted.delta == 2
    assert generalized_singleton(15, 10, res.predicted.r, res.predicted.delta) == d


def test_product_baseline_defining_set():
    res = product_lrc(_spc3(), 63)
    assert set(res.cyclic.defset) == {i for i in range(63) if i % 3 == 0}


def test_product_with_simplex_blocks():
    simplex = simplex_lrc(3, 6).locality_cyclic
    ds, _ = normalize_defset(7, 2, simplex.defset.residues)
    res = product_lrc(generator_from_defset(ds), 63)
    assert (res.n, res.k) == (63, 27)
    assert bch_bound(res.cyclic.defset) >= 4 and res.predicted.d == 4


def test_product_closes_extra_residues_with_warning():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = product_lrc(_spc3(), 33, R=[1])
    assert caught and res.notes
    assert res.k == 12  # same code as the length-33 reversible construction
    with pytest.raises(ConstructionError):
        product_lrc(_spc3(), 20)


def test_result_json_round_trip():
    res = simplex_lrc(2, 4)
    back = ConstructionResult.from_json(res.to_json())
    assert (back.code.G == res.code.G).all()
    assert back.blocks == res.blocks
    assert back.predicted == res.predicted
    assert back.cyclic.defset == res.cyclic.defset
