import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lrcodes.constructions import reversible_binary, simplex_lrc
from lrcodes.galois import field_of_order
from lrcodes.linear import LinearCode, all_codewords, dual, hamming_code, rref, single_parity_check, trivial_code
from lrcodes.locality import (
    LocalityError,
    contiguous_blocks,
    cyclic_blocks,
    local_checks_at,
    local_repair,
    locality_availability_profile,
    max_disjoint_family,
    project_additive,
    project_word,
    structural_rdelta_verify,
    verify_check,
)


def oracle_supports(code, i, rmax):
    """Inclusion-minimal supports through i of dual words of weight <= rmax + 1."""
    D = dual(code)
    words = all_codewords(D) if D.k else np.zeros((1, code.n), dtype=np.int64)
    sups = {frozenset(np.flatnonzero(w)) for w in words if w[i] and np.count_nonzero(w) <= rmax + 1}
    return {s for s in sups if not any(t < s for t in sups)}


@st.composite
def code_with_small_dual(draw):
    q = draw(st.sampled_from([2, 3, 4]))
    F = field_of_order(q)
    n = draw(st.integers(3, 9))
    r = draw(st.integers(1, min(4, n - 1)))
    rows = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=r, max_size=r))
    H, piv = rref(F, np.array(rows))
    if not piv:
        return single_parity_check(n, q)
    # the code is the dual of H's row space
    return dual(LinearCode(F, H.reshape(-1, n)))


@given(code_with_small_dual(), st.integers(1, 3), st.data())
def test_local_checks_match_dual_enumeration(code, rmax, data):
    i = data.draw(st.integers(0, code.n - 1))
    got = local_checks_at(code, i, rmax)
    assert {frozenset(c.support) for c in got} == oracle_supports(code, i, rmax)
    for c in got:
        assert i in c.support
        assert verify_check(code, c)


def test_simplex_and_hamming_supports():
    S = dual(hamming_code(2, 3))
    sup = [c.support for c in local_checks_at(S, 0, 2)]
    assert len(sup) == 3 and all(len(s) == 3 and 0 in s for s in sup)
    # the Hamming code's dual has minimum weight 4, so no check of size 3 exists
    assert local_checks_at(hamming_code(2, 3), 0, 2) == []
    with pytest.raises(LocalityError):
        local_checks_at(S, 0, 9)


@given(st.lists(st.frozensets(st.integers(0, 9), min_size=1, max_size=3), max_size=9))
def test_max_disjoint_family_is_optimal(sets):
    fam = max_disjoint_family(sets)
    chosen = [sets[t] for t in fam]
    assert all(not (a & b) for a, b in itertools.combinations(chosen, 2))
    best = 0
    for size in range(len(sets), 0, -1):
        if any(all(not (a & b) for a, b in itertools.combinations(c, 2)) for c in itertools.combinations(sets, size)):
            best = size
            break
    assert len(fam) == best


def test_profile_of_simplex_construction():
    res = simplex_lrc(3, 6)
    prof = locality_availability_profile(res.code, 2)
    assert prof.r == 2 and prof.t == 3
    assert all(c.r_i == 2 and c.t_i == 3 for c in prof.per_coordinate)
    # availability supports meet only in their coordinate
    for c in prof.per_coordinate[:5]:
        fam = [set(c.checks[t].support) - {c.i} for t in c.family]
        assert all(not (a & b) for a, b in itertools.combinations(fam, 2))


def test_profile_reports_missing_locality():
    prof = locality_availability_profile(trivial_code(4), 2)
    assert prof.r is None and not prof.is_local


@given(code_with_small_dual(), st.integers(0, 2**31), st.integers(1, 3))
def test_repair_round_trip(code, seed, count):
    rng = np.random.default_rng(seed)
    prof = locality_availability_profile(code, 3)
    word = code.encode(rng.integers(0, code.q, code.k))
    er = sorted(rng.choice(code.n, size=min(count, code.n), replace=False).tolist())
    out = local_repair(code, word, er, prof)
    fixed = sorted(out.reads)
    assert sorted(fixed + out.residual) == er
    assert (out.word[fixed] == word[fixed]).all()
    for i, reads in out.reads.items():
        assert len(reads) <= 3


def test_repair_stays_inside_block():
    res = reversible_binary(5)
    prof = locality_availability_profile(res.code, 2)
    block_of = {c: b for b in res.blocks for c in b}
    rng = np.random.default_rng(0)
    word = res.code.encode(rng.integers(0, 2, res.k))
    for i in range(res.n):
        out = local_repair(res.code, word, [i], prof)
        assert out.complete and (out.word == word).all()
        assert set(out.reads[i]) <= set(block_of[i])
    # two erasures in one three-symbol block cannot be fixed locally
    out = local_repair(res.code, word, res.blocks[0][:2], prof)
    assert out.residual == res.blocks[0][:2]


def test_structure_and_projection_of_length_33_code():
    res = reversible_binary(5)
    rep = structural_rdelta_verify(res.code, res.locality_code, res.blocks, 2, 2)
    assert rep.verified and all(b.length_within_r_delta for b in rep.blocks)
    proj = project_additive(res.code, res.locality_code, res.blocks)
    assert (proj.n_prime, proj.alphabet, proj.k_prime, proj.omega) == (11, 4, 6, 2)
    assert proj.d == 10 and proj.d_prime == 5 and proj.d_prime_lower == 5 and proj.dprime_bound_holds
    word = res.code.encode(np.ones(res.k, dtype=np.int64))
    sym = project_word(word, res.blocks, proj.info_set, 2)
    assert len(sym) == 11 and all(0 <= s < 4 for s in sym)


def test_structure_rejects_foreign_blocks():
    code = trivial_code(6)
    L = single_parity_check(3)
    rep = structural_rdelta_verify(code, L, contiguous_blocks(6, 3), 2, 2)
    assert not rep.verified
    with pytest.raises(LocalityError):
        project_additive(code, L, contiguous_blocks(6, 3))


def test_block_helpers():
    assert cyclic_blocks(9, 3) == [[0, 3, 6], [1, 4, 7], [2, 5, 8]]
    assert contiguous_blocks(6, 3) == [[0, 1, 2], [3, 4, 5]]
    with pytest.raises(LocalityError):
        cyclic_blocks(10, 3)
