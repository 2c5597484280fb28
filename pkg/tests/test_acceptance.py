"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that the terminal summary prints at the
end of the run.  Runtimes include construction and verification.
"""

import contextlib
import math
import os
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from lrcodes.bounds import certify_dimension_optimality, cm_bound, generalized_singleton, qary_hamming_kmax, ceil_log2
from lrcodes.constructions import concatenated_rlocal, product_lrc, reversible_binary, rm_qary, simplex_lrc
from lrcodes.cyclic import bch_bound, coset_partition, generator_from_defset, normalize_defset
from lrcodes.linear import weight_report
from lrcodes.locality import (
    local_repair,
    locality_availability_profile,
    project_additive,
    structural_rdelta_verify,
)

JOBS = os.cpu_count() or 1


@contextlib.contextmanager
def criterion(number, summary, limit=None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        tag = "PASS" if ok else "FAIL"
        line = f"{tag} criterion {number}: {summary} ({elapsed:.2f}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)


def test_criterion_1_reversible_length_33():
    with criterion(1, "reversible m=5 is a [33,12,10] 2-local code, dimension-optimal, CM bound 13", limit=1.0):
        res = reversible_binary(5)
        assert (res.n, res.k) == (33, 12)
        assert bch_bound(res.cyclic.defset) == 10
        rep = weight_report(res.code)
        assert rep.size == 2**12 and rep.d == 10
        prof = locality_availability_profile(res.code, 2)
        assert all(c.r_i == 2 and c.t_i == 1 for c in prof.per_coordinate)
        cert = certify_dimension_optimality(res, d=rep.d, d_method="enumeration")
        assert cert.k_bound == 12 and cert.verdict == "dimension_optimal"
        cm = cm_bound(33, 10, 2)
        assert cm.k_max == 13
        assert all(t["source"] == "table" for t in cm.terms if t["value"] == cm.k_max)


def test_criterion_2_simplex_length_63():
    with criterion(2, "simplex a=3 m=6 is a [63,21,12] code, availability 3, projection (9,3) over GF(8) perfect", limit=30):
        res = simplex_lrc(3, 6)
        assert (res.n, res.k) == (63, 21)
        assert bch_bound(res.cyclic.defset) == 12
        rep = weight_report(res.code, blocks=res.blocks, jobs=JOBS)
        assert rep.size == 2**21 and rep.d == 12
        prof = locality_availability_profile(res.code, 2)
        assert len(prof.per_coordinate) == 63 and all(c.t_i == 3 for c in prof.per_coordinate)
        proj = project_additive(res.code, res.locality_code, res.blocks, weights=rep)
        assert (proj.n_prime, proj.d_prime, proj.alphabet) == (9, 3, 8)
        hb = qary_hamming_kmax(proj.n_prime, proj.d_prime, proj.alphabet)
        assert proj.k_prime == 7 == hb.kprime_max and hb.ratio == 8**7


def test_criterion_3_simplex_length_15():
    with criterion(3, "simplex a=2 m=4 is [15,6] with exact d >= 6 and k at the bound 6", limit=1.0):
        res = simplex_lrc(2, 4)
        assert (res.n, res.k) == (15, 6)
        assert bch_bound(res.cyclic.defset) >= 6
        rep = weight_report(res.code)
        assert rep.size == 2**6 and rep.d >= 6
        cert = certify_dimension_optimality(res, d=rep.d, d_method="enumeration")
        assert cert.k_bound == 2 * 15 // 3 - 4 == res.k


@pytest.mark.long
def test_criterion_4_ternary_length_80():
    with criterion(4, "rm q=3 m=4 is [80,16,18], BCH 16, d' = 3, dimension-optimal", limit=600):
        res = rm_qary(3, 4)
        assert (res.n, res.k) == (80, 16)
        assert bch_bound(res.cyclic.defset) == 16
        rep = weight_report(res.code, blocks=res.blocks, jobs=JOBS)
        assert rep.size == 3**16 and rep.d == 18 == 3 * (3 * 3 - 3)
        proj = project_additive(res.code, res.locality_code, res.blocks, weights=rep)
        assert proj.d_prime == 3 and proj.d_prime_lower == 3
        cert = certify_dimension_optimality(res, d=rep.d, d_method="enumeration", dprime_exact=proj.d_prime)
        assert cert.k_bound == 16 == res.k and cert.verdict == "dimension_optimal"


def test_criterion_5_quaternary_length_255():
    with criterion(5, "rm q=4 m=4 is [255,30], BCH 30, |D| = 225, (2,12) blocks, projection (17, k'=13, d'>=3)", limit=5):
        res = rm_qary(4, 4)
        assert (res.n, res.k) == (255, 30)
        assert bch_bound(res.cyclic.defset) == 30
        assert len(res.cyclic.defset) == 225
        st = structural_rdelta_verify(res.code, res.locality_code, res.blocks, 2, 12)
        assert st.verified
        proj = project_additive(res.code, res.locality_code, res.blocks, budget=0, d_hint=30)
        assert proj.n_prime == 17
        assert proj.d_prime_lower == math.ceil(30 / 12) == 3
        # the dimension over the projected alphabet GF(16) is 30 / 2
        assert proj.k_prime == 13


def test_criterion_6_concatenated():
    with criterion(6, "concat r=3 is a 3-local [36,21,6] code with CM bound 21; r=2 gives [15,6,6]", limit=30):
        res = concatenated_rlocal(3)
        assert (res.n, res.k) == (36, 21)
        rep = weight_report(res.code, jobs=JOBS)
        assert rep.size == 2**21 and rep.d == 6
        prof = locality_availability_profile(res.code, 3)
        assert prof.r is not None and prof.r <= 3
        small = concatenated_rlocal(2)
        srep = weight_report(small.code)
        assert (small.n, small.k, srep.size, srep.d) == (15, 6, 2**6, 6)
        assert cm_bound(36, 6, 3).k_max == 21


def _mds_locality(n_l, q, residues):
    ds, _ = normalize_defset(n_l, q, residues)
    return generator_from_defset(ds)


def test_criterion_7_bound_identities():
    with criterion(7, "sphere-packing 12 at n=33 matches the closed form; Singleton identities; products meet it"):
        n = 33
        assert qary_hamming_kmax(11, 5, 4).kmax == 12 == 2 * n // 3 + 1 - ceil_log2(2 - n + n * n)
        for nn, k in [(33, 12), (63, 21), (15, 6), (80, 16)]:
            assert generalized_singleton(nn, k, k, 2) == nn - k + 1
        for L_spec, n in [((3, 2, [0]), 15), ((5, 2, [0]), 15), ((5, 4, [2, 3]), 15), ((5, 4, [0, 1, 4]), 15), ((3, 2, [0]), 33)]:
            L = _mds_locality(*L_spec)
            res = product_lrc(L, n)
            d = weight_report(res.code).d
            p = res.predicted
            assert d == p.delta
            assert generalized_singleton(res.n, res.k, p.r, p.delta) == d


def _all_constructions():
    out = [
        reversible_binary(5),
        reversible_binary(7),
        simplex_lrc(2, 4),
        simplex_lrc(3, 6),
        simplex_lrc(2, 6),
        rm_qary(3, 4),
        rm_qary(4, 4),
        concatenated_rlocal(2),
        concatenated_rlocal(3),
        concatenated_rlocal(4),
        product_lrc(_mds_locality(3, 2, [0]), 15),
        product_lrc(_mds_locality(5, 4, [2, 3]), 15),
    ]
    return out


def test_criterion_8_property_suites():
    with criterion(8, "coset partitions, g | X^n - 1, d' >= ceil(d/omega), 1000 single-erasure repairs per code"):
        for q in (2, 3, 4):
            for n in range(1, 256):
                if math.gcd(n, q) != 1:
                    continue
                parts = coset_partition(n, q)
                flat = sorted(x for c in parts for x in c)
                assert flat == list(range(n))
                assert all({(x * q) % n for x in c} == set(c) for c in parts)
        results = _all_constructions()
        rng = np.random.default_rng(2024)
        ratio_checked = 0
        for res in results:
            for spec in (res.cyclic, res.locality_cyclic):
                if spec is not None:
                    assert spec.divides_xn_minus_1()
            if res.code.q ** res.k <= 1 << 26:
                rep = weight_report(res.code, blocks=res.blocks, jobs=JOBS)
                proj = project_additive(res.code, res.locality_code, res.blocks, weights=rep)
                assert proj.d_prime >= proj.d_prime_lower == -(-rep.d // proj.omega)
                ratio_checked += 1
            r = res.predicted.r
            prof = locality_availability_profile(res.code, r, availability=False)
            mismatches = 0
            for _ in range(1000):
                word = res.code.encode(rng.integers(0, res.code.q, res.k))
                i = int(rng.integers(0, res.n))
                received = word.copy()
                received[i] = 0
                out = local_repair(res.code, received, [i], prof)
                if not out.complete or not (out.word == word).all():
                    mismatches += 1
            assert mismatches == 0, f"{res.name}: {mismatches} failed repairs"
        assert ratio_checked >= 8
