"""Locality, availability, block structure and local erasure repair.

A local check through coordinate i is a dual codeword h with h_i != 0 and
small support.  Such checks are found without enumerating the dual code:
column g_i of the generator matrix is written as a combination of a few
other columns (the rank test), searched level by level so that only minimal
supports are kept.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .galois import Field
from .linear import (
    DEFAULT_BUDGET,
    CodeError,
    EnumerationInfeasible,
    LinearCode,
    matmul,
    puncture_to_block,
    weight_report,
)

MAX_SUPPORT = 6


class LocalityError(ValueError):
    pass


@dataclass(frozen=True)
class LocalCheck:
    """Dual codeword through one coordinate: ``values[t]`` sits at ``support[t]``."""

    support: tuple[int, ...]
    values: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.support)

    def dual_vector(self, n: int) -> np.ndarray:
        h = np.zeros(n, dtype=np.int64)
        h[list(self.support)] = self.values
        return h


def cyclic_blocks(n: int, n_l: int) -> list[list[int]]:
    """Coordinate classes a, a + n/n_l, a + 2n/n_l, ... of a block-replicated cyclic code."""
    if n % n_l:
        raise LocalityError(f"{n_l} does not divide {n}")
    step = n // n_l
    return [[a + step * b for b in range(n_l)] for a in range(step)]


def contiguous_blocks(n: int, n_l: int) -> list[list[int]]:
    if n % n_l:
        raise LocalityError(f"{n_l} does not divide {n}")
    return [list(range(s, s + n_l)) for s in range(0, n, n_l)]


TABLE_LIMIT = 4_000_000


class _ColumnIndex:
    """Columns of G plus lookup tables of their small linear combinations.

    ``table(b)`` maps the exact vector sum_{u in U} c_u g_u (as bytes) to the
    pairs (U, c) producing it, over all b-subsets U and nonzero c.
    """

    def __init__(self, code: LinearCode) -> None:
        F = code.field
        self.F = F
        self.n = code.n
        self.cols = code.G.T.astype(np.int64)
        self.dtype = np.uint8 if F.q <= 256 else np.uint16
        if F.q > 2:
            self.mul = F.mul_table.astype(np.int64)
            self.add = F.add_table.astype(np.int64)
            self.neg = F.neg_table.astype(np.int64)
        self._tables: dict[int, dict[bytes, list]] = {}

    def scale(self, c: int, V: np.ndarray) -> np.ndarray:
        if self.F.q == 2:
            return V
        return self.mul[c, V]

    def plus(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.F.q == 2:
            return A ^ B
        if self.F.s == 1:
            return (A + B) % self.F.p
        return self.add[A, B]

    def minus(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.F.q == 2:
            return A ^ B
        return self.plus(A, self.neg[B])

    def keys(self, V: np.ndarray) -> list[bytes]:
        V = np.ascontiguousarray(V.astype(self.dtype))
        return [row.tobytes() for row in V]

    def combos(self, b: int, exclude: int | None = None):
        """Yield (U, coeffs, vectors) batches over b-subsets, the last element vectorised.

        ``vectors[t]`` is the sum for U + (last[t],) with the given coefficient
        on the last element; ``last`` is returned alongside.
        """
        F = self.F
        nz = range(1, F.q)
        idx = [j for j in range(self.n) if j != exclude]
        zero = np.zeros(self.cols.shape[1], dtype=np.int64)
        for prefix in itertools.combinations(idx, b - 1):
            start = (prefix[-1] + 1) if prefix else 0
            last = np.array([j for j in idx if j >= start], dtype=np.int64)
            if not len(last):
                continue
            for pcs in itertools.product(nz, repeat=b - 1):
                base = zero
                for u, c in zip(prefix, pcs):
                    base = self.plus(base, self.scale(c, self.cols[u]))
                for c in nz:
                    yield prefix, pcs, c, last, base, self.scale(c, self.cols[last])

    def table(self, b: int) -> dict[bytes, list]:
        if b not in self._tables:
            est = math.comb(self.n, b) * (self.F.q - 1) ** b
            if est > TABLE_LIMIT:
                raise LocalityError(f"support search needs {est} combinations; above the limit {TABLE_LIMIT}")
            T: dict[bytes, list] = {}
            for prefix, pcs, c, last, base, V in self.combos(b):
                sums = self.plus(base[None, :], V)
                for j, key in zip(last.tolist(), self.keys(sums)):
                    T.setdefault(key, []).append((prefix + (j,), pcs + (c,)))
            self._tables[b] = T
        return self._tables[b]


def local_checks_at(code: LinearCode, i: int, rmax: int, _index: _ColumnIndex | None = None) -> list[LocalCheck]:
    """Minimal supports S containing i with |S| <= rmax + 1 carrying a dual codeword.

    S qualifies when g_i = sum_{u in S - i} c_u g_u with every c_u nonzero;
    supersets of smaller qualifying supports are dropped.  The others are split
    into the a smallest indices (enumerated) and the rest (looked up in a
    precomputed table of combinations).
    """
    if rmax + 1 > MAX_SUPPORT:
        raise LocalityError(f"support size {rmax + 1} exceeds the search cap {MAX_SUPPORT}")
    if not 0 <= i < code.n:
        raise LocalityError(f"coordinate {i} out of range")
    F = code.field
    idx = _index or _ColumnIndex(code)
    gi = idx.cols[i]
    if not gi.any():
        return [LocalCheck((i,), (1,))]
    found: dict[frozenset, LocalCheck] = {}
    smaller: list[frozenset] = []

    def record(level, U, cs):
        S = frozenset(U) | {i}
        if S in level or any(p <= S for p in smaller):
            return
        vals = {i: 1}
        for u, c in zip(U, cs):
            vals[u] = F.neg(c)
        sup = tuple(sorted(S))
        level[S] = LocalCheck(sup, tuple(vals[x] for x in sup))

    for size in range(2, rmax + 2):
        level: dict[frozenset, LocalCheck] = {}
        m = size - 1
        a, b = m // 2, m - m // 2
        T = idx.table(b)
        if a == 0:
            for U2, c2 in T.get(idx.keys(gi[None, :])[0], ()):
                if i not in U2:
                    record(level, U2, c2)
        else:
            for prefix, pcs, c, last, base, V in idx.combos(a, exclude=i):
                resid = idx.minus(idx.minus(gi, base)[None, :], V)
                live = resid.any(axis=1)
                for j, key, ok in zip(last.tolist(), idx.keys(resid), live.tolist()):
                    if not ok:
                        continue
                    hits = T.get(key)
                    if not hits:
                        continue
                    U1 = prefix + (j,)
                    for U2, c2 in hits:
                        if U2[0] <= j or i in U2:
                            continue
                        record(level, U1 + U2, pcs + (c,) + c2)
        smaller.extend(level)
        found.update(level)
    return sorted(found.values(), key=lambda c: (c.size, c.support))


def verify_check(code: LinearCode, check: LocalCheck) -> bool:
    h = check.dual_vector(code.n).reshape(-1, 1)
    return not matmul(code.field, code.G, h).any()


def max_disjoint_family(sets: Sequence[frozenset]) -> list[int]:
    """Indices of a largest pairwise-disjoint subfamily (exact branch and bound).

    The bound: the chosen sets are disjoint, so however many more are added,
    their sizes (smallest first) must fit in the still-unused coordinates.
    """
    order = sorted(range(len(sets)), key=lambda t: (len(sets[t]), sorted(sets[t])))
    # greedy start
    best: list[int] = []
    used: frozenset = frozenset()
    for t in order:
        if not sets[t] & used:
            best.append(t)
            used |= sets[t]

    def rec(cands: list[int], used: frozenset, chosen: list[int]) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if not cands:
            return
        free = len(frozenset().union(*(sets[t] for t in cands)) - used)
        room, extra = free, 0
        for t in cands:  # sorted by size
            if len(sets[t]) > room:
                break
            room -= len(sets[t])
            extra += 1
        if len(chosen) + extra <= len(best):
            return
        t, rest = cands[0], cands[1:]
        chosen.append(t)
        rec([u for u in rest if not sets[u] & sets[t]], used | sets[t], chosen)
        chosen.pop()
        rec(rest, used, chosen)

    rec(order, frozenset(), [])
    return sorted(best)


@dataclass
class CoordinateLocality:
    i: int
    r_i: int | None
    t_i: int
    checks: list[LocalCheck]
    family: list[int]  # indices into checks forming the availability family

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "r_i": self.r_i,
            "t_i": self.t_i,
            "supports": [list(c.support) for c in self.checks],
            "availability_family": [list(self.checks[t].support) for t in self.family],
        }


@dataclass
class LocalityProfile:
    r_target: int
    per_coordinate: list[CoordinateLocality]

    @property
    def r(self) -> int | None:
        """Largest per-coordinate locality; None when some coordinate has no local check."""
        rs = [c.r_i for c in self.per_coordinate]
        return None if any(x is None for x in rs) else max(rs, default=0)

    @property
    def t(self) -> int:
        return min((c.t_i for c in self.per_coordinate), default=0)

    @property
    def is_local(self) -> bool:
        return self.r is not None and self.r <= self.r_target

    def to_json(self, full: bool = True) -> dict:
        out = {"r": self.r, "t": self.t, "r_target": self.r_target}
        if full:
            out["per_coordinate"] = [c.to_json() for c in self.per_coordinate]
        return out


def locality_availability_profile(code: LinearCode, r: int, availability: bool = True) -> LocalityProfile:
    """Locality r_i and availability t_i of every coordinate for checks of size <= r + 1.

    With ``availability=False`` the packing step is skipped and t_i is 0.
    """
    if r + 1 > MAX_SUPPORT:
        raise LocalityError(f"support size {r + 1} exceeds the search cap {MAX_SUPPORT}")
    idx = _ColumnIndex(code)
    coords = []
    for i in range(code.n):
        checks = local_checks_at(code, i, r, _index=idx)
        r_i = min(c.size for c in checks) - 1 if checks else None
        rest = [frozenset(c.support) - {i} for c in checks]
        fam = max_disjoint_family(rest) if checks and availability else []
        coords.append(CoordinateLocality(i, r_i, len(fam), checks, fam))
    return LocalityProfile(r, coords)


# ---------------------------------------------------------------------------
# block structure


@dataclass
class BlockCertificate:
    block: list[int]
    dimension: int
    distance: int | None
    subcode: bool
    block_locality: int | None
    length_within_r_delta: bool

    def to_json(self) -> dict:
        return {
            "block": self.block,
            "dimension": self.dimension,
            "distance": self.distance,
            "subcode_of_L": self.subcode,
            "block_locality": self.block_locality,
            "length_within_r_plus_delta_minus_1": self.length_within_r_delta,
        }


@dataclass
class StructuralReport:
    verified: bool
    r: int
    delta: int
    blocks: list[BlockCertificate]

    def to_json(self, full: bool = False) -> dict:
        out = {
            "verified": self.verified,
            "r": self.r,
            "delta": self.delta,
            "method": "structural",
            "min_block_distance": min((b.distance or 0 for b in self.blocks), default=None),
            "max_block_dimension": max((b.dimension for b in self.blocks), default=0),
            "def1_length_condition": all(b.length_within_r_delta for b in self.blocks),
        }
        if full:
            out["blocks"] = [b.to_json() for b in self.blocks]
        return out


def _block_subcode(punct: LinearCode, L: LinearCode) -> bool:
    return punct.n == L.n and all(L.contains(row) for row in punct.G)


def structural_rdelta_verify(
    code: LinearCode,
    L: LinearCode,
    blocks: Sequence[Sequence[int]],
    r: int | None = None,
    delta: int | None = None,
) -> StructuralReport:
    """Check the (r, delta) block structure inherited from the locality code L.

    Every block's punctured code must lie in L, have minimum distance at least
    delta, and let each of its symbols be repaired from at most r others of
    the same block.  Whether the block length also satisfies
    ``len <= r + delta - 1`` is recorded per block but not required, since
    non-MDS locality codes never satisfy it.
    """
    cover = sorted(c for b in blocks for c in b)
    if cover != list(range(code.n)):
        raise LocalityError("blocks must partition the coordinates")
    if any(len(b) != L.n for b in blocks):
        raise LocalityError("block lengths must equal the locality code length")
    if delta is None:
        delta = weight_report(L).d
    if r is None:
        r = L.k
    certs = []
    cache: dict[bytes, tuple[int | None, int | None]] = {}
    for b in blocks:
        punct = puncture_to_block(code, b)
        sub = _block_subcode(punct, L)
        key = punct.G.tobytes() + bytes(str(punct.G.shape), "ascii")
        if key not in cache:
            dist = weight_report(punct).d if punct.k else None
            prof = locality_availability_profile(punct, min(r, MAX_SUPPORT - 1), availability=False) if punct.k else None
            cache[key] = (dist, prof.r if prof else None)
        dist, br = cache[key]
        certs.append(BlockCertificate(list(b), punct.k, dist, sub, br, len(b) <= r + delta - 1))
    ok = all(
        c.subcode and c.distance is not None and c.distance >= delta and c.block_locality is not None and c.block_locality <= r
        for c in certs
    )
    return StructuralReport(ok, r, delta, certs)


# ---------------------------------------------------------------------------
# projection to an additive code


@dataclass
class AdditiveProjection:
    n_l: int
    k_l: int
    n_prime: int
    alphabet: int  # q^k_l
    k_prime: Fraction  # log_{alphabet} of the code size
    omega: int
    d: int | None
    d_method: str
    d_prime: int | None  # exact, when enumerated
    d_prime_lower: int | None  # ceil(d / omega)
    info_set: list[int]
    blocks_in_L: bool
    method: str  # "enumeration" or "bound only"

    @property
    def dprime_bound_holds(self) -> bool | None:
        if self.d_prime is None or self.d_prime_lower is None:
            return None
        return self.d_prime >= self.d_prime_lower

    def to_json(self) -> dict:
        kp = self.k_prime
        return {
            "n_l": self.n_l,
            "k_l": self.k_l,
            "n_prime": self.n_prime,
            "alphabet": self.alphabet,
            "k_prime": int(kp) if kp.denominator == 1 else str(kp),
            "omega": self.omega,
            "d": self.d,
            "d_method": self.d_method,
            "d_prime": self.d_prime,
            "d_prime_lower": self.d_prime_lower,
            "dprime_bound_holds": self.dprime_bound_holds,
            "info_set": self.info_set,
            "blocks_in_L": self.blocks_in_L,
            "method": self.method,
        }


def project_word(word: Sequence[int], blocks: Sequence[Sequence[int]], info_set: Sequence[int], q: int) -> list[int]:
    """Map each block to the base-q integer of its information-set symbols."""
    out = []
    for b in blocks:
        v = 0
        for t in reversed(info_set):
            v = v * q + int(word[b[t]])
        out.append(v)
    return out


def project_additive(
    code: LinearCode,
    L: LinearCode,
    blocks: Sequence[Sequence[int]],
    budget: int = DEFAULT_BUDGET,
    d_hint: int | None = None,
    jobs: int = 1,
    weights=None,
) -> AdditiveProjection:
    """Collapse each block to one symbol over an alphabet of size q^k_l.

    ``d_prime`` is exact when the code fits the enumeration budget; otherwise
    only ceil(d / omega) is reported from ``d_hint`` (e.g. the BCH bound).
    ``weights`` may pass a WeightReport already computed with these blocks.
    """
    n_l = L.n
    if code.n % n_l or len(blocks) * n_l != code.n:
        raise LocalityError(f"{n_l} does not divide {code.n}")
    in_L = all(_block_subcode(puncture_to_block(code, b), L) for b in blocks)
    if not in_L:
        raise LocalityError("some block of the code is not inside the locality code")
    omega = weight_report(L).omega
    info = L.information_set()
    rep = weights
    if rep is None:
        try:
            rep = weight_report(code, budget=budget, blocks=blocks, jobs=jobs)
        except EnumerationInfeasible:
            rep = None
    if rep is not None and rep.block_distance is not None:
        d, d_method, dp, method = rep.d, "enumeration", rep.block_distance, "enumeration"
    else:
        d, d_method, dp, method = d_hint, "bound", None, "bound only"
    lower = -(-d // omega) if d is not None and omega else None
    return AdditiveProjection(
        n_l=n_l,
        k_l=L.k,
        n_prime=len(blocks),
        alphabet=code.q**L.k,
        k_prime=Fraction(code.k, L.k),
        omega=omega,
        d=d,
        d_method=d_method,
        d_prime=dp,
        d_prime_lower=lower,
        info_set=info,
        blocks_in_L=in_L,
        method=method,
    )


# ---------------------------------------------------------------------------
# repair


@dataclass
class RepairResult:
    word: np.ndarray
    residual: list[int]
    reads: dict[int, list[int]] = dc_field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return not self.residual

    def locality_used(self) -> dict[int, int]:
        return {i: len(s) for i, s in self.reads.items()}


def local_repair(code: LinearCode, word, erasures, profile: LocalityProfile) -> RepairResult:
    """Fill erased symbols one at a time from local checks that avoid other erasures.

    Unrepairable positions are returned in ``residual`` rather than raised.
    """
    F: Field = code.field
    w = np.array(word, dtype=np.int64).copy()
    if w.shape != (code.n,):
        raise CodeError(f"word length {w.shape} != n = {code.n}")
    E = sorted(set(int(e) for e in erasures))
    for e in E:
        if not 0 <= e < code.n:
            raise CodeError(f"erasure index {e} out of range")
        w[e] = 0
    pending = set(E)
    reads: dict[int, list[int]] = {}
    progress = True
    while pending and progress:
        progress = False
        for i in sorted(pending):
            for chk in profile.per_coordinate[i].checks:
                rest = [j for j in chk.support if j != i]
                if any(j in pending for j in rest):
                    continue
                hv = dict(zip(chk.support, chk.values))
                acc = 0
                for j in rest:
                    acc = F.add(acc, F.mul(hv[j], int(w[j])))
                w[i] = F.neg(F.div(acc, hv[i]))
                reads[i] = rest
                pending.discard(i)
                progress = True
                break
    return RepairResult(w, sorted(pending), reads)
