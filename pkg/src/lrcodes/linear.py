"""Linear codes over small fields: algebra, exact weight enumeration, puncturing
and concatenation.

Matrices hold field-element indices (see :mod:`lrcodes.galois`) in int64
numpy arrays.  Prime fields reduce with ``% p``; extension fields go through
the dense add/mul tables.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .galois import Field, build_field, field_of_order, prime_power

DEFAULT_BUDGET = 1 << 26


class EnumerationInfeasible(RuntimeError):
    """Raised when q^k exceeds the enumeration budget."""


class CodeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# GF(q) linear algebra


def _as_matrix(M) -> np.ndarray:
    A = np.array(M, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    return A


def rref(F: Field, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns; zero rows are dropped."""
    A = _as_matrix(M)
    rows, cols = A.shape
    if rows == 0:
        return A.reshape(0, cols), []
    if F.q == 2:
        return _rref_gf2(A)
    add, mul = F.add_table.astype(np.int64), F.mul_table.astype(np.int64)
    neg, inv = F.neg_table.astype(np.int64), F.inv_table.astype(np.int64)
    A = A.copy()
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        pr = r + nz[0]
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        A[r] = mul[inv[A[r, c]], A[r]]
        factors = neg[A[:, c]]
        factors[r] = 0
        if factors.any():
            A = add[A, mul[factors[:, None], A[r][None, :]]]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _rref_gf2(A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    rows, cols = A.shape
    # bit c of a row integer is column c
    weights = 1 << np.arange(cols, dtype=object)
    ints = [int(sum(int(w) for w, b in zip(weights, row) if b & 1)) for row in A]
    pivots = []
    basis: list[int] = []
    for c in range(cols):
        bit = 1 << c
        idx = next((i for i, v in enumerate(ints) if v & bit), None)
        if idx is None:
            continue
        piv = ints.pop(idx)
        ints = [v ^ piv if v & bit else v for v in ints]
        basis = [v ^ piv if v & bit else v for v in basis]
        basis.append(piv)
        pivots.append(c)
        if not ints:
            break
    out = np.zeros((len(basis), cols), dtype=np.int64)
    for i, v in enumerate(basis):
        for c in range(cols):
            if v >> c & 1:
                out[i, c] = 1
    return out, pivots


def rank(F: Field, M) -> int:
    return len(rref(F, M)[1])


def null_space(F: Field, M) -> np.ndarray:
    """Basis (as rows) of {x : M x^T = 0}."""
    A = _as_matrix(M)
    cols = A.shape[1]
    R, pivots = rref(F, A)
    free = [c for c in range(cols) if c not in set(pivots)]
    H = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        H[t, f] = 1
        for j, pc in enumerate(pivots):
            H[t, pc] = F.neg(int(R[j, f]))
    return H


def matmul(F: Field, A, B) -> np.ndarray:
    A, B = np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64)
    if F.s == 1:
        return (A @ B) % F.p
    add, mul = F.add_table.astype(np.int64), F.mul_table.astype(np.int64)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for t in range(A.shape[1]):
        out = add[out, mul[A[:, t][:, None], B[t][None, :]]]
    return out


# ---------------------------------------------------------------------------
# codes


class LinearCode:
    """A linear [n, k] code over GF(q) given by a full-rank generator matrix."""

    def __init__(self, field: Field, G, tag: str = "", check: bool = True) -> None:
        G = np.array(G, dtype=np.int64)
        if G.ndim != 2:
            raise CodeError("generator matrix must be two-dimensional")
        if G.size and (G.min() < 0 or G.max() >= field.q):
            raise CodeError("generator entries must be element indices of the field")
        if check and G.shape[0] and rank(field, G) != G.shape[0]:
            raise CodeError("generator matrix is not full rank")
        self.field = field
        self.G = G
        self.k, self.n = G.shape
        self.tag = tag

    @property
    def q(self) -> int:
        return self.field.q

    def __repr__(self) -> str:
        t = f" {self.tag}" if self.tag else ""
        return f"<LinearCode [{self.n},{self.k}]_{self.q}{t}>"

    @cached_property
    def parity_check(self) -> np.ndarray:
        return null_space(self.field, self.G)

    def encode(self, message) -> np.ndarray:
        m = np.asarray(message, dtype=np.int64).reshape(1, -1)
        if m.shape[1] != self.k:
            raise CodeError(f"message length {m.shape[1]} != k = {self.k}")
        return matmul(self.field, m, self.G)[0]

    def syndrome(self, word) -> np.ndarray:
        w = np.asarray(word, dtype=np.int64).reshape(-1, 1)
        if w.shape[0] != self.n:
            raise CodeError(f"word length {w.shape[0]} != n = {self.n}")
        H = self.parity_check
        if H.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        return matmul(self.field, H, w)[:, 0]

    def contains(self, word) -> bool:
        return not self.syndrome(word).any()

    def information_set(self) -> list[int]:
        """Lexicographically first information set (greedy pivot columns)."""
        return rref(self.field, self.G)[1]

    def to_json(self) -> dict:
        return {
            "field": self.field.descriptor(),
            "n": self.n,
            "k": self.k,
            "generator_matrix": self.G.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict, tag: str = "") -> LinearCode:
        F = build_field(data["field"]["p"], data["field"]["s"])
        G = np.array(data["generator_matrix"], dtype=np.int64).reshape(-1, data["n"])
        return cls(F, G, tag=tag)


def encode(code: LinearCode, message) -> np.ndarray:
    return code.encode(message)


def dual(code: LinearCode) -> LinearCode:
    return LinearCode(code.field, code.parity_check, tag=f"dual {code.tag}".strip(), check=False)


# ---------------------------------------------------------------------------
# enumeration


@dataclass
class WeightReport:
    d: int | None
    histogram: dict[int, int]
    size: int
    omega: int
    # filled when blocks are given: counts of nonzero blocks per codeword
    block_histogram: dict[int, int] | None = None
    block_distance: int | None = None
    method: str = "enumeration"

    def to_json(self) -> dict:
        out = {
            "d": self.d,
            "omega": self.omega,
            "histogram": {str(w): c for w, c in sorted(self.histogram.items())},
            "size": self.size,
            "method": self.method,
        }
        if self.block_histogram is not None:
            out["block_distance"] = self.block_distance
            out["block_histogram"] = {str(w): c for w, c in sorted(self.block_histogram.items())}
        return out


def _pack_bits(G: np.ndarray) -> np.ndarray:
    """Rows of a 0/1 matrix as little-endian uint64 limbs, shape (k, limbs)."""
    k, n = G.shape
    limbs = (n + 63) // 64
    out = np.zeros((k, limbs), dtype=np.uint64)
    for c in range(n):
        out[:, c // 64] |= G[:, c].astype(np.uint64) << np.uint64(c % 64)
    return out


def _span_table(F: Field, rows: np.ndarray) -> np.ndarray:
    """All q^len(rows) combinations, built by repeatedly adding one row.

    Binary rows are packed limbs combined with XOR; otherwise rows are symbol
    vectors combined through the field tables.
    """
    if F.q == 2:
        table = np.zeros((1, rows.shape[1]), dtype=np.uint64)
        for r in rows:
            table = np.concatenate([table, table ^ r])
        return table
    add, mul = F.add_table, F.mul_table
    table = np.zeros((1, rows.shape[1]), dtype=add.dtype)
    r8 = rows.astype(add.dtype)
    for r in r8:
        table = np.concatenate([add[table, mul[a][r][None, :]] for a in range(F.q)])
    return table


def _normalized_span(F: Field, rows: np.ndarray) -> np.ndarray:
    """Nonzero combinations whose first nonzero coefficient is 1."""
    parts = []
    for p0 in range(rows.shape[0]):
        tail = _span_table(F, rows[p0 + 1 :])
        if F.q == 2:
            parts.append(tail ^ rows[p0])
        else:
            parts.append(F.add_table[tail, rows[p0].astype(tail.dtype)[None, :]])
    if not parts:
        return _span_table(F, rows[:0])[:0]
    return np.concatenate(parts)


def _popcount_rows(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x).sum(axis=1, dtype=np.int64)


def _chunk_histograms(args) -> tuple[np.ndarray, np.ndarray | None]:
    binary, low, highs, n, neg, masks, block_perm, n_blocks, block_len = args
    hist = np.zeros(n + 1, dtype=np.int64)
    bhist = np.zeros(n_blocks + 1, dtype=np.int64) if n_blocks else None
    for h in highs:
        if binary:
            x = low ^ h
            w = _popcount_rows(x)
            if n_blocks:
                bw = np.zeros(len(low), dtype=np.int64)
                for m in masks:
                    bw += (x & m).any(axis=1)
        else:
            diff = low != neg[h][None, :]
            w = np.count_nonzero(diff, axis=1)
            if n_blocks:
                if block_len:
                    bw = diff[:, block_perm].reshape(len(low), n_blocks, block_len).any(axis=2).sum(axis=1)
                else:
                    bw = np.zeros(len(low), dtype=np.int64)
                    for b in block_perm:
                        bw += diff[:, b].any(axis=1)
        hist += np.bincount(w, minlength=n + 1)
        if n_blocks:
            bhist += np.bincount(bw, minlength=n_blocks + 1)
    return hist, bhist


def weight_report(
    code: LinearCode,
    budget: int = DEFAULT_BUDGET,
    blocks: Sequence[Sequence[int]] | None = None,
    jobs: int = 1,
    low_bits: int | None = None,
) -> WeightReport:
    """Exact weight distribution by enumerating all q^k codewords.

    The message space is split into a low part, tabulated once, and a high
    part iterated row by row; for q > 2 only high parts with leading
    coefficient 1 are visited and their counts scaled by q - 1, since scalar
    multiples share weights.  With ``blocks`` (a partition of the coordinates)
    the number of nonzero blocks of every codeword is tallied as well.
    """
    F, G, n, k = code.field, code.G, code.n, code.k
    size = F.q**k
    if size > budget:
        raise EnumerationInfeasible(f"{F.q}^{k} codewords exceed the budget of {budget}")
    binary = F.q == 2
    n_blocks = len(blocks) if blocks else 0
    if low_bits is None:
        # keep the tabulated part around a few MB
        per_row = max(n_blocks, 1) * 8 if binary else n
        low_bits = 0
        while low_bits < k and F.q ** (low_bits + 1) * per_row <= (1 << 22):
            low_bits += 1
    low_bits = min(low_bits, k)
    if binary:
        packed = _pack_bits(G)
        rows = packed
    else:
        rows = G
    lo_rows, hi_rows = rows[k - low_bits :], rows[: k - low_bits]
    low = _span_table(F, lo_rows)
    highs = _normalized_span(F, hi_rows)

    masks, block_perm, block_len = None, None, 0
    if n_blocks:
        cover = sorted(c for b in blocks for c in b)
        if cover != list(range(n)):
            raise CodeError("blocks must partition the coordinates")
        if binary:
            masks = _pack_bits(
                np.array([[1 if c in set(b) else 0 for c in range(n)] for b in blocks])
            )
        else:
            lens = {len(b) for b in blocks}
            if len(lens) == 1:
                block_len = lens.pop()
                block_perm = np.array([c for b in blocks for c in b])
            else:
                block_perm = [np.array(b) for b in blocks]
    neg = None if binary else F.neg_table

    zero_h = np.zeros((1, low.shape[1]), dtype=low.dtype)
    base_args = (binary, low, zero_h, n, neg, masks, block_perm, n_blocks, block_len)
    hist, bhist = _chunk_histograms(base_args)

    scale = F.q - 1
    if len(highs):
        jobs = max(1, min(jobs, len(highs)))
        chunks = np.array_split(highs, jobs)
        args = [(binary, low, c, n, neg, masks, block_perm, n_blocks, block_len) for c in chunks]
        if jobs == 1:
            results = [_chunk_histograms(args[0])]
        else:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                results = list(ex.map(_chunk_histograms, args))
        for h, b in results:
            hist += scale * h
            if n_blocks:
                bhist += scale * b

    histogram = {w: int(c) for w, c in enumerate(hist) if c}
    nonzero = [w for w in histogram if w > 0]
    d = min(nonzero) if nonzero else None
    omega = max(nonzero) if nonzero else 0
    report = WeightReport(d=d, histogram=histogram, size=size, omega=omega)
    if n_blocks:
        report.block_histogram = {w: int(c) for w, c in enumerate(bhist) if c}
        bnz = [w for w in report.block_histogram if w > 0]
        report.block_distance = min(bnz) if bnz else None
    return report


def all_codewords(code: LinearCode) -> np.ndarray:
    """Every codeword as a row, in message order (small codes only)."""
    F = code.field
    out = []
    for msg in itertools.product(range(F.q), repeat=code.k):
        out.append(code.encode(msg) if code.k else np.zeros(code.n, dtype=np.int64))
    return np.array(out, dtype=np.int64).reshape(-1, code.n)


def sampled_min_weight(code: LinearCode, samples: int, seed: int = 0) -> int:
    """Smallest weight seen over random nonzero messages (an upper estimate of d)."""
    rng = np.random.default_rng(seed)
    F = code.field
    msgs = rng.integers(0, F.q, size=(samples, code.k))
    msgs = msgs[msgs.any(axis=1)]
    words = matmul(F, msgs, code.G)
    return int(np.count_nonzero(words, axis=1).min())


# ---------------------------------------------------------------------------
# derived codes


def puncture_to_block(code: LinearCode, coords: Sequence[int]) -> LinearCode:
    """The code restricted to ``coords`` (in the given order), reduced to a basis."""
    S = list(coords)
    if not S:
        raise CodeError("empty coordinate set")
    if len(set(S)) != len(S) or min(S) < 0 or max(S) >= code.n:
        raise CodeError("coordinates must be distinct indices in [0, n)")
    R, _ = rref(code.field, code.G[:, S])
    return LinearCode(code.field, R.reshape(-1, len(S)), tag=f"{code.tag} punctured".strip(), check=False)


def is_subcode(sub: LinearCode, sup: LinearCode) -> bool:
    if sub.field is not sup.field or sub.n != sup.n:
        return False
    return all(sup.contains(row) for row in sub.G)


def concatenate(outer: LinearCode, inner: LinearCode, tag: str = "") -> LinearCode:
    """Concatenation of an outer code over GF(p^r) with an inner [*, r] code over GF(p).

    Outer symbols are expanded in the polynomial basis (index digits base p)
    and each digit vector is encoded by the inner code.
    """
    Fo, Fi = outer.field, inner.field
    if Fi.s != 1 or Fo.p != Fi.p:
        raise CodeError(f"{Fi} is not the prime subfield of {Fo}")
    r = Fo.s
    if inner.k != r:
        raise CodeError(f"inner dimension {inner.k} != extension degree {r}")
    p = Fi.p
    # digits of every outer symbol, encoded by the inner code: q_o x n_i table
    digits = np.array([[(v // p**j) % p for j in range(r)] for v in range(Fo.q)], dtype=np.int64)
    images = matmul(Fi, digits, inner.G)
    rows = []
    for g in outer.G:
        for j in range(r):
            beta = p**j  # x^j in the polynomial basis
            scaled = [Fo.mul(beta, int(c)) for c in g]
            rows.append(np.concatenate([images[c] for c in scaled]))
    G = np.array(rows, dtype=np.int64)
    return LinearCode(Fi, G, tag=tag or f"concat({outer.tag},{inner.tag})", check=False)


def hamming_code(qf: int, mprime: int) -> LinearCode:
    """q-ary Hamming code with m' parity symbols.

    Parity-check columns are the projective points of GF(qf)^m', each written
    with leading nonzero entry 1, in ascending lexicographic order.
    """
    if mprime < 2:
        raise CodeError("redundancy must be at least 2")
    F = field_of_order(qf)
    if qf > 256:
        raise CodeError(f"field size {qf} unsupported")
    cols = [
        v
        for v in itertools.product(range(qf), repeat=mprime)
        if any(v) and v[next(i for i, c in enumerate(v) if c)] == 1
    ]
    H = np.array(cols, dtype=np.int64).T
    G = null_space(F, H)
    return LinearCode(F, G, tag=f"Hamming({qf},{mprime})", check=False)


def single_parity_check(n: int, q: int = 2) -> LinearCode:
    """[n, n-1, 2] code: the last symbol cancels the sum of the others."""
    F = field_of_order(q)
    G = np.zeros((n - 1, n), dtype=np.int64)
    for i in range(n - 1):
        G[i, i] = 1
        G[i, n - 1] = F.neg(1)
    return LinearCode(F, G, tag=f"SPC({n})", check=False)


def trivial_code(n: int, q: int = 2) -> LinearCode:
    F = field_of_order(q)
    return LinearCode(F, np.eye(n, dtype=np.int64), tag=f"full({n})", check=False)


def shorten(code: LinearCode, coords: Sequence[int]) -> LinearCode:
    """Codewords vanishing on ``coords``, with those coordinates deleted."""
    S = sorted(set(coords))
    keep = [c for c in range(code.n) if c not in set(S)]
    F = code.field
    M = null_space(F, code.G[:, S].T) if S else np.eye(code.k, dtype=np.int64)
    if M.shape[0] == 0:
        raise CodeError("shortening leaves only the zero word")
    sub = matmul(F, M, code.G)[:, keep]
    return LinearCode(F, sub, tag=f"{code.tag} shortened".strip(), check=False)


def extend_parity(code: LinearCode) -> LinearCode:
    """Append an overall check symbol making every codeword sum to zero."""
    F = code.field
    col = np.array([[F.neg(_row_sum(F, row))] for row in code.G], dtype=np.int64).reshape(-1, 1)
    return LinearCode(F, np.hstack([code.G, col]), tag=f"{code.tag} extended".strip(), check=False)


def _row_sum(F: Field, row) -> int:
    acc = 0
    for v in row:
        acc = F.add(acc, int(v))
    return acc
