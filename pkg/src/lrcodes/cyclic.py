"""Cyclotomic cosets, defining sets and cyclic codes.

A cyclic code of length n over GF(q) is described by its defining set: the
exponents i for which alpha^i is a root of the generator polynomial, alpha
being the order-n element chosen by :func:`~lrcodes.galois.nth_root_context`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .galois import Field, Polynomial, RootContext, field_of_order, nth_root_context


class DefiningSetError(ValueError):
    pass


def cyclotomic_coset(i: int, n: int, q: int) -> list[int]:
    """q-cyclotomic coset of i modulo n, in generation order i, iq, iq^2, ..."""
    if math.gcd(n, q) != 1:
        raise DefiningSetError(f"gcd({n}, {q}) != 1")
    i %= n
    out = [i]
    j = (i * q) % n
    while j != i:
        out.append(j)
        j = (j * q) % n
    return out


def coset_partition(n: int, q: int) -> list[list[int]]:
    """All distinct q-cyclotomic cosets modulo n, ordered by their least element."""
    seen = [False] * n
    out = []
    for i in range(n):
        if not seen[i]:
            c = cyclotomic_coset(i, n, q)
            for j in c:
                seen[j] = True
            out.append(c)
    return out


@dataclass(frozen=True)
class DefiningSet:
    n: int
    q: int
    residues: tuple[int, ...]

    def __post_init__(self):
        if any(not 0 <= r < self.n for r in self.residues):
            raise DefiningSetError("residues must lie in [0, n)")
        if list(self.residues) != sorted(set(self.residues)):
            object.__setattr__(self, "residues", tuple(sorted(set(self.residues))))

    def __contains__(self, i: int) -> bool:
        return (i % self.n) in self._members

    def __len__(self) -> int:
        return len(self.residues)

    def __iter__(self):
        return iter(self.residues)

    @cached_property
    def _members(self) -> frozenset[int]:
        return frozenset(self.residues)

    def is_closed(self) -> bool:
        return all((r * self.q) % self.n in self._members for r in self.residues)

    def shift(self, z: int) -> frozenset[int]:
        """{(i + z) mod n : i in residues}; generally not a defining set itself."""
        return frozenset((r + z) % self.n for r in self.residues)

    def union(self, other: Iterable[int]) -> DefiningSet:
        return DefiningSet(self.n, self.q, tuple(set(self.residues) | {x % self.n for x in other}))

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "residues": list(self.residues)}

    @classmethod
    def from_json(cls, data: dict) -> DefiningSet:
        ds, _ = normalize_defset(data["n"], data["q"], data["residues"])
        return ds


def normalize_defset(n: int, q: int, raw: Iterable[int]) -> tuple[DefiningSet, bool]:
    """Coset closure of ``raw`` (negatives reduced mod n) and whether it was closed."""
    given = {int(r) % n for r in raw}
    closed: set[int] = set()
    for r in given:
        if r not in closed:
            closed.update(cyclotomic_coset(r, n, q))
    return DefiningSet(n, q, tuple(sorted(closed))), closed == given


def block_replicated(n: int, q: int, n_l: int, local: Iterable[int]) -> set[int]:
    """{i in Z_n : i mod n_l in local}, the union of all n_l-shifts of ``local``."""
    if n % n_l:
        raise DefiningSetError(f"{n_l} does not divide {n}")
    loc = {x % n_l for x in local}
    return {i for i in range(n) if i % n_l in loc}


def bch_bound(ds: DefiningSet, step_search: bool = False) -> int:
    """1 + longest run b, b+c, b+2c, ... inside the defining set (indices mod n).

    With ``step_search`` the run step c ranges over all units mod n, otherwise
    c = 1.
    """
    n = ds.n
    if len(ds) == n:
        return n + 1
    steps = [c for c in range(1, n) if math.gcd(c, n) == 1] if step_search else [1]
    if n == 1:
        steps = [1]
    best = 0
    for c in steps:
        # a step-c run in ds is a unit-step run in c^{-1} * ds
        cinv = pow(c, -1, n) if n > 1 else 0
        member = [False] * n
        for r in ds.residues:
            member[(r * cinv) % n] = True
        best = max(best, _longest_circular_run(member))
    return best + 1


def _longest_circular_run(member: list[bool]) -> int:
    n = len(member)
    if all(member):
        return n
    start = member.index(False)
    best = run = 0
    for k in range(1, n + 1):
        if member[(start + k) % n]:
            run += 1
            best = max(best, run)
        else:
            run = 0
    return best


def longest_run(ds: DefiningSet) -> tuple[int, int]:
    """(start, length) of the longest unit-step run, start reported in (-n/2, n/2]."""
    n = ds.n
    member = [i in ds for i in range(n)]
    if all(member):
        return 0, n
    best = (0, 0)
    start = member.index(False)
    run = 0
    for k in range(1, n + 1):
        i = (start + k) % n
        if member[i]:
            run += 1
            if run > best[1]:
                b = (i - run + 1) % n
                best = (b - n if b > n // 2 else b, run)
        else:
            run = 0
    return best


@dataclass(frozen=True)
class CyclicCodeSpec:
    """A q-ary cyclic code realised from its defining set."""

    defset: DefiningSet
    base: Field
    context: RootContext
    generator: Polynomial  # over ``base``
    tag: str = ""

    @property
    def n(self) -> int:
        return self.defset.n

    @property
    def q(self) -> int:
        return self.defset.q

    @property
    def k(self) -> int:
        return self.n - len(self.defset)

    def generator_matrix(self) -> np.ndarray:
        """k x n matrix whose rows are the shifts X^j g(X), j < k."""
        g = np.array(self.generator.coeffs, dtype=np.int64)
        G = np.zeros((self.k, self.n), dtype=np.int64)
        for j in range(self.k):
            G[j, j : j + len(g)] = g
        return G

    def linear_code(self):
        from .linear import LinearCode

        return LinearCode(self.base, self.generator_matrix(), tag=self.tag, check=False)

    def roots_vanish(self) -> list[int]:
        """Exponents i in [0, n) with g(alpha^i) = 0, by direct evaluation."""
        big = self.context.field
        emb = self.context.field.embed(self.base)
        lifted = [emb[c] for c in self.generator.coeffs]
        return [i for i in range(self.n) if big.eval_poly(lifted, self.context.root(i)) == 0]

    def divides_xn_minus_1(self) -> bool:
        F = self.base
        xn1 = Polynomial(F, [F.neg(1)] + [0] * (self.n - 1) + [1])
        return (xn1 % self.generator).is_zero()

    def to_json(self) -> dict:
        return {
            "defining_set": self.defset.to_json(),
            "generator_polynomial": list(self.generator.coeffs),
        }


def generator_from_defset(
    ds: DefiningSet,
    base: Field | None = None,
    context: RootContext | None = None,
    tag: str = "",
) -> CyclicCodeSpec:
    """g(X) = prod_{i in ds} (X - alpha^i), pulled back to GF(q).

    ``context`` overrides the default root of unity; pass
    ``parent.sub_context(n)`` to realise a block code whose root is a power of
    a longer code's root.
    """
    if base is None:
        base = field_of_order(ds.q)
    if base.q != ds.q:
        raise DefiningSetError(f"defining set is for q={ds.q}, field is {base}")
    if math.gcd(ds.n, ds.q) != 1:
        raise DefiningSetError(f"gcd({ds.n}, {ds.q}) != 1")
    if not ds.is_closed():
        raise DefiningSetError("defining set is not closed under multiplication by q")
    if len(ds) == ds.n:
        raise DefiningSetError("defining set covers Z_n; the code would be zero")
    if context is None:
        context = nth_root_context(ds.q, ds.n)
    elif context.n != ds.n or context.q != ds.q:
        raise DefiningSetError("root context does not match the defining set")
    big = context.field
    coeffs = [1]
    for i in ds.residues:
        # multiply by (X - a)
        a = big.neg(context.root(i))
        nxt = [0] * (len(coeffs) + 1)
        for j, c in enumerate(coeffs):
            nxt[j + 1] = big.add(nxt[j + 1], c)
            nxt[j] = big.add(nxt[j], big.mul(c, a))
        coeffs = nxt
    back = {v: i for i, v in enumerate(big.embed(base))}
    try:
        small = [back[c] for c in coeffs]
    except KeyError:
        raise DefiningSetError("generator coefficients leave the base field") from None
    return CyclicCodeSpec(ds, base, context, Polynomial(base, small), tag=tag)


def cyclic_code(n: int, q: int, residues: Iterable[int], tag: str = "") -> CyclicCodeSpec:
    ds, closed = normalize_defset(n, q, residues)
    if not closed:
        raise DefiningSetError("defining set is not closed under multiplication by q")
    return generator_from_defset(ds, tag=tag)
