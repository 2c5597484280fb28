"""Factories for cyclic and concatenated locally repairable codes.

Every factory returns the realised code together with the locality code L
that gives it locality, the coordinate blocks on which L sits, and the
parameters the construction predicts.  Predictions are checked, never
trusted: see :mod:`lrcodes.locality` and :mod:`lrcodes.bounds`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field as dc_field
from typing import Iterable

from .cyclic import (
    CyclicCodeSpec,
    DefiningSet,
    DefiningSetError,
    bch_bound,
    block_replicated,
    cyclotomic_coset,
    generator_from_defset,
    normalize_defset,
)
from .galois import nth_root_context, prime_power
from .linear import LinearCode, concatenate, hamming_code, single_parity_check
from .locality import contiguous_blocks, cyclic_blocks


class ConstructionError(ValueError):
    pass


@dataclass
class Predicted:
    k: int
    d: int  # lower bound
    r: int
    delta: int
    t: int | None = None

    def to_json(self) -> dict:
        return {"k": self.k, "d_lower": self.d, "r": self.r, "delta": self.delta, "t": self.t}


@dataclass
class ConstructionResult:
    name: str
    params: dict
    code: LinearCode
    locality_code: LinearCode
    blocks: list[list[int]]
    predicted: Predicted
    cyclic: CyclicCodeSpec | None = None
    locality_cyclic: CyclicCodeSpec | None = None
    notes: list[str] = dc_field(default_factory=list)

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def q(self) -> int:
        return self.code.q

    def bch(self) -> int | None:
        return bch_bound(self.cyclic.defset) if self.cyclic else None

    def to_json(self) -> dict:
        out = {
            "kind": "cyclic" if self.cyclic else "linear",
            "provenance": {"construction": self.name, "parameters": self.params},
            "code": self.code.to_json(),
            "predicted": self.predicted.to_json(),
            "locality_code": self.locality_code.to_json(),
            "blocks": self.blocks,
            "notes": list(self.notes),
        }
        if self.cyclic:
            out.update(self.cyclic.to_json())
        if self.locality_cyclic:
            out["locality_defining_set"] = self.locality_cyclic.defset.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> ConstructionResult:
        """Rebuild a result written by :meth:`to_json` (or a bare code document)."""
        code = LinearCode.from_json(data["code"] if "code" in data else data, tag="loaded")
        spec = None
        if "defining_set" in data:
            ds, closed = normalize_defset(**{k: data["defining_set"][k] for k in ("n", "q")}, raw=data["defining_set"]["residues"])
            if not closed:
                raise ConstructionError("stored defining set is not closed")
            spec = generator_from_defset(ds)
            if list(spec.generator.coeffs) != data.get("generator_polynomial", list(spec.generator.coeffs)):
                raise ConstructionError("stored generator polynomial does not match its defining set")
            if not (spec.generator_matrix() == code.G).all():
                raise ConstructionError("stored generator matrix does not match the defining set")
        L = LinearCode.from_json(data["locality_code"], tag="L") if "locality_code" in data else None
        pred = data.get("predicted")
        predicted = (
            Predicted(pred["k"], pred["d_lower"], pred["r"], pred["delta"], pred.get("t"))
            if pred
            else None
        )
        prov = data.get("provenance", {})
        return cls(
            name=prov.get("construction", "loaded"),
            params=prov.get("parameters", {}),
            code=code,
            locality_code=L,
            blocks=[list(b) for b in data.get("blocks", [])],
            predicted=predicted,
            cyclic=spec,
            notes=list(data.get("notes", [])),
        )


def _complement_of_one(n_l: int, q: int) -> DefiningSet:
    """Z_{n_l} without the q-coset of 1; its code is the constant-weight simplex-type code."""
    one = set(cyclotomic_coset(1, n_l, q))
    ds, _ = normalize_defset(n_l, q, [i for i in range(n_l) if i not in one])
    return ds


def _block_distance(L: LinearCode) -> int:
    from .linear import weight_report

    return weight_report(L).d


def _realise(name, params, n, q, D_L: DefiningSet, R: Iterable[int], predicted_fn, notes=None) -> ConstructionResult:
    n_l = D_L.n
    if n % n_l:
        raise ConstructionError(f"locality length {n_l} does not divide {n}")
    if math.gcd(n, q) != 1:
        raise ConstructionError(f"gcd({n}, {q}) != 1")
    notes = list(notes or [])
    R = list(R)
    Rds, closed = normalize_defset(n, q, R)
    if not closed:
        notes.append(f"extra residues closed under multiplication by {q}: {sorted(set(Rds.residues) - {r % n for r in R})} added")
        warnings.warn("extra residue set was not closed; its coset closure is used", stacklevel=3)
    D = Rds.union(block_replicated(n, q, n_l, D_L.residues))
    if len(D) >= n:
        raise ConstructionError(f"defining set covers Z_{n}; the code is zero")
    if n // n_l == 1:
        raise ConstructionError("a single block: the code is the locality code itself")
    ctx = nth_root_context(q, n)
    spec = generator_from_defset(D, context=ctx, tag=f"{name}{params}")
    L_spec = generator_from_defset(D_L, context=ctx.sub_context(n_l), tag="L")
    code = spec.linear_code()
    L = L_spec.linear_code()
    pred = predicted_fn(spec, L)
    if pred.k != spec.k:
        raise ConstructionError(f"realised dimension {spec.k} differs from the closed form {pred.k}")
    return ConstructionResult(
        name=name,
        params=params,
        code=code,
        locality_code=L,
        blocks=cyclic_blocks(n, n_l),
        predicted=pred,
        cyclic=spec,
        locality_cyclic=L_spec,
        notes=notes,
    )


def product_lrc(L: CyclicCodeSpec, n: int, R: Iterable[int] = ()) -> ConstructionResult:
    """Cyclic code with defining set {i : i mod n_l in D_L} united with R.

    Without R the code is the direct sum of n/n_l interleaved copies of L, so
    k = n k_l / n_l, d = d_L, and the generalized Singleton bound is met with
    d = delta.  L's locality (r, delta) is read off L itself.
    """
    from .locality import locality_availability_profile

    q = L.q
    R = list(R)
    d_L = None
    loc = None

    def predict(spec, Lc):
        nonlocal d_L, loc
        d_L = _block_distance(Lc)
        loc = locality_availability_profile(Lc, min(Lc.k, 5))
        r = loc.r if loc.r is not None else Lc.k
        d = d_L if not R else max(d_L, bch_bound(spec.defset))
        k = n * Lc.k // Lc.n if not R else spec.k
        return Predicted(k, d, r, d_L, loc.t)

    return _realise("product", {"L": L.defset.to_json(), "n": n, "R": R}, n, q, L.defset, R, predict)


def reversible_binary(m: int) -> ConstructionResult:
    """Binary code of length 2^m + 1 from three-symbol parity blocks plus the coset of 1."""
    if m % 2 == 0:
        raise ConstructionError("m must be odd so that 3 divides 2^m + 1")
    if m < 3:
        raise ConstructionError("m must be at least 3")
    n = 2**m + 1
    k = 2 * n // 3 - 2 * m
    if k <= 0:
        raise ConstructionError(f"m={m} gives dimension {k}; the code is degenerate")
    D_L, _ = normalize_defset(3, 2, [0])
    return _realise(
        "reversible",
        {"m": m},
        n,
        2,
        D_L,
        cyclotomic_coset(1, n, 2),
        lambda spec, L: Predicted(k, 10, 2, 2, 1),
    )


def simplex_lrc(a: int, m: int) -> ConstructionResult:
    """Binary code of length 2^m - 1 whose blocks are cyclic simplex codes of length 2^a - 1."""
    if a < 2:
        raise ConstructionError("a must be at least 2")
    if m % a or m <= a:
        raise ConstructionError(f"need a | m and m > a, got a={a}, m={m}")
    n = 2**m - 1
    n_l = 2**a - 1
    k = a * n // n_l - m
    if k <= 0:
        raise ConstructionError(f"dimension {k} is degenerate")
    return _realise(
        "simplex",
        {"a": a, "m": m},
        n,
        2,
        _complement_of_one(n_l, 2),
        cyclotomic_coset(1, n, 2),
        lambda spec, L: Predicted(k, 2**a + 2 ** (a - 1), 2, 2 ** (a - 1), 2 ** (a - 1) - 1),
    )


def rm_qary(q: int, m: int) -> ConstructionResult:
    """q-ary code of length q^m - 1 whose blocks are shortened first-order Reed-Muller codes."""
    prime_power(q)
    if q <= 2:
        raise ConstructionError("q must exceed 2")
    if m <= 2:
        raise ConstructionError("m must exceed 2")
    n = q**m - 1
    n_l = q * q - 1
    if n % n_l:
        raise ConstructionError(f"q^2 - 1 = {n_l} does not divide q^m - 1 = {n}")
    k = 2 * n // n_l - m
    notes = [] if m == 4 else [f"m={m}: parameters outside the worked m=4 instances"]
    return _realise(
        "rm",
        {"q": q, "m": m},
        n,
        q,
        _complement_of_one(n_l, q),
        cyclotomic_coset(1, n, q),
        lambda spec, L: Predicted(k, 2 * q * q - 2, 2, q * q - q, None),
        notes,
    )


def concatenated_rlocal(r: int) -> ConstructionResult:
    """Outer [2^r + 1, 2^r - 1, 3] Hamming code over GF(2^r), inner [r+1, r, 2] parity code."""
    if not 2 <= r <= 8:
        raise ConstructionError("r must lie in [2, 8]")
    outer = hamming_code(2**r, 2)
    inner = single_parity_check(r + 1, 2)
    code = concatenate(outer, inner, tag=f"concat(r={r})")
    n = (2**r + 1) * (r + 1)
    k = (2**r - 1) * r
    if code.n != n or code.k != k:
        raise ConstructionError(f"realised [{code.n},{code.k}] differs from the closed form [{n},{k}]")
    return ConstructionResult(
        name="concat",
        params={"r": r},
        code=code,
        locality_code=inner,
        blocks=contiguous_blocks(n, r + 1),
        predicted=Predicted(k, 6, r, 2, None),
    )


__all__ = [
    "ConstructionError",
    "ConstructionResult",
    "DefiningSetError",
    "Predicted",
    "concatenated_rlocal",
    "product_lrc",
    "reversible_binary",
    "rm_qary",
    "simplex_lrc",
]
