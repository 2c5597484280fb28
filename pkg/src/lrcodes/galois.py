"""Table-driven arithmetic in small finite fields GF(p^s).

Elements are plain integers in ``[0, q)``.  The integer encodes the element
in the polynomial basis: index ``sum(c_i * p**i)`` stands for the residue
``sum(c_i * x**i)`` modulo the field's defining polynomial.  The defining
polynomial is always primitive, so ``x`` (index ``p`` when ``s > 1``) generates
the multiplicative group and the exp/log tables are keyed to it.

:class:`Field` works on raw integers for speed; :class:`FieldElement` and
:class:`Polynomial` are thin value wrappers for callers who prefer operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 1 << 16
# full q*q add/mul tables are materialised only for fields this small
_TABLE_LIMIT = 1 << 10


class FieldError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**e``; raises if q is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    fs = prime_factors(q)
    if len(fs) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = fs[0]
    e = round(math.log(q, p))
    while p**e < q:
        e += 1
    while p**e > q:
        e -= 1
    return p, e


def multiplicative_order(q: int, n: int) -> int:
    """Smallest s >= 1 with q**s = 1 (mod n)."""
    if math.gcd(q, n) != 1:
        raise FieldError(f"gcd({n}, {q}) != 1")
    if n == 1:
        return 1
    s, x = 1, q % n
    while x != 1:
        x = (x * q) % n
        s += 1
    return s


def _digits(v: int, p: int, s: int) -> list[int]:
    out = []
    for _ in range(s):
        out.append(v % p)
        v //= p
    return out


def _undigits(ds: Sequence[int], p: int) -> int:
    v = 0
    for c in reversed(ds):
        v = v * p + c
    return v


def _power_cycle(p: int, s: int, poly: Sequence[int]) -> list[int] | None:
    """Successive powers of x modulo ``poly``; None unless x has order p^s - 1."""
    q = p**s
    if s == 1:
        # prime field: search is over the generator, encoded as -poly[0]
        g = (-poly[0]) % p
        seq = [1]
        v = g
        while v != 1:
            seq.append(v)
            v = (v * g) % p
            if len(seq) > q - 1:
                return None
        return seq if len(seq) == q - 1 else None
    # multiply by x: shift digits up, fold the overflow digit back via poly
    seq = [1]
    cur = [1] + [0] * (s - 1)
    for _ in range(q - 2):
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [(c - top * poly[i]) % p for i, c in enumerate(cur)]
        v = _undigits(cur, p)
        if v == 1:
            return None
        seq.append(v)
    top = cur[-1]
    cur = [0] + cur[:-1]
    if top:
        cur = [(c - top * poly[i]) % p for i, c in enumerate(cur)]
    return seq if _undigits(cur, p) == 1 else None


def smallest_primitive_poly(p: int, s: int) -> tuple[tuple[int, ...], list[int]]:
    """Primitive monic polynomial of degree s with the smallest integer encoding.

    Candidates are visited in order of ``sum(c_i p^i)`` over the non-leading
    coefficients, so for GF(8) this yields x^3 + x + 1.
    """
    for code in range(1, p**s):
        low = _digits(code, p, s)
        if low[0] == 0:
            continue
        poly = tuple(low) + (1,)
        cycle = _power_cycle(p, s, poly)
        if cycle is not None:
            return poly, cycle
    raise FieldError(f"no primitive polynomial of degree {s} over GF({p})")


class Field:
    """GF(p^s) with exp/log tables.

    Build instances through :func:`build_field` so that equal parameters share
    one object.
    """

    def __init__(self, p: int, s: int) -> None:
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if s < 1:
            raise FieldError("extension degree must be positive")
        if p**s > MAX_ORDER:
            raise FieldError(f"GF({p}^{s}) exceeds the supported order {MAX_ORDER}")
        self.p = p
        self.s = s
        self.q = p**s
        if s == 1 and p == 2:
            self.poly: tuple[int, ...] = (1, 1)
            cycle = [1]
        elif s == 1:
            # degree-1 polynomial x - g for the smallest primitive root g
            for g in range(2, p):
                poly = ((-g) % p, 1)
                cycle = _power_cycle(p, 1, poly)
                if cycle is not None:
                    self.poly = poly
                    break
        else:
            self.poly, cycle = smallest_primitive_poly(p, s)
        q = self.q
        self.exp = np.array(cycle + cycle, dtype=np.int64)
        self.log = np.full(q, -1, dtype=np.int64)
        self.log[np.array(cycle, dtype=np.int64)] = np.arange(q - 1)
        self._exp = [int(v) for v in self.exp]
        self._log = [int(v) for v in self.log]
        self.primitive = cycle[1] if q > 2 else 1
        self._add_tab: np.ndarray | None = None
        self._mul_tab: np.ndarray | None = None

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.s})" if self.s > 1 else f"GF({self.p})"

    def descriptor(self) -> dict:
        return {"p": self.p, "s": self.s, "defining_poly": list(self.poly)}

    @property
    def order(self) -> int:
        return self.q

    # -- scalar arithmetic on indices -------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.s == 1:
            return (a + b) % self.p
        p = self.p
        out, place = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.s == 1:
            return (-a) % self.p
        p = self.p
        out, place = 0, 1
        while a:
            out += ((-(a % p)) % p) * place
            a //= p
            place *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero")
        if a == 0:
            return 0
        return self._exp[(self._log[a] - self._log[b]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def alpha_pow(self, e: int) -> int:
        """The primitive element raised to ``e`` (any integer)."""
        return self._exp[e % (self.q - 1)]

    def element(self, v: int) -> FieldElement:
        if not 0 <= v < self.q:
            raise FieldError(f"{v} is not an element index of {self}")
        return FieldElement(self, v)

    def elements(self) -> range:
        return range(self.q)

    # -- vectorised tables ------------------------------------------------

    @property
    def add_table(self) -> np.ndarray:
        if self._add_tab is None:
            self._add_tab, self._mul_tab = self._tables()
        return self._add_tab

    @property
    def mul_table(self) -> np.ndarray:
        if self._mul_tab is None:
            self._add_tab, self._mul_tab = self._tables()
        return self._mul_tab

    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        if self.q > _TABLE_LIMIT:
            raise FieldError(f"{self} is too large for dense operation tables")
        q = self.q
        idx = np.arange(q)
        if self.p == 2:
            add = idx[:, None] ^ idx[None, :]
        else:
            add = np.zeros((q, q), dtype=np.int64)
            place = 1
            a, b = idx[:, None].copy(), idx[None, :].copy()
            for _ in range(self.s):
                add += ((a % self.p + b % self.p) % self.p) * place
                a, b = a // self.p, b // self.p
                place *= self.p
        mul = np.zeros((q, q), dtype=np.int64)
        nz = idx[1:]
        mul[1:, 1:] = self.exp[self.log[nz][:, None] + self.log[nz][None, :]]
        dt = np.uint8 if q <= 256 else np.uint16
        return add.astype(dt), mul.astype(dt)

    @property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg(a) for a in range(self.q)], dtype=self.add_table.dtype)

    @property
    def inv_table(self) -> np.ndarray:
        return np.array([0] + [self.inv(a) for a in range(1, self.q)], dtype=self.add_table.dtype)

    # -- towers -----------------------------------------------------------

    def embed(self, sub: Field) -> list[int]:
        """Index map of the subfield ``sub`` into this field.

        The image of sub's generator x is the root of sub's defining polynomial
        with the smallest discrete log, which makes the map deterministic.
        """
        if sub.p != self.p or self.s % sub.s:
            raise FieldError(f"{sub} is not a subfield of {self}")
        if sub.s == 1:
            return list(range(sub.q))
        step = (self.q - 1) // (sub.q - 1)
        for j in range(1, sub.q - 1):
            beta = self.alpha_pow(j * step)
            # prime-field digits are valid indices of the big field as they stand
            if self.eval_poly(sub.poly, beta) == 0:
                break
        else:  # pragma: no cover - a primitive root always exists
            raise FieldError("subfield root not found")
        powers = [1]
        for _ in range(sub.s - 1):
            powers.append(self.mul(powers[-1], beta))
        out = []
        for v in range(sub.q):
            acc = 0
            for c, bp in zip(_digits(v, sub.p, sub.s), powers):
                if c:
                    acc = self.add(acc, self.mul(c, bp))
            out.append(acc)
        return out

    def eval_poly(self, coeffs: Sequence[int], x: int) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc


@lru_cache(maxsize=None)
def build_field(p: int, s: int = 1) -> Field:
    """GF(p^s) with the deterministic primitive defining polynomial."""
    return Field(p, s)


def field_of_order(q: int) -> Field:
    p, e = prime_power(q)
    return build_field(p, e)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int

    def _other(self, b: FieldElement | int) -> int:
        if isinstance(b, FieldElement):
            if b.field is not self.field:
                raise FieldError(f"cannot mix {self.field} and {b.field}")
            return b.value
        return self.field.element(int(b)).value

    def __add__(self, b):
        return FieldElement(self.field, self.field.add(self.value, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return FieldElement(self.field, self.field.sub(self.value, self._other(b)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, b):
        return FieldElement(self.field, self.field.mul(self.value, self._other(b)))

    __rmul__ = __mul__

    def __truediv__(self, b):
        return FieldElement(self.field, self.field.div(self.value, self._other(b)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.field}({self.value})"


def field_arith(a: FieldElement, b: FieldElement | int | None, op: str) -> FieldElement:
    """Dispatch one of add/sub/mul/div/pow/inv by name."""
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    if not isinstance(b, FieldElement):
        raise FieldError(f"{op} needs two field elements")
    if a.field is not b.field:
        raise FieldError(f"cannot mix {a.field} and {b.field}")
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    if op not in ops:
        raise FieldError(f"unknown operation {op!r}")
    return ops[op](b)


class Polynomial:
    """Polynomial over a :class:`Field`, coefficients in ascending degree."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable[int]) -> None:
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs: tuple[int, ...] = tuple(cs)

    @classmethod
    def monomial(cls, field: Field, degree: int, coeff: int = 1) -> Polynomial:
        return cls(field, [0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and other.field is self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.field), self.coeffs))

    def __repr__(self) -> str:
        return f"Polynomial({self.field}, {list(self.coeffs)})"

    def __add__(self, other: Polynomial) -> Polynomial:
        F = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Polynomial(
            F,
            [F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)],
        )

    def __neg__(self) -> Polynomial:
        return Polynomial(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial) -> Polynomial:
        F = self.field
        if self.is_zero() or other.is_zero():
            return Polynomial(F, [])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Polynomial(F, out)

    def divmod(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead_inv = F.inv(other.coeffs[-1])
        quot = [0] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            f = F.mul(c, lead_inv)
            quot[i - dq] = f
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] = F.sub(rem[i - dq + j], F.mul(f, b))
        return Polynomial(F, quot), Polynomial(F, rem)

    def __mod__(self, other: Polynomial) -> Polynomial:
        return self.divmod(other)[1]

    def __call__(self, x: int) -> int:
        return self.field.eval_poly(self.coeffs, x)


@dataclass(frozen=True)
class RootContext:
    """Splitting-field data for length-n cyclic codes over GF(q)."""

    q: int
    n: int
    s: int
    field: Field  # GF(q^s)
    base: Field  # GF(q)
    alpha: int  # element of exact order n in ``field``

    def root(self, i: int) -> int:
        """alpha^i."""
        return self.field.pow(self.alpha, i) if self.alpha else 0

    def sub_context(self, m: int) -> RootContext:
        """Context for length ``m | n`` reusing this field, with root alpha^(n/m)."""
        if self.n % m:
            raise FieldError(f"{m} does not divide {self.n}")
        return RootContext(
            q=self.q,
            n=m,
            s=self.s,
            field=self.field,
            base=self.base,
            alpha=self.field.pow(self.alpha, self.n // m),
        )


def nth_root_context(q: int, n: int) -> RootContext:
    """Extension degree, splitting field GF(q^s) and an element of order n."""
    if n < 1:
        raise FieldError("length must be positive")
    p, e = prime_power(q)
    s = multiplicative_order(q, n)
    if q**s > MAX_ORDER:
        raise FieldError(
            f"splitting field GF({q}^{s}) for n={n} exceeds the supported order {MAX_ORDER}"
        )
    big = build_field(p, e * s)
    alpha = big.alpha_pow((big.q - 1) // n)
    return RootContext(q=q, n=n, s=s, field=big, base=build_field(p, e), alpha=alpha)
