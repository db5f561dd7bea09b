"""Exact arithmetic in GF(q), q = p**u, through precomputed index tables.

Every element of a field is identified by an index in 0..q-1; the index order
is the lexicographic order of coefficient vectors (low degree first), so index
0 is always the zero element.  All products and sums are table lookups, which
keeps the linear-algebra layer free of polynomial bookkeeping.
"""

from __future__ import annotations

from typing import Iterator, Optional, Sequence

from .errors import (
    DivisionByZero,
    MixedFields,
    NonPrimeCharacteristic,
    ReducibleModulus,
    UnsupportedExtension,
)

# Irreducible moduli (coefficients low degree first) for the extension orders
# shipped with the package; other extensions need an explicit modulus.
BUILTIN_MODULI = {
    4: (1, 1, 1),         # x^2 + x + 1 over GF(2)
    8: (1, 1, 0, 1),      # x^3 + x + 1 over GF(2)
    9: (1, 0, 1),         # x^2 + 1 over GF(3)
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1 over GF(2)
    25: (2, 0, 1),        # x^2 + 2 over GF(5)
    27: (1, 2, 0, 1),     # x^3 + 2x + 1 over GF(3)
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _trim(coeffs: Sequence[int]) -> list:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_rem(num: Sequence[int], den: Sequence[int], p: int) -> list:
    """Remainder of num mod den, coefficient lists low degree first, over GF(p)."""
    num = _trim(num)
    den = _trim(den)
    inv_lead = pow(den[-1], p - 2, p)
    while len(num) >= len(den):
        factor = (num[-1] * inv_lead) % p
        shift = len(num) - len(den)
        for i, c in enumerate(den):
            num[shift + i] = (num[shift + i] - factor * c) % p
        num = _trim(num)
    return num


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] = (out[i + j] + ca * cb) % p
    return out


def _is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree up to deg/2."""
    deg = len(_trim(coeffs)) - 1
    for d in range(1, deg // 2 + 1):
        for code in range(p ** d):
            trial = []
            c = code
            for _ in range(d):
                trial.append(c % p)
                c //= p
            trial.append(1)
            if not _poly_rem(coeffs, trial, p):
                return False
    return True


class FqField:
    """Arithmetic context for GF(q) with q = p**u.

    For u > 1 a modulus (degree-u irreducible polynomial over GF(p), given as
    a coefficient list starting with the constant term) is required unless the
    order has a built-in one.  Instances are immutable and safe to share.
    """

    __slots__ = ("p", "u", "q", "modulus", "_pows", "_add", "_mul", "_neg",
                 "_inv", "_one_index")

    def __init__(self, p: int, u: int = 1, modulus: Optional[Sequence[int]] = None):
        if not _is_prime(p):
            raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
        if u < 1:
            raise UnsupportedExtension(f"extension degree must be >= 1, got {u}")
        q = p ** u
        if u == 1:
            mod = None
        else:
            if modulus is None:
                if q not in BUILTIN_MODULI:
                    raise UnsupportedExtension(
                        f"no built-in modulus for q={q}; supply one explicitly")
                modulus = BUILTIN_MODULI[q]
            mod = [c % p for c in modulus]
            if len(_trim(mod)) - 1 != u:
                raise ReducibleModulus(
                    f"modulus must have degree {u}, got {_trim(mod)}")
            # normalise to a monic representative of the same ideal
            inv_lead = pow(mod[u], p - 2, p)
            mod = tuple((c * inv_lead) % p for c in mod[: u + 1])
            if not _is_irreducible(mod, p):
                raise ReducibleModulus(f"modulus {list(mod)} factors over GF({p})")
        self.p = p
        self.u = u
        self.q = q
        self.modulus = mod
        # index <-> coefficient vector: index = sum c_i * p**(u-1-i), so the
        # index order is the lexicographic order of (c_0, ..., c_{u-1})
        self._pows = tuple(p ** (u - 1 - i) for i in range(u))
        self._build_tables()

    def _coeffs(self, index: int) -> tuple:
        out = []
        for w in self._pows:
            out.append(index // w)
            index %= w
        return tuple(out)

    def _index(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * w for c, w in zip(coeffs, self._pows))

    def _build_tables(self) -> None:
        p, q, u = self.p, self.q, self.u
        vecs = [self._coeffs(i) for i in range(q)]
        add = []
        for a in vecs:
            add.append(tuple(self._index(tuple((x + y) % p for x, y in zip(a, b)))
                             for b in vecs))
        mul = []
        for a in vecs:
            row = []
            for b in vecs:
                if u == 1:
                    row.append((a[0] * b[0]) % p)
                else:
                    prod = _poly_rem(_poly_mul(list(a), list(b), p), self.modulus, p)
                    prod += [0] * (u - len(prod))
                    row.append(self._index(prod))
            mul.append(tuple(row))
        self._add = tuple(add)
        self._mul = tuple(mul)
        self._neg = tuple(self._index(tuple((-c) % p for c in v)) for v in vecs)
        self._one_index = self._index((1,) + (0,) * (u - 1))
        one = self._one_index
        inv = [None] * q
        for i in range(1, q):
            for j in range(1, q):
                if mul[i][j] == one:
                    inv[i] = j
                    break
        self._inv = tuple(inv)

    # -- element access -----------------------------------------------------

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, self._one_index)

    def from_index(self, index: int) -> "FieldElement":
        if not 0 <= index < self.q:
            raise ValueError(f"element index {index} out of range for q={self.q}")
        return FieldElement(self, index)

    def element(self, value) -> "FieldElement":
        """Coerce an integer residue, coefficient sequence or element."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise MixedFields("element belongs to a different field")
            return FieldElement(self, value.index)
        if isinstance(value, int):
            return FieldElement(self, self._index((value,) + (0,) * (self.u - 1)))
        return FieldElement(self, self._index(tuple(value)))

    def elements(self) -> Iterator["FieldElement"]:
        for i in range(self.q):
            yield FieldElement(self, i)

    def inv_index(self, index: int) -> int:
        if index == 0:
            raise DivisionByZero("zero has no multiplicative inverse")
        return self._inv[index]

    # -- config plumbing ----------------------------------------------------

    @classmethod
    def from_dict(cls, spec: dict) -> "FqField":
        return cls(spec["p"], spec.get("u", 1), spec.get("modulus"))

    def to_dict(self) -> dict:
        out = {"p": self.p, "u": self.u}
        if self.u > 1:
            out["modulus"] = list(self.modulus)
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, FqField)
                and (self.p, self.u, self.modulus) == (other.p, other.u, other.modulus))

    def __hash__(self) -> int:
        return hash((self.p, self.u, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.q})"


class FieldElement:
    """A member of an FqField, canonical by construction."""

    __slots__ = ("field", "index")

    def __init__(self, field: FqField, index: int):
        self.field = field
        self.index = index

    @property
    def rep(self):
        """Canonical residue: an int for prime fields, a coefficient tuple else."""
        if self.field.u == 1:
            return self.index
        return self.field._coeffs(self.index)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise MixedFields("operands belong to different fields")
            return other.index
        return self.field.element(other).index

    def __add__(self, other):
        return FieldElement(self.field, self.field._add[self.index][self._coerce(other)])

    def __sub__(self, other):
        j = self._coerce(other)
        return FieldElement(self.field, self.field._add[self.index][self.field._neg[j]])

    def __mul__(self, other):
        return FieldElement(self.field, self.field._mul[self.index][self._coerce(other)])

    def __truediv__(self, other):
        j = self._coerce(other)
        if j == 0:
            raise DivisionByZero("division by the zero element")
        return FieldElement(self.field, self.field._mul[self.index][self.field._inv[j]])

    def __neg__(self):
        return FieldElement(self.field, self.field._neg[self.index])

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv_index(self.index))

    def __pow__(self, n: int) -> "FieldElement":
        out = self.field.one
        base = self
        if n < 0:
            base = base.inverse()
            n = -n
        for _ in range(n):
            out = out * base
        return out

    def __bool__(self) -> bool:
        return self.index != 0

    def __eq__(self, other) -> bool:
        return (isinstance(other, FieldElement)
                and self.field == other.field and self.index == other.index)

    def __hash__(self) -> int:
        return hash((self.field, self.index))

    def __repr__(self) -> str:
        return f"GF({self.field.q}):{self.rep}"


def multiplicative_order(a: FieldElement) -> int:
    if a.index == 0:
        raise DivisionByZero("zero has no multiplicative order")
    one = a.field._one_index
    k, cur = 1, a.index
    while cur != one:
        cur = a.field._mul[cur][a.index]
        k += 1
    return k


def primitive_element(field: FqField) -> FieldElement:
    """Smallest element (in canonical index order) generating the unit group."""
    for i in range(1, field.q):
        el = FieldElement(field, i)
        if multiplicative_order(el) == field.q - 1:
            return el
    raise RuntimeError("no primitive element found; field tables are broken")
