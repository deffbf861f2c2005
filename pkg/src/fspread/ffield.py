"""Exact arithmetic in F_q for odd prime powers q.

Elements of F_q = F_p[x]/(f) are stored by an integer code
``c_0 + c_1 p + ... + c_{k-1} p^{k-1}`` where ``c_i`` is the coefficient of
``x^i``.  Codes are the canonical order used everywhere in the package: the
"smaller" of two elements is the one with the smaller code, and so the prime
subfield F_p sits at codes ``0..p-1``.

Scalar arithmetic goes through :class:`FieldElement`.  Bulk work (Gram
matrices over thousands of projective points) goes through the lookup tables
on :class:`FieldSpec`, which act on numpy arrays of codes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CharacteristicTwo,
    DivisionByZero,
    FieldMismatch,
    MathPreconditionError,
    NotASquare,
    NotIrreducible,
    NotPrime,
)

__all__ = [
    "FieldSpec",
    "FieldElement",
    "make_field",
    "is_prime",
    "prime_power",
    "is_square",
    "sqrt",
    "primitive_element",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``, or raise NotPrime."""
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            r = q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1 or not is_prime(p):
                raise NotPrime(f"{q} is not a prime power")
            return p, k
    raise NotPrime(f"{q} is not a prime power")


# --- polynomials over F_p, coefficient lists low degree first ---------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    m = _trim([c % p for c in m])
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        shift = len(a) - len(m)
        factor = a[-1] * inv_lead % p
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * c) % p
        _trim(a)
    return a


def _monic_polys(p: int, degree: int) -> Iterable[list[int]]:
    # lower coefficients run through codes 0..p^degree-1 in order
    for code in range(p**degree):
        yield [(code // p**i) % p for i in range(degree)] + [1]


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    k = len(f) - 1
    for d in range(1, k // 2 + 1):
        for g in _monic_polys(p, d):
            if not _poly_mod(f, g, p):
                return False
    return True


# --- the field --------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """F_q with q = p^k, realised as F_p[x] modulo a monic irreducible."""

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.k

    def __repr__(self) -> str:
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}, modulus={list(self.modulus)})"

    # construction of elements
    def __call__(self, value: int | Sequence[int] | "FieldElement") -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value!r} does not belong to {self!r}")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, int(value) % self.p)
        coeffs = list(value)
        if len(coeffs) > self.k:
            raise MathPreconditionError(f"too many coefficients for {self!r}: {coeffs}")
        return self.from_code(self.code_of(coeffs))

    def from_code(self, code: int) -> "FieldElement":
        if not 0 <= code < self.q:
            raise MathPreconditionError(f"code {code} out of range for {self!r}")
        return FieldElement(self, int(code))

    def code_of(self, coeffs: Sequence[int]) -> int:
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def coeffs_of(self, code: int) -> list[int]:
        return [(code // self.p**i) % self.p for i in range(self.k)]

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, c) for c in range(self.q)]

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    # code level scalar arithmetic
    def _add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return int(self.add_table[a, b])

    def _mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        return int(self.mul_table[a, b])

    def _poly_mul(self, a: int, b: int) -> int:
        ca, cb = self.coeffs_of(a), self.coeffs_of(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.code_of(_poly_mod(prod, self.modulus, self.p))

    # lookup tables for vectorised arithmetic on code arrays
    @cached_property
    def dtype(self) -> np.dtype:
        return np.dtype(np.uint8 if self.q <= 256 else np.int32)

    @cached_property
    def add_table(self) -> np.ndarray:
        a = np.arange(self.q)
        digits_a = np.stack([(a // self.p**i) % self.p for i in range(self.k)])
        total = np.zeros((self.q, self.q), dtype=np.int64)
        for i in range(self.k):
            s = (digits_a[i][:, None] + digits_a[i][None, :]) % self.p
            total += s * self.p**i
        return total.astype(self.dtype)

    @cached_property
    def mul_table(self) -> np.ndarray:
        if self.k == 1:
            a = np.arange(self.q, dtype=np.int64)
            return (np.outer(a, a) % self.p).astype(self.dtype)
        t = np.zeros((self.q, self.q), dtype=self.dtype)
        for a in range(self.q):
            for b in range(a, self.q):
                t[a, b] = t[b, a] = self._poly_mul(a, b)
        return t

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.argmin(self.add_table, axis=1).astype(self.dtype)

    @cached_property
    def inv_table(self) -> np.ndarray:
        # entry 0 is a placeholder; callers must mask zeros themselves
        inv = np.argmax(self.mul_table == 1, axis=1).astype(self.dtype)
        inv[0] = 0
        return inv

    @cached_property
    def square_table(self) -> np.ndarray:
        """Boolean mask over codes: True where the element is a square."""
        mask = np.zeros(self.q, dtype=bool)
        mask[np.diagonal(self.mul_table)] = True
        return mask

    @cached_property
    def _sqrt_map(self) -> dict[int, int]:
        roots: dict[int, int] = {}
        for b in range(self.q):
            roots.setdefault(self._mul(b, b), b)
        return roots

    @cached_property
    def _primitive_code(self) -> int:
        for g in range(1, self.q):
            x, order = g, 1
            while x != 1:
                x = self._mul(x, g)
                order += 1
            if order == self.q - 1:
                return g
        raise AssertionError("F_q* is cyclic; no generator found")

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict | str) -> "FieldSpec":
        if isinstance(data, str):
            data = json.loads(data)
        return make_field(data["p"], data.get("k", 1), data.get("modulus"))


def make_field(p: int, k: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Build F_{p^k}.

    Without ``modulus`` and ``k > 1`` the first monic irreducible of degree k
    in code order of its lower coefficients is used, so the choice is
    reproducible.
    """
    if p == 2:
        raise CharacteristicTwo("characteristic two is not supported")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise MathPreconditionError(f"extension degree must be >= 1, got {k}")
    if k == 1:
        return FieldSpec(p, 1, (0, 1))
    if modulus is None:
        for f in _monic_polys(p, k):
            if _is_irreducible(f, p):
                return FieldSpec(p, k, tuple(f))
        raise AssertionError("irreducible polynomials exist in every degree")
    f = [int(c) % p for c in modulus]
    if len(f) != k + 1 or f[-1] != 1:
        raise NotIrreducible(f"modulus {list(modulus)} is not monic of degree {k}")
    if not _is_irreducible(f, p):
        raise NotIrreducible(f"modulus {list(modulus)} is reducible over F_{p}")
    return FieldSpec(p, k, tuple(f))


class FieldElement:
    """An immutable element of a :class:`FieldSpec`."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldSpec, code: int):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "code", code)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self) -> list[int]:
        return self.field.coeffs_of(self.code)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.code
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field._add(self.code, b))

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        if f.k == 1:
            return FieldElement(f, -self.code % f.p)
        return FieldElement(f, int(f.neg_table[self.code]))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self + (-FieldElement(self.field, b))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field._mul(self.code, b))

    __rmul__ = __mul__

    def inv(self) -> "FieldElement":
        if self.code == 0:
            raise DivisionByZero("0 has no inverse")
        f = self.field
        if f.k == 1:
            return FieldElement(f, pow(self.code, f.p - 2, f.p))
        return FieldElement(f, int(f.inv_table[self.code]))

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self * FieldElement(self.field, b).inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, e: int):
        if not isinstance(e, (int, np.integer)):
            return NotImplemented
        e = int(e)
        base = self
        if e < 0:
            base, e = self.inv(), -e
        result = self.field.one
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == int(other) % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.code))

    def __lt__(self, other: "FieldElement") -> bool:
        return self.code < self._coerce(other)

    def __bool__(self) -> bool:
        return self.code != 0

    def __int__(self) -> int:
        return self.code

    def __repr__(self) -> str:
        if self.field.k == 1:
            return f"{self.code} (mod {self.field.p})"
        return f"{self.coeffs} in {self.field!r}"

    def is_square(self) -> bool:
        return is_square(self)

    def sqrt(self) -> "FieldElement":
        return sqrt(self)


def is_square(a: FieldElement) -> bool:
    """Euler's criterion, with 0 counted as a square."""
    if a.code == 0:
        return True
    return a ** ((a.field.q - 1) // 2) == 1


def sqrt(a: FieldElement) -> FieldElement:
    """The smaller (by code) of the two square roots of ``a``."""
    root = a.field._sqrt_map.get(a.code)
    if root is None:
        raise NotASquare(f"{a!r} is not a square")
    return FieldElement(a.field, root)


def primitive_element(spec: FieldSpec) -> FieldElement:
    """The generator of F_q* with the smallest code."""
    return FieldElement(spec, spec._primitive_code)


def all_fields(max_q: int) -> list[FieldSpec]:
    """Every odd prime power field up to ``max_q``, ascending."""
    out = []
    for q in range(3, max_q + 1):
        try:
            p, k = prime_power(q)
        except NotPrime:
            continue
        if p != 2:
            out.append(make_field(p, k))
    return out

