"""Lookup-table arithmetic for the small fields GF(p^k), p^k <= 256.

Elements are integers in [0, p^k). Index i encodes the polynomial whose coefficients
are the base-p digits of i, least significant digit first, so 0 and 1 are the additive
and multiplicative identities. The modulus for each (p, k) is the lexicographically
least monic irreducible polynomial (ordered by the same base-p reading of its lower
coefficients), which keeps every enumeration built on top of a field reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from typing import List, Sequence, Tuple

import numpy as np
from sympy import isprime

from .config import MAX_FIELD_ORDER


class FieldError(ValueError):
    pass


def _digits(index: int, p: int, k: int) -> List[int]:
    out = []
    for _ in range(k):
        out.append(index % p)
        index //= p
    return out


def _undigits(coeffs: Sequence[int], p: int) -> int:
    value = 0
    for c in reversed(coeffs):
        value = value * p + c
    return value


def _poly_mod(num: List[int], den: Sequence[int], p: int) -> List[int]:
    num = list(num)
    deg = len(den) - 1
    for i in range(len(num) - 1, deg - 1, -1):
        c = num[i] % p
        if c:
            for j in range(deg + 1):
                num[i - deg + j] = (num[i - deg + j] - c * den[j]) % p
    return [c % p for c in num[:deg]] + [0] * max(0, deg - len(num))


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exhaustive factor search: no monic factor of degree 1..k//2 divides modulus."""
    k = len(modulus) - 1
    if k == 1:
        return True
    for deg in range(1, k // 2 + 1):
        for lower in itertools.product(range(p), repeat=deg):
            factor = list(lower) + [1]
            if not any(_poly_mod(list(modulus), factor, p)):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, k: int) -> Tuple[int, ...]:
    for index in range(p**k):
        candidate = tuple(_digits(index, p, k)) + (1,)
        if k > 1 and candidate[0] == 0:
            continue
        if is_irreducible(candidate, p):
            return candidate
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")


@dataclass(frozen=True)
class FieldTables:
    p: int
    k: int
    modulus: Tuple[int, ...]
    add: Tuple[Tuple[int, ...], ...] = dc_field(repr=False, compare=False)
    mul: Tuple[Tuple[int, ...], ...] = dc_field(repr=False, compare=False)
    neg: Tuple[int, ...] = dc_field(repr=False, compare=False)
    inv: Tuple[int, ...] = dc_field(repr=False, compare=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def name(self) -> str:
        return f"GF({self.q})"

    @property
    def elements(self) -> range:
        return range(self.q)

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg[b]]

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv[a], -e
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul[result][base]
            base = self.mul[base][base]
            e >>= 1
        return result

    @cached_property
    def add_array(self) -> np.ndarray:
        return np.array(self.add, dtype=np.int64)

    @cached_property
    def mul_array(self) -> np.ndarray:
        return np.array(self.mul, dtype=np.int64)

    @cached_property
    def conj(self) -> Tuple[int, ...]:
        if self.k % 2:
            return tuple(self.elements)
        return tuple(frobenius(x, self) for x in self.elements)

    @cached_property
    def conj_array(self) -> np.ndarray:
        return np.array(self.conj, dtype=np.int64)

    @cached_property
    def squares(self) -> frozenset:
        return frozenset(self.mul[y][y] for y in range(1, self.q))

    @cached_property
    def least_nonsquare(self) -> int:
        if self.p == 2:
            raise FieldError("every element of an even-order field is a square")
        return min(x for x in range(1, self.q) if x not in self.squares)


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldTables:
    if not isinstance(p, int) or not isprime(p):
        raise FieldError(f"characteristic must be prime, got {p!r}")
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    q = p**k
    if q > MAX_FIELD_ORDER:
        raise FieldError(f"GF({p}^{k}) has order {q} > {MAX_FIELD_ORDER}")

    modulus = least_irreducible(p, k)
    digits = [_digits(i, p, k) for i in range(q)]

    add = tuple(
        tuple(_undigits([(x + y) % p for x, y in zip(digits[a], digits[b])], p) for b in range(q))
        for a in range(q)
    )

    def _times(a: int, b: int) -> int:
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(digits[a]):
            if x:
                for j, y in enumerate(digits[b]):
                    prod[i + j] += x * y
        return _undigits(_poly_mod(prod, modulus, p), p)

    mul = tuple(tuple(_times(a, b) for b in range(q)) for a in range(q))
    neg = tuple(next(b for b in range(q) if add[a][b] == 0) for a in range(q))
    inv = (0,) + tuple(next(b for b in range(1, q) if mul[a][b] == 1) for a in range(1, q))
    return FieldTables(p=p, k=k, modulus=modulus, add=add, mul=mul, neg=neg, inv=inv)


def field_of_order(q: int) -> FieldTables:
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            rest = q
            while rest % p == 0:
                rest //= p
                k += 1
            if rest != 1:
                raise FieldError(f"{q} is not a prime power")
            return make_field(p, k)
    raise FieldError(f"{q} is not a prime power")


def frobenius(x: int, field: FieldTables) -> int:
    """The involution x -> x^(p^(k/2)) of GF(p^k), k even."""
    if field.k % 2:
        raise FieldError(f"{field.name} has odd degree {field.k}: no involutory automorphism")
    return field.power(x, field.p ** (field.k // 2))


def is_square(x: int, field: FieldTables) -> bool:
    if field.p == 2:
        raise FieldError("square classes need an odd field order")
    if x == 0:
        raise FieldError("zero has no square class")
    return field.power(x, (field.q - 1) // 2) == 1
