"""Row-echelon linear algebra over FieldTables.

Vectors are tuples of field indices. A Subspace keeps its basis in reduced row echelon
form, which is canonical: two equal subspaces have identical bases, so subspaces can be
hashed, deduplicated and compared directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, List, Sequence, Tuple

from ..field import FieldTables

Vector = Tuple[int, ...]
ProjectivePoint = Tuple[int, ...]

_ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"


def normalize(vec: Sequence[int], field: FieldTables) -> ProjectivePoint:
    for c in vec:
        if c:
            if c == 1:
                return tuple(vec)
            s = field.inv[c]
            mul = field.mul[s]
            return tuple(mul[x] for x in vec)
    raise ValueError("the zero vector is not a projective point")


def add(u: Sequence[int], v: Sequence[int], field: FieldTables) -> Vector:
    return tuple(field.add[a][b] for a, b in zip(u, v))


def axpy(c: int, x: Sequence[int], y: Sequence[int], field: FieldTables) -> Vector:
    row = field.mul[c]
    return tuple(field.add[row[a]][b] for a, b in zip(x, y))


def dot(u: Sequence[int], v: Sequence[int], field: FieldTables) -> int:
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = field.add[acc][field.mul[a][b]]
    return acc


def rref(rows: Iterable[Sequence[int]], field: FieldTables) -> Tuple[Vector, ...]:
    mat = [list(r) for r in rows]
    if not mat:
        return ()
    n = len(mat[0])
    out: List[List[int]] = []
    pivots: List[int] = []
    for col in range(n):
        pivot_row = next((i for i in range(len(mat)) if mat[i][col]), None)
        if pivot_row is None:
            continue
        row = mat.pop(pivot_row)
        s = field.inv[row[col]]
        row = [field.mul[s][x] for x in row]
        for other in itertools.chain(out, mat):
            c = other[col]
            if c:
                nc = field.neg[c]
                for j in range(n):
                    if row[j]:
                        other[j] = field.add[other[j]][field.mul[nc][row[j]]]
        out.append(row)
        pivots.append(col)
        if not mat:
            break
    return tuple(tuple(r) for r in out)


def pivot_columns(basis: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    return tuple(next(i for i, c in enumerate(row) if c) for row in basis)


def reduce_vector(vec: Sequence[int], basis: Sequence[Sequence[int]], field: FieldTables) -> Vector:
    out = list(vec)
    for row, col in zip(basis, pivot_columns(basis)):
        c = out[col]
        if c:
            nc = field.neg[c]
            for j, x in enumerate(row):
                if x:
                    out[j] = field.add[out[j]][field.mul[nc][x]]
    return tuple(out)


def nullspace(equations: Sequence[Sequence[int]], n: int, field: FieldTables) -> Tuple[Vector, ...]:
    """Basis of {x : e . x = 0 for every equation e}, in RREF."""
    reduced = rref(equations, field) if equations else ()
    pivots = pivot_columns(reduced)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        vec = [0] * n
        vec[f] = 1
        for row, col in zip(reduced, pivots):
            vec[col] = field.neg[row[f]]
        basis.append(vec)
    return rref(basis, field)


def combinations(basis: Sequence[Sequence[int]], field: FieldTables) -> Iterator[Vector]:
    """Every vector of span(basis), the zero vector included."""
    n = len(basis[0]) if basis else 0
    for coeffs in itertools.product(range(field.q), repeat=len(basis)):
        vec = (0,) * n
        for c, row in zip(coeffs, basis):
            if c:
                vec = axpy(c, row, vec, field)
        yield vec


def point_label(point: Sequence[int]) -> str:
    if all(c < len(_ALPHABET) for c in point):
        return "".join(_ALPHABET[c] for c in point)
    return ".".join(str(c) for c in point)


@dataclass(frozen=True)
class Subspace:
    n: int
    basis: Tuple[Vector, ...]
    field: FieldTables = dc_field(compare=False, hash=False, repr=False)

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], field: FieldTables, n: int | None = None) -> "Subspace":
        rows = [tuple(v) for v in vectors]
        if n is None:
            if not rows:
                raise ValueError("ambient dimension needed for the zero subspace")
            n = len(rows[0])
        return cls(n=n, basis=rref(rows, field), field=field)

    @classmethod
    def full(cls, n: int, field: FieldTables) -> "Subspace":
        return cls.span([tuple(int(i == j) for j in range(n)) for i in range(n)], field)

    @classmethod
    def zero(cls, n: int, field: FieldTables) -> "Subspace":
        return cls(n=n, basis=(), field=field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, vec: Sequence[int]) -> bool:
        return not any(reduce_vector(vec, self.basis, self.field))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def join(self, other: "Subspace | Iterable[Sequence[int]]") -> "Subspace":
        rows = other.basis if isinstance(other, Subspace) else tuple(other)
        return Subspace.span(self.basis + tuple(tuple(r) for r in rows), self.field, self.n)

    def meet(self, other: "Subspace") -> "Subspace":
        ann = self.annihilator().basis + other.annihilator().basis
        return Subspace(n=self.n, basis=nullspace(ann, self.n, self.field), field=self.field)

    def annihilator(self) -> "Subspace":
        return Subspace(n=self.n, basis=nullspace(self.basis, self.n, self.field), field=self.field)

    def points(self) -> List[ProjectivePoint]:
        if not self.basis:
            return []
        found = {normalize(v, self.field) for v in combinations(self.basis, self.field) if any(v)}
        return sorted(found)

    @property
    def label(self) -> str:
        return "|".join(point_label(row) for row in self.basis) or "0"

    def __iter__(self) -> Iterator[Vector]:
        return iter(self.basis)


def determinant(matrix: Sequence[Sequence[int]], field: FieldTables) -> int:
    mat = [list(r) for r in matrix]
    size = len(mat)
    det = 1
    for col in range(size):
        pivot = next((i for i in range(col, size) if mat[i][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = field.neg[det]
        det = field.mul[det][mat[col][col]]
        s = field.inv[mat[col][col]]
        for i in range(col + 1, size):
            c = mat[i][col]
            if c:
                f = field.neg[field.mul[c][s]]
                for j in range(col, size):
                    mat[i][j] = field.add[mat[i][j]][field.mul[f][mat[col][j]]]
    return det
