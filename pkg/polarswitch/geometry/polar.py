"""Forms, perps and point/line classification for the finite classical polar spaces.

Coordinates run 0..n-1 and hyperbolic pairs are (i, n-1-i). Standard forms:

    symplectic   B(x, y) = sum_{i<d} x_i y_{n-1-i} - x_{n-1-i} y_i
    hyperbolic   s(x) = sum_{i<d} x_i x_{n-1-i}                      n = 2d
    parabolic    s(x) = x_d^2 + sum_{i<d} x_i x_{n-1-i}              n = 2d+1
    elliptic     s(x) = sum_{i<d} x_i x_{n-1-i} + x_d^2 - v x_{d+1}^2  n = 2d+2, v least non-square
    hermitian    H(x, y) = sum_i x_i conj(y_i)                       q a square

Quadratic kinds carry the polar form B(x, y) = s(x+y) - s(x) - s(y) as their Gram matrix.
The parabolic form is calibrated so that s(x) square <=> x^perp hyperbolic; the
constructor re-checks this on one point of each class.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from enum import Enum
from functools import lru_cache
from math import isqrt
from typing import Optional, Sequence, Tuple

from ..field import FieldError, FieldTables, field_of_order, is_square
from .linalg import Subspace, Vector, determinant, nullspace

logger = logging.getLogger(__name__)


class GeometryError(ValueError):
    pass


class FormKind(str, Enum):
    SYMPLECTIC = "symplectic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    HERMITIAN = "hermitian"

    @property
    def quadratic(self) -> bool:
        return self in (FormKind.PARABOLIC, FormKind.HYPERBOLIC, FormKind.ELLIPTIC)

    @classmethod
    def parse(cls, text: str) -> "FormKind":
        key = str(text or "").strip().lower()
        if key in _KIND_ALIASES:
            return _KIND_ALIASES[key]
        try:
            return cls(key)
        except ValueError as exc:
            raise GeometryError(f"unknown polar space kind: {text!r}") from exc


_KIND_ALIASES = {
    "sp": FormKind.SYMPLECTIC,
    "o": FormKind.PARABOLIC,
    "o+": FormKind.HYPERBOLIC,
    "o-": FormKind.ELLIPTIC,
    "u": FormKind.HERMITIAN,
}


class PointClass(str, Enum):
    ISOTROPIC = "isotropic"
    NONISOTROPIC = "nonisotropic"
    PLUS = "nonisotropic_plus"
    MINUS = "nonisotropic_minus"


class LineClass(str, Enum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    TANGENT = "tangent"
    TOTALLY_ISOTROPIC = "totally_isotropic"
    HERMITIAN_NONDEG = "hermitian_nondeg"
    HERMITIAN_TANGENT = "hermitian_tangent"


@dataclass(frozen=True)
class PolarSpace:
    kind: FormKind
    n: int
    field: FieldTables = dc_field(repr=False)
    gram: Tuple[Tuple[int, ...], ...] = dc_field(repr=False)
    quad: Optional[Tuple[Tuple[int, ...], ...]] = dc_field(default=None, repr=False)
    d: int = 0
    # q^e: every isotropic (d-1)-space lies in qe + 1 maximals. Kept as the integer q^e so
    # the hermitian half-integer exponents need no fractions.
    qe: int = 1

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def name(self) -> str:
        if self.kind is FormKind.HERMITIAN:
            return f"U({self.n},{isqrt(self.q)})"
        prefix = {
            FormKind.SYMPLECTIC: "Sp",
            FormKind.PARABOLIC: "O",
            FormKind.HYPERBOLIC: "O+",
            FormKind.ELLIPTIC: "O-",
        }[self.kind]
        return f"{prefix}({self.n},{self.q})"


def _pair_gram(n: int, d: int, field: FieldTables, alternating: bool) -> list:
    gram = [[0] * n for _ in range(n)]
    for i in range(d):
        j = n - 1 - i
        gram[i][j] = 1
        gram[j][i] = field.neg[1] if alternating else 1
    return gram


def _quad_to_gram(quad: Sequence[Sequence[int]], field: FieldTables) -> Tuple[Tuple[int, ...], ...]:
    n = len(quad)
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            c = quad[i][j]
            if not c:
                continue
            if i == j:
                gram[i][i] = field.add[c][c]
            else:
                gram[i][j] = field.add[gram[i][j]][c]
                gram[j][i] = field.add[gram[j][i]][c]
    return tuple(tuple(r) for r in gram)


@lru_cache(maxsize=None)
def standard_space(kind: FormKind | str, n: int, q: int) -> PolarSpace:
    kind = FormKind.parse(kind) if not isinstance(kind, FormKind) else kind
    try:
        field = field_of_order(q)
    except FieldError as exc:
        raise GeometryError(str(exc)) from exc

    if kind.quadratic and field.p == 2:
        raise GeometryError(f"{kind.value} quadrics need odd q, got q={q}")

    if kind is FormKind.SYMPLECTIC:
        if n < 2 or n % 2:
            raise GeometryError(f"symplectic spaces need even n >= 2, got {n}")
        d = n // 2
        gram = tuple(tuple(r) for r in _pair_gram(n, d, field, alternating=True))
        space = PolarSpace(kind=kind, n=n, field=field, gram=gram, d=d, qe=q)
    elif kind is FormKind.HERMITIAN:
        root = isqrt(q)
        if field.k % 2 or root * root != q:
            raise GeometryError(f"hermitian spaces need a square field order, got q={q}")
        if n < 2:
            raise GeometryError(f"hermitian spaces need n >= 2, got {n}")
        gram = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        d = n // 2
        qe = root if n % 2 == 0 else q * root
        space = PolarSpace(kind=kind, n=n, field=field, gram=gram, d=d, qe=qe)
    else:
        quad = [[0] * n for _ in range(n)]
        if kind is FormKind.HYPERBOLIC:
            if n < 2 or n % 2:
                raise GeometryError(f"hyperbolic quadrics need even n >= 2, got {n}")
            d, qe = n // 2, 1
        elif kind is FormKind.PARABOLIC:
            if n < 3 or n % 2 == 0:
                raise GeometryError(f"parabolic quadrics need odd n >= 3, got {n}")
            d, qe = (n - 1) // 2, q
            quad[d][d] = 1
        else:
            if n < 2 or n % 2:
                raise GeometryError(f"elliptic quadrics need even n >= 2, got {n}")
            d, qe = n // 2 - 1, q * q
            quad[d][d] = 1
            quad[d + 1][d + 1] = field.neg[field.least_nonsquare]
        for i in range(d):
            quad[i][n - 1 - i] = 1
        quad_t = tuple(tuple(r) for r in quad)
        space = PolarSpace(
            kind=kind,
            n=n,
            field=field,
            gram=_quad_to_gram(quad_t, field),
            quad=quad_t,
            d=d,
            qe=qe,
        )
        if kind is FormKind.PARABOLIC:
            _check_parabolic_calibration(space)

    logger.debug("polar_space_built %s", {"space": space.name, "rank": space.d, "qe": space.qe})
    return space


def _check_parabolic_calibration(space: PolarSpace) -> None:
    n, field = space.n, space.field
    for value, expected in ((1, "hyperbolic"), (field.least_nonsquare, "elliptic")):
        x = [0] * n
        x[0], x[n - 1] = 1, value
        got = witt_type(space, perp(space, Subspace.span([x], field)))
        if got != expected:
            raise GeometryError(
                f"{space.name}: point with form value {value} has {got} perp, expected {expected}"
            )


def form(space: PolarSpace, x: Sequence[int], y: Sequence[int]) -> int:
    field = space.field
    add, mul = field.add, field.mul
    conj = field.conj if space.kind is FormKind.HERMITIAN else None
    acc = 0
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = space.gram[i]
        for j, yj in enumerate(y):
            g = row[j]
            if g and yj:
                if conj is not None:
                    yj = conj[yj]
                acc = add[acc][mul[mul[xi][g]][yj]]
    return acc


def evaluate(space: PolarSpace, x: Sequence[int]) -> int:
    """s(x) for quadrics, H(x, x) for hermitian spaces, 0 for symplectic ones."""
    if space.kind is FormKind.SYMPLECTIC:
        return 0
    if space.kind is FormKind.HERMITIAN:
        return form(space, x, x)
    add, mul = space.field.add, space.field.mul
    acc = 0
    for i, row in enumerate(space.quad):
        xi = x[i]
        if not xi:
            continue
        for j in range(i, space.n):
            c = row[j]
            if c and x[j]:
                acc = add[acc][mul[mul[c][xi]][x[j]]]
    return acc


def is_isotropic(space: PolarSpace, x: Sequence[int]) -> bool:
    return evaluate(space, x) == 0


def perp(space: PolarSpace, s: Subspace) -> Subspace:
    """{y : B(x, y) = 0 for all x in s}; dim = n - dim s for non-degenerate forms."""
    field = space.field
    add, mul = field.add, field.mul
    equations = []
    for v in s.basis:
        coeffs = [0] * space.n
        for i, vi in enumerate(v):
            if vi:
                for j, g in enumerate(space.gram[i]):
                    if g:
                        coeffs[j] = add[coeffs[j]][mul[vi][g]]
        equations.append(coeffs)
    basis = nullspace(equations, space.n, field)
    if space.kind is FormKind.HERMITIAN:
        # The equations are linear in conj(y).
        conj = field.conj
        basis = tuple(tuple(conj[c] for c in row) for row in basis)
    return Subspace.span(basis, field, space.n)


def radical(space: PolarSpace, s: Subspace) -> Subspace:
    return s.meet(perp(space, s))


def restricted_gram(space: PolarSpace, vectors: Sequence[Vector]) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(form(space, u, v) for v in vectors) for u in vectors)


def is_totally_isotropic(space: PolarSpace, s: Subspace) -> bool:
    return not any(any(row) for row in restricted_gram(space, s.basis))


def is_degenerate(space: PolarSpace, s: Subspace) -> bool:
    return radical(space, s).dim > 0


def classify_point(space: PolarSpace, x: Sequence[int]) -> PointClass:
    value = evaluate(space, x)
    if value == 0:
        return PointClass.ISOTROPIC
    if space.kind.quadratic:
        return PointClass.PLUS if is_square(value, space.field) else PointClass.MINUS
    return PointClass.NONISOTROPIC


def _count_isotropic(space: PolarSpace, s: Subspace) -> int:
    return sum(1 for pt in s.points() if is_isotropic(space, pt))


def classify_line(space: PolarSpace, line: Subspace) -> LineClass:
    if line.dim != 2:
        raise GeometryError(f"expected a line (dimension 2), got dimension {line.dim}")
    if space.kind is FormKind.SYMPLECTIC:
        return LineClass.TOTALLY_ISOTROPIC if is_totally_isotropic(space, line) else LineClass.HYPERBOLIC
    count = _count_isotropic(space, line)
    q = space.q
    if count == q + 1:
        return LineClass.TOTALLY_ISOTROPIC
    if space.kind is FormKind.HERMITIAN:
        if count == 1:
            return LineClass.HERMITIAN_TANGENT
        if count == isqrt(q) + 1:
            return LineClass.HERMITIAN_NONDEG
    else:
        if count == 2:
            return LineClass.HYPERBOLIC
        if count == 0:
            return LineClass.ELLIPTIC
        if count == 1:
            return LineClass.TANGENT
    raise GeometryError(f"{space.name}: line {line.label} has {count} isotropic points")


def complement_vectors(big: Subspace, small: Subspace) -> Tuple[Vector, ...]:
    current = small
    chosen = []
    for row in big.basis:
        if not current.contains(row):
            chosen.append(row)
            current = current.join([row])
    return tuple(chosen)


def quotient_line(space: PolarSpace, P: Subspace, p: Subspace) -> LineClass:
    """Type of the non-degenerate line P/p, computed on coset representatives."""
    if P.dim != p.dim + 2 or not P.contains_subspace(p):
        raise GeometryError("P must contain p with codimension 2")
    if radical(space, P) != p:
        raise GeometryError(f"{p.label} is not the radical of {P.label}")
    reps = complement_vectors(P, p)
    return classify_line(space, Subspace.span(reps, space.field, space.n))


def witt_type(space: PolarSpace, s: Subspace) -> str:
    """hyperbolic / elliptic for a non-degenerate even-dimensional quadratic subspace."""
    if not space.kind.quadratic:
        raise GeometryError("Witt type is defined here for quadratic forms only")
    if s.dim % 2:
        raise GeometryError(f"Witt type needs even dimension, got {s.dim}")
    det = determinant(restricted_gram(space, s.basis), space.field)
    if det == 0:
        raise GeometryError(f"subspace {s.label} is degenerate")
    field = space.field
    sign = 1 if (s.dim // 2) % 2 == 0 else field.neg[1]
    return "hyperbolic" if is_square(field.mul[sign][det], field) else "elliptic"


def subspace_type(space: PolarSpace, s: Subspace) -> str:
    if s.dim == 0:
        return "zero"
    if is_degenerate(space, s):
        return "degenerate"
    if space.kind is FormKind.HERMITIAN:
        return "hermitian"
    if space.kind is FormKind.SYMPLECTIC:
        return "symplectic"
    if s.dim % 2:
        return "parabolic"
    return witt_type(space, s)


def span_type(space: PolarSpace, points: Sequence[Sequence[int]]) -> str:
    for i, x in enumerate(points):
        if is_isotropic(space, x):
            raise GeometryError(f"point {x} is isotropic")
        for y in points[i + 1 :]:
            if form(space, x, y):
                raise GeometryError(f"points {x} and {y} are not orthogonal")
    return subspace_type(space, Subspace.span(points, space.field, space.n))
