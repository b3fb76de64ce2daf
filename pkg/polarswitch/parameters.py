from __future__ import annotations

from .geometry.points import PointFilter
from .geometry.polar import FormKind, GeometryError, PolarSpace
from .models import SrgParams


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def collinearity_params(d: int, q: int, qe: int) -> SrgParams:
    """Collinearity graph of a rank-d polar space whose (d-1)-spaces lie on qe + 1 maximals."""
    if d < 2:
        raise GeometryError(f"collinearity graphs need rank >= 2, got {d}")
    top = q ** (d - 1) * qe  # q^(d-1+e)
    v = (q**d - 1) * (top + 1) // (q - 1)
    k = q * (top // q + 1) * (q ** (d - 1) - 1) // (q - 1)
    mu = (top // q + 1) * (q ** (d - 1) - 1) // (q - 1)
    lam = q - 1
    if d >= 3:
        lam += q * q * (top // (q * q) + 1) * (q ** (d - 2) - 1) // (q - 1)
    return SrgParams(v=v, k=k, lam=lam, mu=mu)


def space_collinearity_params(space: PolarSpace) -> SrgParams:
    return collinearity_params(space.d, space.q, space.qe)


def hermitian_degenerate_span_params(n: int) -> SrgParams:
    eps = 1 if n % 2 == 0 else -1
    v = 2 ** (n - 1) * (2**n - eps) // 3
    k = (2 ** (n - 1) + eps) * (2 ** (n - 2) - eps)
    lam = 3 * 2 ** (2 * n - 5) - eps * 2 ** (n - 2) - 2
    mu = 3 * 2 ** (n - 3) * (2 ** (n - 2) - eps)
    return SrgParams(v=v, k=k, lam=lam, mu=mu)


def hermitian_polarity_params(n: int) -> SrgParams:
    return hermitian_degenerate_span_params(n).complement()


def parabolic_polarity_params(d: int, q: int, eps: int) -> SrgParams:
    """One square class of non-isotropic points of O(2d+1, q), q in {3, 5}."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    if q == 3:
        v = 3**d * (3**d + eps) // 2
        k = 3 ** (d - 1) * (3**d - eps) // 2
        lam = mu = 3 ** (d - 1) * (3 ** (d - 1) - eps) // 2
        return SrgParams(v=v, k=k, lam=lam, mu=mu)
    if q == 5:
        v = 5**d * (5**d + eps) // 2
        k = 5 ** (d - 1) * (5**d - eps) // 2
        lam = 5 ** (d - 1) * (5 ** (d - 1) + eps) // 2
        mu = 5 ** (d - 1) * (5 ** (d - 1) - eps) // 2
        return SrgParams(v=v, k=k, lam=lam, mu=mu)
    raise GeometryError(f"no closed form for O(2d+1,{q}) point graphs")


def even_quadric_polarity_params(half_n: int, zeta: int) -> SrgParams:
    """Either square class of non-isotropic points of O^zeta(2m, 3), m = half_n."""
    if zeta not in (1, -1):
        raise ValueError("zeta must be +1 or -1")
    m = half_n
    v = 3 ** (m - 1) * (3**m - zeta) // 2
    k = 3 ** (m - 1) * (3 ** (m - 1) - zeta) // 2
    lam = 3 ** (m - 2) * (3 ** (m - 1) + zeta) // 2
    mu = 3 ** (m - 1) * (3 ** (m - 2) - zeta) // 2
    return SrgParams(v=v, k=k, lam=lam, mu=mu)


def grassmann_block_params(n: int, q: int) -> SrgParams:
    r = (q ** (n - 1) - 1) // (q - 1)
    v = gaussian_binomial(n, 2, q)
    return SrgParams(v=v, k=(q + 1) * (r - 1), lam=r - 2 + q * q, mu=(q + 1) ** 2)


def affine_block_params(n: int, q: int) -> SrgParams:
    r = (q**n - 1) // (q - 1)
    v = q ** (n - 1) * r
    return SrgParams(v=v, k=q * (r - 1), lam=r - 2 + (q - 1) ** 2, mu=q * q)


def polarity_params(space: PolarSpace, point_type: PointFilter | str | None = None) -> SrgParams:
    if space.kind is FormKind.HERMITIAN and space.q == 4:
        return hermitian_polarity_params(space.n)
    if space.kind is FormKind.PARABOLIC and space.q in (3, 5):
        eps = -1 if PointFilter.parse(point_type) is PointFilter.MINUS else 1
        return parabolic_polarity_params(space.d, space.q, eps)
    if space.kind in (FormKind.HYPERBOLIC, FormKind.ELLIPTIC) and space.q == 3:
        zeta = 1 if space.kind is FormKind.HYPERBOLIC else -1
        return even_quadric_polarity_params(space.n // 2, zeta)
    raise GeometryError(f"no closed form for the polarity graph of {space.name}")
