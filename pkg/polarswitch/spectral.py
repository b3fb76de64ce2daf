"""Cospectrality via characteristic polynomials modulo random primes, and closed-form SRG spectra.

The adjacency matrix is reduced to upper Hessenberg form by elementary similarity
transformations over GF(p), then the characteristic polynomial is read off with the
usual recurrence along the subdiagonal. All arithmetic is int64 numpy with primes below
2^24, so a product of two residues is below 2^48 and a row sum of up to 2^15 such
products still fits.
"""

from __future__ import annotations

import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime, nextprime

from .config import CHARPOLY_MAX_VERTICES, PRIME_COUNT, PRIME_WINDOW, SEED, THREADS
from .graphs.core import Graph, srg_check
from .models import CospectralVerdict, SrgParams

logger = logging.getLogger(__name__)

Spectrum = List[Tuple[int, int]]


class SpectralError(ValueError):
    pass


class IrrationalSpectrumError(SpectralError):
    pass


@dataclass(frozen=True)
class CharPolyModP:
    prime: int
    # leading coefficient first
    coeffs: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self) -> str:
        terms = []
        for power, c in zip(range(self.degree, -1, -1), self.coeffs):
            if not c:
                continue
            coeff = "" if c == 1 and power else str(c)
            if power == 0:
                terms.append(str(c))
            elif power == 1:
                terms.append(f"{coeff}x")
            else:
                terms.append(f"{coeff}x^{power}")
        return (" + ".join(terms) or "0") + f" (mod {self.prime})"


def check_prime(prime: int, n: int) -> None:
    lo, hi = PRIME_WINDOW
    if prime >= hi:
        raise SpectralError(f"prime {prime} does not fit the int64 kernel (must be < {hi})")
    if not isprime(prime):
        raise SpectralError(f"{prime} is not prime")
    if prime <= n:
        raise SpectralError(f"prime {prime} must exceed the vertex count {n}")


def hessenberg_mod_p(matrix: np.ndarray, prime: int) -> np.ndarray:
    h = np.array(matrix, dtype=np.int64) % prime
    n = h.shape[0]
    for m in range(n - 2):
        nonzero = np.flatnonzero(h[m + 1 :, m])
        if not nonzero.size:
            continue
        pivot = m + 1 + int(nonzero[0])
        if pivot != m + 1:
            h[[pivot, m + 1], :] = h[[m + 1, pivot], :]
            h[:, [pivot, m + 1]] = h[:, [m + 1, pivot]]
        inv = pow(int(h[m + 1, m]), prime - 2, prime)
        u = h[m + 2 :, m] * inv % prime
        if not u.any():
            continue
        h[m + 2 :, :] = (h[m + 2 :, :] - u[:, None] * h[m + 1, :][None, :]) % prime
        h[:, m + 1] = (h[:, m + 1] + h[:, m + 2 :] @ u) % prime
    return h


def _hessenberg_charpoly(h: np.ndarray, prime: int) -> np.ndarray:
    """Coefficients (lowest first) of det(xI - h) for upper Hessenberg h."""
    n = h.shape[0]
    polys = np.zeros((n + 1, n + 1), dtype=np.int64)
    polys[0, 0] = 1
    for m in range(1, n + 1):
        prev = polys[m - 1]
        row = np.zeros(n + 1, dtype=np.int64)
        row[1:] = prev[:-1]
        row = (row - int(h[m - 1, m - 1]) * prev) % prime
        if m > 1:
            coefs = np.empty(m - 1, dtype=np.int64)
            run = 1
            for i in range(1, m):
                run = run * int(h[m - i, m - i - 1]) % prime
                coefs[i - 1] = run * int(h[m - i - 1, m - 1]) % prime
            row = (row - (coefs @ polys[m - 2 :: -1]) % prime) % prime
        polys[m] = row
    return polys[n]


def charpoly_mod_p(graph: Graph, prime: int) -> CharPolyModP:
    check_prime(prime, graph.n)
    if graph.n == 0:
        return CharPolyModP(prime=prime, coeffs=(1,))
    h = hessenberg_mod_p(graph.adjacency_matrix(np.int64), prime)
    low_first = _hessenberg_charpoly(h, prime)
    return CharPolyModP(prime=prime, coeffs=tuple(int(c) for c in low_first[::-1]))


def sample_primes(count: int, seed: int = SEED) -> List[int]:
    """``count`` distinct primes from the kernel window, reproducible from ``seed``."""
    if count < 1:
        raise SpectralError(f"need at least one prime, got {count}")
    lo, hi = PRIME_WINDOW
    rng = random.Random(seed)
    primes: List[int] = []
    while len(primes) < count:
        p = int(nextprime(rng.randrange(lo, hi)))
        if p < hi and p not in primes:
            primes.append(p)
    return primes


def error_bound(n: int, prime_count: int) -> float:
    """Chance that differing integer charpolys agree modulo every sampled prime."""
    if n < 2:
        return 0.0
    lo, hi = PRIME_WINDOW
    log2_bound = (math.lgamma(n + 1) + n * math.log(n)) / math.log(2)
    pool = hi / math.log(hi) - lo / math.log(lo)
    return min(1.0, log2_bound / pool) ** prime_count


def _charpoly_pair(g: Graph, h: Graph, prime: int) -> Tuple[int, bool]:
    return prime, charpoly_mod_p(g, prime).coeffs == charpoly_mod_p(h, prime).coeffs


def cospectral(
    g: Graph,
    h: Graph,
    prime_count: int = PRIME_COUNT,
    seed: int = SEED,
    *,
    force_charpoly: bool = False,
    primes: Optional[Sequence[int]] = None,
) -> CospectralVerdict:
    n = g.n
    if g.n != h.n:
        return CospectralVerdict(
            ok=False, method="vertex_count", n=max(g.n, h.n), detail=f"vertex counts {g.n} and {h.n} differ"
        )
    if n > CHARPOLY_MAX_VERTICES and not force_charpoly:
        pg, ph = srg_check(g).params, srg_check(h).params
        ok = pg is not None and pg == ph
        detail = f"both {pg}" if ok else f"parameters {pg} and {ph}; rerun with charpolys to decide"
        verdict = CospectralVerdict(ok=ok, method="srg_params", n=n, detail=detail)
        logger.info("cospectral_checked %s", {"n": n, "method": "srg_params", "ok": ok})
        return verdict

    chosen = list(primes) if primes is not None else sample_primes(prime_count, seed)
    with ThreadPoolExecutor(max_workers=THREADS) as pool:
        results = list(pool.map(lambda p: _charpoly_pair(g, h, p), chosen))
    mismatch = next((p for p, same in results if not same), None)
    verdict = CospectralVerdict(
        ok=mismatch is None,
        method="charpoly",
        n=n,
        primes=chosen,
        mismatch_prime=mismatch,
        error_bound=error_bound(n, len(chosen)) if mismatch is None else None,
        detail="" if mismatch is None else f"characteristic polynomials differ modulo {mismatch}",
    )
    logger.info(
        "cospectral_checked %s",
        {"n": n, "method": "charpoly", "primes": len(chosen), "ok": verdict.ok},
    )
    return verdict


def srg_spectrum(params: SrgParams) -> Spectrum:
    v, k, lam, mu = params.as_tuple()
    if v == 0:
        return []
    disc = (lam - mu) ** 2 + 4 * (k - mu)
    if disc < 0:
        raise SpectralError(f"{params} has a negative discriminant")
    root = math.isqrt(disc)
    if root * root != disc:
        raise IrrationalSpectrumError(f"{params} has irrational eigenvalues (discriminant {disc})")
    r2, s2 = lam - mu + root, lam - mu - root
    if r2 % 2 or s2 % 2:
        raise SpectralError(f"{params} has non-integral eigenvalues")
    r, s = r2 // 2, s2 // 2
    if r == s:
        pairs = [(k, 1), (r, v - 1)]
    else:
        f_num, g_num = -k - (v - 1) * s, k + (v - 1) * r
        if f_num % (r - s) or g_num % (r - s):
            raise SpectralError(f"{params} has non-integral multiplicities")
        pairs = [(k, 1), (r, f_num // (r - s)), (s, g_num // (r - s))]
    merged: dict = {}
    for value, mult in pairs:
        if mult < 0:
            raise SpectralError(f"{params} gives negative multiplicity for eigenvalue {value}")
        if mult:
            merged[value] = merged.get(value, 0) + mult
    return sorted(merged.items(), reverse=True)


def spectrum_polynomial_mod_p(spectrum: Spectrum, prime: int) -> CharPolyModP:
    poly = np.array([1], dtype=np.int64)
    for value, mult in spectrum:
        factor = np.array([1, (-value) % prime], dtype=np.int64)
        for _ in range(mult):
            poly = np.convolve(poly, factor) % prime
    return CharPolyModP(prime=prime, coeffs=tuple(int(c) for c in poly))


__all__ = [
    "CharPolyModP",
    "IrrationalSpectrumError",
    "SpectralError",
    "charpoly_mod_p",
    "cospectral",
    "error_bound",
    "hessenberg_mod_p",
    "sample_primes",
    "spectrum_polynomial_mod_p",
    "srg_spectrum",
]
