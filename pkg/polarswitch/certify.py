from __future__ import annotations

import hashlib
import logging
from collections import Counter
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .config import CLIQUE_FLOOR, PRIME_COUNT, SEED
from .designs import Design, design_digest, verify_design
from .graphs.core import Graph, histogram_dict, maximal_clique_sizes, maximal_cliques, srg_check, triangles
from .graphs.graph6 import graph6_encode
from .graphs.isomorphism import (
    find_isomorphism,
    four_clique_distribution,
    four_cliques_per_vertex,
    is_isomorphism,
    pair_profiles,
)
from .models import Certificate, SwitchingSetPair
from .spectral import cospectral
from .switching import validate_wqh

logger = logging.getLogger(__name__)

NON_ISOMORPHISM_INVARIANTS = ("triangles", "cliques", "pair_profiles", "four_cliques")


def graph_digest(graph: Graph) -> str:
    return hashlib.sha256(graph6_encode(graph)).hexdigest()


def _issue(claim: str, inputs: List[str], evidence: Dict[str, Any], passed: bool) -> Certificate:
    cert = Certificate(claim=claim, inputs=inputs, evidence=evidence, verdict="pass" if passed else "fail")
    logger.info(
        "certificate_issued %s",
        {"claim": claim, "invariant": evidence.get("invariant"), "verdict": cert.verdict},
    )
    return cert


# -- non-isomorphism ---------------------------------------------------------------------


def _first_outlier(items: Iterable[Tuple[Tuple[int, ...], int]], allowed: set) -> Optional[Tuple[List[int], int]]:
    for vertices, value in items:
        if value not in allowed:
            return list(vertices), value
    return None


def certify_non_isomorphic_by_triangles(g: Graph, h: Graph) -> Certificate:
    hist_g = Counter(value for *_, value in triangles(g))
    hist_h = Counter(value for *_, value in triangles(h))
    evidence: Dict[str, Any] = {
        "invariant": "triangles",
        "histogram_a": histogram_dict(hist_g),
        "histogram_b": histogram_dict(hist_h),
    }
    passed = hist_g != hist_h
    if passed:
        for name, constant, other in (("b", hist_g, h), ("a", hist_h, g)):
            if len(constant) == 1:
                found = _first_outlier((((u, v, w), c) for u, v, w, c in triangles(other)), set(constant))
                if found is not None:
                    evidence["witness"] = {"graph": name, "triangle": found[0], "common": found[1]}
                    break
    return _issue("non_isomorphic", [graph_digest(g), graph_digest(h)], evidence, passed)


def certify_non_isomorphic_by_cliques(g: Graph, h: Graph, size_floor: int = CLIQUE_FLOOR) -> Certificate:
    sizes_g = maximal_clique_sizes(g, size_floor)
    sizes_h = maximal_clique_sizes(h, size_floor)
    evidence: Dict[str, Any] = {
        "invariant": "cliques",
        "size_floor": size_floor,
        "histogram_a": histogram_dict(sizes_g),
        "histogram_b": histogram_dict(sizes_h),
    }
    passed = sizes_g != sizes_h
    if passed:
        differing = sorted(s for s in set(sizes_g) | set(sizes_h) if sizes_g[s] != sizes_h[s])
        # prefer a size the other graph has no maximal clique of
        size = next((s for s in differing if not sizes_g[s] or not sizes_h[s]), differing[0])
        name, graph = ("a", g) if sizes_g[size] > sizes_h[size] else ("b", h)
        clique = next(c for c in maximal_cliques(graph, size_floor) if len(c) == size)
        evidence["witness"] = {"graph": name, "clique": sorted(clique)}
    return _issue("non_isomorphic", [graph_digest(g), graph_digest(h)], evidence, passed)


def certify_non_isomorphic_by_pair_profiles(g: Graph, h: Graph) -> Certificate:
    prof_g, prof_h = pair_profiles(g), pair_profiles(h)
    evidence = {
        "invariant": "pair_profiles",
        "histogram_a": histogram_dict(prof_g),
        "histogram_b": histogram_dict(prof_h),
    }
    return _issue("non_isomorphic", [graph_digest(g), graph_digest(h)], evidence, prof_g != prof_h)


def certify_non_isomorphic_by_four_cliques(g: Graph, h: Graph) -> Certificate:
    dist_g, dist_h = four_clique_distribution(g), four_clique_distribution(h)
    per_g, per_h = four_cliques_per_vertex(g), four_cliques_per_vertex(h)
    evidence = {
        "invariant": "four_cliques",
        "histogram_a": histogram_dict(dist_g),
        "histogram_b": histogram_dict(dist_h),
        "per_vertex_a": histogram_dict(per_g),
        "per_vertex_b": histogram_dict(per_h),
    }
    passed = dist_g != dist_h or per_g != per_h
    return _issue("non_isomorphic", [graph_digest(g), graph_digest(h)], evidence, passed)


_INVARIANTS: Dict[str, Callable[[Graph, Graph], Certificate]] = {
    "triangles": certify_non_isomorphic_by_triangles,
    "cliques": certify_non_isomorphic_by_cliques,
    "pair_profiles": certify_non_isomorphic_by_pair_profiles,
    "four_cliques": certify_non_isomorphic_by_four_cliques,
}


def certify_non_isomorphic(
    g: Graph, h: Graph, invariants: Sequence[str] = NON_ISOMORPHISM_INVARIANTS
) -> Certificate:
    tried = []
    for name in invariants:
        if name not in _INVARIANTS:
            raise ValueError(f"unknown invariant {name!r}; choose from {sorted(_INVARIANTS)}")
        cert = _INVARIANTS[name](g, h)
        tried.append(name)
        if cert.passed:
            cert.evidence["tried"] = tried
            return cert
    return _issue(
        "non_isomorphic",
        [graph_digest(g), graph_digest(h)],
        {"invariant": "cascade", "tried": tried},
        False,
    )


# -- parameters, spectra, isomorphism ----------------------------------------------------


def certify_same_srg(g: Graph, h: Graph, *, degrees_only: bool = False) -> Certificate:
    checks = [srg_check(g, degrees_only=degrees_only), srg_check(h, degrees_only=degrees_only)]
    evidence: Dict[str, Any] = {"invariant": "srg_params", "degrees_only": degrees_only}
    for name, check in zip("ab", checks):
        evidence[f"params_{name}"] = check.params.model_dump(by_alias=True) if check.params else None
        if check.witness is not None:
            evidence[f"witness_{name}"] = check.witness
            evidence[f"reason_{name}"] = check.reason
    if degrees_only:
        degrees = [g.degrees()[0] if g.n else 0, h.degrees()[0] if h.n else 0]
        passed = checks[0].witness is None and checks[1].witness is None and g.n == h.n and degrees[0] == degrees[1]
        evidence["regular_degrees"] = degrees
    else:
        passed = checks[0].params is not None and checks[0].params == checks[1].params
    return _issue("srg_params", [graph_digest(g), graph_digest(h)], evidence, passed)


def certify_cospectral(
    g: Graph,
    h: Graph,
    prime_count: int = PRIME_COUNT,
    seed: int = SEED,
    *,
    force_charpoly: bool = False,
    primes: Optional[Sequence[int]] = None,
) -> Certificate:
    verdict = cospectral(g, h, prime_count, seed, force_charpoly=force_charpoly, primes=primes)
    evidence = {"invariant": "spectrum", "seed": seed, **verdict.model_dump()}
    return _issue("cospectral", [graph_digest(g), graph_digest(h)], evidence, verdict.ok)


def exhaustive_isomorphism(g: Graph, h: Graph, limit: Optional[int] = None) -> Certificate:
    result = find_isomorphism(g, h, limit)
    evidence = {"invariant": "exhaustive", "mapping": result.mapping, "nodes": result.nodes}
    return _issue("isomorphic", [graph_digest(g), graph_digest(h)], evidence, result.mapping is not None)


def certify_design(design: Design) -> Certificate:
    verdict = verify_design(design)
    evidence = {"invariant": "pair_counts", **verdict.model_dump(by_alias=True)}
    return _issue("design_valid", [design_digest(design)], evidence, verdict.ok)


def certify_switching(graph: Graph, pair: SwitchingSetPair) -> Certificate:
    verdict = validate_wqh(graph, pair)
    evidence = {"invariant": "wqh", "c1": pair.c1, "c2": pair.c2, **verdict.model_dump()}
    return _issue("switching_valid", [graph_digest(graph)], evidence, verdict.ok)


# -- checks by name ----------------------------------------------------------------------


CHECKS = (
    "srg",
    "cospectral",
    "triangles",
    "cliques",
    "pair_profiles",
    "four_cliques",
    "noniso",
    "isomorphic",
)


def run_check(
    name: str,
    g: Graph,
    h: Graph,
    *,
    prime_count: int = PRIME_COUNT,
    seed: int = SEED,
    degrees_only: bool = False,
    force_charpoly: bool = False,
) -> Certificate:
    key = name.strip().lower()
    if key == "srg":
        return certify_same_srg(g, h, degrees_only=degrees_only)
    if key == "cospectral":
        return certify_cospectral(g, h, prime_count, seed, force_charpoly=force_charpoly)
    if key in _INVARIANTS:
        return _INVARIANTS[key](g, h)
    if key == "noniso":
        return certify_non_isomorphic(g, h)
    if key == "isomorphic":
        return exhaustive_isomorphism(g, h)
    raise ValueError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")


# -- re-checking -------------------------------------------------------------------------


def _triangle_common(graph: Graph, triangle: Sequence[int]) -> Optional[int]:
    u, v, w = triangle
    if not (graph.has_edge(u, v) and graph.has_edge(u, w) and graph.has_edge(v, w)):
        return None
    return (graph.rows[u] & graph.rows[v] & graph.rows[w]).bit_count()


def _is_maximal_clique(graph: Graph, clique: Sequence[int]) -> bool:
    common = (1 << graph.n) - 1
    for i, u in enumerate(clique):
        if any(not graph.has_edge(u, v) for v in clique[i + 1 :]):
            return False
        common &= graph.rows[u]
    return common == 0


def _witness_holds(cert: Certificate, again: Certificate, g: Graph, h: Graph) -> bool:
    witness = cert.evidence.get("witness")
    if witness is None:
        return True
    if witness["graph"] == "a":
        graph, own_hist, other_hist = g, again.evidence.get("histogram_a", {}), again.evidence.get("histogram_b", {})
    else:
        graph, own_hist, other_hist = h, again.evidence.get("histogram_b", {}), again.evidence.get("histogram_a", {})
    if "triangle" in witness:
        value = _triangle_common(graph, witness["triangle"])
        return value == witness["common"] and str(value) not in other_hist
    if "clique" in witness:
        clique = witness["clique"]
        if not _is_maximal_clique(graph, clique):
            return False
        # the witnessed size must occur more often here than in the other graph
        size = str(len(clique))
        return own_hist.get(size, 0) > other_hist.get(size, 0)
    return False


def recheck_certificate(cert: Certificate, *graphs: Graph, design: Optional[Design] = None) -> bool:
    """Recompute the verdict of ``cert`` from its inputs and evidence; True when it reproduces."""
    if cert.claim == "design_valid":
        if design is None or design_digest(design) != cert.inputs[0]:
            return False
        return certify_design(design).verdict == cert.verdict

    if [graph_digest(gr) for gr in graphs] != cert.inputs:
        logger.info("recheck_mismatch %s", {"claim": cert.claim, "reason": "input digests"})
        return False
    evidence = cert.evidence

    if cert.claim == "switching_valid":
        pair = SwitchingSetPair(c1=evidence["c1"], c2=evidence["c2"])
        return certify_switching(graphs[0], pair).verdict == cert.verdict

    g, h = graphs
    if cert.claim == "srg_params":
        again = certify_same_srg(g, h, degrees_only=bool(evidence.get("degrees_only")))
    elif cert.claim == "cospectral":
        if evidence.get("method") == "charpoly":
            again = certify_cospectral(g, h, primes=evidence["primes"], force_charpoly=True)
        else:
            again = certify_cospectral(g, h)
    elif cert.claim == "isomorphic":
        mapping = evidence.get("mapping")
        if cert.passed:
            return mapping is not None and is_isomorphism(g, h, mapping)
        again = exhaustive_isomorphism(g, h)
    elif cert.claim == "non_isomorphic":
        invariant = evidence.get("invariant")
        if invariant == "cascade":
            again = certify_non_isomorphic(g, h, evidence.get("tried", NON_ISOMORPHISM_INVARIANTS))
        elif invariant == "cliques":
            again = certify_non_isomorphic_by_cliques(g, h, evidence.get("size_floor", CLIQUE_FLOOR))
        elif invariant in _INVARIANTS:
            again = _INVARIANTS[invariant](g, h)
        else:
            return False
        if cert.passed and not _witness_holds(cert, again, g, h):
            return False
        for key in ("histogram_a", "histogram_b", "per_vertex_a", "per_vertex_b"):
            if key in evidence and again.evidence.get(key) != evidence[key]:
                return False
    else:
        return False
    return again.verdict == cert.verdict


__all__ = [
    "CHECKS",
    "NON_ISOMORPHISM_INVARIANTS",
    "certify_cospectral",
    "certify_design",
    "certify_non_isomorphic",
    "certify_non_isomorphic_by_cliques",
    "certify_non_isomorphic_by_four_cliques",
    "certify_non_isomorphic_by_pair_profiles",
    "certify_non_isomorphic_by_triangles",
    "certify_same_srg",
    "certify_switching",
    "exhaustive_isomorphism",
    "graph_digest",
    "recheck_certificate",
    "run_check",
]
