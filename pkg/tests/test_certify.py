import networkx as nx
import pytest

from conftest import graph_from_nx, plant_wqh, rook_graph, shrikhande_graph
from polarswitch.certify import (
    CHECKS,
    NON_ISOMORPHISM_INVARIANTS,
    certify_cospectral,
    certify_design,
    certify_non_isomorphic,
    certify_non_isomorphic_by_cliques,
    certify_non_isomorphic_by_four_cliques,
    certify_non_isomorphic_by_pair_profiles,
    certify_non_isomorphic_by_triangles,
    certify_same_srg,
    certify_switching,
    exhaustive_isomorphism,
    graph_digest,
    recheck_certificate,
    run_check,
)
from polarswitch.designs import block_graph, grassmann_design
from polarswitch.geometry.polar import standard_space
from polarswitch.graphs.builders import collinearity_graph
from polarswitch.graphs.core import Graph, complement
from polarswitch.models import SwitchingSetPair
from polarswitch.switching import (
    apply_wqh,
    collinearity_switch_from,
    design_switch_set,
    find_collinearity_configuration,
    find_design_configuration,
)


@pytest.fixture(scope="module")
def pg32_pair():
    design = grassmann_design(4, 2)
    config = find_design_configuration(design)
    g = block_graph(design)
    return g, apply_wqh(g, design_switch_set(design, config.embedding, config.p1, config.p2))


def test_digest_ignores_labels(petersen):
    assert graph_digest(petersen) == graph_digest(petersen.with_labels([str(i) for i in range(10)]))
    assert len(graph_digest(petersen)) == 64


def test_same_srg_passes_for_shrikhande_and_rook(shrikhande, rook):
    cert = certify_same_srg(shrikhande, rook)
    assert cert.passed and cert.claim == "srg_params"
    assert cert.evidence["params_a"] == {"v": 16, "k": 6, "lambda": 2, "mu": 2}
    assert cert.inputs == [graph_digest(shrikhande), graph_digest(rook)]
    assert recheck_certificate(cert, shrikhande, rook)


def test_same_srg_fails_with_witness():
    cert = certify_same_srg(Graph.path(4), Graph.cycle(4))
    assert not cert.passed
    assert cert.evidence["witness_a"] == [0, 1]


def test_same_srg_by_degrees_only(petersen):
    cert = certify_same_srg(petersen, Graph.cycle(10), degrees_only=True)
    assert not cert.passed
    cert = certify_same_srg(petersen, petersen, degrees_only=True)
    assert cert.passed and cert.evidence["regular_degrees"] == [3, 3]


def test_triangle_certificate_on_shrikhande_and_rook(shrikhande, rook):
    cert = certify_non_isomorphic_by_triangles(shrikhande, rook)
    assert cert.passed
    assert cert.evidence["histogram_a"] == {"0": 32}
    assert cert.evidence["histogram_b"] == {"1": 32}
    witness = cert.evidence["witness"]
    assert witness["graph"] == "b" and witness["common"] == 1
    assert recheck_certificate(cert, shrikhande, rook)


def test_tampered_witness_is_caught(shrikhande, rook):
    cert = certify_non_isomorphic_by_triangles(shrikhande, rook)
    bad = cert.model_copy(deep=True)
    bad.evidence["witness"]["triangle"] = [0, 1, 5]
    assert not recheck_certificate(bad, shrikhande, rook)
    bad = cert.model_copy(deep=True)
    bad.evidence["histogram_b"] = {"1": 31}
    assert not recheck_certificate(bad, shrikhande, rook)


def test_recheck_needs_the_same_inputs(shrikhande, rook, petersen):
    cert = certify_same_srg(shrikhande, rook)
    assert not recheck_certificate(cert, rook, shrikhande)
    assert not recheck_certificate(cert, shrikhande, petersen)


def test_other_invariants_on_shrikhande_and_rook(shrikhande, rook):
    for certify in (
        certify_non_isomorphic_by_cliques,
        certify_non_isomorphic_by_pair_profiles,
        certify_non_isomorphic_by_four_cliques,
    ):
        cert = certify(shrikhande, rook)
        assert cert.passed, cert.evidence["invariant"]
        assert recheck_certificate(cert, shrikhande, rook)


def test_clique_witness_on_switched_block_graph(pg32_pair):
    g, h = pg32_pair
    cert = certify_non_isomorphic_by_cliques(g, h)
    assert cert.passed
    assert cert.evidence["histogram_a"] == {"7": 30}
    assert "6" in cert.evidence["histogram_b"]
    witness = cert.evidence["witness"]
    assert witness["graph"] == "b" and len(witness["clique"]) != 7
    assert str(len(witness["clique"])) not in cert.evidence["histogram_a"]
    assert recheck_certificate(cert, g, h)


def _triangles_and(*extra):
    edges = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]
    return Graph.from_edges(10, edges + list(extra))


def test_stale_clique_witness_is_caught():
    g = _triangles_and((6, 7), (8, 9))
    h = _triangles_and(*[(u, v) for u in range(6, 10) for v in range(u + 1, 10)])
    cert = certify_non_isomorphic_by_cliques(g, h)
    assert cert.evidence["histogram_a"] == {"2": 2, "3": 2}
    assert cert.evidence["histogram_b"] == {"3": 2, "4": 1}
    assert cert.evidence["witness"] == {"graph": "a", "clique": [6, 7]}
    assert recheck_certificate(cert, g, h)

    # maximal triangles exist in both graphs equally often
    for name in ("a", "b"):
        stale = cert.model_copy(deep=True)
        stale.evidence["witness"] = {"graph": name, "clique": [0, 1, 2]}
        assert not recheck_certificate(stale, g, h)

    # maximal in h, but h is the graph with more 4-cliques, not g
    stale = cert.model_copy(deep=True)
    stale.evidence["witness"] = {"graph": "a", "clique": [6, 7, 8, 9]}
    assert not recheck_certificate(stale, g, h)
    stale.evidence["witness"]["graph"] = "b"
    assert recheck_certificate(stale, g, h)


def test_cascade_stops_at_first_separating_invariant(shrikhande, rook):
    cert = certify_non_isomorphic(shrikhande, rook)
    assert cert.passed
    assert cert.evidence["invariant"] == "triangles"
    assert cert.evidence["tried"] == ["triangles"]


def test_cascade_is_inconclusive_on_isomorphic_graphs(petersen, rng):
    perm = list(range(10))
    rng.shuffle(perm)
    other = petersen.permuted(perm)
    cert = certify_non_isomorphic(petersen, other)
    assert not cert.passed
    assert cert.evidence["invariant"] == "cascade"
    assert recheck_certificate(cert, petersen, other)
    with pytest.raises(ValueError):
        certify_non_isomorphic(petersen, other, ["spectrum"])


def test_cospectral_certificate_replays_its_primes(shrikhande, rook):
    cert = certify_cospectral(shrikhande, rook, prime_count=3, seed=11)
    assert cert.passed
    assert cert.evidence["method"] == "charpoly" and len(cert.evidence["primes"]) == 3
    assert recheck_certificate(cert, shrikhande, rook)


def test_exhaustive_isomorphism_and_its_recheck(petersen, rng, shrikhande, rook):
    perm = list(range(10))
    rng.shuffle(perm)
    other = petersen.permuted(perm)
    cert = exhaustive_isomorphism(petersen, other)
    assert cert.passed and cert.claim == "isomorphic"
    assert recheck_certificate(cert, petersen, other)

    forged = cert.model_copy(deep=True)
    forged.evidence["mapping"] = [0] * 10
    assert not recheck_certificate(forged, petersen, other)

    cert = exhaustive_isomorphism(shrikhande, rook)
    assert not cert.passed and cert.evidence["mapping"] is None
    assert recheck_certificate(cert, shrikhande, rook)


def test_pentagon_against_complete_graph(pentagon):
    k5 = Graph.complete(5)
    assert not run_check("srg", pentagon, k5).passed
    assert not run_check("cospectral", pentagon, k5).passed
    assert run_check("noniso", pentagon, k5).passed
    assert run_check("isomorphic", pentagon, complement(pentagon)).passed


def test_design_certificate():
    design = grassmann_design(3, 2)
    cert = certify_design(design)
    assert cert.passed and cert.claim == "design_valid"
    assert cert.evidence["lambda"] == 1
    assert recheck_certificate(cert, design=design)
    assert not recheck_certificate(cert, design=grassmann_design(3, 3))
    assert not recheck_certificate(cert)


def test_switching_certificate(rng):
    g, planted = plant_wqh(rng)
    cert = certify_switching(g, planted)
    assert cert.passed and cert.inputs == [graph_digest(g)]
    assert recheck_certificate(cert, g)

    bad = certify_switching(Graph.from_edges(5, [(4, 0)]), SwitchingSetPair(c1=[0, 1], c2=[2, 3]))
    assert not bad.passed and bad.evidence["condition"] == "outside_vertex"


def test_run_check_names():
    assert set(CHECKS) == {"srg", "cospectral", "triangles", "cliques", "pair_profiles", "four_cliques", "noniso", "isomorphic"}
    with pytest.raises(ValueError):
        run_check("spectrum", Graph.cycle(4), Graph.cycle(4))
    assert run_check(" SRG ", Graph.cycle(4), Graph.cycle(4)).passed


def _small_pairs(rng):
    petersen = graph_from_nx(nx.petersen_graph())
    perm = list(range(10))
    rng.shuffle(perm)
    pentagon = Graph.cycle(5)
    pairs = [
        (petersen, petersen.permuted(perm)),
        (shrikhande_graph(), rook_graph()),
        (pentagon, complement(pentagon)),
        (pentagon, Graph.complete(5)),
        (petersen, graph_from_nx(nx.circulant_graph(10, [1, 2]))),
    ]
    for _ in range(20):
        g, pair = plant_wqh(rng, max_vertices=24)
        pairs.append((g, apply_wqh(g, pair)))
    return pairs


def _assert_invariants_agree_with_search(g, h):
    isomorphic = exhaustive_isomorphism(g, h).passed
    for invariant in NON_ISOMORPHISM_INVARIANTS:
        separated = run_check(invariant, g, h).passed
        assert not (isomorphic and separated), invariant
    if isomorphic:
        assert not certify_non_isomorphic(g, h).passed


def test_invariants_never_contradict_the_search(rng):
    for g, h in _small_pairs(rng):
        _assert_invariants_agree_with_search(g, h)


@pytest.mark.slow
def test_invariants_never_contradict_the_search_on_switched_srgs(pg32_pair):
    space = standard_space("sp", 6, 2)
    config = find_collinearity_configuration(space, 3)
    sp62 = collinearity_graph(space)
    for g, h in (pg32_pair, (sp62, apply_wqh(sp62, collinearity_switch_from(space, config)))):
        assert g.n <= 64
        _assert_invariants_agree_with_search(g, h)
