"""End-to-end reproductions: parameters, switching sets, spectra and non-isomorphism certificates."""

import random

import pytest

from conftest import plant_gm, plant_wqh
from polarswitch.certify import (
    certify_cospectral,
    certify_non_isomorphic,
    certify_non_isomorphic_by_cliques,
    certify_non_isomorphic_by_triangles,
    exhaustive_isomorphism,
    recheck_certificate,
)
from polarswitch.designs import ag_design, block_graph, grassmann_design, jungnickel_modify
from polarswitch.geometry.polar import standard_space
from polarswitch.graphs.builders import collinearity_graph, polarity_graph
from polarswitch.graphs.core import complement, srg_check, srg_params
from polarswitch.models import GMPartition
from polarswitch.parameters import hermitian_polarity_params, parabolic_polarity_params
from polarswitch.spectral import cospectral
from polarswitch.switching import (
    apply_gm,
    apply_wqh,
    collinearity_switch_from,
    design_switch_set,
    find_collinearity_configuration,
    find_design_configuration,
    find_tangent_configuration,
    gm_cell_to_wqh_pair,
    non_isomorphy_quotient,
    pair_involution,
    tangent_switch_from,
    validate_wqh,
)


def tangent_switch(kind, n, q, point_type=None, quotient=None):
    space = standard_space(kind, n, q)
    g = polarity_graph(space, point_type)
    config = find_tangent_configuration(space, quotient or non_isomorphy_quotient(space), point_type)
    assert config is not None
    return g, tangent_switch_from(space, config)


def collinearity_switch(kind, n, q, m):
    space = standard_space(kind, n, q)
    config = find_collinearity_configuration(space, m)
    assert config is not None
    return collinearity_graph(space), collinearity_switch_from(space, config)


def design_switch(n, q):
    design = grassmann_design(n, q)
    config = find_design_configuration(design)
    return block_graph(design), design_switch_set(design, config.embedding, config.p1, config.p2)


@pytest.fixture(scope="module")
def u62_switch():
    return tangent_switch("u", 6, 4)


@pytest.fixture(scope="module")
def o73_switch():
    return tangent_switch("o", 7, 3, "plus")


# -- parameter reproduction --------------------------------------------------------------


@pytest.mark.slow
def test_u62_complement_parameters(u62_switch):
    g, _ = u62_switch
    assert srg_params(complement(g)).as_tuple() == (672, 495, 366, 360)


@pytest.mark.slow
def test_u72_vertex_count_and_degree():
    g = polarity_graph(standard_space("u", 7, 4))
    expected = hermitian_polarity_params(7)
    check = srg_check(g, degrees_only=True)
    assert check.witness is None
    assert (g.n, g.degree(0)) == (expected.v, expected.k)


@pytest.mark.parametrize(
    "kind, n, q, point_type, params",
    [
        ("o", 7, 3, "plus", (378, 117, 36, 36)),
        ("o+", 6, 3, "plus", (117, 36, 15, 9)),
        ("o-", 6, 3, "minus", (126, 45, 12, 18)),
        ("o", 5, 5, "plus", (325, 60, 15, 10)),
    ],
)
def test_quadric_parameters(kind, n, q, point_type, params):
    assert srg_params(polarity_graph(standard_space(kind, n, q), point_type)).as_tuple() == params


# -- constructed switching sets ----------------------------------------------------------


@pytest.mark.parametrize(
    "make",
    [
        lambda: collinearity_switch("sp", 6, 2, 3),
        lambda: tangent_switch("o+", 6, 3, "plus", "any"),
        lambda: tangent_switch("o-", 6, 3, "minus", "o-2"),
        lambda: design_switch(4, 2),
        lambda: design_switch(5, 2),
    ],
    ids=["sp62", "o+63", "o-63", "pg32", "pg42"],
)
def test_constructed_switching_sets_are_valid_and_cospectral(make):
    g, pair = make()
    assert validate_wqh(g, pair).ok
    switched = apply_wqh(g, pair)
    assert srg_params(switched) == srg_params(g)
    assert cospectral(g, switched, prime_count=5).ok


@pytest.mark.slow
def test_large_tangent_switches_are_cospectral(u62_switch, o73_switch):
    for g, pair in (u62_switch, o73_switch):
        assert validate_wqh(g, pair).ok
        assert cospectral(g, apply_wqh(g, pair), prime_count=5).ok


def test_planted_switching_sets_with_five_primes():
    rng = random.Random(7)
    for _ in range(100):
        g, pair = plant_wqh(rng)
        assert validate_wqh(g, pair).ok
        assert cospectral(g, apply_wqh(g, pair), prime_count=5, seed=rng.randrange(1 << 30)).ok


def test_gm_and_wqh_agree_on_planted_cells():
    rng = random.Random(11)
    for _ in range(100):
        g, cell = plant_gm(rng)
        pair = gm_cell_to_wqh_pair(g, cell)
        via_gm = apply_gm(g, GMPartition(cells=[cell])).permuted(pair_involution(g.n, pair))
        assert apply_wqh(g, pair).same_edges(via_gm)


# -- non-isomorphism ---------------------------------------------------------------------


def test_line_graph_of_pg32_switch():
    g, pair = design_switch(4, 2)
    h = apply_wqh(g, pair)
    assert srg_params(h).as_tuple() == (35, 18, 9, 9)
    assert certify_cospectral(g, h).passed
    cert = certify_non_isomorphic_by_cliques(g, h)
    assert cert.passed
    assert cert.evidence["histogram_a"] == {"7": 30}
    assert "6" in cert.evidence["histogram_b"]


@pytest.mark.slow
def test_line_graph_of_pg32_switch_exhaustive():
    g, pair = design_switch(4, 2)
    cert = exhaustive_isomorphism(g, apply_wqh(g, pair))
    assert not cert.passed


@pytest.mark.parametrize("n, q, s", [(4, 2, 3), (5, 2, 3), (4, 3, 3)])
def test_block_graph_of_modified_design_is_the_switched_graph(n, q, s):
    design = grassmann_design(n, q)
    config = find_design_configuration(design, s)
    pair = design_switch_set(design, config.embedding, config.p1, config.p2)
    modified = jungnickel_modify(design, config.embedding, config.p1, config.p2)
    assert apply_wqh(block_graph(design), pair).same_edges(block_graph(modified))


@pytest.mark.slow
def test_hermitian_switch_breaks_constant_triangle_counts(u62_switch):
    g, pair = u62_switch
    cert = certify_non_isomorphic_by_triangles(g, apply_wqh(g, pair))
    assert cert.passed
    assert list(cert.evidence["histogram_a"]) == ["12"]
    assert "11" in cert.evidence["histogram_b"]


@pytest.mark.slow
def test_parabolic_switch_is_not_isomorphic(o73_switch):
    g, pair = o73_switch
    h = apply_wqh(g, pair)
    assert srg_params(h).as_tuple() == (378, 117, 36, 36)
    assert certify_non_isomorphic_by_triangles(g, h).passed


def test_elliptic_quadric_switch_is_not_isomorphic():
    g, pair = tangent_switch("o-", 6, 3, "minus", "o-2")
    h = apply_wqh(g, pair)
    assert srg_params(h).as_tuple() == (126, 45, 12, 18)
    cert = certify_non_isomorphic(g, h)
    assert cert.passed
    assert recheck_certificate(cert, g, h)


def test_hyperbolic_quadric_switch_leaves_the_graph_alone():
    g, pair = tangent_switch("o+", 6, 3, "plus", "any")
    h = apply_wqh(g, pair)
    assert h.same_edges(g)
    assert not certify_non_isomorphic(g, h).passed


def test_hyperbolic_quadric_graph_against_affine_block_graph():
    g = polarity_graph(standard_space("o+", 6, 3), "plus")
    h = block_graph(ag_design(3, 3))
    assert srg_params(g) == srg_params(h)
    assert certify_non_isomorphic(g, h).passed


def test_sp62_switch_is_not_isomorphic():
    g, pair = collinearity_switch("sp", 6, 2, 3)
    h = apply_wqh(g, pair)
    assert srg_params(h).as_tuple() == (63, 30, 13, 15)
    assert certify_cospectral(g, h).passed
    cert = certify_non_isomorphic(g, h, ["triangles", "four_cliques"])
    assert cert.passed


# -- large smoke -------------------------------------------------------------------------


@pytest.mark.large
def test_o75_plus_graph_and_switch():
    space = standard_space("o", 7, 5)
    g = polarity_graph(space, "plus")
    expected = parabolic_polarity_params(3, 5, 1)
    assert (g.n, g.degree(0)) == (expected.v, expected.k) == (7875, 1550)
    assert srg_check(g, degrees_only=True).witness is None
    config = find_tangent_configuration(space, non_isomorphy_quotient(space), "plus")
    assert config is not None
    assert validate_wqh(g, tangent_switch_from(space, config)).ok
