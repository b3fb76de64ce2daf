import pytest

from conftest import plant_gm, plant_wqh
from polarswitch.geometry.linalg import Subspace
from polarswitch.geometry.polar import GeometryError, LineClass, standard_space
from polarswitch.graphs.builders import collinearity_graph, polarity_graph
from polarswitch.graphs.core import Graph, srg_params
from polarswitch.models import GMPartition, SwitchingSetPair
from polarswitch.spectral import cospectral
from polarswitch.switching import (
    QuotientTarget,
    SwitchingError,
    apply_gm,
    apply_wqh,
    collinearity_switch_from,
    collinearity_switch_set,
    find_collinearity_configuration,
    find_tangent_configuration,
    gm_cell_to_wqh_pair,
    non_isomorphy_quotient,
    pair_involution,
    polarity_vertices,
    radical_switch_set,
    tangent_line_switch_set,
    tangent_switch_from,
    validate_gm,
    validate_wqh,
)


def pair(c1, c2):
    return SwitchingSetPair(c1=c1, c2=c2)


# -- WQH ---------------------------------------------------------------------------------


def test_planted_switching_sets_are_valid_and_cospectral(rng):
    for _ in range(120):
        g, planted = plant_wqh(rng)
        verdict = validate_wqh(g, planted)
        assert verdict.ok, verdict.detail
        switched = apply_wqh(g, planted)
        assert switched.edge_count == g.edge_count
        assert cospectral(g, switched, prime_count=2, seed=rng.randrange(1000)).ok


def test_wqh_switching_is_an_involution(rng):
    for _ in range(30):
        g, planted = plant_wqh(rng)
        assert apply_wqh(apply_wqh(g, planted), planted).same_edges(g)
        assert apply_wqh(g, planted.swapped()).same_edges(apply_wqh(g, planted))


def test_degrees_after_switching(rng):
    for _ in range(120):
        g, planted = plant_wqh(rng)
        switched = apply_wqh(g, planted)
        c1, c2 = set(planted.c1), set(planted.c2)
        outside = [x for x in range(g.n) if x not in c1 | c2]
        sees = [set(g.neighbors(x)) & (c1 | c2) for x in outside]
        shift = sum(s == c2 for s in sees) - sum(s == c1 for s in sees)
        for v in range(g.n):
            expected = g.degree(v) + (shift if v in c1 else -shift if v in c2 else 0)
            assert switched.degree(v) == expected


def test_regular_graphs_keep_every_degree():
    sp62 = standard_space("sp", 6, 2)
    u42 = standard_space("u", 4, 4)
    for g, switch_set in (
        (collinearity_graph(sp62), collinearity_switch_from(sp62, find_collinearity_configuration(sp62, 3))),
        (polarity_graph(u42), tangent_switch_from(u42, find_tangent_configuration(u42, "u2"))),
    ):
        assert apply_wqh(g, switch_set).degrees() == g.degrees()


def test_swapped_vertices_are_counted():
    # 4 sees all of C1, 5 is balanced, 6 sees nothing
    g = Graph.from_edges(7, [(4, 0), (4, 1), (5, 0), (5, 2)])
    verdict = validate_wqh(g, pair([0, 1], [2, 3]))
    assert verdict.ok
    assert (verdict.swapped, verdict.balanced) == (1, 2)
    assert verdict.union_shape == "empty"
    switched = apply_wqh(g, pair([0, 1], [2, 3]))
    assert sorted(switched.neighbors(4)) == [2, 3]
    assert sorted(switched.neighbors(5)) == [0, 2]


def test_union_shapes():
    bipartite = Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert validate_wqh(bipartite, pair([0, 1], [2, 3])).union_shape == "complete_bipartite"
    assert validate_wqh(Graph.complete(4), pair([0, 1], [2, 3])).union_shape == "complete"
    matching = Graph.from_edges(4, [(0, 1), (2, 3), (0, 2), (1, 3)])
    assert validate_wqh(matching, pair([0, 1], [2, 3])).union_shape == "other"


@pytest.mark.parametrize(
    "graph, c1, c2, condition, witness",
    [
        (Graph.cycle(5), [0], [10], "pair_range", 10),
        (Graph.path(6), [0, 1, 2], [3, 4, 5], "c1_regular", 1),
        (Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5), (3, 5)]), [3, 4, 5], [0, 1, 2], "c2_regular", 1),
        (Graph.from_edges(4, [(0, 1)]), [0, 1], [2, 3], "equal_degree", 2),
        (Graph.from_edges(4, [(0, 2)]), [0, 1], [2, 3], "union_regular", 1),
        (Graph.from_edges(5, [(4, 0)]), [0, 1], [2, 3], "outside_vertex", 4),
        (Graph.from_edges(5, [(4, 0), (4, 1), (4, 2)]), [0, 1], [2, 3], "outside_vertex", 4),
    ],
)
def test_first_failing_condition_is_reported(graph, c1, c2, condition, witness):
    verdict = validate_wqh(graph, pair(c1, c2))
    assert not verdict.ok
    assert (verdict.condition, verdict.witness) == (condition, witness)
    assert verdict.detail


def test_apply_refuses_invalid_sets():
    g = Graph.from_edges(5, [(4, 0)])
    with pytest.raises(SwitchingError) as info:
        apply_wqh(g, pair([0, 1], [2, 3]))
    assert info.value.verdict.condition == "outside_vertex"
    apply_wqh(g, pair([0, 1], [2, 3]), validate=False)


@pytest.mark.parametrize("c1, c2", [([0, 1], [1, 2]), ([0], [1, 2]), ([], []), ([0, 0], [1, 2])])
def test_malformed_pairs_are_rejected(c1, c2):
    with pytest.raises(ValueError):
        pair(c1, c2)


# -- GM ----------------------------------------------------------------------------------


def test_gm_matches_wqh_under_the_cell_involution(rng):
    for _ in range(120):
        g, cell = plant_gm(rng)
        partition = GMPartition(cells=[cell])
        assert validate_gm(g, partition).ok
        wqh_pair = gm_cell_to_wqh_pair(g, cell)
        assert validate_wqh(g, wqh_pair).ok
        gm = apply_gm(g, partition).permuted(pair_involution(g.n, wqh_pair))
        assert apply_wqh(g, wqh_pair).same_edges(gm)


def test_gm_switching_is_cospectral(rng):
    for _ in range(20):
        g, cell = plant_gm(rng)
        assert cospectral(g, apply_gm(g, GMPartition(cells=[cell])), prime_count=2).ok


def test_gm_failures():
    lonely = Graph.from_edges(5, [(4, 0)])
    verdict = validate_gm(lonely, GMPartition(cells=[[0, 1, 2, 3]]))
    assert (verdict.ok, verdict.condition, verdict.witness) == (False, "outside_vertex", 4)

    verdict = validate_gm(Graph.path(4), GMPartition(cells=[[0, 1, 2, 3]]))
    assert (verdict.condition, verdict.witness, verdict.cell) == ("equitable", 1, 0)

    verdict = validate_gm(Graph.cycle(4), GMPartition(cells=[[0, 9, 2, 3]]))
    assert verdict.condition == "partition_range"

    with pytest.raises(SwitchingError):
        apply_gm(lonely, GMPartition(cells=[[0, 1, 2, 3]]))


def test_gm_partition_cells_must_be_disjoint():
    with pytest.raises(ValueError):
        GMPartition(cells=[[0, 1], [1, 2]])


def test_gm_two_cells_equitable():
    # cells {0,1} and {2,3} joined by a perfect matching; 4 sees one vertex of each
    g = Graph.from_edges(5, [(0, 2), (1, 3), (4, 0), (4, 3)])
    partition = GMPartition(cells=[[0, 1], [2, 3]])
    verdict = validate_gm(g, partition)
    assert verdict.ok and verdict.swapped == 1
    switched = apply_gm(g, partition)
    assert sorted(switched.neighbors(4)) == [1, 2]


def test_gm_cell_helpers_reject_bad_cells():
    with pytest.raises(SwitchingError):
        gm_cell_to_wqh_pair(Graph.cycle(5), [0, 1, 2])
    with pytest.raises(SwitchingError):
        gm_cell_to_wqh_pair(Graph.path(4), [0, 1, 2, 3])
    with pytest.raises(SwitchingError):
        pair_involution(6, pair([0, 1, 2], [3, 4, 5]))


@pytest.mark.parametrize(
    "edges, c1",
    [
        ([(0, 1), (2, 3)], [0, 1]),
        ([(0, 1), (1, 2), (2, 3), (3, 0)], [0, 2]),
        ([], [0, 1]),
    ],
)
def test_gm_cell_split(edges, c1):
    g = Graph.from_edges(4, edges)
    assert gm_cell_to_wqh_pair(g, [0, 1, 2, 3]).c1 == c1


# -- geometric constructions -------------------------------------------------------------


def test_sp62_collinearity_switch():
    space = standard_space("sp", 6, 2)
    config = find_collinearity_configuration(space, 3)
    assert config is not None and config.P.dim == 3
    g = collinearity_graph(space)
    switch_set = collinearity_switch_from(space, config)
    assert len(switch_set.c1) == 2
    switched = apply_wqh(g, switch_set)
    assert srg_params(switched).as_tuple() == (63, 30, 13, 15)
    assert set(config.witness()) == {"P", "L1", "L2"}


def test_collinearity_search_runs_out():
    space = standard_space("sp", 4, 2)
    assert find_collinearity_configuration(space, 3) is None
    with pytest.raises(GeometryError):
        find_collinearity_configuration(space, 1)


def test_collinearity_set_checks_its_inputs():
    space = standard_space("sp", 6, 2)
    f = space.field
    config = find_collinearity_configuration(space, 3)
    with pytest.raises(GeometryError):
        collinearity_switch_set(space, config.P, config.L1, config.L1)
    with pytest.raises(GeometryError):
        collinearity_switch_set(space, config.P, config.L1, Subspace.full(6, f))
    with pytest.raises(GeometryError):
        collinearity_switch_set(space, Subspace.full(6, f), config.L1, config.L2)


def test_u42_tangent_switch():
    space = standard_space("u", 4, 4)
    config = find_tangent_configuration(space, "u2")
    assert config is not None
    assert config.quotient is LineClass.HERMITIAN_NONDEG
    assert config.P.dim == 3
    g = polarity_graph(space)
    switch_set = tangent_switch_from(space, config)
    assert len(switch_set.c1) == 4
    verdict = validate_wqh(g, switch_set)
    assert verdict.ok and verdict.cell_degree == 0
    switched = apply_wqh(g, switch_set)
    assert srg_params(switched).as_tuple() == (40, 12, 2, 4)
    assert cospectral(g, switched, prime_count=2).ok


def test_parabolic_tangent_switch_on_plus_points():
    space = standard_space("o", 5, 3)
    config = find_tangent_configuration(space, "any", "plus")
    assert config is not None
    assert config.quotient is LineClass.ELLIPTIC
    assert config.witness()["point_type"] == "plus"
    g = polarity_graph(space, "plus")
    switch_set = tangent_switch_from(space, config)
    assert len(switch_set.c1) == 3
    assert srg_params(apply_wqh(g, switch_set)).as_tuple() == (45, 12, 3, 3)


def test_hyperbolic_quotient_never_spanned_by_plus_points():
    assert find_tangent_configuration(standard_space("o+", 6, 3), "o+2", "plus") is None


def test_tangent_search_needs_point_type_on_quadrics():
    with pytest.raises(GeometryError):
        find_tangent_configuration(standard_space("o", 5, 3), "any")
    with pytest.raises(GeometryError):
        find_tangent_configuration(standard_space("sp", 4, 2), "any")


def test_tangent_set_checks_its_inputs():
    space = standard_space("u", 4, 4)
    config = find_tangent_configuration(space, "u2")
    with pytest.raises(GeometryError):
        tangent_line_switch_set(space, config.p, config.L1, config.L1)
    with pytest.raises(GeometryError):
        tangent_line_switch_set(space, config.L1, config.L1, config.L2)


def test_tangent_set_is_the_rank_three_radical_set():
    space = standard_space("u", 4, 4)
    config = find_tangent_configuration(space, "u2")
    assert radical_switch_set(space, config.L1, config.L2) == tangent_switch_from(space, config)
    with pytest.raises(GeometryError):
        radical_switch_set(space, config.L1, config.P)
    with pytest.raises(GeometryError):
        radical_switch_set(space, config.L1, config.L1)


def test_polarity_vertices_need_a_class_on_quadrics():
    with pytest.raises(GeometryError):
        polarity_vertices(standard_space("o", 5, 3))
    assert len(polarity_vertices(standard_space("o", 5, 3), "minus")) == 36


def test_quotient_targets():
    assert QuotientTarget.parse("U2") is QuotientTarget.HERMITIAN
    assert QuotientTarget.parse(LineClass.HYPERBOLIC) is QuotientTarget.HYPERBOLIC
    assert QuotientTarget.parse("elliptic") is QuotientTarget.ELLIPTIC
    assert QuotientTarget.ANY.matches(LineClass.ELLIPTIC)
    assert not QuotientTarget.ANY.matches(LineClass.TANGENT)
    assert not QuotientTarget.HYPERBOLIC.matches(LineClass.ELLIPTIC)
    with pytest.raises(GeometryError):
        QuotientTarget.parse("o3")


@pytest.mark.parametrize(
    "kind, n, q, target",
    [("u", 6, 4, QuotientTarget.HERMITIAN), ("o", 7, 3, QuotientTarget.ELLIPTIC), ("o", 5, 5, QuotientTarget.HYPERBOLIC)],
)
def test_non_isomorphy_quotient(kind, n, q, target):
    assert non_isomorphy_quotient(standard_space(kind, n, q)) is target


def test_non_isomorphy_quotient_needs_nonisotropic_points():
    with pytest.raises(GeometryError):
        non_isomorphy_quotient(standard_space("sp", 4, 3))
