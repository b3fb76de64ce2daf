import pytest

from polarswitch.certify import graph_digest
from polarswitch.graphs.core import srg_params
from polarswitch.models import BuildSpec
from polarswitch.pipeline import (
    BuildError,
    apply_record,
    build_graph,
    construct_record,
    expected_params,
    expected_vertices,
    resolve_space,
    run_checks,
)
from polarswitch.switching import ConfigurationNotFound


def spec(**fields):
    return BuildSpec.model_validate(fields)


def test_build_spec_needs_exactly_one_source():
    with pytest.raises(ValueError):
        spec(n=4, q=2, graph="collinearity")
    with pytest.raises(ValueError):
        spec(space="sp", design="grassmann", n=4, q=2, graph="block")
    with pytest.raises(ValueError):
        spec(design="grassmann", n=4, q=2, graph="polarity")
    with pytest.raises(ValueError):
        spec(space="sp", n=4, q=2, graph="block")


def test_resolve_space_errors():
    with pytest.raises(BuildError):
        resolve_space(spec(design="grassmann", n=4, q=2, graph="block"))
    with pytest.raises(BuildError):
        resolve_space(spec(space="sp", n=5, q=2, graph="collinearity"))
    with pytest.raises(BuildError):
        resolve_space(spec(space="xx", n=4, q=2, graph="collinearity"))


def test_closed_forms_match_builds():
    for fields in (
        {"space": "sp", "n": 4, "q": 2, "graph": "collinearity"},
        {"space": "u", "n": 4, "q": 4, "graph": "polarity"},
        {"space": "u", "n": 4, "q": 4, "graph": "degenerate_span"},
        {"space": "o", "n": 5, "q": 3, "graph": "polarity", "point_type": "minus"},
        {"design": "grassmann", "n": 4, "q": 2, "graph": "block"},
    ):
        build_spec = spec(**fields)
        built = build_graph(build_spec)
        assert built.graph.n == expected_vertices(build_spec)
        assert srg_params(built.graph) == expected_params(build_spec)


def test_quadric_degenerate_span_has_no_closed_form():
    assert expected_params(spec(space="o", n=5, q=3, graph="degenerate_span", point_type="plus")) is None


def test_large_builds_need_permission():
    build_spec = spec(space="o", n=7, q=5, graph="polarity", point_type="plus")
    assert expected_vertices(build_spec) == 7875
    with pytest.raises(BuildError, match="allow_large"):
        build_graph(build_spec)


def test_geometry_errors_become_build_errors():
    with pytest.raises(BuildError):
        build_graph(spec(space="o", n=5, q=3, graph="polarity"))


def test_collinearity_record_round_trip():
    built = build_graph(spec(space="sp", n=6, q=2, graph="collinearity"))
    digest = graph_digest(built.graph)
    record = construct_record(built, "collinearity", digest, seed=3)
    assert record.construction == "collinearity"
    assert record.build == built.spec and record.seed == 3
    assert set(record.witness) == {"P", "L1", "L2"}
    assert len(record.c1) == len(record.c2) > 0
    switched = apply_record(built.graph, record, digest)
    assert srg_params(switched).as_tuple() == (63, 30, 13, 15)
    assert not switched.same_edges(built.graph)


def test_design_record():
    built = build_graph(spec(design="grassmann", n=4, q=2, graph="block"))
    digest = graph_digest(built.graph)
    record = construct_record(built, "design", digest)
    assert set(record.witness) == {"S", "p1", "p2"}
    switched = apply_record(built.graph, record, digest)
    assert srg_params(switched).as_tuple() == (35, 18, 9, 9)


def test_tangent_record_on_hermitian_polarity_graph():
    built = build_graph(spec(space="u", n=4, q=4, graph="polarity"))
    record = construct_record(built, "tangent", graph_digest(built.graph), quotient="u2")
    assert record.witness["quotient"] == "u2"
    assert len(record.c1) == 4


def test_missing_configurations():
    built = build_graph(spec(space="sp", n=4, q=2, graph="collinearity"))
    with pytest.raises(ConfigurationNotFound):
        construct_record(built, "collinearity", graph_digest(built.graph), m=3)

    built = build_graph(spec(space="o+", n=6, q=3, graph="polarity", point_type="plus"))
    with pytest.raises(ConfigurationNotFound):
        construct_record(built, "tangent", graph_digest(built.graph), quotient="o+2")


def test_record_kind_must_fit_the_graph():
    built = build_graph(spec(space="sp", n=4, q=2, graph="collinearity"))
    digest = graph_digest(built.graph)
    for kind in ("tangent", "design", "radical"):
        with pytest.raises(BuildError):
            construct_record(built, kind, digest)
    with pytest.raises(BuildError):
        construct_record(built, "tangent", digest, quotient="o+3")


def test_apply_record_checks_the_digest():
    built = build_graph(spec(space="sp", n=6, q=2, graph="collinearity"))
    record = construct_record(built, "collinearity", graph_digest(built.graph))
    with pytest.raises(BuildError, match="belongs to"):
        apply_record(built.graph, record, "f" * 64)


def test_run_checks_report(shrikhande, rook):
    report = run_checks(
        shrikhande,
        rook,
        ["srg", "Cospectral", "noniso", "isomorphic"],
        ["pass", "pass", "pass", "fail"],
        prime_count=2,
    )
    assert report.ok
    assert [check.name for check in report.checks] == ["srg", "cospectral", "noniso", "isomorphic"]
    assert report.inputs == [graph_digest(shrikhande), graph_digest(rook)]

    report = run_checks(shrikhande, rook, ["isomorphic"])
    assert not report.ok and not report.checks[0].met


def test_run_checks_validation(shrikhande, rook):
    with pytest.raises(BuildError):
        run_checks(shrikhande, rook, ["srg", "noniso"], ["pass"])
    with pytest.raises(BuildError):
        run_checks(shrikhande, rook, ["spectrum"])
    with pytest.raises(BuildError):
        run_checks(shrikhande, rook, ["srg"], ["maybe"])
