import math
from pathlib import Path

import pytest

from trispec.trisconfig import ResourceCapError
from trispec.trisforms import Signature, contact_data, cos_params, l_table, rho5_polynomial_333
from trispec.trisgeom import cosh_dist, identity
from trispec.trisgroup import evaluate, generators, realize
from trispec.trisgraph import (
    build_star_ball,
    d_star,
    dump_svg,
    lambda_star,
    level_catalog,
    p_graph_rho,
    pure_chord_cosh,
    rho_star,
    rho_star_from_ball,
    rho_star_report,
)


@pytest.fixture(scope="module")
def ball_456():
    return build_star_ball(Signature(4, 5, 6), 3)


def test_first_sphere_has_four_pure_nodes(ball_456) -> None:
    first = ball_456.sphere(1)
    assert len(first) == 4
    assert all(not n.impure for n in first)
    assert sorted(n.parent_edge for n in first) == ["p", "p", "r", "r"]
    x0 = ball_456.base.position
    for node in first:
        expected = pure_chord_cosh(Signature(4, 5, 6), node.parent_edge, 1)
        assert cosh_dist(x0, node.position) == pytest.approx(expected, rel=1e-9)


def test_circle_radii_match_contact_data(ball_456) -> None:
    sig = Signature(4, 5, 6)
    cd = contact_data(sig)
    real = realize(sig)
    x0 = ball_456.base.position
    assert math.sinh(math.acosh(cosh_dist(x0, real.v_r))) ** 2 == pytest.approx(cd.sinh2_dr, rel=1e-9)
    assert math.sinh(math.acosh(cosh_dist(x0, real.v_p))) ** 2 == pytest.approx(cd.sinh2_dp, rel=1e-9)


def test_degrees_and_levels(ball_456) -> None:
    for node in ball_456.nodes:
        assert ball_456.degree(node.id) <= 4
        if node.level < ball_456.radius:
            assert ball_456.degree(node.id) == 4
        if node.parent is not None:
            assert ball_456.nodes[node.parent].level == node.level - 1


def test_d_star_basics(ball_456) -> None:
    assert d_star(ball_456, 0, 0) == 0
    for other, _ in ball_456.adjacency[0]:
        assert d_star(ball_456, 0, other) == 1
    ids = [n.id for n in ball_456.sphere(2)][:5]
    for a in ids:
        for b in ids:
            assert d_star(ball_456, a, b) == d_star(ball_456, b, a)
    for node in ball_456.sphere(3)[:10]:
        assert d_star(ball_456, 0, node.id) == node.level


def test_ball_radius_cap() -> None:
    with pytest.raises(ResourceCapError):
        build_star_ball(Signature(4, 5, 6), 12, cap=6)
    with pytest.raises(ValueError):
        build_star_ball(Signature(2, 5, 7), 2)


@pytest.mark.parametrize("q", [6, 7, 8])
def test_rho5_for_3_3_q_matches_polynomial(q: int) -> None:
    z = math.cos(math.pi / q)
    assert math.cosh(rho_star(Signature(3, 3, q), 5)) == pytest.approx(rho5_polynomial_333(z), abs=1e-7)


def test_rho5_for_3_3_5_is_bounded_by_polynomial() -> None:
    z = math.cos(math.pi / 5)
    assert math.cosh(rho_star(Signature(3, 3, 5), 5)) >= rho5_polynomial_333(z) - 1e-9


@pytest.mark.parametrize("sig", [Signature(3, 4, 5), Signature(4, 5, 6), Signature(3, 3, 7)])
def test_rho_star_is_monotone(sig: Signature) -> None:
    ball = build_star_ball(sig, 5)
    values = [rho_star_from_ball(ball, n) for n in range(2, 6)]
    assert values == sorted(values)


def test_rho_star_range() -> None:
    with pytest.raises(ValueError):
        rho_star(Signature(4, 5, 6), 6)
    with pytest.raises(ValueError):
        rho_star_from_ball(build_star_ball(Signature(4, 5, 6), 2), 3)


def test_lambda_star_small_cases(ball_456) -> None:
    sig = Signature(4, 5, 6)
    assert lambda_star(sig, identity(), 3, ball_456).value == 0
    assert lambda_star(sig, generators(sig).R, 3, ball_456).value == 1
    assert lambda_star(sig, evaluate(sig, ("R", "P^-1")), 3, ball_456).value == 2


def test_level_catalog_456() -> None:
    sig = Signature(4, 5, 6)
    lt = l_table(sig)
    assert level_catalog(sig, 1).lengths() == []
    two = level_catalog(sig, 2)
    assert 2 * math.acosh(lt.L1) == pytest.approx(two.lengths()[0])
    four = level_catalog(sig, 4)
    c = cos_params(sig)
    l11 = 4 * c.X * c.Y * c.Z + 2 * c.X**2 + 2 * c.Y**2 + 2 * c.Z**2 - 1
    tagged = {e.tag: e for e in four.entries}
    assert tagged["L11"].types == ("r", "p", "r", "p")
    assert tagged["L11"].length == pytest.approx(2 * math.acosh(l11))
    doubled = {e.tag: e for e in two.entries}["δ(1,r-1)"]
    assert tagged["2·δ(1,r-1)"].length == pytest.approx(2 * doubled.length)
    with pytest.raises(ValueError):
        level_catalog(sig, 5)


def test_p_graph_rho() -> None:
    y, s = math.cos(math.pi / 7), math.sin(math.pi / 9)
    assert p_graph_rho(7, 9, 1) == pytest.approx(2 * math.acosh(y / s))
    assert p_graph_rho(7, 9, 1) <= p_graph_rho(7, 9, 2) <= p_graph_rho(7, 9, 3)
    with pytest.raises(ValueError):
        p_graph_rho(7, math.inf, 2)
    with pytest.raises(ValueError):
        p_graph_rho(7, 9, 4)


def test_rho_star_report_for_3_3_6_is_signed() -> None:
    comparisons = {c.l0_name: c for c in rho_star_report(Signature(3, 3, 6))}
    alt = comparisons["alternative"]
    assert alt.cosh_c_star == pytest.approx(61 / 18 + 785 / 324 * math.sqrt(3), abs=1e-9)
    assert alt.gap < 0
    assert alt.status == "violation"


def test_exceptional_signatures_are_flagged() -> None:
    [row] = rho_star_report(Signature(4, 4, 4))
    assert row.status == "exceptional"


def test_dump_svg(tmp_path: Path, ball_456) -> None:
    out = dump_svg(ball_456, tmp_path / "ball.svg")
    assert out.exists()
    assert "<svg" in out.read_text(encoding="utf-8")
