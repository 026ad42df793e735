import math

import pytest

from trispec.trisconfig import ResourceCapError
from trispec.trisforms import INF, Signature, head_formulas
from trispec.trisgeom import (
    Elliptic,
    Hyperbolic,
    angle_at,
    apply,
    classify,
    compose,
    dist,
    dist_to_geodesic,
    identity,
    inverse,
    translation_length,
)
from trispec.trisgroup import (
    NoWithinDepth,
    TriangleGroup,
    Yes,
    axis,
    axis_through_even_vertex,
    corealize_subgroup,
    enumerate_ball,
    evaluate,
    even_vertex_types,
    generators,
    is_conjugate,
    realize,
    reflection_word,
    rotation_word,
    triangle_group,
)

SIGS = [Signature(3, 3, 4), Signature(4, 5, 6), Signature(2, 3, 7), Signature(3, 7, 7)]


def _power(m, n):
    out = identity()
    for _ in range(n):
        out = compose(out, m)
    return out


@pytest.mark.parametrize("sig", SIGS, ids=lambda s: s.label)
def test_generator_relations(sig: Signature) -> None:
    g = generators(sig)
    assert compose(compose(g.R, g.P), g.Q).close_to(identity(), tol=1e-9)
    assert _power(g.R, sig.r).close_to(identity(), tol=1e-9)
    assert _power(g.P, sig.p).close_to(identity(), tol=1e-9)
    assert _power(g.Q, sig.q).close_to(identity(), tol=1e-8)
    kind = classify(g.R)
    if sig.r > 2:
        # R turns clockwise
        assert isinstance(kind, Elliptic)
        assert kind.angle == pytest.approx(2 * math.pi - 2 * math.pi / sig.r)
        assert classify(inverse(g.R)).angle == pytest.approx(2 * math.pi / sig.r)
    for s in g.reflections:
        assert compose(s, s).close_to(identity(), tol=1e-9)


@pytest.mark.parametrize("sig", [Signature(3, 3, 4), Signature(4, 5, 6), Signature(3, 7, 7)])
def test_triangle_angles_and_incircle(sig: Signature) -> None:
    real = realize(sig)
    assert angle_at(real.v_r, real.v_p, real.v_q) == pytest.approx(math.pi / sig.r)
    assert angle_at(real.v_p, real.v_r, real.v_q) == pytest.approx(math.pi / sig.p)
    assert angle_at(real.v_q, real.v_r, real.v_p) == pytest.approx(math.pi / sig.q)
    radii = [dist_to_geodesic(real.incenter, side) for side in real.sides]
    assert radii[1] == pytest.approx(radii[0])
    assert radii[2] == pytest.approx(radii[0])
    for point, side in ((real.q_star, real.side_a), (real.r_star, real.side_b), (real.p_star, real.side_c)):
        assert dist_to_geodesic(point, side) == pytest.approx(0.0, abs=1e-9)
        assert dist(real.incenter, point) == pytest.approx(radii[0])


def test_ideal_vertex_realization() -> None:
    real = realize(Signature(3, 3, INF))
    assert math.isinf(real.radius)
    with pytest.raises(ValueError):
        TriangleGroup(Signature(3, 3, INF)).tiles_within(2.0, 4)


def test_words_and_letters() -> None:
    assert rotation_word((2, 0, 0, 1)) == ("R", "P")
    assert rotation_word((1, 1)) == ()
    assert reflection_word(("R", "Q^-1")) == (2, 0, 2, 1)
    assert reflection_word(("s2",)) == (1,)
    with pytest.raises(ValueError):
        reflection_word(("X",))
    with pytest.raises(ValueError):
        rotation_word((0, 1, 2))
    sig = Signature(4, 5, 6)
    assert evaluate(sig, ("R",)).close_to(generators(sig).R)
    assert evaluate(sig, ("P", "P^-1")).close_to(identity())


@pytest.mark.parametrize("sig", [Signature(4, 5, 6), Signature(3, 7, 8), Signature(5, 5, 7)])
def test_level_two_element_has_length_l1(sig: Signature) -> None:
    m = evaluate(sig, ("R", "P^-1"))
    assert translation_length(m) == pytest.approx(head_formulas(sig).l1, abs=1e-9)
    assert isinstance(classify(evaluate(sig, ("R", "P"))), Elliptic)


def test_small_ball_sizes() -> None:
    group = TriangleGroup(Signature(4, 5, 6))
    tiles = group.tiles_within(math.inf, 2)
    assert len(tiles) == 10
    assert len(enumerate_ball(Signature(4, 5, 6), 1)) == 7
    with pytest.raises(ResourceCapError):
        enumerate_ball(Signature(4, 5, 6), 17)


def test_tile_budget_is_enforced() -> None:
    group = TriangleGroup(Signature(4, 5, 6), tile_budget=5)
    with pytest.raises(ResourceCapError):
        group.tiles_within(math.inf, 4)


def test_reduce_to_domain_recovers_the_element() -> None:
    group = triangle_group(Signature(4, 5, 6))
    g = evaluate(Signature(4, 5, 6), ("R", "P^-1", "Q", "R"))
    _, word = group.reduce_to_domain(apply(g, group.origin))
    assert group.motion_of(word).close_to(g, tol=1e-8)


def test_conjugacy_search() -> None:
    sig = Signature(4, 5, 6)
    g = evaluate(sig, ("R", "P^-1"))
    w = evaluate(sig, ("Q", "R"))
    h = compose(compose(w, g), inverse(w))
    verdict = is_conjugate(sig, g, h, 6)
    assert isinstance(verdict, Yes)
    found = evaluate(sig, verdict.word)
    assert compose(compose(found, g), inverse(found)).close_to(h, tol=1e-7)


def test_conjugacy_rejects_different_lengths() -> None:
    sig = Signature(4, 5, 6)
    g = evaluate(sig, ("R", "P^-1"))
    h = evaluate(sig, ("R", "P^-1", "R", "P^-1"))
    assert isinstance(classify(h), Hyperbolic)
    verdict = is_conjugate(sig, g, h, 4)
    assert isinstance(verdict, NoWithinDepth)
    assert verdict.exhausted


def test_even_vertices() -> None:
    assert even_vertex_types(Signature(2, 4, 6)) == ["r", "p", "q"]
    assert even_vertex_types(Signature(3, 5, 7)) == []
    m = evaluate(Signature(3, 5, 7), ("R", "P^-1"))
    assert not axis_through_even_vertex(Signature(3, 5, 7), m)
    with pytest.raises(ValueError):
        axis(identity())


@pytest.mark.parametrize("sig", [Signature(4, 4, 4), Signature(3, 4, 4)])
def test_corealized_subgroup_lies_in_parent(sig: Signature) -> None:
    co = corealize_subgroup(sig)
    assert co.parent.sig == Signature(2, sig.p, 2 * sig.r)
    sub = co.sub_generators()
    assert _power(sub.R, sig.r).close_to(identity(), tol=1e-8)
    assert compose(compose(sub.R, sub.P), sub.Q).close_to(identity(), tol=1e-8)
    for elem in co.ball(3):
        assert co.in_parent(elem.motion) is not None


def test_corealization_needs_r_p_p() -> None:
    with pytest.raises(ValueError):
        corealize_subgroup(Signature(3, 4, 5))
    with pytest.raises(ValueError):
        corealize_subgroup(Signature(3, 7, 7))


@pytest.mark.integration
@pytest.mark.parametrize("sig", [Signature(3, 4, 4), Signature(4, 4, 4), Signature(5, 5, 5), Signature(3, 5, 5)])
def test_index_two_embedding_full(sig: Signature) -> None:
    co = corealize_subgroup(sig)
    missing = [e.label for e in co.ball(6) if co.in_parent(e.motion) is None]
    assert not missing
