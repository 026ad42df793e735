import math

import numpy as np
import pytest

from trispec.trisgeom import (
    Elliptic,
    Geodesic,
    Hyperbolic,
    Identity,
    Motion,
    MotionIndex,
    PointIndex,
    UhpPoint,
    angle_at,
    apply,
    batch_apply,
    batch_cosh_dist,
    classify,
    common_perpendicular,
    compose,
    cosh_dist,
    delta_config,
    dilation,
    dist,
    dist_to_geodesic,
    geodesic_through,
    identity,
    inverse,
    reflect,
    rotation_about,
    translation,
)


def test_distance_between_i_and_2i() -> None:
    a, b = UhpPoint(0.0, 1.0), UhpPoint(0.0, 2.0)
    assert cosh_dist(a, b) == pytest.approx(1.25)
    assert dist(a, b) == pytest.approx(math.log(2.0))


def test_rejects_points_off_the_half_plane() -> None:
    with pytest.raises(ValueError):
        UhpPoint(0.0, -1.0)


def test_motion_checks_determinant() -> None:
    with pytest.raises(ValueError):
        Motion(1.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        Motion.from_matrix([[1.0, 0.0], [0.0, -1.0]], "direct")
    with pytest.raises(ValueError):
        Motion(1.0, 0.0, 0.0, 1.0 + 1e-10)
    assert Motion(1.0, 0.0, 0.0, 1.0 + 1e-14).trace == pytest.approx(2.0)
    big = Motion.from_matrix([[1e4, 3.0], [7.0, 2.1e-3 + 1e-4]])
    assert abs(big.a * big.d - big.b * big.c - 1.0) <= 1e-12 * (abs(big.a * big.d) + abs(big.b * big.c))


@pytest.mark.parametrize(
    "angle", [2 * math.pi / 7, math.pi / 2, 2 * math.pi / 3, math.pi, 6 * math.pi / 5, 3 * math.pi / 2]
)
def test_rotation_classifies_by_counterclockwise_angle(angle: float) -> None:
    m = rotation_about(UhpPoint(0.3, 1.7), angle)
    kind = classify(m)
    assert isinstance(kind, Elliptic)
    assert kind.angle == pytest.approx(angle)
    back = classify(inverse(m))
    assert back.angle == pytest.approx(2 * math.pi - angle)
    fixed = apply(m, UhpPoint(0.3, 1.7))
    assert fixed.x == pytest.approx(0.3)
    assert fixed.y == pytest.approx(1.7)


def test_dilation_is_hyperbolic_with_log_length() -> None:
    kind = classify(dilation(4.0))
    assert isinstance(kind, Hyperbolic)
    assert kind.length == pytest.approx(math.log(4.0))


def test_identity_and_parabolic_classes() -> None:
    assert isinstance(classify(identity()), Identity)
    assert type(classify(translation(1.0))).__name__ == "Parabolic"


def test_classify_refuses_reversing_motions() -> None:
    with pytest.raises(ValueError):
        classify(reflect(Geodesic.between(-1.0, 1.0)))


def test_compose_with_inverse_is_identity() -> None:
    m = compose(rotation_about(UhpPoint(0.0, 1.0), 1.1), dilation(3.0))
    assert compose(m, inverse(m)).close_to(identity())
    r = reflect(Geodesic.between(-2.0, 5.0))
    assert compose(r, r).close_to(identity())
    assert not compose(m, r).close_to(identity())
    assert compose(m, r).reversing


def test_reflection_fixes_its_geodesic() -> None:
    r = reflect(Geodesic.between(-1.0, 1.0))
    img = apply(r, UhpPoint(0.6, 0.8))
    assert img.x == pytest.approx(0.6)
    assert img.y == pytest.approx(0.8)
    outside = apply(r, UhpPoint(0.0, 2.0))
    assert outside.y == pytest.approx(0.5)


def test_geodesic_endpoints_are_unordered() -> None:
    assert Geodesic.between(3.0, -1.0) == Geodesic.between(-1.0, 3.0)
    assert Geodesic.between(2.0, math.inf).is_vertical
    with pytest.raises(ValueError):
        Geodesic.between(1.0, 1.0)


def test_geodesic_through_points_on_unit_circle() -> None:
    g = geodesic_through(UhpPoint(0.6, 0.8), UhpPoint(-0.8, 0.6))
    assert g.same_as(Geodesic.between(-1.0, 1.0))


def test_distance_to_geodesic() -> None:
    axis = Geodesic.between(0.0, math.inf)
    assert dist_to_geodesic(UhpPoint(0.0, 2.0), axis) == pytest.approx(0.0, abs=1e-12)
    assert dist_to_geodesic(UhpPoint(1.0, 1.0), axis) == pytest.approx(math.asinh(1.0))


def test_common_perpendicular_of_nested_circles() -> None:
    perp, d = common_perpendicular(Geodesic.between(-1.0, 1.0), Geodesic.between(-4.0, 4.0))
    assert d == pytest.approx(math.log(4.0))
    assert perp.is_vertical
    assert perp.u.value == pytest.approx(0.0, abs=1e-9)


def test_common_perpendicular_refuses_crossing_geodesics() -> None:
    with pytest.raises(ValueError):
        common_perpendicular(Geodesic.between(-1.0, 1.0), Geodesic.between(0.0, 3.0))


def test_angle_at_matches_rotation() -> None:
    centre = UhpPoint(0.0, 1.0)
    z1 = UhpPoint(0.0, 2.0)
    z2 = apply(rotation_about(centre, math.pi / 3), z1)
    assert angle_at(centre, z1, z2) == pytest.approx(math.pi / 3)


def test_delta_config_perpendicular_crossing() -> None:
    assert delta_config(0.0, math.pi / 2, math.pi / 2) == pytest.approx(1.0)
    assert delta_config(1.0, math.pi / 2, math.pi / 2) == pytest.approx(math.cosh(1.0))
    with pytest.raises(ValueError):
        delta_config(-1.0, 1.0, 1.0)


def test_batch_helpers_agree_with_scalar_versions() -> None:
    motions = [rotation_about(UhpPoint(0.2, 1.5), 0.7), dilation(2.0), reflect(Geodesic.between(-1.0, 2.0))]
    mats = np.array([m.matrix for m in motions])
    rev = np.array([m.reversing for m in motions])
    z = UhpPoint(0.4, 0.9)
    imgs = batch_apply(mats, rev, z.z)
    for m, w in zip(motions, imgs, strict=True):
        ref = apply(m, z)
        assert w.real == pytest.approx(ref.x)
        assert w.imag == pytest.approx(ref.y)
    cd = batch_cosh_dist(imgs, z.z)
    assert cd[1] == pytest.approx(cosh_dist(apply(motions[1], z), z))


def test_motion_index_matches_up_to_sign_and_orientation() -> None:
    index = MotionIndex()
    m = rotation_about(UhpPoint(0.0, 1.0), 1.0).matrix
    assert index.add(m, "m")
    assert not index.add(-m + 1e-12, "again")
    assert index.find(-m) == "m"
    assert index.find(m, reversing=True) is None
    assert len(index) == 1


def test_point_index_tolerance() -> None:
    index = PointIndex(tol=1e-9)
    index.add(UhpPoint(0.5, 1.5), 7)
    assert index.find(complex(0.5 + 4e-10, 1.5)) == 7
    assert index.find(complex(0.5 + 1e-6, 1.5)) is None
