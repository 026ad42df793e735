import math

import pytest

from trispec.trisforms import (
    INF,
    CosTriple,
    Signature,
    alternative_l0,
    big_delta,
    c_star_bound,
    c_star_expanded,
    canonical_l0,
    chord,
    contact_data,
    cos_params,
    delta_fn,
    delta_prime,
    head_formulas,
    l_table,
    l_table_delta_routes,
    r2_l1_2,
    r2_l1_3,
    r2_l2_1_2,
    r2_l2_1_qm1,
    r2_quantities,
    rho5_polynomial_333,
    side_coshes,
    two_arcosh,
)


def _grid(qmax: int) -> list[Signature]:
    out = []
    for r in range(3, qmax + 1):
        for p in range(r, qmax + 1):
            for q in range(p, qmax + 1):
                if 1 / r + 1 / p + 1 / q < 1:
                    out.append(Signature(r, p, q))
    return out


GRID_12 = _grid(12)


def test_signature_parsing() -> None:
    assert Signature.parse("4,5,6") == Signature(4, 5, 6)
    assert Signature.parse("3 3 inf").q == INF
    assert not Signature.parse("3 3 inf").finite
    assert Signature(3, 3, INF).label == "3,3,inf"
    assert Signature(4, 4, 4).is_exceptional
    assert not Signature(4, 5, 5).is_exceptional


@pytest.mark.parametrize("text", ["3,3,3", "2,4,4", "4,3,5", "3,3", "a,b,c", "1,5,7"])
def test_signature_rejects_bad_input(text: str) -> None:
    with pytest.raises(ValueError):
        Signature.parse(text)


def test_delta_is_positive_exactly_for_hyperbolic() -> None:
    assert big_delta(Signature(4, 5, 6)) > 0
    assert big_delta(CosTriple(0.5, 0.5, 0.5)) == pytest.approx(0.0, abs=1e-15)


def test_l_values_for_456() -> None:
    lt = l_table(Signature(4, 5, 6))
    assert lt.L1 == pytest.approx(2.010148209420, abs=1e-11)
    assert lt.L2 == pytest.approx(2.033761865767, abs=1e-11)
    assert lt.L3 == pytest.approx(2.108365319631, abs=1e-11)
    hf = head_formulas(Signature(4, 5, 6))
    assert hf.l1 == pytest.approx(2.645594497237, abs=1e-10)
    assert hf.l1 < hf.l2 < hf.l3


@pytest.mark.parametrize("sig", GRID_12, ids=lambda s: s.label)
def test_delta_symmetry_and_l_rows(sig: Signature) -> None:
    for k1 in range(1, sig.p):
        for k2 in range(1, sig.r):
            assert delta_fn(sig, sig.p - k1, sig.r - k2) == pytest.approx(
                delta_fn(sig, k1, k2), abs=1e-12
            )
    lt = l_table(sig)
    assert delta_fn(sig, sig.p - 1, 1) == pytest.approx(lt.L1, abs=1e-12)
    assert delta_fn(sig, 1, 2) == pytest.approx(lt.L2, abs=1e-12)
    assert delta_fn(sig, 2, 1) == pytest.approx(lt.L3, abs=1e-12)
    c = cos_params(sig)
    assert lt.L1 - lt.L2 == pytest.approx((2 * c.X - 1) * (c.Y - c.Z), abs=1e-12)
    assert lt.L3 - lt.L1 == pytest.approx((2 * c.Y - 1) * (c.Z - c.X), abs=1e-12)
    assert lt.L3 - lt.L2 == pytest.approx((2 * c.Z - 1) * (c.Y - c.X), abs=1e-12)


@pytest.mark.parametrize("sig", [Signature(4, 5, 6), Signature(3, 7, 7), Signature(5, 6, 9)])
def test_delta_routes_agree_with_l_table(sig: Signature) -> None:
    lt = l_table(sig)
    for index, value in l_table_delta_routes(sig).items():
        assert value == pytest.approx(lt[index], abs=1e-12), index


def test_delta_index_range_is_checked() -> None:
    with pytest.raises(ValueError):
        delta_fn(Signature(3, 4, 5), 5, 1)
    with pytest.raises(ValueError):
        delta_prime(Signature(3, 3, INF), 1, 1)


def test_c_star_limit_is_37() -> None:
    assert c_star_expanded(CosTriple(1.0, 1.0, 1.0)) == 37.0


@pytest.mark.parametrize("sig", [Signature(4, 5, 6), Signature(3, 4, 7), Signature(7, 8, 9)])
def test_c_star_expanded_matches_bound(sig: Signature) -> None:
    assert c_star_expanded(sig) == pytest.approx(c_star_bound(sig, canonical_l0(sig)), rel=1e-12)


def test_published_c_star_table() -> None:
    s335, s336 = Signature(3, 3, 5), Signature(3, 3, 6)
    assert c_star_bound(s335, alternative_l0(s335)) == pytest.approx(
        (833 + 365 * math.sqrt(5)) / 324, abs=1e-12
    )
    assert c_star_bound(s336, alternative_l0(s336)) == pytest.approx(
        61 / 18 + 785 / 324 * math.sqrt(3), abs=1e-12
    )
    with pytest.raises(ValueError):
        alternative_l0(Signature(3, 3, 7))


def test_contact_data_largest_chord() -> None:
    cd = contact_data(Signature(4, 5, 6))
    assert cd.cosh_c_star == cd.cosh_rp_star
    assert cd.cosh_rp_star >= max(cd.cosh_pq_star, cd.cosh_qr_star)
    assert math.isinf(contact_data(Signature(3, 3, INF)).sinh2_dq)


def test_side_coshes_at_infinity() -> None:
    sides = side_coshes(Signature(3, 3, INF))
    assert math.isinf(sides.cosh_b) and math.isinf(sides.cosh_c)
    assert sides.cosh_a == pytest.approx((1 + 0.25) / 0.75)


def test_chord_kinds() -> None:
    sig = Signature(4, 5, 6)
    assert chord(sig, "r") > 1.0
    assert chord(sig, "p") > 1.0
    with pytest.raises(ValueError):
        chord(sig, "q")


def test_rho5_polynomial_and_l10_for_336() -> None:
    z = math.cos(math.pi / 6)
    assert rho5_polynomial_333(z) == pytest.approx(6.0980762114, abs=1e-9)
    assert l_table(Signature(3, 3, 6)).L10 == pytest.approx(1.8660254038, abs=1e-9)


def test_two_arcosh() -> None:
    assert two_arcosh(1.0) is None
    assert two_arcosh(math.cosh(0.5)) == pytest.approx(1.0)


def test_r2_named_forms() -> None:
    # 4cos²(π/5) − 1 = 2cos(π/5)
    assert r2_l2_1_2(5, 7) == pytest.approx(r2_l1_2(5, 7), abs=1e-12)
    assert r2_l1_2(4, 8) < r2_l1_3(4, 8)
    y, z = math.cos(math.pi / 4), math.cos(math.pi / 6)
    assert r2_l2_1_qm1(4, 6) == pytest.approx(2 * math.acosh(2 * y * y + 2 * z * z - 1))


def test_r2_family_symmetry() -> None:
    hf = head_formulas(Signature(2, 5, 9))
    assert hf.r2_l1(2) == pytest.approx(hf.r2_l1(7))
    assert hf.r2_l2(1, 2) == pytest.approx(hf.r2_l2(7, 8))
    with pytest.raises(ValueError):
        head_formulas(Signature(3, 5, 9)).r2_l1(2)


@pytest.mark.parametrize("p", [6, 7, 8, 9, 10])
def test_r2_gap_at_infinity(p: int) -> None:
    rq = r2_quantities(p, INF)
    assert rq.gap_at_infinity == pytest.approx(2 * math.cos(math.pi / p) ** 2, abs=1e-12)
    with pytest.raises(ValueError):
        _ = rq.rho3_closed


def test_r2_rho3_beats_bound_for_2_10_10() -> None:
    rq = r2_quantities(10, 10)
    assert rq.rho3_closed > rq.C_l2_1_qm1
