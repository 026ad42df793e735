import math

import pytest

from trispec.trisconfig import BruteForceConfig, GraphConfig, GridConfig
from trispec.trisforms import INF, Signature, head_formulas, r2_l1_2, r2_l2_1_qm1
from trispec.trisgeom import Hyperbolic, classify, compose, inverse, translation_length
from trispec.trisgroup import evaluate, generators
from trispec.trispectrum import (
    CUTOFF_MARGIN,
    SpectrumEntry,
    SpectrumHead,
    _ParityUnionFind,
    brute_force_head,
    cross_validate,
    default_cutoff,
    grid_signatures,
    inverse_pairs,
    predicted_head,
)


def _shape(head: SpectrumHead) -> list[tuple[int, str]]:
    return [(e.multiplicity, e.exactness) for e in head.entries]


def test_predicted_head_generic_r_at_least_4() -> None:
    sig = Signature(4, 5, 6)
    hf = head_formulas(sig)
    head = predicted_head(sig)
    assert head.lengths() == pytest.approx([hf.l1, hf.l2, hf.l3])
    assert _shape(head) == [(2, "Exact"), (2, "Exact"), (1, "AtLeast")]
    assert head.provenance == "Predicted"
    assert not head.open_tail


@pytest.mark.parametrize(
    ("sig", "shape"),
    [
        (Signature(4, 4, 4), [(5, "AtLeast")]),
        (Signature(5, 5, 7), [(2, "Exact"), (3, "AtLeast")]),
        (Signature(4, 6, 6), [(4, "Exact"), (1, "AtLeast")]),
        (Signature(3, 5, 5), [(2, "AtLeast"), (1, "AtLeast")]),
        (Signature(3, 4, 7), [(2, "Exact"), (1, "AtLeast")]),
    ],
    ids=lambda v: v.label if isinstance(v, Signature) else None,
)
def test_predicted_head_coincidences(sig: Signature, shape: list[tuple[int, str]]) -> None:
    assert _shape(predicted_head(sig)) == shape


def test_predicted_head_3_3_q() -> None:
    head = predicted_head(Signature(3, 3, 7))
    assert head.open_tail
    assert len(head.entries) == 1
    head = predicted_head(Signature(3, 3, 6))
    assert [e.label for e in head.entries] == ["l1", "l2'"]
    assert head.entries[1].length == pytest.approx(2 * math.acosh(1.8660254038), abs=1e-9)


def test_predicted_head_r_equal_2() -> None:
    head = predicted_head(Signature(2, 3, 7))
    assert head.lengths() == pytest.approx([r2_l2_1_qm1(3, 7)])
    merged = predicted_head(Signature(2, 5, 7))
    assert len(merged.entries) == 1
    assert merged.entries[0].length == pytest.approx(r2_l1_2(5, 7))
    bound = predicted_head(Signature(2, 4, 8))
    assert bound.entries[-1].exactness == "AtLeast"
    at_inf = predicted_head(Signature(2, 7, INF))
    assert len(at_inf.entries) == 2


@pytest.mark.parametrize(
    ("sig", "shape"),
    [
        (Signature(2, 3, 7), [(1, "Exact")]),
        (Signature(2, 3, 8), [(1, "Exact"), (1, "AtLeast")]),
        (Signature(2, 4, 5), [(1, "Exact"), (1, "Exact")]),
        (Signature(2, 4, 6), [(1, "Exact"), (1, "AtLeast"), (1, "Exact")]),
        (Signature(2, 4, 8), [(1, "Exact"), (1, "AtLeast")]),
        (Signature(2, 4, INF), [(1, "Exact"), (1, "Exact")]),
        (Signature(2, 5, 5), [(2, "Exact"), (1, "Exact")]),
        (Signature(2, 5, 6), [(2, "AtLeast")]),
        (Signature(2, 10, 10), [(2, "Exact"), (1, "AtLeast")]),
        (Signature(2, 11, 11), [(2, "Exact"), (1, "AtLeast")]),
    ],
    ids=lambda v: v.label if isinstance(v, Signature) else None,
)
def test_predicted_head_r_equal_2_shapes(sig: Signature, shape: list[tuple[int, str]]) -> None:
    head = predicted_head(sig)
    assert _shape(head) == shape
    assert head.open_tail
    assert head.lengths() == sorted(head.lengths())
    assert default_cutoff(sig) > head.lengths()[0]


@pytest.mark.parametrize("q", [5, 6, 8])
def test_l1_2_class_at_p_4_is_self_inverse(q: int) -> None:
    sig = Signature(2, 4, q)
    g = generators(sig)
    m = evaluate(sig, ("R", "P", "P"))
    assert isinstance(classify(m), Hyperbolic)
    assert translation_length(m) == pytest.approx(r2_l1_2(4, q), abs=1e-9)
    assert compose(compose(g.R, m), inverse(g.R)).close_to(inverse(m), tol=1e-9)
    assert predicted_head(sig).entries[0].multiplicity == 1


def test_entries_are_sorted_and_checked() -> None:
    head = SpectrumHead(
        Signature(4, 5, 6),
        [SpectrumEntry(3.0, 1, "Exact"), SpectrumEntry(2.0, 2, "Exact")],
        3.0,
        "Predicted",
    )
    assert head.lengths() == [2.0, 3.0]
    with pytest.raises(ValueError):
        SpectrumEntry(1.0, 0, "Exact")
    with pytest.raises(ValueError):
        inverse_pairs(head)


def test_default_cutoff() -> None:
    hf = head_formulas(Signature(4, 5, 6))
    assert default_cutoff(Signature(4, 5, 6)) == pytest.approx(hf.l3 + CUTOFF_MARGIN)
    hf = head_formulas(Signature(3, 3, 5))
    assert default_cutoff(Signature(3, 3, 5)) == pytest.approx(hf.l2_prime + CUTOFF_MARGIN)


def test_parity_union_find_splits_and_merges() -> None:
    uf = _ParityUnionFind(4)
    uf.union(0, 1, 1)
    uf.union(1, 2, 0)
    assert uf.class_key(0) != uf.class_key(1)
    assert uf.class_key(1) == uf.class_key(2)
    uf.union(0, 2, 0)
    assert uf.class_key(0) == uf.class_key(1) == uf.class_key(2)
    assert uf.class_key(3) != uf.class_key(0)


def test_grid_signatures_skip_non_hyperbolic() -> None:
    sigs = grid_signatures(GridConfig(rmin=3, rmax=3, pmax=0, qmax=4))
    assert sigs == [Signature(3, 3, 4), Signature(3, 4, 4)]
    assert Signature(2, 3, 7) in grid_signatures(GridConfig(rmin=2, rmax=2, qmax=7))


def test_brute_force_refuses_ideal_vertex() -> None:
    with pytest.raises(ValueError):
        brute_force_head(Signature(3, 3, INF))


def test_cross_validate_at_infinity_skips_brute_force() -> None:
    report = cross_validate(Signature(2, 7, INF), graph_cfg=GraphConfig(ball=0))
    assert report.brute is None
    assert report.ok
    assert [c.status for c in report.checks] == ["skipped"]


@pytest.mark.integration
@pytest.mark.parametrize("sig", [Signature(4, 5, 6), Signature(3, 4, 5), Signature(5, 5, 7)], ids=lambda s: s.label)
def test_brute_force_confirms_predicted_head(sig: Signature) -> None:
    report = cross_validate(sig, BruteForceConfig(), GraphConfig(ball=0))
    assert report.brute is not None
    assert report.brute.certified
    assert report.ok, [c.details for c in report.mismatches]


@pytest.mark.integration
def test_odd_signature_has_no_self_inverse_classes() -> None:
    head = brute_force_head(Signature(3, 5, 7))
    assert head.classes
    assert not any(inverse for _, _, inverse in inverse_pairs(head))


@pytest.mark.integration
@pytest.mark.parametrize(
    ("sig", "l1_2"),
    [
        (Signature(2, 4, 5), 1),
        (Signature(2, 4, 6), 1),
        (Signature(2, 5, 5), 2),
        (Signature(2, 3, 7), None),
        (Signature(2, 3, 8), None),
    ],
    ids=lambda v: v.label if isinstance(v, Signature) else None,
)
def test_brute_force_confirms_r_equal_2_heads(sig: Signature, l1_2: int | None) -> None:
    cutoff = default_cutoff(sig)
    report = cross_validate(sig, BruteForceConfig(cutoff=cutoff), GraphConfig(ball=0))
    assert report.brute is not None
    assert report.ok, [c.details for c in report.mismatches]

    def multiplicity(length: float) -> int:
        return next(e.multiplicity for e in report.brute.entries if abs(e.length - length) < 1e-7)

    if l1_2 is not None:
        assert multiplicity(r2_l1_2(sig.p, sig.q)) == l1_2
    qm1 = r2_l2_1_qm1(sig.p, sig.q)
    if qm1 <= cutoff:
        assert multiplicity(qm1) == 1
