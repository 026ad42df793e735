"""
trispec.trispectrum
=================================

Spectrum heads of Γ(r,p,q): the predicted pattern, an independent
brute-force head from group enumeration, and their cross-validation.

Brute force
-----------
1. Enumerate tiles near the base incenter ``o`` (radius ``rad_T`` to the
   farthest vertex of ``T``).
2. Candidates are the direct hyperbolics of length ``≤ cutoff`` whose axis
   passes within ``rad_T`` of ``o``; each conjugacy class of Γ₀ meets them,
   and they satisfy ``sinh(d(o,γo)/2) ≤ cosh(rad_T)·sinh(cutoff/2)``.
3. Two candidates conjugate in Γ₀ are conjugate by an element moving ``o``
   by at most ``2·rad_T + cutoff/2``. Conjugating by all such elements and
   recording the orientation of each conjugator in a parity union-find
   splits each Γ₀-class into its one or two Γ-classes.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .trisconfig import BruteForceConfig, GraphConfig, GridConfig
from .trisforms import (
    INF,
    Signature,
    head_formulas,
    r2_l1_2,
    r2_l1_3,
    r2_l1_4,
    r2_l2_1_2,
    r2_l2_1_qm1,
)
from .trisgeom import MotionIndex, batch_apply, batch_cosh_dist
from .trisgraph import build_star_ball, level_catalog, rho_star_report
from .trisgroup import (
    DEFAULT_TILE_BUDGET,
    TileBall,
    _batch_dist_to_geodesic,
    _inverse_stack,
    axis,
    axis_through_even_vertex,
    evaluate,
    triangle_group,
)

logger = logging.getLogger(__name__)

Exactness = Literal["Exact", "AtLeast"]
LENGTH_TOL = 1e-9
CUTOFF_MARGIN = 1e-6


@dataclass(frozen=True)
class SpectrumEntry:
    length: float
    multiplicity: int
    exactness: Exactness
    label: str = ""
    representatives: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.multiplicity < 1:
            msg = f"multiplicity must be ≥ 1, got {self.multiplicity}"
            raise ValueError(msg)


@dataclass(frozen=True)
class BruteClass:
    """One Γ-conjugacy class found by the brute-force search."""

    length: float
    representative: str
    size: int
    self_inverse: bool


@dataclass
class SpectrumHead:
    """
    Beginning of a length spectrum, sorted by length.

    ``open_tail`` marks a predicted head whose next value is unknown.
    ``provenance`` is ``"Predicted"`` or ``"BruteForce"``; brute-force heads
    record the word bounds used and whether the search was exhaustive.
    """

    sig: Signature
    entries: list[SpectrumEntry]
    cutoff: float
    provenance: Literal["Predicted", "BruteForce"]
    completeness_note: str = ""
    open_tail: bool = False
    max_word: int | None = None
    conj_depth: int | None = None
    certified: bool = False
    classes: list[BruteClass] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.entries.sort(key=lambda e: e.length)

    def lengths(self) -> list[float]:
        return [e.length for e in self.entries]


# ----------------------------
# Predicted heads
# ----------------------------


def _merge(entries: list[SpectrumEntry]) -> list[SpectrumEntry]:
    """Fold entries with coincident values into the first; the count becomes a bound."""
    out: list[SpectrumEntry] = []
    for e in sorted(entries, key=lambda e: e.length):
        if out and abs(out[-1].length - e.length) <= LENGTH_TOL:
            logger.debug("Merged coincident value %s into %s", e.label, out[-1].label)
            kept = out[-1]
            out[-1] = SpectrumEntry(kept.length, kept.multiplicity, "AtLeast", f"{kept.label}={e.label}")
            continue
        out.append(e)
    return out


def _l1_2(p: int, q: int | float) -> SpectrumEntry:
    # at p = 4 the l1(2) element is R·P², a product of two half-turns, which
    # R conjugates to its inverse
    mult = 1 if p == 4 else 2
    return SpectrumEntry(r2_l1_2(p, q), mult, "Exact", "l1(2)")


def _l2_1_2(p: int, q: int | float) -> SpectrumEntry:
    return SpectrumEntry(r2_l2_1_2(p, q), 1, "AtLeast", "l2(1,2)")


def _l2_1_qm1(p: int, q: int | float) -> SpectrumEntry:
    return SpectrumEntry(r2_l2_1_qm1(p, q), 1, "Exact", "l2(1,q-1)")


def _predicted_r2(sig: Signature) -> tuple[list[SpectrumEntry], bool]:
    """
    Heads for r = 2, one pattern per range of p.

    Each closed form is only evaluated where it is listed: l1(2) needs p ≥ 4
    and l2(1,2) needs p ≥ 5 to be hyperbolic.
    """
    p, q = sig.p, sig.q
    if p == 3:
        if q == 7:
            return [_l2_1_qm1(p, q)], True
        return [_l2_1_qm1(p, q), SpectrumEntry(r2_l1_4(p, q), 1, "AtLeast", "l1(4)")], True
    if p == 4:
        if q in (6, 7):
            l13 = SpectrumEntry(r2_l1_3(p, q), 1, "AtLeast", "l1(3)")
            return [_l1_2(p, q), l13, _l2_1_qm1(p, q)], True
        if q == 8:
            # l1(3) = l2(1,7) here, so the multiplicity of l2(1,7) is a bound only
            bound = SpectrumEntry(r2_l2_1_qm1(p, q), 1, "AtLeast", "l2(1,q-1)")
            return [_l1_2(p, q), bound], True
        return [_l1_2(p, q), _l2_1_qm1(p, q)], True
    if p == 5:
        if q == 5:
            return [_l1_2(p, q), _l2_1_qm1(p, q)], True
        return _merge([_l1_2(p, q), _l2_1_2(p, q)]), True
    if p <= 10:
        if q == INF or (p, q) == (10, 10):
            return [_l1_2(p, q), _l2_1_2(p, q)], True
        return [_l1_2(p, q)], True
    return [_l1_2(p, q), _l2_1_2(p, q)], True


def predicted_head(sig: Signature) -> SpectrumHead:
    hf = head_formulas(sig)
    r, p, q = sig.r, sig.p, sig.q
    open_tail = False
    if r >= 4:
        if r == p == q:
            entries = [SpectrumEntry(hf.l1, 5, "AtLeast", "l1=l2=l3")]
        elif r == p:
            entries = [
                SpectrumEntry(hf.l1, 2, "Exact", "l1"),
                SpectrumEntry(hf.l2, 3, "AtLeast", "l2=l3"),
            ]
        elif p == q:
            entries = [
                SpectrumEntry(hf.l1, 4, "Exact", "l1=l2"),
                SpectrumEntry(hf.l3, 1, "AtLeast", "l3"),
            ]
        else:
            entries = [
                SpectrumEntry(hf.l1, 2, "Exact", "l1"),
                SpectrumEntry(hf.l2, 2, "Exact", "l2"),
                SpectrumEntry(hf.l3, 1, "AtLeast", "l3"),
            ]
    elif r == 3:
        if p == 3:
            entries = [SpectrumEntry(hf.l1, 2, "AtLeast", "l1")]
            if q in (5, 6):
                entries.append(SpectrumEntry(hf.l2_prime, 2, "AtLeast", "l2'"))
            open_tail = True
        elif p == q:
            entries = [
                SpectrumEntry(hf.l1, 2, "AtLeast", "l1=l2"),
                SpectrumEntry(hf.l3, 1, "AtLeast", "l3"),
            ]
        else:
            entries = [
                SpectrumEntry(hf.l1, 2, "Exact", "l1=l2"),
                SpectrumEntry(hf.l3, 1, "AtLeast", "l3"),
            ]
    else:
        entries, open_tail = _predicted_r2(sig)

    head = SpectrumHead(
        sig=sig,
        entries=entries,
        cutoff=entries[-1].length,
        provenance="Predicted",
        open_tail=open_tail,
        completeness_note="closed-form pattern",
    )
    return head


def default_cutoff(sig: Signature) -> float:
    if sig.r >= 3:
        hf = head_formulas(sig)
        if sig.as_tuple() in ((3, 3, 5), (3, 3, 6)):
            return hf.l2_prime + CUTOFF_MARGIN
        return hf.l3 + CUTOFF_MARGIN
    values = predicted_head(sig).lengths()
    return values[min(1, len(values) - 1)] + CUTOFF_MARGIN


# ----------------------------
# Brute force
# ----------------------------


class _ParityUnionFind:
    """
    Union-find over candidates with the orientation of the joining conjugator.

    ``parity[i]`` is relative to ``parent[i]`` until :meth:`find` compresses
    it to be relative to the root. A component closing an odd cycle is one
    Γ-class; an even one splits into the two parity classes.
    """

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.parity = [0] * n
        self.odd = [False] * n

    def find(self, i: int) -> tuple[int, int]:
        """Root of ``i`` and the parity of ``i`` relative to it."""
        path = []
        node = i
        while self.parent[node] != node:
            path.append(node)
            node = self.parent[node]
        root = node
        acc = 0
        for n in reversed(path):
            acc ^= self.parity[n]
            self.parity[n] = acc
            self.parent[n] = root
        return root, (self.parity[i] if i != root else 0)

    def union(self, i: int, j: int, parity: int) -> None:
        ri, pi = self.find(i)
        rj, pj = self.find(j)
        if ri == rj:
            if pi ^ pj != parity:
                self.odd[ri] = True
            return
        self.parent[rj] = ri
        self.parity[rj] = pi ^ pj ^ parity
        self.odd[ri] = self.odd[ri] or self.odd[rj]

    def class_key(self, i: int) -> tuple[int, int]:
        root, par = self.find(i)
        return root, 0 if self.odd[root] else par


def _reach(radius: float, cutoff: float) -> float:
    return 2.0 * math.asinh(math.cosh(radius) * math.sinh(cutoff / 2.0))


def _lengths(mats: np.ndarray) -> np.ndarray:
    half = np.abs(mats[:, 0, 0] + mats[:, 1, 1]) / 2.0
    return 2.0 * np.arccosh(np.maximum(half, 1.0))


def brute_force_head(
    sig: Signature,
    cutoff: float | None = None,
    max_word: int = 12,
    conj_depth: int = 10,
    tile_budget: int = DEFAULT_TILE_BUDGET,
) -> SpectrumHead:
    if not sig.finite:
        msg = f"brute force needs a compact triangle; ({sig.label}) has q = inf"
        raise ValueError(msg)
    if cutoff is None:
        cutoff = default_cutoff(sig)
    group = triangle_group(sig, tile_budget)
    rad = group.radius
    o = group.origin.z
    reach = _reach(rad, cutoff)
    conj_reach = 2.0 * rad + cutoff / 2.0
    tiles = group.tiles_within(max(reach, conj_reach), max(2 * max_word, 2 * conj_depth + 1))
    wordlen = np.array([len(w) for w in tiles.words])
    in_reach = tiles.cosh_disp <= math.cosh(reach) * (1 + 1e-12)
    in_conj = tiles.cosh_disp <= math.cosh(conj_reach) * (1 + 1e-12)

    cand = tiles.select(~tiles.reversing & in_reach & (wordlen <= 2 * max_word))
    lengths = _lengths(cand.mats)
    keep = (lengths > 1e-9) & (lengths <= cutoff)
    for i in np.flatnonzero(keep):
        ax = axis(cand.element(int(i)).motion)
        keep[i] = _batch_dist_to_geodesic(np.array([o]), ax)[0] <= rad + 1e-12
    cand = cand.select(keep)
    lengths = lengths[keep]
    logger.info(
        "Brute force (%s): %s tiles, %s candidates up to %.9f",
        sig.label,
        len(tiles),
        len(cand),
        cutoff,
    )

    index = MotionIndex(tol=1e-7, cell=1e-5)
    for i in range(len(cand)):
        index.add(cand.mats[i], i)

    conj = tiles.select(in_conj & (wordlen <= 2 * conj_depth + 1))
    conj_inv = _inverse_stack(conj.mats)
    uf = _ParityUnionFind(len(cand))
    for i in range(len(cand)):
        images = conj.mats @ cand.mats[i] @ conj_inv
        disp = batch_cosh_dist(batch_apply(images, None, o), o)
        for j in np.flatnonzero(disp <= math.cosh(reach) * (1 + 1e-9)):
            found = index.find(images[j])
            if found is not None:
                uf.union(i, int(found), int(conj.reversing[j]))

    classes = _collect_classes(uf, cand, lengths, index)
    certified = not (
        tiles.truncated
        or np.any(in_reach & (wordlen > 2 * max_word))
        or np.any(in_conj & (wordlen > 2 * conj_depth + 1))
    )
    if certified:
        note = f"certified: all elements moving o by at most {reach:.6f} were enumerated"
    else:
        note = f"word-limited: max_word={max_word}, conj_depth={conj_depth}"
        logger.warning("Brute force (%s) is word-limited; multiplicities are lower bounds", sig.label)
    return SpectrumHead(
        sig=sig,
        entries=_entries_from_classes(classes, certified),
        cutoff=cutoff,
        provenance="BruteForce",
        completeness_note=note,
        max_word=max_word,
        conj_depth=conj_depth,
        certified=certified,
        classes=classes,
    )


def _collect_classes(
    uf: _ParityUnionFind, cand: TileBall, lengths: np.ndarray, index: MotionIndex
) -> list[BruteClass]:
    members: dict[tuple[int, int], list[int]] = {}
    for i in range(len(cand)):
        members.setdefault(uf.class_key(i), []).append(i)
    out = []
    for key, idx in members.items():
        lens = lengths[idx]
        if np.ptp(lens) > LENGTH_TOL:
            logger.warning("Class of (%s) with spread lengths %s", cand.words[idx[0]], lens.tolist())
        best = min(idx, key=lambda i: (len(cand.words[i]), cand.words[i]))
        inv = index.find(_inverse_stack(cand.mats[best : best + 1])[0])
        out.append(
            BruteClass(
                length=float(lens.min()),
                representative=cand.element(best).label,
                size=len(idx),
                self_inverse=inv is not None and uf.class_key(int(inv)) == key,
            )
        )
    out.sort(key=lambda c: (c.length, c.representative))
    return out


def _entries_from_classes(classes: list[BruteClass], certified: bool) -> list[SpectrumEntry]:
    buckets: list[list[BruteClass]] = []
    for cls in classes:
        if buckets and cls.length - buckets[-1][0].length <= LENGTH_TOL:
            buckets[-1].append(cls)
        else:
            buckets.append([cls])
    return [
        SpectrumEntry(
            length=b[0].length,
            multiplicity=len(b),
            exactness="Exact" if certified else "AtLeast",
            representatives=tuple(c.representative for c in b),
        )
        for b in buckets
    ]


def inverse_pairs(head: SpectrumHead) -> list[tuple[float, str, bool]]:
    """``(length, representative, conjugate to its inverse)`` per class."""
    if head.provenance != "BruteForce":
        msg = "inverse pairs are available on brute-force heads only"
        raise ValueError(msg)
    return [(c.length, c.representative, c.self_inverse) for c in head.classes]


# ----------------------------
# Cross-validation
# ----------------------------


@dataclass(frozen=True)
class Check:
    """
    One line of a validation report.

    Only ``"mismatch"`` counts as a failure; ``"violation"`` and
    ``"discrepancy"`` are computed comparisons reported for information.
    """

    name: str
    status: Literal["ok", "mismatch", "violation", "exceptional", "discrepancy", "info", "skipped"]
    details: str = ""


@dataclass
class ValidationReport:
    sig: Signature
    predicted: SpectrumHead
    brute: SpectrumHead | None
    checks: list[Check] = field(default_factory=list)

    @property
    def mismatches(self) -> list[Check]:
        return [c for c in self.checks if c.status == "mismatch"]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _same_length(a: float, b: float) -> bool:
    return abs(a - b) <= LENGTH_TOL * max(1.0, a)


def _compare_heads(pred: SpectrumHead, brute: SpectrumHead) -> list[Check]:
    checks = []
    for e in pred.entries:
        name = f"entry {e.label}"
        if e.length > brute.cutoff:
            checks.append(Check(name, "skipped", f"length {e.length:.12g} beyond the cutoff"))
            continue
        hit = next((b for b in brute.entries if _same_length(b.length, e.length)), None)
        if hit is None:
            checks.append(Check(name, "mismatch", f"length {e.length:.12g} not observed"))
        elif e.exactness == "Exact" and hit.multiplicity != e.multiplicity:
            detail = f"multiplicity {hit.multiplicity}, expected {e.multiplicity}"
            checks.append(Check(name, "mismatch", detail))
        elif e.exactness == "AtLeast" and hit.multiplicity < e.multiplicity:
            detail = f"multiplicity {hit.multiplicity}, expected at least {e.multiplicity}"
            checks.append(Check(name, "mismatch", detail))
        else:
            detail = f"length {e.length:.12g}, multiplicity {hit.multiplicity}"
            checks.append(Check(name, "ok", detail))
    last = pred.entries[-1].length
    for b in brute.entries:
        if b.length > last + LENGTH_TOL:
            break
        if not any(_same_length(b.length, e.length) for e in pred.entries):
            detail = f"length {b.length:.12g} x{b.multiplicity} is not in the predicted head"
            checks.append(Check("unexpected value", "mismatch", detail))
    return checks


def _even_vertex_check(sig: Signature, brute: SpectrumHead) -> Check | None:
    """The class of l2(1,q-1) is self-inverse with its axis on an even vertex."""
    target = r2_l2_1_qm1(sig.p, sig.q)
    found = []
    for cls in brute.classes:
        if _same_length(cls.length, target):
            m = evaluate(sig, cls.representative.split())
            found.append((cls, axis_through_even_vertex(sig, m)))
    if not found:
        return None
    ok = any(through and cls.self_inverse for cls, through in found)
    detail = "; ".join(
        f"{cls.representative}: even vertex {through}, self-inverse {cls.self_inverse}"
        for cls, through in found
    )
    return Check("l2(1,q-1) class", "ok" if ok else "mismatch", detail)


def _catalog_check(sig: Signature, brute: SpectrumHead) -> Check:
    values = set()
    for level in (2, 3, 4):
        for length in level_catalog(sig, level).lengths():
            if length <= brute.cutoff:
                values.add(round(length, 8))
    seen = {round(e.length, 8) for e in brute.entries}
    if values == seen:
        return Check("level catalog", "ok", f"{len(values)} values below cutoff")
    return Check(
        "level catalog",
        "info",
        f"catalog {sorted(values)} vs observed {sorted(seen)}",
    )


def cross_validate(
    sig: Signature,
    brute_cfg: BruteForceConfig | None = None,
    graph_cfg: GraphConfig | None = None,
) -> ValidationReport:
    brute_cfg = brute_cfg or BruteForceConfig()
    graph_cfg = graph_cfg or GraphConfig()
    pred = predicted_head(sig)
    report = ValidationReport(sig, pred, None)

    if sig.finite:
        cutoff = brute_cfg.cutoff
        if cutoff is None:
            cutoff = max(default_cutoff(sig), pred.entries[-1].length + CUTOFF_MARGIN)
        brute = brute_force_head(
            sig,
            cutoff=cutoff,
            max_word=brute_cfg.max_word,
            conj_depth=brute_cfg.conj_depth,
            tile_budget=brute_cfg.tile_budget,
        )
        report.brute = brute
        report.checks.extend(_compare_heads(pred, brute))
        report.checks.append(
            Check("completeness", "ok" if brute.certified else "info", brute.completeness_note)
        )
        if sig.r >= 3:
            report.checks.append(_catalog_check(sig, brute))
        if all(n % 2 for n in sig.as_tuple()):
            paired = [c for c in brute.classes if c.self_inverse]
            status = "ok" if not paired else "mismatch"
            report.checks.append(
                Check("inverse classes", status, f"{len(paired)} classes conjugate to their inverse")
            )
        if sig.r == 2 and (even := _even_vertex_check(sig, brute)) is not None:
            report.checks.append(even)
    else:
        report.checks.append(Check("brute force", "skipped", "q = inf"))

    if sig.r >= 3 and graph_cfg.ball >= 5:
        ball = build_star_ball(sig, 5, cap=graph_cfg.max_ball)
        for cmp in rho_star_report(sig, ball):
            status = cmp.status
            if cmp.l0_name == "alternative" and status == "violation":
                status = "discrepancy"
            report.checks.append(
                Check(
                    f"rho*(5) vs C*({cmp.l0_name})",
                    status,
                    f"cosh rho*(5)={cmp.cosh_rho5:.7f}, cosh C*={cmp.cosh_c_star:.7f}",
                )
            )
    logger.info(
        "Validated (%s): %s checks, %s mismatches",
        sig.label,
        len(report.checks),
        len(report.mismatches),
    )
    return report


def grid_signatures(grid: GridConfig) -> list[Signature]:
    pmax = grid.pmax or grid.qmax
    out = []
    for r in range(max(2, grid.rmin), grid.rmax + 1):
        for p in range(r, pmax + 1):
            for q in range(p, grid.qmax + 1):
                try:
                    out.append(Signature(r, p, q))
                except ValueError:
                    continue
    return out


def validate_grid(
    sigs: list[Signature],
    brute_cfg: BruteForceConfig | None = None,
    graph_cfg: GraphConfig | None = None,
    jobs: int = 1,
) -> list[ValidationReport]:
    """Cross-validate several signatures, in input order."""
    if jobs <= 1 or len(sigs) <= 1:
        return [cross_validate(s, brute_cfg, graph_cfg) for s in sigs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(cross_validate, s, brute_cfg, graph_cfg) for s in sigs]
        return [f.result() for f in futures]
