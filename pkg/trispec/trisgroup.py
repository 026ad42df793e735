"""
trispec.trisgroup
=================================

Realization of a hyperbolic triangle ``T`` in the upper half-plane, of the
reflection group Γ₀(r,p,q) generated by its sides and of the triangle group
Γ(r,p,q), its orientation-preserving half.

Placement
---------
- ``V_r = i``; side ``a`` runs up the imaginary axis to ``V_p = i·e^a``.
- ``V_q`` lies in ``x > 0``: side ``c`` leaves ``V_r`` at angle π/r
  clockwise from the upward direction. For q = ∞ it is the boundary point
  ``cot(π/2r)``.
- Reflections ``s1``, ``s2``, ``s3`` fix the sides ``a``, ``b``, ``c``.
- ``R = s3·s1``, ``P = s1·s2``, ``Q = s2·s3`` rotate clockwise by 2π/r,
  2π/p, 2π/q about ``V_r``, ``V_p``, ``V_q`` and satisfy ``R·P·Q = I``.

Enumeration
-----------
Γ₀ acts simply transitively on the tiles ``g·T``, so group elements are
enumerated as tiles: breadth first from ``T`` by right multiplication with
side reflections, deduplicated on canonical matrices, optionally pruned to
tiles whose incenter image stays near the base incenter ``o``. A word of
``2k`` reflections pairs into ``k`` rotations, so the direct elements of
reflection length ``≤ 2k`` are exactly the elements of rotation-word length
``≤ k``.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .trisconfig import WORD_CAP, ResourceCapError
from .trisforms import Signature, contact_data, side_coshes
from .trisgeom import (
    INFINITY,
    SIGN_EPS,
    BoundaryPoint,
    Geodesic,
    Hyperbolic,
    Motion,
    MotionIndex,
    UhpPoint,
    apply,
    batch_apply,
    batch_cosh_dist,
    classify,
    compose,
    dist,
    dist_to_geodesic,
    foot_on_geodesic,
    geodesic_through,
    identity,
    reflect,
    rotation_about,
)

logger = logging.getLogger(__name__)

REFLECTION_NAMES = ("s1", "s2", "s3")
ROTATION_LETTERS = ("R", "P", "Q", "R^-1", "P^-1", "Q^-1")

# (first, second) reflection indices → rotation letter
_PAIR_LETTER = {
    (2, 0): "R",
    (0, 2): "R^-1",
    (0, 1): "P",
    (1, 0): "P^-1",
    (1, 2): "Q",
    (2, 1): "Q^-1",
}
_LETTER_PAIR = {v: k for k, v in _PAIR_LETTER.items()}

MATCH_TOL = 1e-8
DEFAULT_TILE_BUDGET = 400_000


# ----------------------------
# Realization
# ----------------------------


@dataclass(frozen=True)
class TriangleRealization:
    """
    Concrete triangle with angles π/r, π/p, π/q.

    Fields
    ------
    v_r, v_p, v_q: vertices (``v_q`` is a :class:`BoundaryPoint` when q = ∞).
    side_a, side_b, side_c: geodesics carrying the sides; ``a = [V_r, V_p]``,
        ``b = [V_p, V_q]``, ``c = [V_q, V_r]``.
    incenter: center of the inscribed circle.
    r_star, p_star, q_star: contact points on sides b, c, a.
    radius: largest distance from the incenter to a vertex (∞ if ideal).
    """

    sig: Signature
    v_r: UhpPoint
    v_p: UhpPoint
    v_q: UhpPoint | BoundaryPoint
    side_a: Geodesic
    side_b: Geodesic
    side_c: Geodesic
    incenter: UhpPoint
    r_star: UhpPoint
    p_star: UhpPoint
    q_star: UhpPoint
    radius: float

    @property
    def sides(self) -> tuple[Geodesic, Geodesic, Geodesic]:
        return (self.side_a, self.side_b, self.side_c)

    def vertices(self) -> dict[str, UhpPoint | BoundaryPoint]:
        return {"r": self.v_r, "p": self.v_p, "q": self.v_q}


def _cw_about_i(z: UhpPoint, angle: float) -> UhpPoint:
    return apply(rotation_about(UhpPoint(0.0, 1.0), -angle), z)


@lru_cache(maxsize=256)
def realize(sig: Signature) -> TriangleRealization:
    sc = side_coshes(sig)
    cd = contact_data(sig)
    a = math.acosh(sc.cosh_a)
    v_r = UhpPoint(0.0, 1.0)
    v_p = UhpPoint(0.0, math.exp(a))
    if sig.finite:
        c = math.acosh(sc.cosh_c)
        v_q: UhpPoint | BoundaryPoint = _cw_about_i(
            UhpPoint(0.0, math.exp(c)), math.pi / sig.r
        )
    else:
        v_q = BoundaryPoint(1.0 / math.tan(math.pi / (2 * sig.r)))

    side_a = Geodesic.between(0.0, math.inf)
    side_b = geodesic_through(v_p, v_q)
    side_c = geodesic_through(v_r, v_q)

    d_r = math.asinh(math.sqrt(cd.sinh2_dr))
    d_p = math.asinh(math.sqrt(cd.sinh2_dp))
    rho_in = math.atanh(math.sinh(d_r) * math.tan(math.pi / (2 * sig.r)))
    s = math.acosh(math.cosh(d_r) * math.cosh(rho_in))
    incenter = _cw_about_i(UhpPoint(0.0, math.exp(s)), math.pi / (2 * sig.r))

    q_star = UhpPoint(0.0, math.exp(d_r))
    p_star = _cw_about_i(q_star, math.pi / sig.r)
    # contact on side b: go down from V_p by d_p, turn counterclockwise by π/p
    below = apply(
        rotation_about(UhpPoint(0.0, 1.0), math.pi / sig.p),
        UhpPoint(0.0, math.exp(-d_p)),
    )
    r_star = UhpPoint(below.x * math.exp(a), below.y * math.exp(a))

    radius = max(dist(incenter, v_r), dist(incenter, v_p))
    radius = max(radius, dist(incenter, v_q)) if sig.finite else math.inf
    logger.debug("Realized (%s): side a=%.6f, inradius=%.6f", sig.label, a, rho_in)
    return TriangleRealization(
        sig=sig,
        v_r=v_r,
        v_p=v_p,
        v_q=v_q,
        side_a=side_a,
        side_b=side_b,
        side_c=side_c,
        incenter=incenter,
        r_star=r_star,
        p_star=p_star,
        q_star=q_star,
        radius=radius,
    )


@dataclass(frozen=True)
class Generators:
    s1: Motion
    s2: Motion
    s3: Motion
    R: Motion
    P: Motion
    Q: Motion

    @property
    def reflections(self) -> tuple[Motion, Motion, Motion]:
        return (self.s1, self.s2, self.s3)


@lru_cache(maxsize=256)
def generators(sig: Signature) -> Generators:
    real = realize(sig)
    s1, s2, s3 = (reflect(side) for side in real.sides)
    return Generators(
        s1=s1,
        s2=s2,
        s3=s3,
        R=compose(s3, s1),
        P=compose(s1, s2),
        Q=compose(s2, s3),
    )


# ----------------------------
# Group elements
# ----------------------------


def rotation_word(reflections: tuple[int, ...]) -> tuple[str, ...]:
    """Pair an even reflection word into rotation letters."""
    if len(reflections) % 2:
        msg = "only even reflection words pair into rotations"
        raise ValueError(msg)
    out = []
    for i in range(0, len(reflections), 2):
        pair = (reflections[i], reflections[i + 1])
        if pair[0] == pair[1]:
            continue
        out.append(_PAIR_LETTER[pair])
    return tuple(out)


def reflection_word(word: tuple[str, ...] | list[str]) -> tuple[int, ...]:
    """Expand rotation letters or reflection names into reflection indices."""
    out: list[int] = []
    for letter in word:
        if letter in _LETTER_PAIR:
            out.extend(_LETTER_PAIR[letter])
        elif letter in REFLECTION_NAMES:
            out.append(REFLECTION_NAMES.index(letter))
        else:
            msg = f"unknown letter {letter!r}"
            raise ValueError(msg)
    return tuple(out)


@dataclass(frozen=True)
class GroupElement:
    """An element of Γ₀ with a reflection word realizing it."""

    reflections: tuple[int, ...]
    motion: Motion

    @property
    def is_direct(self) -> bool:
        return not self.motion.reversing

    @property
    def word(self) -> tuple[str, ...]:
        """Rotation letters for direct elements, reflection names otherwise."""
        if self.is_direct:
            return rotation_word(self.reflections)
        return tuple(REFLECTION_NAMES[i] for i in self.reflections)

    @property
    def label(self) -> str:
        return " ".join(self.word) or "e"


def evaluate(sig: Signature, word: tuple[str, ...] | list[str]) -> Motion:
    """The motion of a word in rotation letters and/or reflection names."""
    refl = generators(sig).reflections
    m = identity()
    for i in reflection_word(word):
        m = compose(m, refl[i])
    return m


# ----------------------------
# Tiles
# ----------------------------


@dataclass
class TileBall:
    """
    Tiles ``g·T`` found by a breadth-first search.

    ``words[i]`` is the reflection word reaching tile ``i``; ``centers`` are
    the images of the base incenter. ``truncated`` is set when the search
    stopped on its reflection-depth cap with tiles still in range.
    """

    mats: np.ndarray
    reversing: np.ndarray
    words: list[tuple[int, ...]]
    centers: np.ndarray
    cosh_disp: np.ndarray
    truncated: bool

    def __len__(self) -> int:
        return len(self.words)

    def element(self, i: int) -> GroupElement:
        orient = "reversing" if self.reversing[i] else "direct"
        return GroupElement(self.words[i], Motion.from_matrix(self.mats[i], orient))

    def select(self, mask: np.ndarray) -> "TileBall":
        idx = np.flatnonzero(mask)
        return TileBall(
            mats=self.mats[idx],
            reversing=self.reversing[idx],
            words=[self.words[i] for i in idx],
            centers=self.centers[idx],
            cosh_disp=self.cosh_disp[idx],
            truncated=self.truncated,
        )

    def direct(self) -> "TileBall":
        return self.select(~self.reversing)


def _renormalize(mats: np.ndarray) -> np.ndarray:
    det = np.abs(mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0])
    return mats / np.sqrt(det)[:, None, None]


def _inverse_stack(mats: np.ndarray) -> np.ndarray:
    det = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    adj = np.empty_like(mats)
    adj[:, 0, 0] = mats[:, 1, 1]
    adj[:, 1, 1] = mats[:, 0, 0]
    adj[:, 0, 1] = -mats[:, 0, 1]
    adj[:, 1, 0] = -mats[:, 1, 0]
    return adj / det[:, None, None]


def _batch_dist_to_geodesic(points: np.ndarray, g: Geodesic) -> np.ndarray:
    """Distances from a complex array of points to ``g``."""
    if g.is_vertical:
        x = points.real - g.u.value
        return np.arcsinh(np.abs(x) / points.imag)
    m = (g.u.value + g.v.value) / 2.0
    rad = (g.v.value - g.u.value) / 2.0
    # sinh d = | |z-m|² - R² | / (2 R y)
    return np.arcsinh(np.abs(np.abs(points - m) ** 2 - rad**2) / (2.0 * rad * points.imag))


class TriangleGroup:
    """
    The reflection group Γ₀(r,p,q) of a realized triangle.

    ``tile_budget`` caps the number of tiles a single search may collect;
    exceeding it raises :class:`ResourceCapError`.
    """

    def __init__(self, sig: Signature, tile_budget: int = DEFAULT_TILE_BUDGET) -> None:
        self.sig = sig
        self.real = realize(sig)
        self.gens = generators(sig)
        self.tile_budget = tile_budget
        self.origin = self.real.incenter
        self.radius = self.real.radius
        self._refl = np.stack([m.matrix for m in self.gens.reflections])

    def _require_compact(self, what: str) -> None:
        if not self.sig.finite:
            msg = f"{what} needs a compact triangle; q = inf is not supported"
            raise ValueError(msg)

    def tiles_within(self, radius: float, max_reflections: int) -> TileBall:
        """
        Tiles whose incenter lies within ``radius + rad_T`` of the base one.

        Every element moving the base incenter by at most ``radius`` is
        reachable through tiles that pass this test, so the result contains
        all of them unless ``truncated`` is set. ``radius = inf`` disables
        the pruning.
        """
        if math.isinf(radius):
            limit = math.inf
        else:
            self._require_compact("displacement pruning")
            limit = math.cosh(radius + self.radius)
        o = self.origin.z
        index = MotionIndex(tol=1e-9)
        index.add(np.eye(2), 0, False)
        mats: list[np.ndarray] = [np.eye(2)]
        rev: list[bool] = [False]
        words: list[tuple[int, ...]] = [()]
        frontier = [0]
        depth = 0
        truncated = False
        while frontier:
            fm = np.stack([mats[i] for i in frontier])
            frev = np.array([rev[i] for i in frontier])
            if depth >= max_reflections:
                truncated = math.isfinite(limit) and self._has_new_child(
                    fm, frev, index, limit
                )
                break
            nxt: list[int] = []
            for k in range(3):
                prod = _renormalize(fm @ self._refl[k])
                prev = ~frev
                keep = batch_cosh_dist(batch_apply(prod, prev, o), o) <= limit
                for j in np.flatnonzero(keep):
                    if index.add(prod[j], len(mats), bool(prev[j])):
                        mats.append(prod[j])
                        rev.append(bool(prev[j]))
                        words.append(words[frontier[j]] + (k,))
                        nxt.append(len(mats) - 1)
                if len(mats) > self.tile_budget:
                    msg = (
                        f"tile search for ({self.sig.label}) exceeded the budget of "
                        f"{self.tile_budget} tiles at reflection depth {depth + 1}; "
                        f"estimated size ≥ {len(mats) * 2}"
                    )
                    raise ResourceCapError(msg)
            logger.debug("Reflection depth %s: %s new tiles", depth + 1, len(nxt))
            frontier = nxt
            depth += 1

        stack = np.stack(mats)
        reversing = np.array(rev)
        centers = batch_apply(stack, reversing, o)
        if truncated:
            logger.warning(
                "Tile search for (%s) hit reflection depth %s with tiles in range",
                self.sig.label,
                max_reflections,
            )
        return TileBall(
            mats=stack,
            reversing=reversing,
            words=words,
            centers=centers,
            cosh_disp=batch_cosh_dist(centers, o),
            truncated=truncated,
        )

    def _has_new_child(
        self, fm: np.ndarray, frev: np.ndarray, index: MotionIndex, limit: float
    ) -> bool:
        o = self.origin.z
        for k in range(3):
            prod = _renormalize(fm @ self._refl[k])
            prev = ~frev
            keep = batch_cosh_dist(batch_apply(prod, prev, o), o) <= limit
            for j in np.flatnonzero(keep):
                if index.find(prod[j], bool(prev[j])) is None:
                    return True
        return False

    def ball(self, max_word: int) -> list[GroupElement]:
        """Direct elements of rotation-word length ``≤ max_word``."""
        tiles = self.tiles_within(math.inf, 2 * max_word)
        return [tiles.element(i) for i in range(len(tiles)) if not tiles.reversing[i]]

    def reduce_to_domain(
        self, z: UhpPoint, max_steps: int = 10_000
    ) -> tuple[UhpPoint, tuple[int, ...]]:
        """
        Reflect ``z`` into ``T``.

        Returns the reduced point and the reflection word ``w`` with
        ``z ∈ w·T``.
        """
        o = self.origin
        word: list[int] = []
        for _ in range(max_steps):
            for k, side in enumerate(self.real.sides):
                if _side_sign(side, z) * _side_sign(side, o) < 0:
                    z = apply(self.gens.reflections[k], z)
                    word.append(k)
                    break
            else:
                return z, tuple(word)
        msg = f"point did not reach the fundamental triangle in {max_steps} steps"
        raise RuntimeError(msg)

    def motion_of(self, reflections: tuple[int, ...]) -> Motion:
        m = identity()
        for k in reflections:
            m = compose(m, self.gens.reflections[k])
        return m


def _side_sign(side: Geodesic, z: UhpPoint) -> float:
    if side.is_vertical:
        return z.x - side.u.value
    m = (side.u.value + side.v.value) / 2.0
    rad = (side.v.value - side.u.value) / 2.0
    return (z.x - m) ** 2 + z.y**2 - rad**2


@lru_cache(maxsize=64)
def triangle_group(sig: Signature, tile_budget: int = DEFAULT_TILE_BUDGET) -> TriangleGroup:
    return TriangleGroup(sig, tile_budget)


def enumerate_ball(
    sig: Signature, max_word: int, cap: int = WORD_CAP
) -> list[GroupElement]:
    """
    All direct elements of rotation-word length ``≤ max_word``.

    Each element carries a shortest reflection word; the list is in
    breadth-first order, the identity first.
    """
    if max_word < 0:
        msg = f"max_word must be nonnegative, got {max_word}"
        raise ValueError(msg)
    if max_word > cap:
        growth = 2 ** (2 * max_word)
        msg = f"max_word={max_word} exceeds the cap {cap} (≈{growth:.1e} elements)"
        raise ResourceCapError(msg)
    ball = triangle_group(sig).ball(max_word)
    logger.info("Ball (%s) of radius %s: %s elements", sig.label, max_word, len(ball))
    return ball


# ----------------------------
# Axes, vertices and conjugacy
# ----------------------------


def fixed_points(m: Motion) -> tuple[BoundaryPoint, BoundaryPoint]:
    a, b, c, d = m.a, m.b, m.c, m.d
    if abs(c) <= SIGN_EPS * max(1.0, abs(a), abs(d)):
        return BoundaryPoint(b / (d - a)), INFINITY
    disc = math.sqrt(max(0.0, (a + d) ** 2 - 4.0))
    return BoundaryPoint((a - d - disc) / (2 * c)), BoundaryPoint((a - d + disc) / (2 * c))


def axis(m: Motion) -> Geodesic:
    if not isinstance(classify(m), Hyperbolic):
        msg = "axis is defined for hyperbolic motions only"
        raise ValueError(msg)
    u, v = fixed_points(m)
    return Geodesic(u, v)


def even_vertex_types(sig: Signature) -> list[str]:
    """Vertex types whose order is even (the even-valence tiling vertices)."""
    out = []
    for name, n in (("r", sig.r), ("p", sig.p), ("q", sig.q)):
        if n != math.inf and n % 2 == 0:
            out.append(name)
    return out


def axis_through_even_vertex(
    sig: Signature, m: Motion, search_radius: int = WORD_CAP, tol: float = 1e-8
) -> bool:
    """
    Whether the axis of ``m`` passes through a tiling vertex of even order.

    Powers of ``m`` move any vertex on the axis to within ``l/2`` of the
    foot of the base incenter, so only tiles within that displacement are
    examined; ``search_radius`` bounds their rotation-word length.
    """
    group = triangle_group(sig)
    group._require_compact("vertex search")
    ax = axis(m)
    types = even_vertex_types(sig)
    if not types:
        return False
    length = classify(m).length
    bound = dist_to_geodesic(group.origin, ax) + length + 2 * group.radius
    tiles = group.tiles_within(bound, 2 * search_radius)
    verts = group.real.vertices()
    for name in types:
        images = batch_apply(tiles.mats, tiles.reversing, verts[name].z)
        if np.any(_batch_dist_to_geodesic(images, ax) <= tol):
            return True
    return False


@dataclass(frozen=True)
class Yes:
    """A conjugator ``w`` with ``w·g·w⁻¹ = h``."""

    witness: GroupElement

    @property
    def word(self) -> tuple[str, ...]:
        return self.witness.word


@dataclass(frozen=True)
class NoWithinDepth:
    """
    No conjugator found.

    ``exhausted`` is set when the displacement-pruned search finished below
    its depth bound, in which case the answer is definitive.
    """

    depth: int
    exhausted: bool


ConjugacyVerdict = Yes | NoWithinDepth


def is_conjugate(sig: Signature, g: Motion, h: Motion, depth: int) -> ConjugacyVerdict:
    cg, ch = classify(g), classify(h)
    if not (isinstance(cg, Hyperbolic) and isinstance(ch, Hyperbolic)):
        msg = "conjugacy search expects hyperbolic motions"
        raise ValueError(msg)
    if abs(cg.length - ch.length) > 1e-8:
        return NoWithinDepth(depth, exhausted=True)
    group = triangle_group(sig)
    o = group.origin
    ax_g, ax_h = axis(g), axis(h)
    bound = (
        dist(o, foot_on_geodesic(o, ax_g))
        + dist(o, foot_on_geodesic(o, ax_h))
        + cg.length / 2.0
    )
    tiles = group.tiles_within(bound, 2 * depth).direct()
    limit = math.cosh(bound) * (1 + 1e-9)
    tiles = tiles.select(tiles.cosh_disp <= limit)
    conj = tiles.mats @ g.matrix @ _inverse_stack(tiles.mats)
    target = h.matrix
    scale = max(1.0, float(np.max(np.abs(target))))
    err = np.minimum(
        np.max(np.abs(conj - target), axis=(1, 2)),
        np.max(np.abs(conj + target), axis=(1, 2)),
    )
    hits = np.flatnonzero(err <= MATCH_TOL * scale)
    if len(hits):
        return Yes(tiles.element(int(hits[0])))
    return NoWithinDepth(depth, exhausted=not tiles.truncated)


# ----------------------------
# Index-2 co-realization
# ----------------------------

# sides of the doubled triangle, as reflection words of the parent group
_SUB_REFLECTIONS: tuple[tuple[int, ...], ...] = ((1,), (0,), (2, 1, 2))


@dataclass
class CoRealization:
    """
    Γ(r,p,p) realized inside Γ(2,p,2r).

    The parent triangle doubled across its side through the right-angle and
    order-2r vertices is a triangle with angles π/r, π/p, π/p. Its side
    reflections are parent words, giving the subgroup generators
    ``R = Q⁻²``, ``P = P⁻¹``, ``Q = R⁻¹Q`` in parent letters.
    """

    sig: Signature
    parent: TriangleGroup
    reflections: tuple[Motion, Motion, Motion]

    def sub_generators(self) -> Generators:
        s1, s2, s3 = self.reflections
        return Generators(
            s1=s1, s2=s2, s3=s3, R=compose(s3, s1), P=compose(s1, s2), Q=compose(s2, s3)
        )

    def motion_of(self, reflections: tuple[int, ...]) -> Motion:
        m = identity()
        for k in reflections:
            m = compose(m, self.reflections[k])
        return m

    def ball(self, max_word: int) -> list[GroupElement]:
        """Direct elements of the subgroup up to rotation-word length ``max_word``."""
        index = MotionIndex(tol=1e-9)
        frontier = [GroupElement((), identity())]
        index.add(frontier[0].motion.matrix, 0)
        found = list(frontier)
        for _ in range(2 * max_word):
            nxt = []
            for elem in frontier:
                for k, s in enumerate(self.reflections):
                    m = compose(elem.motion, s)
                    if index.add(m.matrix, len(found), m.reversing):
                        child = GroupElement(elem.reflections + (k,), m)
                        found.append(child)
                        nxt.append(child)
            frontier = nxt
        return [e for e in found if e.is_direct]

    def in_parent(self, m: Motion) -> tuple[int, ...] | None:
        """Parent reflection word equal to ``m`` (10⁻⁸), or ``None``."""
        o = self.parent.origin
        _, word = self.parent.reduce_to_domain(apply(m, o))
        cand = self.parent.motion_of(word)
        if cand.close_to(m, tol=MATCH_TOL * max(1.0, float(np.max(np.abs(m.matrix))))):
            return word
        return None


def corealize_subgroup(sig: Signature) -> CoRealization:
    if sig.r < 3 or sig.p != sig.q:
        msg = f"co-realization needs a signature (r,p,p) with r ≥ 3, got ({sig.label})"
        raise ValueError(msg)
    if sig.p > 2 * sig.r:
        msg = f"co-realization needs p ≤ 2r, got ({sig.label})"
        raise ValueError(msg)
    parent = triangle_group(Signature(2, sig.p, 2 * sig.r))
    refl = tuple(parent.motion_of(w) for w in _SUB_REFLECTIONS)
    return CoRealization(sig=sig, parent=parent, reflections=refl)

