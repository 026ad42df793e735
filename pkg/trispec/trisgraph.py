"""
trispec.trisgraph
=================================

The graph E* on the Γ-orbit of the contact point ``q*``, its combinatorial
distance D*, the radii ρ*(n), the level λ*(γ), the level-1..4 catalog of
candidate lengths and the closed-form radii ρ(n) of the r = 2 graph.

Conventions
-----------
- The base node is ``x0 = q*``. The node ``g·x0`` has the four neighbours
  ``g·R^±1·x0`` (edge type ``r``, on the circle of radius d_r about
  ``g·V_r``) and ``g·P^±1·x0`` (edge type ``p``).
- A node of the sphere of radius n is excluded from ρ*(n) iff every shortest
  path reaching it is pure, i.e. uses a single edge type.
- Node positions are deduplicated at 10⁻⁹.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from matplotlib.figure import Figure
from matplotlib.patches import Circle

from .trisconfig import BALL_CAP, ResourceCapError
from .trisforms import (
    Signature,
    alternative_l0,
    c_star_bound,
    canonical_l0,
    contact_data,
    delta_fn,
    delta_prime,
    l_table,
    r2_quantities,
)
from .trisgeom import (
    Hyperbolic,
    Motion,
    PointIndex,
    UhpPoint,
    apply,
    classify,
    compose,
    cosh_dist,
    dist_to_geodesic,
    identity,
    inverse,
)
from .trisgroup import axis, generators, realize

logger = logging.getLogger(__name__)

EdgeType = Literal["r", "p", "none"]
RHO_N_RANGE = range(2, 6)


# ----------------------------
# Star balls
# ----------------------------


@dataclass
class StarNode:
    """
    A node ``g·x0`` of E*.

    ``pure`` holds the edge types of pure shortest paths reaching the node
    (``"*"`` for the base, reached by the empty path); ``impure`` is set when
    a mixed shortest path exists.
    """

    id: int
    position: UhpPoint
    motion: Motion
    level: int
    parent: int | None = None
    parent_edge: EdgeType = "none"
    type_path: tuple[str, ...] = ()
    pure: set[str] = field(default_factory=set)
    impure: bool = False

    @property
    def excluded(self) -> bool:
        return not self.impure


@dataclass
class StarBall:
    sig: Signature
    radius: int
    nodes: list[StarNode]
    adjacency: dict[int, list[tuple[int, str]]]
    index: PointIndex

    @property
    def base(self) -> StarNode:
        return self.nodes[0]

    def sphere(self, k: int) -> list[StarNode]:
        return [n for n in self.nodes if n.level == k]

    def find(self, z: UhpPoint) -> int | None:
        found = self.index.find(z)
        return None if found is None else int(found)

    def degree(self, node_id: int) -> int:
        return len(self.adjacency[node_id])


def _neighbour_moves(sig: Signature) -> list[tuple[str, Motion]]:
    gens = generators(sig)
    return [
        ("r", gens.R),
        ("r", inverse(gens.R)),
        ("p", gens.P),
        ("p", inverse(gens.P)),
    ]


def estimate_nodes(n: int) -> int:
    return 1 + sum(4 * 3 ** (k - 1) for k in range(1, n + 1))


def build_star_ball(sig: Signature, n: int, cap: int = BALL_CAP) -> StarBall:
    """
    All nodes of E* at combinatorial distance at most ``n`` from ``x0``.

    Built breadth first; every edge from a level-k node to a level-(k+1)
    node updates the child's pure/impure path record.
    """
    if n < 0:
        msg = f"ball radius must be nonnegative, got {n}"
        raise ValueError(msg)
    if n > cap:
        msg = f"ball radius {n} exceeds the cap {cap} (≈{estimate_nodes(n)} nodes)"
        raise ResourceCapError(msg)
    if sig.r < 3:
        msg = "the star graph needs r ≥ 3; use p_graph_rho for r = 2"
        raise ValueError(msg)

    x0 = realize(sig).q_star
    moves = _neighbour_moves(sig)
    index = PointIndex(tol=1e-9)
    base = StarNode(0, x0, identity(), 0, pure={"*"})
    index.add(x0, 0)
    nodes = [base]
    adjacency: dict[int, list[tuple[int, str]]] = {0: []}
    frontier = [base]
    for level in range(n + 1):
        nxt: list[StarNode] = []
        for node in frontier:
            for kind, move in moves:
                g = compose(node.motion, move)
                pos = apply(g, x0)
                found = index.find(pos)
                if found is None:
                    if level == n:
                        continue
                    child = StarNode(
                        id=len(nodes),
                        position=pos,
                        motion=g,
                        level=level + 1,
                        parent=node.id,
                        parent_edge=kind,
                        type_path=(*node.type_path, kind),
                    )
                    index.add(pos, child.id)
                    nodes.append(child)
                    adjacency[child.id] = []
                    nxt.append(child)
                    found = child.id
                other = nodes[int(found)]
                adjacency[node.id].append((other.id, kind))
                if other.level == level + 1:
                    if "*" in node.pure or kind in node.pure:
                        other.pure.add(kind)
                    if node.impure or any(t not in ("*", kind) for t in node.pure):
                        other.impure = True
        logger.debug("Star ball (%s) level %s: %s nodes", sig.label, level + 1, len(nxt))
        frontier = nxt
    logger.info("Star ball (%s) radius %s: %s nodes", sig.label, n, len(nodes))
    return StarBall(sig, n, nodes, adjacency, index)


def d_star(ball: StarBall, x: int | UhpPoint, y: int | UhpPoint) -> int:
    """
    Breadth-first distance between two nodes of the ball.

    A path leaving the ball has length at least
    ``(n + 1 - level(x)) + (n + 1 - level(y))``; a shorter in-ball distance
    is therefore the true D*.
    """
    ids = []
    for z in (x, y):
        nid = z if isinstance(z, int) else ball.find(z)
        if nid is None or not 0 <= nid < len(ball.nodes):
            msg = "node exceeds ball radius"
            raise ValueError(msg)
        ids.append(nid)
    src, dst = ids
    seen = {src: 0}
    queue = [src]
    for cur in queue:
        if cur == dst:
            break
        for nxt, _ in ball.adjacency[cur]:
            if nxt not in seen:
                seen[nxt] = seen[cur] + 1
                queue.append(nxt)
    found = seen.get(dst)
    escape = 2 * (ball.radius + 1) - ball.nodes[src].level - ball.nodes[dst].level
    if found is None or found > escape:
        msg = "shortest path exceeds ball radius"
        raise ValueError(msg)
    return found


def pure_chord_cosh(sig: Signature, kind: str, k: int) -> float:
    """Cosh of the distance from ``x0`` to the k-th node of its r- or p-circle."""
    cd = contact_data(sig)
    sinh2, n = (cd.sinh2_dr, sig.r) if kind == "r" else (cd.sinh2_dp, sig.p)
    return 1.0 + 2.0 * sinh2 * math.sin(k * math.pi / n) ** 2


def rho_star_from_ball(ball: StarBall, n: int) -> float:
    """ρ*(n) from a ball of radius at least n; ∞ when every node is excluded."""
    if n > ball.radius:
        msg = f"ρ*({n}) needs a ball of radius ≥ {n}, got {ball.radius}"
        raise ValueError(msg)
    x0 = ball.base.position
    best = math.inf
    for node in ball.sphere(n):
        if node.impure:
            best = min(best, cosh_dist(x0, node.position))
    return math.acosh(best) if math.isfinite(best) else math.inf


def rho_star(sig: Signature, n: int) -> float:
    if n not in RHO_N_RANGE:
        msg = f"ρ*(n) is provided for 2 ≤ n ≤ 5, got n={n}"
        raise ValueError(msg)
    return rho_star_from_ball(build_star_ball(sig, n), n)


# ----------------------------
# Level λ*
# ----------------------------


@dataclass(frozen=True)
class LambdaStar:
    """
    Smallest combinatorial displacement found in a ball.

    ``value`` is ``None`` when no node's image was found in the ball.
    ``exact_within_ball`` is set when every node that could realize a
    smaller displacement provably lies inside the ball.
    """

    value: int | None
    exact_within_ball: bool


def _outside_gap(ball: StarBall) -> float:
    """Lower bound on the distance from ``x0`` to nodes of level ≥ radius."""
    n = ball.radius
    sig = ball.sig
    gap = rho_star_from_ball(ball, n) if n >= 2 else math.inf
    for kind, order in (("r", sig.r), ("p", sig.p)):
        for k in range(max(n, 1), order // 2 + 1):
            gap = min(gap, math.acosh(pure_chord_cosh(sig, kind, k)))
    return gap


def lambda_star(
    sig: Signature, m: Motion, ball_radius: int, ball: StarBall | None = None
) -> LambdaStar:
    """
    ``min D*(x, m·x)`` over nodes ``x`` of the ball.

    Uses ``D*(g·x0, m·g·x0) = D*(x0, g⁻¹·m·g·x0)``. For a hyperbolic ``m`` of
    length l, a node displaced by v edges lies within ``s`` of the axis where
    ``cosh(v·e_max) = cosh²s·(cosh l − 1) + 1``; translating along the axis
    brings it within ``d(x0, axis) + l/2 + s`` of ``x0``. The value is exact
    when that radius stays below the distance to the ball's outer sphere.
    """
    if ball is None or ball.radius < ball_radius:
        ball = build_star_ball(sig, ball_radius)
    x0 = ball.base.position
    best: int | None = None
    for node in ball.nodes:
        conj = compose(compose(inverse(node.motion), m), node.motion)
        found = ball.find(apply(conj, x0))
        if found is not None:
            lvl = ball.nodes[found].level
            best = lvl if best is None else min(best, lvl)
            if best == 0:
                break
    if best is None:
        return LambdaStar(None, False)

    kind = classify(m)
    if not isinstance(kind, Hyperbolic):
        return LambdaStar(best, best <= 1)
    e_max = max(
        math.acosh(pure_chord_cosh(sig, "r", 1)), math.acosh(pure_chord_cosh(sig, "p", 1))
    )
    length = kind.length
    cosh_s2 = (math.cosh(best * e_max) - 1.0) / (math.cosh(length) - 1.0)
    s_max = math.acosh(math.sqrt(max(1.0, cosh_s2)))
    need = dist_to_geodesic(x0, axis(m)) + length / 2.0 + s_max
    exact = best <= ball.radius and need < _outside_gap(ball)
    return LambdaStar(best, exact)


# ----------------------------
# Level catalog
# ----------------------------


@dataclass(frozen=True)
class LevelEntry:
    """
    One candidate of the case analysis.

    ``status`` is ``"hyperbolic"`` (``length`` set), ``"elliptic"`` (the
    value is at most 1) or ``"none"`` (indices out of range).
    """

    types: tuple[str, ...]
    tag: str
    value: float | None
    length: float | None
    status: Literal["hyperbolic", "elliptic", "none"]


@dataclass(frozen=True)
class LevelCatalog:
    sig: Signature
    level: int
    entries: list[LevelEntry]

    def lengths(self) -> list[float]:
        return sorted(e.length for e in self.entries if e.length is not None)


# (types, tag, δ-kind, k1(r,p), k2(r,p)); δ-kind "d" = δ, "d'" = δ′, "L" = L-table
# row, "2d" = doubled δ length, "ell" = always elliptic
_CATALOG: dict[int, list[tuple]] = {
    1: [
        (("r",), "rotation", "ell", None, None),
        (("p",), "rotation", "ell", None, None),
    ],
    2: [
        (("r", "p"), "δ(p-1,1)", "d", lambda r, p: p - 1, lambda r, p: 1),
        (("r", "p"), "δ(1,r-1)", "d", lambda r, p: 1, lambda r, p: r - 1),
    ],
    3: [
        (("r", "p", "r"), "δ(1,r-2)", "d", lambda r, p: 1, lambda r, p: r - 2),
        (("r", "p", "r"), "δ(p-1,r-2)", "d", lambda r, p: p - 1, lambda r, p: r - 2),
        (("p", "r", "p"), "δ(2,r-1)", "d", lambda r, p: 2, lambda r, p: r - 1),
        (("p", "r", "p"), "δ(2,1)", "d", lambda r, p: 2, lambda r, p: 1),
        (("r", "r", "p"), "δ(1,2)", "d", lambda r, p: 1, lambda r, p: 2),
        (("r", "r", "p"), "δ(p-1,2)", "d", lambda r, p: p - 1, lambda r, p: 2),
        (("p", "p", "r"), "δ(2,1)", "d", lambda r, p: 2, lambda r, p: 1),
        (("p", "p", "r"), "δ(p-2,1)", "d", lambda r, p: p - 2, lambda r, p: 1),
        (("r", "r", "r"), "rotation", "ell", None, None),
        (("p", "p", "p"), "rotation", "ell", None, None),
    ],
    4: [
        (("r", "r", "r", "p"), "δ(1,3)", "d", lambda r, p: 1, lambda r, p: 3),
        (("r", "r", "r", "p"), "δ(p-1,3)", "d", lambda r, p: p - 1, lambda r, p: 3),
        (("p", "p", "p", "r"), "δ(p-3,1)", "d", lambda r, p: p - 3, lambda r, p: 1),
        (("p", "p", "p", "r"), "δ(p-3,r-1)", "d", lambda r, p: p - 3, lambda r, p: r - 1),
        (("r", "r", "p", "r"), "δ(p-1,r-3)", "d", lambda r, p: p - 1, lambda r, p: r - 3),
        (("r", "r", "p", "r"), "δ(1,r-3)", "d", lambda r, p: 1, lambda r, p: r - 3),
        (("r", "r", "p", "r"), "δ(1,r-1)", "d", lambda r, p: 1, lambda r, p: r - 1),
        (("p", "p", "r", "p"), "δ(3,1)", "d", lambda r, p: 3, lambda r, p: 1),
        (("p", "p", "r", "p"), "δ(3,r-1)", "d", lambda r, p: 3, lambda r, p: r - 1),
        (("p", "p", "r", "p"), "δ(1,r-1)", "d", lambda r, p: 1, lambda r, p: r - 1),
        (("r", "p", "r", "p"), "δ′(2,2)", "d'", lambda r, p: 2, lambda r, p: 2),
        (("r", "p", "r", "p"), "L11", "L", 11, None),
        (("r", "p", "r", "p"), "L12", "L", 12, None),
        (("r", "p", "r", "p"), "2·δ(1,r-1)", "2d", lambda r, p: 1, lambda r, p: r - 1),
        (("r", "r", "p", "p"), "δ(2,2)", "d", lambda r, p: 2, lambda r, p: 2),
        (("r", "r", "p", "p"), "δ(p-2,2)", "d", lambda r, p: p - 2, lambda r, p: 2),
        (("r", "p", "p", "r"), "δ(p-2,r-2)", "d", lambda r, p: p - 2, lambda r, p: r - 2),
        (("r", "p", "p", "r"), "δ(p-2,2)", "d", lambda r, p: p - 2, lambda r, p: 2),
        (("r", "r", "r", "r"), "rotation", "ell", None, None),
        (("p", "p", "p", "p"), "rotation", "ell", None, None),
    ],
}


def _catalog_entry(sig: Signature, row: tuple) -> LevelEntry:
    types, tag, kind, k1, k2 = row
    if kind == "ell":
        return LevelEntry(types, tag, None, None, "elliptic")
    if kind == "L":
        value = l_table(sig)[k1]
    else:
        fn = delta_prime if kind == "d'" else delta_fn
        try:
            value = fn(sig, k1(sig.r, sig.p), k2(sig.r, sig.p))
        except ValueError:
            return LevelEntry(types, tag, None, None, "none")
    if value <= 1.0:
        return LevelEntry(types, tag, value, None, "elliptic")
    factor = 4.0 if kind == "2d" else 2.0
    return LevelEntry(types, tag, value, factor * math.acosh(value), "hyperbolic")


def level_catalog(sig: Signature, level: int) -> LevelCatalog:
    if level not in _CATALOG:
        msg = f"level must be between 1 and 4, got {level}"
        raise ValueError(msg)
    entries = [_catalog_entry(sig, row) for row in _CATALOG[level]]
    return LevelCatalog(sig, level, entries)


# ----------------------------
# r = 2 graph
# ----------------------------


def p_graph_rho(p: int, q: int | float, n: int) -> float:
    """
    ρ(n) of the r = 2 graph for ``n ≤ 3``.

    At q = ∞ the edge length is infinite; the finite information lives in
    the cleared forms of :func:`trispec.trisforms.r2_quantities`.
    """
    quant = r2_quantities(p, q)
    if quant.q == math.inf:
        msg = "q = inf: ρ(n) is infinite, use the cleared forms of r2_quantities"
        raise ValueError(msg)
    if n not in (1, 2, 3):
        msg = f"ρ(n) is provided for n ≤ 3, got n={n}"
        raise ValueError(msg)
    cosh_2c = 2.0 * quant.cosh_c**2 - 1.0
    if n == 1:
        return math.acosh(cosh_2c)
    if n == 2:
        sinh2 = cosh_2c**2 - 1.0
        return math.acosh(cosh_2c**2 - sinh2 * math.cos(2 * math.pi / quant.q))
    return math.acosh(quant.rho3_closed)


# ----------------------------
# Reports and dumps
# ----------------------------


@dataclass(frozen=True)
class RhoStarComparison:
    """
    Signed comparison ``cosh ρ*(5) − cosh C*(l0)``.

    ``status`` is ``"ok"`` when positive, ``"violation"`` otherwise, and
    ``"exceptional"`` for the three signatures where the gap is known to
    fail.
    """

    sig: Signature
    l0_name: str
    cosh_rho5: float
    cosh_c_star: float
    status: Literal["ok", "violation", "exceptional"]

    @property
    def gap(self) -> float:
        return self.cosh_rho5 - self.cosh_c_star


def rho_star_report(sig: Signature, ball: StarBall | None = None) -> list[RhoStarComparison]:
    if ball is None or ball.radius < 5:
        ball = build_star_ball(sig, 5)
    cosh_rho5 = math.cosh(rho_star_from_ball(ball, 5))
    choices = [("l3", canonical_l0(sig))]
    if sig.as_tuple() in ((3, 3, 5), (3, 3, 6)):
        choices.append(("alternative", alternative_l0(sig)))
    out = []
    for name, l0 in choices:
        c_star = c_star_bound(sig, l0)
        if sig.is_exceptional:
            status = "exceptional"
        elif cosh_rho5 > c_star:
            status = "ok"
        else:
            status = "violation"
            logger.warning(
                "(%s): cosh ρ*(5)=%.7f does not exceed cosh C*(%s)=%.7f",
                sig.label,
                cosh_rho5,
                name,
                c_star,
            )
        out.append(RhoStarComparison(sig, name, cosh_rho5, c_star, status))
    return out


def dump_svg(ball: StarBall, path: str | Path) -> Path:
    """Draw the ball in the disk model centred at ``x0``, edges coloured by type."""
    x0 = ball.base.position.z

    def disk(z: complex) -> complex:
        return (z - x0) / (z - x0.conjugate())

    colors = {"r": "tab:red", "p": "tab:blue"}
    fig = Figure(figsize=(6, 6))
    ax = fig.subplots()
    ax.add_patch(Circle((0, 0), 1.0, fill=False, color="0.6", lw=0.8))
    for node in ball.nodes:
        a = disk(node.position.z)
        for other, kind in ball.adjacency[node.id]:
            if other < node.id:
                continue
            b = disk(ball.nodes[other].position.z)
            ax.plot([a.real, b.real], [a.imag, b.imag], color=colors[kind], lw=0.7)
    pts = [disk(n.position.z) for n in ball.nodes]
    excluded = [n.excluded and n.level > 0 for n in ball.nodes]
    ax.scatter(
        [w.real for w in pts],
        [w.imag for w in pts],
        s=8,
        c=["0.5" if e else "k" for e in excluded],
        zorder=3,
    )
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title(f"E* ball ({ball.sig.label}), radius {ball.radius}")
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, format="svg")
    logger.info("Saved SVG to: %s", out)
    return out
