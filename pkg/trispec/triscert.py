"""
trispec.triscert
=================================

Interval branch-and-bound positivity certification over the parameter
region ``1/2 ≤ X ≤ Y ≤ Z ≤ 1`` with ``X, Y, Z = cos π/r, cos π/p, cos π/q``.

Two kinds of expressions are certified:

- trivariate polynomials with rational coefficients (:class:`Poly3`), alone
  or as a product of factors (:class:`Product`);
- geometric expressions ``cosh d(x0, y) − cosh C*(l3)`` where ``y`` is the
  endpoint of a five-edge path of E* with a fixed sign pattern
  (:class:`PatternDistance`), built from interval-valued rotations in the
  hyperboloid model.

All interval arithmetic is outward rounded (``mpmath.iv``). A box is
discarded when it violates the ordering, or when it lies inside the
``eps``-neighbourhood of a declared zero locus. Polynomials are also
enclosed in the ordered coordinates ``u = X − 1/2``, ``v = Y − X``,
``w = Z − Y`` (all nonnegative), which is tight for sign-definite
factorizations; declared zero loci clamp those coordinates away from zero.
"""

import ast
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import groupby, product
from typing import Literal, Protocol

import numpy as np
from mpmath import iv, mpf

from .trisforms import EXCEPTIONAL, Signature

logger = logging.getLogger(__name__)

Interval = type(iv.mpf(0))
TypeTuple = tuple[str, ...]

DEFAULT_EPS = 1e-3
DEFAULT_MAX_DEPTH = 40
BOX_BUDGET = 2_000_000
# pinned signatures where the sphere-5 bound fails although they are not
# among the classical exceptions
COMPUTED_EXCLUSIONS = ((4, 5, 5),)


class IndeterminateError(ArithmeticError):
    """Raised when an enclosure would divide by an interval containing 0."""


# ----------------------------
# Intervals
# ----------------------------


def interval(a: float | mpf | int | str, b: float | mpf | int | str | None = None) -> Interval:
    if b is None:
        b = a
    if mpf(a) > mpf(b):
        msg = f"empty interval [{a}, {b}]"
        raise ValueError(msg)
    return iv.mpf([a, b])


def lo(x: Interval) -> mpf:
    return mpf(x.a)


def hi(x: Interval) -> mpf:
    return mpf(x.b)


def width(x: Interval) -> mpf:
    return hi(x) - lo(x)


def exact(value: Fraction | int) -> Interval:
    """Enclosure of a rational number."""
    fr = Fraction(value)
    return iv.mpf(fr.numerator) / fr.denominator


def meet(x: Interval, y: Interval) -> Interval | None:
    a, b = max(lo(x), lo(y)), min(hi(x), hi(y))
    return None if a > b else iv.mpf([a, b])


def _div(x: Interval, y: Interval) -> Interval:
    if lo(y) <= 0 <= hi(y):
        msg = "division by an interval containing 0"
        raise IndeterminateError(msg)
    return x / y


def _sqrt(x: Interval) -> Interval:
    if hi(x) < 0:
        msg = "square root of a negative interval"
        raise IndeterminateError(msg)
    return iv.sqrt(iv.mpf([max(lo(x), mpf(0)), hi(x)]))


@lru_cache(maxsize=512)
def cos_pi_over(n: int, k: int = 1) -> Interval:
    """Enclosure of cos(kπ/n)."""
    return iv.cos(iv.pi * k / n)


# ----------------------------
# Boxes and zero loci
# ----------------------------


@dataclass(frozen=True)
class Box:
    """Axis-parallel box of (X, Y, Z) values."""

    X: Interval
    Y: Interval
    Z: Interval

    @classmethod
    def of(
        cls, x: tuple[float, float], y: tuple[float, float], z: tuple[float, float]
    ) -> "Box":
        return cls(interval(*x), interval(*y), interval(*z))

    @classmethod
    def full(cls, eps: float = DEFAULT_EPS) -> "Box":
        """The parameter region with Z kept below ``1 − eps``."""
        top = 1 - eps
        return cls.of((0.5, top), (0.5, top), (0.5, top))

    @classmethod
    def point(cls, x: mpf | float, y: mpf | float, z: mpf | float) -> "Box":
        return cls(interval(x), interval(y), interval(z))

    @property
    def coords(self) -> tuple[Interval, Interval, Interval]:
        return (self.X, self.Y, self.Z)

    def violates_order(self) -> bool:
        return lo(self.X) > hi(self.Y) or lo(self.Y) > hi(self.Z)

    def midpoint(self) -> tuple[mpf, mpf, mpf]:
        return tuple((lo(c) + hi(c)) / 2 for c in self.coords)

    def split(self) -> tuple["Box", "Box"]:
        """Bisect the widest coordinate."""
        coords = list(self.coords)
        axis = max(range(3), key=lambda i: width(coords[i]))
        c = coords[axis]
        mid = (lo(c) + hi(c)) / 2
        left, right = list(coords), list(coords)
        left[axis] = iv.mpf([lo(c), mid])
        right[axis] = iv.mpf([mid, hi(c)])
        return Box(*left), Box(*right)

    def describe(self) -> list[list[float]]:
        return [[float(lo(c)), float(hi(c))] for c in self.coords]


_VARS = ("X", "Y", "Z")


@dataclass(frozen=True)
class PointLocus:
    x: float
    y: float
    z: float

    def excludes(self, box: Box, eps: float) -> bool:
        for c, v in zip(box.coords, (self.x, self.y, self.z), strict=True):
            if lo(c) < v - eps or hi(c) > v + eps:
                return False
        return True

    def ordered_support(self) -> tuple[int, ...] | None:
        return None

    def __str__(self) -> str:
        return f"({self.x:.9g},{self.y:.9g},{self.z:.9g})"


@dataclass(frozen=True)
class Hyperplane:
    """``var = other`` where ``other`` is a variable name or a rational value."""

    var: str
    other: str | Fraction

    def __post_init__(self) -> None:
        if self.var not in _VARS or (isinstance(self.other, str) and self.other not in _VARS):
            msg = f"hyperplane over unknown variables: {self.var}={self.other}"
            raise ValueError(msg)

    def excludes(self, box: Box, eps: float) -> bool:
        a = box.coords[_VARS.index(self.var)]
        if isinstance(self.other, str):
            b = box.coords[_VARS.index(self.other)]
            spread = max(hi(a) - lo(b), hi(b) - lo(a))
        else:
            val = mpf(self.other.numerator) / self.other.denominator
            spread = max(hi(a) - val, val - lo(a))
        return spread <= eps

    def ordered_support(self) -> tuple[int, ...] | None:
        """Indices of (u, v, w) whose sum vanishes on the locus."""
        if isinstance(self.other, str):
            pair = tuple(sorted((_VARS.index(self.var), _VARS.index(self.other))))
            return {(0, 1): (1,), (1, 2): (2,), (0, 2): (1, 2)}.get(pair)
        if self.other == Fraction(1, 2):
            return {"X": (0,), "Y": (0, 1), "Z": (0, 1, 2)}[self.var]
        return None

    def __str__(self) -> str:
        return f"{self.var}={self.other}"


Locus = PointLocus | Hyperplane


def parse_locus(text: str) -> Locus:
    """``"Y=1/2"``, ``"X=Z"`` or a point ``"0.5,0.5,0.5"``."""
    text = text.strip().strip("()")
    if "=" in text:
        lhs, rhs = (s.strip().upper() for s in text.split("=", 1))
        return Hyperplane(lhs, rhs if rhs in _VARS else Fraction(rhs))
    parts = [float(s) for s in text.replace(" ", ",").split(",") if s]
    if len(parts) != 3:
        msg = f"cannot parse zero locus {text!r}"
        raise ValueError(msg)
    return PointLocus(*parts)


def parse_box(text: str, eps: float = DEFAULT_EPS) -> Box:
    """``"full"`` or ``"x0:x1,y0:y1,z0:z1"`` inside ``[1/2, 1 − eps]``; ``"a"`` pins a coordinate."""
    if text.strip().lower() == "full":
        return Box.full(eps)
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 3:
        msg = f"box needs three ranges, got {text!r}"
        raise ValueError(msg)
    bounds = []
    for part in parts:
        ends = [float(s) for s in part.split(":")]
        a, b = ends[0], ends[-1]
        if len(ends) > 2 or not 0.5 <= a <= b <= 1 - eps:
            msg = f"box range {part!r} must lie in [0.5, {1 - eps:g}]"
            raise ValueError(msg)
        bounds.append((a, b))
    return Box.of(*bounds)


def _excluded(box: Box, exclusions: tuple[Locus, ...], eps: float) -> bool:
    return any(locus.excludes(box, eps) for locus in exclusions)


@dataclass(frozen=True)
class Ordered:
    """Ranges of ``u = X − 1/2``, ``v = Y − X``, ``w = Z − Y`` over a box."""

    U: Interval
    V: Interval
    W: Interval


def ordered_ranges(box: Box, exclusions: tuple[Locus, ...] = (), eps: float = 0.0) -> Ordered | None:
    """
    Ordered coordinates of the points of ``box`` inside the region.

    Points within ``eps/2`` of a declared locus are dropped. Returns ``None``
    when nothing remains.
    """
    half = mpf(1) / 2
    X, Y, Z = box.coords
    rng = [
        [max(lo(X) - half, mpf(0)), hi(X) - half],
        [max(lo(Y) - hi(X), mpf(0)), hi(Y) - lo(X)],
        [max(lo(Z) - hi(Y), mpf(0)), hi(Z) - lo(Y)],
    ]
    for locus in exclusions:
        support = locus.ordered_support()
        if not support:
            continue
        for i in support:
            others = sum((rng[j][1] for j in support if j != i), mpf(0))
            rng[i][0] = max(rng[i][0], mpf(eps) / 2 - others)
    if any(a > b for a, b in rng):
        return None
    return Ordered(*(iv.mpf(r) for r in rng))


# ----------------------------
# Polynomials
# ----------------------------

Monomial = tuple[int, int, int]


@dataclass(frozen=True)
class Poly3:
    """
    Sparse polynomial in three variables with rational coefficients.

    ``terms`` is sorted by monomial and holds no zero coefficient.
    """

    terms: tuple[tuple[Monomial, Fraction], ...] = ()

    @classmethod
    def from_dict(cls, coeffs: dict[Monomial, Fraction | int]) -> "Poly3":
        items = sorted((m, Fraction(c)) for m, c in coeffs.items() if c != 0)
        return cls(tuple(items))

    @classmethod
    def const(cls, c: Fraction | int) -> "Poly3":
        return cls.from_dict({(0, 0, 0): c})

    @classmethod
    def var(cls, name: str) -> "Poly3":
        i = _VARS.index(name)
        return cls.from_dict({tuple(int(j == i) for j in range(3)): 1})

    def as_dict(self) -> dict[Monomial, Fraction]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=0)

    def _coerce(self, other: "Poly3 | Fraction | int") -> "Poly3":
        return other if isinstance(other, Poly3) else Poly3.const(other)

    def __add__(self, other: "Poly3 | Fraction | int") -> "Poly3":
        acc = self.as_dict()
        for m, c in self._coerce(other).terms:
            acc[m] = acc.get(m, Fraction(0)) + c
        return Poly3.from_dict(acc)

    __radd__ = __add__

    def __neg__(self) -> "Poly3":
        return Poly3(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "Poly3 | Fraction | int") -> "Poly3":
        return self + (-self._coerce(other))

    def __rsub__(self, other: "Poly3 | Fraction | int") -> "Poly3":
        return self._coerce(other) - self

    def __mul__(self, other: "Poly3 | Fraction | int") -> "Poly3":
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in self._coerce(other).terms:
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2
        return Poly3.from_dict(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly3":
        if n < 0:
            msg = f"negative power {n}"
            raise ValueError(msg)
        out = Poly3.const(1)
        for _ in range(n):
            out = out * self
        return out

    def evaluate(self, x: float | Fraction, y: float | Fraction, z: float | Fraction):
        return sum(c * x**i * y**j * z**k for (i, j, k), c in self.terms)

    @cached_property
    def ordered(self) -> "Poly3":
        """The same polynomial in ``(u, v, w)``: X = 1/2+u, Y = X+v, Z = Y+w."""
        half = Fraction(1, 2)
        u, v, w = (Poly3.var(n) for n in _VARS)
        x = u + half
        y = x + v
        z = y + w
        out = Poly3()
        for (i, j, k), c in self.terms:
            out = out + (x**i) * (y**j) * (z**k) * c
        return out

    def enclose(self, box: Box, ordered: Ordered | None) -> Interval:
        direct = _monomial_sum(self.terms, box.coords)
        if ordered is None:
            return direct
        alt = _monomial_sum(self.ordered.terms, (ordered.U, ordered.V, ordered.W))
        return meet(direct, alt) or direct

    def active(self, box: Box) -> bool:
        return True

    @property
    def label(self) -> str:
        return str(self)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j, k), c in self.terms:
            mono = "*".join(f"{n}^{e}" if e > 1 else n for n, e in zip(_VARS, (i, j, k), strict=True) if e)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)


def _monomial_sum(terms, coords: tuple[Interval, Interval, Interval]) -> Interval:
    total = iv.mpf(0)
    for (i, j, k), c in terms:
        mono = iv.mpf(1)
        for var, e in zip(coords, (i, j, k), strict=True):
            if e:
                mono = mono * var**e
        total = total + exact(c) * mono
    return total


@dataclass(frozen=True)
class Product:
    """A product of polynomial factors, enclosed factor by factor."""

    factors: tuple[Poly3, ...]

    @cached_property
    def expanded(self) -> Poly3:
        out = Poly3.const(1)
        for f in self.factors:
            out = out * f
        return out

    def enclose(self, box: Box, ordered: Ordered | None) -> Interval:
        acc = iv.mpf(1)
        for f in self.factors:
            acc = acc * f.enclose(box, ordered)
        return meet(acc, self.expanded.enclose(box, ordered)) or acc

    def active(self, box: Box) -> bool:
        return True

    def evaluate(self, x, y, z):
        out = 1
        for f in self.factors:
            out = out * f.evaluate(x, y, z)
        return out

    @property
    def label(self) -> str:
        return " * ".join(f"({f})" for f in self.factors)


class Expr(Protocol):
    label: str

    def enclose(self, box: Box, ordered: Ordered | None) -> Interval: ...

    def active(self, box: Box) -> bool: ...


X, Y, Z = (Poly3.var(n) for n in _VARS)


def _poly_of(node: ast.AST) -> Poly3:
    if isinstance(node, ast.Name) and node.id.upper() in _VARS:
        return Poly3.var(node.id.upper())
    if isinstance(node, ast.Constant) and isinstance(node.value, int | float):
        return Poly3.const(Fraction(str(node.value)))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub | ast.UAdd):
        inner = _poly_of(node.operand)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp):
        left = _poly_of(node.left)
        right = _poly_of(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div) and right.degree == 0 and right.terms:
            return left * (1 / right.terms[0][1])
        if isinstance(node.op, ast.Pow) and right.degree == 0:
            exp = right.terms[0][1] if right.terms else Fraction(0)
            if exp.denominator == 1 and exp >= 0:
                return left ** int(exp)
    msg = f"unsupported expression: {ast.unparse(node)}"
    raise ValueError(msg)


def _top_factors(node: ast.AST) -> list[ast.AST]:
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Mult):
        return _top_factors(node.left) + _top_factors(node.right)
    return [node]


def parse_expression(text: str) -> Poly3 | Product:
    """Parse a polynomial in X, Y, Z; a top-level product keeps its factors."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval").body
    except SyntaxError as e:
        msg = f"cannot parse {text!r}: {e.msg}"
        raise ValueError(msg) from e
    factors = tuple(_poly_of(f) for f in _top_factors(tree))
    return factors[0] if len(factors) == 1 else Product(factors)


def eval_interval(
    expr: Expr, box: Box, exclusions: tuple[Locus, ...] = (), eps: float = 0.0
) -> Interval:
    """Enclosure of ``expr`` over the points of ``box`` inside the region."""
    ordered = ordered_ranges(box, exclusions, eps)
    return expr.enclose(box, ordered)


# ----------------------------
# Branch and bound
# ----------------------------


@dataclass(frozen=True)
class Positive:
    leaves: int
    min_lower: float


@dataclass(frozen=True)
class FailsAt:
    point: tuple[float, float, float]
    value: float
    label: str = ""


@dataclass(frozen=True)
class Inconclusive:
    depth: int
    boxes: list[list[list[float]]] = field(default_factory=list)
    reason: str = "max_depth"


Verdict = Positive | FailsAt | Inconclusive


def _point_admissible(pt: tuple[mpf, mpf, mpf], exclusions: tuple[Locus, ...], eps: float) -> bool:
    x, y, z = pt
    if not (x <= y <= z):
        return False
    return not _excluded(Box.point(x, y, z), exclusions, eps)


def branch_and_bound(
    exprs: list[Expr],
    box: Box,
    exclusions: tuple[Locus, ...] = (),
    eps: float = DEFAULT_EPS,
    max_depth: int = DEFAULT_MAX_DEPTH,
    box_budget: int = BOX_BUDGET,
    keep_boxes: int = 16,
) -> Verdict:
    """
    Prove every expression positive on the region part of ``box``.

    Boxes carry the expressions not yet proven on them; an expression proven
    on a box is dropped for all its sub-boxes. Inactive expressions (paths
    that cannot be shortest on the box) are skipped. The search is depth
    first in a fixed order.
    """
    stack = [(box, 0, tuple(range(len(exprs))))]
    leaves = 0
    visited = 0
    min_lower = math.inf
    stuck: list[list[list[float]]] = []
    deepest = 0
    while stack:
        cur, depth, pending = stack.pop()
        visited += 1
        if visited > box_budget:
            return Inconclusive(deepest, stuck, reason="box_budget")
        if cur.violates_order() or _excluded(cur, exclusions, eps):
            continue
        ordered = ordered_ranges(cur, exclusions, eps)
        if ordered is None:
            continue
        left = []
        for i in pending:
            e = exprs[i]
            if not e.active(cur):
                continue
            try:
                enc = e.enclose(cur, ordered)
            except IndeterminateError:
                left.append(i)
                continue
            if lo(enc) > 0:
                min_lower = min(min_lower, float(lo(enc)))
            else:
                left.append(i)
        if not left:
            leaves += 1
            continue

        mid = cur.midpoint()
        if _point_admissible(mid, exclusions, eps):
            pbox = Box.point(*mid)
            for i in left:
                e = exprs[i]
                if not e.active(pbox):
                    continue
                try:
                    val = e.enclose(pbox, ordered_ranges(pbox))
                except IndeterminateError:
                    continue
                if hi(val) < 0:
                    point = tuple(float(c) for c in mid)
                    logger.info("Negative value %.6g at %s for %s", float(hi(val)), point, e.label)
                    return FailsAt(point, float(hi(val)), e.label)

        if depth >= max_depth:
            deepest = max(deepest, depth)
            if len(stuck) < keep_boxes:
                stuck.append(cur.describe())
            continue
        a, b = cur.split()
        stack.append((b, depth + 1, tuple(left)))
        stack.append((a, depth + 1, tuple(left)))

    if deepest:
        return Inconclusive(deepest, stuck)
    logger.debug("Certified on %s leaf boxes (%s visited)", leaves, visited)
    return Positive(leaves, min_lower)


def certify_positive(
    expr: Expr,
    box: Box,
    exclusions: tuple[Locus, ...] | list[Locus] = (),
    eps: float = DEFAULT_EPS,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> Verdict:
    return branch_and_bound([expr], box, tuple(exclusions), eps, max_depth)


def sample_points(
    box: Box, n: int, seed: int = 0, exclusions: tuple[Locus, ...] = (), eps: float = 0.0
) -> np.ndarray:
    """Uniform sample of the ordered, non-excluded part of ``box`` (rows X, Y, Z)."""
    rng = np.random.default_rng(seed)
    lows = np.array([float(lo(c)) for c in box.coords])
    highs = np.array([float(hi(c)) for c in box.coords])
    pts = rng.uniform(lows, highs, size=(n, 3))
    keep = (pts[:, 0] <= pts[:, 1]) & (pts[:, 1] <= pts[:, 2])
    for locus in exclusions:
        if isinstance(locus, PointLocus):
            near = np.max(np.abs(pts - [locus.x, locus.y, locus.z]), axis=1) <= eps
        else:
            a = pts[:, _VARS.index(locus.var)]
            if isinstance(locus.other, str):
                b = pts[:, _VARS.index(locus.other)]
            else:
                b = float(locus.other)
            near = np.abs(a - b) <= eps
        keep &= ~near
    return pts[keep]


def sample_minimum(
    expr: Poly3 | Product,
    box: Box,
    n: int = 100_000,
    seed: int = 0,
    exclusions: tuple[Locus, ...] = (),
    eps: float = 0.0,
) -> float:
    """Smallest float value of a polynomial over a seeded sample of the box."""
    pts = sample_points(box, n, seed, exclusions, eps)
    if not len(pts):
        return math.inf
    return float(np.min(sample_values(expr, pts)))


def sample_values(expr: Poly3 | Product, pts: np.ndarray) -> np.ndarray:
    """Float values of a polynomial at the rows of ``pts``."""
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    values = np.ones(len(pts))
    for f in expr.factors if isinstance(expr, Product) else (expr,):
        values *= sum(float(c) * x**i * y**j * z**k for (i, j, k), c in f.terms)
    return values


# ----------------------------
# Sphere-5 geometry
# ----------------------------


@dataclass(frozen=True)
class TriangleFrame:
    """
    Hyperboloid-model data of the triangle over a box.

    ``V_r`` is the origin, side a runs along the x-axis to ``V_p`` at
    distance a, and ``x0`` is the contact point on side a.
    """

    x0x: Interval
    x0t: Interval
    cosh_a: Interval
    sinh_a: Interval
    cos_r: Interval
    sin_r: Interval
    cos_p: Interval
    sin_p: Interval
    cosh_c_star_bound: Interval


def triangle_frame(box: Box) -> TriangleFrame:
    one = iv.mpf(1)
    X, Y, Z = (meet(c, iv.mpf([0.5, 1])) for c in box.coords)
    if X is None or Y is None or Z is None:
        msg = "box outside the parameter region"
        raise IndeterminateError(msg)
    sx, sy = _sqrt(one - X * X), _sqrt(one - Y * Y)
    cosh_a = _div(Z + X * Y, sx * sy)
    sinh_a = _sqrt(cosh_a * cosh_a - 1)
    delta = X * X + Y * Y + Z * Z + 2 * X * Y * Z - 1
    s2 = _div(delta, 2 * (one - X) * (one + Y) * (one + Z))
    l3 = 2 * Y * Z + X
    cc = 1 + _div(delta, 2 * (one + X) * (one + Y))
    return TriangleFrame(
        x0x=_sqrt(s2),
        x0t=_sqrt(1 + s2),
        cosh_a=cosh_a,
        sinh_a=sinh_a,
        cos_r=2 * X * X - 1,
        sin_r=2 * X * sx,
        cos_p=2 * Y * Y - 1,
        sin_p=2 * Y * sy,
        cosh_c_star_bound=cc * cc * (2 * l3 * l3 - 2) + 1,
    )


class _FrameCache:
    def __init__(self) -> None:
        self._box: Box | None = None
        self._frame: TriangleFrame | None = None

    def get(self, box: Box) -> TriangleFrame:
        if self._box is not box:
            self._frame = triangle_frame(box)
            self._box = box
        return self._frame


def _rotate(v: list[Interval], c: Interval, s: Interval) -> None:
    x, y = v[0], v[1]
    v[0] = c * x - s * y
    v[1] = s * x + c * y


def _boost(v: list[Interval], ch: Interval, sh: Interval) -> None:
    x, t = v[0], v[2]
    v[0] = ch * x + sh * t
    v[2] = sh * x + ch * t


def cosh_path_distance(frame: TriangleFrame, pattern: tuple[str, ...]) -> Interval:
    """cosh d(x0, g·x0) for the rotation word ``pattern`` (letters R, P, R^-1, P^-1)."""
    v = [frame.x0x, iv.mpf(0), frame.x0t]
    for letter in reversed(pattern):
        sign = -1 if letter.endswith("^-1") else 1
        if letter[0] == "R":
            _rotate(v, frame.cos_r, sign * frame.sin_r)
        else:
            _boost(v, frame.cosh_a, -frame.sinh_a)
            _rotate(v, frame.cos_p, sign * frame.sin_p)
            _boost(v, frame.cosh_a, frame.sinh_a)
    return frame.x0t * v[2] - frame.x0x * v[0]


def sign_patterns(types: TypeTuple) -> list[tuple[str, ...]]:
    """
    Rotation words of a path type, one per choice of turning direction.

    Consecutive edges of one type turn the same way (else the path
    backtracks); the first run turns positively, the mirror image in side a
    giving the same distances.
    """
    runs = [(t, len(list(g))) for t, g in groupby(types)]
    out = []
    for signs in product((1, -1), repeat=len(runs) - 1):
        word: list[str] = []
        for (t, k), s in zip(runs, (1, *signs), strict=True):
            letter = t.upper() if s > 0 else f"{t.upper()}^-1"
            word.extend([letter] * k)
        out.append(tuple(word))
    return out


def _runs(pattern: tuple[str, ...]) -> list[tuple[str, int]]:
    return [(t, len(list(g))) for t, g in groupby(pattern)]


@dataclass
class PatternDistance:
    """
    ``cosh d(x0, y) − cosh C*(l3)`` for the endpoint ``y`` of one path.

    The expression is active on a box only where every run of k same-type
    turns can be shortest, i.e. the vertex order is at least 2k.
    """

    pattern: tuple[str, ...]
    cache: _FrameCache = field(default_factory=_FrameCache, repr=False)

    @property
    def label(self) -> str:
        return " ".join(self.pattern)

    def active(self, box: Box) -> bool:
        for letter, k in _runs(self.pattern):
            if k == 1:
                continue
            coord = box.X if letter[0] == "R" else box.Y
            if float(hi(coord)) < math.cos(math.pi / (2 * k)) - 1e-12:
                return False
        return True

    def enclose(self, box: Box, ordered: Ordered | None) -> Interval:
        frame = self.cache.get(box)
        return cosh_path_distance(frame, self.pattern) - frame.cosh_c_star_bound


def type_expressions(types: TypeTuple) -> list[PatternDistance]:
    cache = _FrameCache()
    return [PatternDistance(p, cache) for p in sign_patterns(types)]


def signature_box(sig: Signature) -> Box:
    if not sig.finite:
        msg = "q = inf sits on the boundary Z = 1; use the cleared closed forms"
        raise ValueError(msg)
    return Box(*(cos_pi_over(n) for n in sig.as_tuple()))


def certify_rho5_type(
    types: TypeTuple,
    box: Box,
    exclusions: tuple[Locus, ...] = (),
    eps: float = DEFAULT_EPS,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> Verdict:
    """Every sphere-5 vertex of the given type lies farther than C*(l3) from x0."""
    return branch_and_bound(type_expressions(types), box, exclusions, eps, max_depth)


# ----------------------------
# Type table
# ----------------------------


@dataclass(frozen=True)
class TypeCaseRow:
    studied: tuple[TypeTuple, TypeTuple]
    associated: tuple[TypeTuple, TypeTuple] | None


_TYPE_ROWS = (
    ("rrrrp", "ppppr", "prrrr", "rpppp"),
    ("rrrpp", "ppprr", "pprrr", "rrppp"),
    ("rpppr", "prrrp", None, None),
    ("rpprr", "prrpp", "rrppr", "pprrp"),
    ("rrrpr", "ppprp", "rprrr", "prppp"),
    ("rrprr", "pprpp", None, None),
    ("rprrp", "prppr", "prrpr", "rpprp"),
    ("rrprp", "pprpr", "prprr", "rprpp"),
    ("rprpr", "prprp", None, None),
)


def type_case_list() -> list[TypeCaseRow]:
    """
    The mixed five-edge path types, up to reversal.

    Reversing a path does not change the set of distances it realizes, so
    each associated pair is covered by the studied pair of its row;
    palindromic pairs have no associate.
    """
    rows = []
    for a, b, c, d in _TYPE_ROWS:
        assoc = (tuple(c), tuple(d)) if c else None
        rows.append(TypeCaseRow((tuple(a), tuple(b)), assoc))
    return rows


def studied_types() -> list[TypeTuple]:
    return [t for row in type_case_list() for t in row.studied]


def type_counts() -> dict[str, int]:
    rows = type_case_list()
    studied = sum(len(r.studied) for r in rows)
    associated = sum(len(r.associated) for r in rows if r.associated)
    return {"studied": studied, "associated": associated, "pure": 2, "total": studied + associated + 2}


# ----------------------------
# Signature regions
# ----------------------------

CoordSpec = tuple[str, float, float]


@dataclass(frozen=True)
class RegionCell:
    """One box of a signature region, described by plain data."""

    label: str
    coords: tuple[CoordSpec, CoordSpec, CoordSpec]
    exclusions: tuple[Locus, ...] = ()

    def box(self) -> Box:
        parts = []
        for kind, a, b in self.coords:
            parts.append(cos_pi_over(int(a)) if kind == "pin" else interval(a, b))
        return Box(*parts)


@dataclass(frozen=True)
class SignatureRegion:
    """
    Pinned signatures ``3 ≤ n ≤ n_max`` per coordinate, plus optional tails.

    A tail coordinate ranges over ``[cos(π/(n_max+1)), 1 − eps]``. Cells are
    ordered coordinatewise; non-hyperbolic, exceptional and computed
    exclusions are left out and listed.
    """

    n_max: int = 7
    tails: bool = True
    eps: float = DEFAULT_EPS

    def __post_init__(self) -> None:
        if self.n_max < 3:
            msg = f"n_max must be at least 3, got {self.n_max}"
            raise ValueError(msg)

    def _choices(self) -> list[int | None]:
        return [*range(3, self.n_max + 1), *([None] if self.tails else [])]

    def _spec(self, n: int | None) -> CoordSpec:
        if n is None:
            return ("range", math.cos(math.pi / (self.n_max + 1)), 1 - self.eps)
        return ("pin", n, n)

    def _triples(self):
        choices = self._choices()
        rank = {c: i for i, c in enumerate(choices)}
        for r in choices:
            for p in choices:
                for q in choices:
                    if rank[r] <= rank[p] <= rank[q]:
                        yield r, p, q

    def cells(self) -> list[RegionCell]:
        out = []
        for r, p, q in self._triples():
            if None not in (r, p, q):
                if 1 / r + 1 / p + 1 / q >= 1 or (r, p, q) in EXCEPTIONAL:
                    continue
                if (r, p, q) in COMPUTED_EXCLUSIONS:
                    continue
            label = ",".join("tail" if n is None else str(n) for n in (r, p, q))
            out.append(RegionCell(label, (self._spec(r), self._spec(p), self._spec(q))))
        return out

    def excluded(self) -> list[str]:
        return [
            ",".join(map(str, t))
            for t in EXCEPTIONAL
            if max(t) <= self.n_max
        ]

    def computed_exclusions(self) -> list[str]:
        return [",".join(map(str, t)) for t in COMPUTED_EXCLUSIONS if max(t) <= self.n_max]

    def describe(self) -> str:
        tail = f", tails to 1-{self.eps:g}" if self.tails else ""
        return f"pinned 3..{self.n_max}{tail}"


def box_cell(box: Box, eps: float) -> RegionCell:
    """A continuous box with the exceptional points and the corner removed."""
    bounds = box.describe()
    points = [
        PointLocus(*(math.cos(math.pi / n) for n in t))
        for t in (*EXCEPTIONAL, *COMPUTED_EXCLUSIONS, (3, 3, 3))
    ]
    coords = tuple(("range", a, b) for a, b in bounds)
    return RegionCell("box", coords, tuple(points))


# ----------------------------
# Certificates
# ----------------------------


@dataclass(frozen=True)
class CellVerdict:
    cell: str
    types: TypeTuple
    kind: Literal["Positive", "FailsAt", "Inconclusive"]
    leaves: int = 0
    min_lower: float | None = None
    point: tuple[float, float, float] | None = None
    value: float | None = None
    pattern: str = ""
    boxes: list[list[list[float]]] = field(default_factory=list)


def _cell_verdicts(cell: RegionCell, eps: float, max_depth: int) -> list[CellVerdict]:
    box = cell.box()
    out = []
    for types in studied_types():
        v = certify_rho5_type(types, box, cell.exclusions, eps, max_depth)
        if isinstance(v, Positive):
            lower = v.min_lower if math.isfinite(v.min_lower) else None
            out.append(CellVerdict(cell.label, types, "Positive", v.leaves, lower))
        elif isinstance(v, FailsAt):
            out.append(
                CellVerdict(cell.label, types, "FailsAt", point=v.point, value=v.value, pattern=v.label)
            )
        else:
            out.append(CellVerdict(cell.label, types, "Inconclusive", boxes=v.boxes))
    logger.info("Certified cell %s", cell.label)
    return out


@dataclass
class TypeResult:
    types: TypeTuple
    verdict: Literal["Positive", "FailsAt", "Inconclusive"]
    leaves: int
    failures: list[CellVerdict] = field(default_factory=list)

    @property
    def label(self) -> str:
        return "(" + ",".join(self.types) + ")"


@dataclass
class CertReport:
    region: str
    cells: list[str]
    types: list[TypeResult]
    exclusions: list[str]
    computed_exclusions: list[str]
    eps: float
    max_depth: int

    @property
    def ok(self) -> bool:
        return all(t.verdict == "Positive" for t in self.types)


def rho5_certificate(
    region: SignatureRegion | Box,
    eps: float = DEFAULT_EPS,
    max_depth: int = DEFAULT_MAX_DEPTH,
    jobs: int = 1,
) -> CertReport:
    """
    Certify ``ρ*(5) > C*(l3)`` type by type over a region.

    Cells are independent and may run in worker processes; results are
    merged in cell order.
    """
    if isinstance(region, Box):
        cells = [box_cell(region, eps)]
        excluded = [",".join(map(str, t)) for t in EXCEPTIONAL]
        computed = [",".join(map(str, t)) for t in COMPUTED_EXCLUSIONS]
        label = f"box {region.describe()}"
    else:
        cells = region.cells()
        excluded = region.excluded()
        computed = region.computed_exclusions()
        label = region.describe()
    logger.info("Certifying %s cells of %s", len(cells), label)

    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_cell_verdicts, c, eps, max_depth) for c in cells]
            per_cell = [f.result() for f in futures]
    else:
        per_cell = [_cell_verdicts(c, eps, max_depth) for c in cells]

    results = []
    for types in studied_types():
        verdicts = [v for cell in per_cell for v in cell if v.types == types]
        bad = [v for v in verdicts if v.kind != "Positive"]
        if any(v.kind == "FailsAt" for v in bad):
            kind = "FailsAt"
        elif bad:
            kind = "Inconclusive"
        else:
            kind = "Positive"
        results.append(TypeResult(types, kind, sum(v.leaves for v in verdicts), bad))
    return CertReport(
        region=label,
        cells=[c.label for c in cells],
        types=results,
        exclusions=excluded,
        computed_exclusions=computed,
        eps=eps,
        max_depth=max_depth,
    )
