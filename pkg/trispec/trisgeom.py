"""
trispec.trisgeom
=================================

Upper half-plane geometry: points, boundary points, geodesics, isometries
(direct and orientation-reversing), their classification, distances and the
disjointness functional for two geodesics crossing a common transversal.

All values are immutable and computed in double precision. Interval
versions of the few formulas the certifier needs live in
:mod:`trispec.triscert`.

Conventions
-----------
- A :class:`Motion` stores a real 2×2 matrix normalised to ``|det| = 1``.
  Direct motions act by ``z ↦ (az+b)/(cz+d)``; reversing motions act on
  the conjugate, ``z ↦ (a z̄ + b)/(c z̄ + d)``, and have ``det = -1``.
- Composition is the matrix product with the orientation flags XOR-ed; the
  inverse keeps the orientation.
- The sign of the matrix is canonical: the first entry with modulus above
  ``1e-12`` is positive, so ``M`` and ``-M`` are stored identically.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

logger = logging.getLogger(__name__)

SIGN_EPS = 1e-12
TRACE_TOL = 1e-9
# relative to |ad| + |bc|, the size of the terms cancelling in the determinant
DET_TOL = 1e-12

Orientation = Literal["direct", "reversing"]


# ----------------------------
# Points and geodesics
# ----------------------------


@dataclass(frozen=True)
class UhpPoint:
    """A point ``x + iy`` of the upper half-plane (``y > 0``)."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not self.y > 0:
            msg = f"upper half-plane point needs y > 0, got y={self.y}"
            raise ValueError(msg)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "UhpPoint":
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the real line, or ``∞`` (stored as ``math.inf``)."""

    value: float

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)


INFINITY = BoundaryPoint(math.inf)


@dataclass(frozen=True)
class Geodesic:
    """
    Geodesic given by its unordered pair of endpoints.

    Endpoints are stored sorted (``∞`` last) so that equal geodesics compare
    equal regardless of the order they were given in.
    """

    u: BoundaryPoint
    v: BoundaryPoint

    def __post_init__(self) -> None:
        if self.u.value == self.v.value:
            msg = f"geodesic endpoints must differ, got {self.u.value} twice"
            raise ValueError(msg)
        if self.u.value > self.v.value:
            lo, hi = self.v, self.u
            object.__setattr__(self, "u", lo)
            object.__setattr__(self, "v", hi)

    @classmethod
    def between(cls, u: float, v: float) -> "Geodesic":
        return cls(BoundaryPoint(u), BoundaryPoint(v))

    @property
    def is_vertical(self) -> bool:
        return self.v.is_infinite

    def same_as(self, other: "Geodesic", tol: float = 1e-9) -> bool:
        """Endpoint-wise comparison with a relative tolerance."""
        return _close_boundary(self.u, other.u, tol) and _close_boundary(
            self.v, other.v, tol
        )


def _close_boundary(a: BoundaryPoint, b: BoundaryPoint, tol: float) -> bool:
    if a.is_infinite or b.is_infinite:
        return a.is_infinite and b.is_infinite
    return abs(a.value - b.value) <= tol * max(1.0, abs(a.value), abs(b.value))


# ----------------------------
# Motions
# ----------------------------


@dataclass(frozen=True)
class Motion:
    """An isometry of the upper half-plane, stored as a normalised matrix."""

    a: float
    b: float
    c: float
    d: float
    orientation: Orientation = "direct"

    def __post_init__(self) -> None:
        det = self.a * self.d - self.b * self.c
        want = 1.0 if self.orientation == "direct" else -1.0
        scale = max(1.0, abs(self.a * self.d) + abs(self.b * self.c))
        if abs(det - want) > DET_TOL * scale:
            msg = f"{self.orientation} motion needs det {want:+.0f}, got {det}"
            raise ValueError(msg)

    @classmethod
    def from_matrix(
        cls, m: np.ndarray | list, orientation: Orientation | None = None
    ) -> "Motion":
        """Normalise a matrix with nonzero determinant and canonicalise its sign."""
        arr = np.asarray(m, dtype=float).reshape(2, 2)
        det = float(np.linalg.det(arr))
        if abs(det) < 1e-300:
            msg = "singular matrix does not define a motion"
            raise ValueError(msg)
        if orientation is None:
            orientation = "direct" if det > 0 else "reversing"
        elif (det > 0) != (orientation == "direct"):
            msg = f"determinant sign {det:+g} contradicts orientation {orientation}"
            raise ValueError(msg)
        arr = canonical(arr / math.sqrt(abs(det)))
        return cls(*(float(e) for e in arr.ravel()), orientation=orientation)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def reversing(self) -> bool:
        return self.orientation == "reversing"

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: "Motion") -> "Motion":
        return compose(self, other)

    def inverse(self) -> "Motion":
        return inverse(self)

    def close_to(self, other: "Motion", tol: float = 1e-9) -> bool:
        """Projective equality within ``tol`` (entries compared up to sign)."""
        if self.orientation != other.orientation:
            return False
        m, n = self.matrix, other.matrix
        return bool(
            np.max(np.abs(m - n)) <= tol or np.max(np.abs(m + n)) <= tol
        )


def canonical(arr: np.ndarray) -> np.ndarray:
    """Flip the sign so the first entry with ``|e| > 1e-12`` is positive."""
    for e in arr.ravel():
        if abs(e) > SIGN_EPS:
            return arr if e > 0 else -arr
    return arr


def identity() -> Motion:
    return Motion(1.0, 0.0, 0.0, 1.0)


def compose(m1: Motion, m2: Motion) -> Motion:
    """The motion ``m1 ∘ m2``."""
    orient: Orientation = "reversing" if m1.reversing != m2.reversing else "direct"
    return Motion.from_matrix(m1.matrix @ m2.matrix, orient)


def inverse(m: Motion) -> Motion:
    arr = np.array([[m.d, -m.b], [-m.c, m.a]])
    if m.reversing:
        arr = -arr
    return Motion.from_matrix(arr, m.orientation)


def translation(t: float) -> Motion:
    return Motion(1.0, t, 0.0, 1.0)


def dilation(lam: float) -> Motion:
    """``z ↦ lam·z`` for ``lam > 0``."""
    s = math.sqrt(lam)
    return Motion(s, 0.0, 0.0, 1.0 / s)


def rotation_about(center: UhpPoint, angle: float) -> Motion:
    """Counterclockwise rotation by ``angle`` about ``center``."""
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    rot = np.array([[c, s], [-s, c]])
    sy = math.sqrt(center.y)
    move = np.array([[sy, center.x / sy], [0.0, 1.0 / sy]])
    back = np.array([[1.0 / sy, -center.x / sy], [0.0, sy]])
    return Motion.from_matrix(move @ rot @ back, "direct")


def apply(m: Motion, z: UhpPoint) -> UhpPoint:
    w = z.z.conjugate() if m.reversing else z.z
    img = (m.a * w + m.b) / (m.c * w + m.d)
    return UhpPoint(img.real, abs(img.imag))


def apply_boundary(m: Motion, u: BoundaryPoint) -> BoundaryPoint:
    if u.is_infinite:
        if abs(m.c) <= SIGN_EPS:
            return INFINITY
        return BoundaryPoint(m.a / m.c)
    den = m.c * u.value + m.d
    if abs(den) <= SIGN_EPS * max(1.0, abs(m.c * u.value), abs(m.d)):
        return INFINITY
    return BoundaryPoint((m.a * u.value + m.b) / den)


def apply_geodesic(m: Motion, g: Geodesic) -> Geodesic:
    return Geodesic(apply_boundary(m, g.u), apply_boundary(m, g.v))


def batch_apply(
    mats: np.ndarray, reversing: np.ndarray | None, z: complex
) -> np.ndarray:
    """Images of ``z`` under a stack of matrices of shape ``(n, 2, 2)``."""
    w = np.full(len(mats), z, dtype=complex)
    if reversing is not None:
        w = np.where(reversing, np.conj(w), w)
    img = (mats[:, 0, 0] * w + mats[:, 0, 1]) / (mats[:, 1, 0] * w + mats[:, 1, 1])
    return img.real + 1j * np.abs(img.imag)


# ----------------------------
# Distances and classification
# ----------------------------


def cosh_dist(z1: UhpPoint, z2: UhpPoint) -> float:
    return 1.0 + ((z1.x - z2.x) ** 2 + (z1.y - z2.y) ** 2) / (2.0 * z1.y * z2.y)


def dist(z1: UhpPoint, z2: UhpPoint) -> float:
    return math.acosh(max(1.0, cosh_dist(z1, z2)))


def batch_cosh_dist(points: np.ndarray, z: complex) -> np.ndarray:
    return 1.0 + np.abs(points - z) ** 2 / (2.0 * points.imag * z.imag)


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class Elliptic:
    """Rotation; ``angle`` is the counterclockwise rotation angle in ``(0, 2π)``."""

    angle: float


@dataclass(frozen=True)
class Parabolic:
    pass


@dataclass(frozen=True)
class Hyperbolic:
    length: float


MotionClass = Identity | Elliptic | Parabolic | Hyperbolic


def classify(m: Motion) -> MotionClass:
    """
    Classify a direct motion by its trace.

    ``|tr| - 2`` within ``1e-9`` counts as parabolic, or identity when the
    matrix is ``±I`` within the same tolerance. Elliptic angles are measured
    counterclockwise: with the sign of the matrix chosen so that ``c < 0``,
    the angle is ``2·arccos(tr/2)``, so :func:`rotation_about` by θ
    classifies as ``Elliptic(θ)`` for any θ in ``(0, 2π)``.
    """
    if m.reversing:
        msg = "classification defined for direct motions only"
        raise ValueError(msg)
    signed = -m.trace if m.c > 0 else m.trace
    tr = abs(m.trace)
    if tr > 2.0 + TRACE_TOL:
        return Hyperbolic(2.0 * math.acosh(tr / 2.0))
    if tr >= 2.0 - TRACE_TOL:
        arr = m.matrix
        eye = np.eye(2)
        if min(np.max(np.abs(arr - eye)), np.max(np.abs(arr + eye))) <= TRACE_TOL:
            return Identity()
        return Parabolic()
    return Elliptic(2.0 * math.acos(max(-1.0, min(1.0, signed / 2.0))))


def translation_length(m: Motion) -> float:
    """Translation length of a direct motion, 0 unless hyperbolic."""
    cls = classify(m)
    return cls.length if isinstance(cls, Hyperbolic) else 0.0


# ----------------------------
# Geodesic constructions
# ----------------------------


def geodesic_through(z1: UhpPoint, z2: UhpPoint | BoundaryPoint) -> Geodesic:
    """Geodesic through a point and a second point or boundary point."""
    if isinstance(z2, BoundaryPoint):
        if z2.is_infinite:
            return Geodesic.between(z1.x, math.inf)
        u = z2.value
        if abs(z1.x - u) <= SIGN_EPS:
            return Geodesic.between(u, math.inf)
        m = (z1.x**2 + z1.y**2 - u**2) / (2.0 * (z1.x - u))
        return Geodesic.between(u, 2.0 * m - u)
    if abs(z1.x - z2.x) <= SIGN_EPS * max(1.0, abs(z1.x)):
        return Geodesic.between(z1.x, math.inf)
    m = (abs(z1.z) ** 2 - abs(z2.z) ** 2) / (2.0 * (z1.x - z2.x))
    radius = abs(z1.z - m)
    return Geodesic.between(m - radius, m + radius)


def _normalizer(g: Geodesic) -> Motion:
    """A direct motion sending ``g.u`` to 0 and ``g.v`` to ∞."""
    u, v = g.u.value, g.v.value
    if g.v.is_infinite:
        return translation(-u)
    # z ↦ (u - z)/(z - v), determinant v - u > 0
    return Motion.from_matrix(np.array([[-1.0, u], [1.0, -v]]), "direct")


def reflect(g: Geodesic) -> Motion:
    """The reflection fixing ``g`` pointwise."""
    if g.is_vertical:
        u = g.u.value
        return Motion.from_matrix(np.array([[-1.0, 2.0 * u], [0.0, 1.0]]), "reversing")
    m = (g.u.value + g.v.value) / 2.0
    radius = (g.v.value - g.u.value) / 2.0
    return Motion.from_matrix(
        np.array([[m, radius**2 - m**2], [1.0, -m]]) / radius, "reversing"
    )


def dist_to_geodesic(z: UhpPoint, g: Geodesic) -> float:
    w = apply(_normalizer(g), z)
    return math.asinh(abs(w.x) / w.y)


def foot_on_geodesic(z: UhpPoint, g: Geodesic) -> UhpPoint:
    """Orthogonal projection of ``z`` onto ``g``."""
    norm = _normalizer(g)
    w = apply(norm, z)
    foot = UhpPoint(0.0, abs(w.z))
    return apply(inverse(norm), foot)


def angle_at(vertex: UhpPoint, z1: UhpPoint, z2: UhpPoint) -> float:
    """Angle at ``vertex`` between the geodesic segments to ``z1`` and ``z2``."""
    a, b = dist(vertex, z1), dist(vertex, z2)
    cos_t = (math.cosh(a) * math.cosh(b) - cosh_dist(z1, z2)) / (
        math.sinh(a) * math.sinh(b)
    )
    return math.acos(min(1.0, max(-1.0, cos_t)))


def delta_config(x1x2: float, theta1: float, theta2: float) -> float:
    """
    Disjointness functional of two geodesics crossing a transversal.

    Two geodesics meet a common transversal at points ``x1``, ``x2`` a
    distance ``x1x2`` apart, at angles ``theta1`` and ``theta2`` on the same
    side. They are disjoint iff the returned value exceeds 1, and then it is
    the cosh of the distance between them.
    """
    if x1x2 < 0:
        msg = f"transversal length must be nonnegative, got {x1x2}"
        raise ValueError(msg)
    return abs(
        math.sin(theta1) * math.sin(theta2) * math.cosh(x1x2)
        - math.cos(theta1) * math.cos(theta2)
    )


def common_perpendicular(a1: Geodesic, a2: Geodesic) -> tuple[Geodesic, float]:
    """Common perpendicular of two disjoint geodesics and the distance between them."""
    norm = _normalizer(a1)
    img = apply_geodesic(norm, a2)
    s, t = img.u, img.v
    tol = 1e-12
    if (
        s.is_infinite
        or t.is_infinite
        or abs(s.value) <= tol
        or abs(t.value) <= tol
        or s.value * t.value < 0
    ):
        msg = "no common perpendicular: geodesics intersect or are asymptotic"
        raise ValueError(msg)
    root = math.sqrt(s.value * t.value)
    perp = apply_geodesic(inverse(norm), Geodesic.between(-root, root))
    cosh_d = abs(s.value + t.value) / abs(t.value - s.value)
    return perp, math.acosh(cosh_d)


# ----------------------------
# Tolerant lookup
# ----------------------------


class VectorIndex:
    """
    Tolerant dictionary keyed by short float vectors.

    Entries are bucketed on a coarse grid; lookups compare against the
    neighbouring buckets when an entry sits near a bucket boundary, so that
    two float evaluations of the same quantity always meet. With
    ``signed=True`` a key also matches its negation.
    """

    def __init__(self, tol: float = 1e-9, cell: float = 1e-6, signed: bool = False) -> None:
        self.tol = tol
        self.cell = cell
        self.signed = signed
        self._buckets: dict[tuple, list[tuple[np.ndarray, object]]] = {}
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def _key(self, flat: np.ndarray, tag: object) -> tuple:
        return (tag, *np.floor(flat / self.cell).astype(np.int64).tolist())

    def _candidate_keys(self, flat: np.ndarray, tag: object) -> list[tuple]:
        scaled = flat / self.cell
        base = np.floor(scaled).astype(np.int64)
        frac = scaled - base
        margin = 2.0 * self.tol / self.cell
        keys: list[tuple] = [()]
        for k, f in zip(base.tolist(), frac.tolist(), strict=True):
            opts = [k]
            if f < margin:
                opts.append(k - 1)
            if f > 1.0 - margin:
                opts.append(k + 1)
            keys = [key + (o,) for key in keys for o in opts]
        return [(tag, *key) for key in keys]

    def find_key(self, vec: np.ndarray, tag: object = None) -> object | None:
        flat = np.asarray(vec, dtype=float).ravel()
        for cand in (flat, -flat) if self.signed else (flat,):
            for key in self._candidate_keys(cand, tag):
                for stored, payload in self._buckets.get(key, ()):
                    if np.max(np.abs(stored - cand)) <= self.tol:
                        return payload
        return None

    def add_key(self, vec: np.ndarray, payload: object, tag: object = None) -> bool:
        """Insert unless present; return True when the entry was new."""
        if self.find_key(vec, tag) is not None:
            return False
        flat = np.asarray(vec, dtype=float).ravel().copy()
        if self.signed:
            flat = canonical(flat)
        self._buckets.setdefault(self._key(flat, tag), []).append((flat, payload))
        self._size += 1
        return True


class MotionIndex(VectorIndex):
    """Motions keyed by their matrix up to sign, separated by orientation."""

    def __init__(self, tol: float = 1e-9, cell: float = 1e-6) -> None:
        super().__init__(tol, cell, signed=True)

    def find(self, mat: np.ndarray, reversing: bool = False) -> object | None:
        return self.find_key(mat, reversing)

    def add(self, mat: np.ndarray, payload: object, reversing: bool = False) -> bool:
        return self.add_key(mat, payload, reversing)


class PointIndex(VectorIndex):
    """Points of the upper half-plane keyed by ``(x, y)``."""

    def find(self, z: UhpPoint | complex) -> object | None:
        w = z.z if isinstance(z, UhpPoint) else z
        return self.find_key(np.array([w.real, w.imag]))

    def add(self, z: UhpPoint | complex, payload: object) -> bool:
        w = z.z if isinstance(z, UhpPoint) else z
        return self.add_key(np.array([w.real, w.imag]), payload)
