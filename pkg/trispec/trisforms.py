"""
trispec.trisforms
=================================

Closed forms of a hyperbolic triangle group Γ(r,p,q) as pure functions of
its signature.

Notation
--------
- ``X = cos π/r``, ``Y = cos π/p``, ``Z = cos π/q`` (``Z = 1`` when q = ∞).
- ``Δ = X² + Y² + Z² + 2XYZ − 1`` (positive exactly for hyperbolic triangles).
- Side ``a`` joins the vertices of angles π/r and π/p, side ``b`` joins π/p
  and π/q, side ``c`` joins π/q and π/r.
- ``d_r``, ``d_p``, ``d_q`` are the distances from each vertex to the two
  contact points of the inscribed circle on the sides through that vertex.
- ``L0 … L13`` are the polynomial values whose doubled arcosh give the
  translation lengths of hyperbolic elements of level at most 4.

Functions taking a :class:`Signature` also accept a :class:`CosTriple`
where the formula is polynomial in (X, Y, Z), which allows formal
evaluation at limit points such as X = Y = Z = 1.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, fields

logger = logging.getLogger(__name__)

INF = math.inf
EXCEPTIONAL = ((3, 4, 4), (4, 4, 4), (5, 5, 5))


# ----------------------------
# Signatures
# ----------------------------


@dataclass(frozen=True, order=True)
class Signature:
    """
    A triangle group signature ``r ≤ p ≤ q`` with ``1/r + 1/p + 1/q < 1``.

    Only ``q`` may be infinite (``math.inf``).
    """

    r: int
    p: int
    q: int | float

    def __post_init__(self) -> None:
        for name in ("r", "p"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 2:
                msg = f"{name} must be an integer ≥ 2, got {v!r}"
                raise ValueError(msg)
        if not (self.q == INF or (isinstance(self.q, int) and self.q >= 2)):
            msg = f"q must be an integer ≥ 2 or inf, got {self.q!r}"
            raise ValueError(msg)
        if not self.r <= self.p <= self.q:
            msg = f"signature ({self.label}) must satisfy r ≤ p ≤ q"
            raise ValueError(msg)
        inv_q = 0.0 if self.q == INF else 1.0 / self.q
        if 1.0 / self.r + 1.0 / self.p + inv_q >= 1.0 - 1e-15:
            msg = f"signature ({self.label}) is not hyperbolic: 1/r+1/p+1/q ≥ 1"
            raise ValueError(msg)

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse ``"4,5,6"``, ``"4 5 6"`` or ``"3,3,inf"``."""
        parts = text.replace(",", " ").split()
        if len(parts) != 3:
            msg = f"expected three signature entries, got {text!r}"
            raise ValueError(msg)
        return cls.of(*parts)

    @classmethod
    def of(cls, r: int | str, p: int | str, q: int | float | str) -> "Signature":
        def _int(v: int | str, name: str) -> int:
            try:
                return int(v)
            except (TypeError, ValueError) as exc:
                msg = f"{name} must be an integer, got {v!r}"
                raise ValueError(msg) from exc

        if isinstance(q, str) and q.strip().lower() in {"inf", "infinity", "∞"}:
            qv: int | float = INF
        elif q == INF:
            qv = INF
        else:
            qv = _int(q, "q")
        return cls(_int(r, "r"), _int(p, "p"), qv)

    @property
    def finite(self) -> bool:
        return self.q != INF

    @property
    def label(self) -> str:
        q = "inf" if self.q == INF else str(self.q)
        return f"{self.r},{self.p},{q}"

    @property
    def is_exceptional(self) -> bool:
        return (self.r, self.p, self.q) in EXCEPTIONAL

    def as_tuple(self) -> tuple[int, int, int | float]:
        return (self.r, self.p, self.q)


def _sin_pi_over(n: int | float) -> float:
    return 0.0 if n == INF else math.sin(math.pi / n)


def _cos_pi_over(n: int | float) -> float:
    return 1.0 if n == INF else math.cos(math.pi / n)


# ----------------------------
# Basic quantities
# ----------------------------


@dataclass(frozen=True)
class CosTriple:
    X: float
    Y: float
    Z: float


def cos_params(sig: Signature) -> CosTriple:
    return CosTriple(_cos_pi_over(sig.r), _cos_pi_over(sig.p), _cos_pi_over(sig.q))


def _cos(obj: Signature | CosTriple) -> CosTriple:
    return obj if isinstance(obj, CosTriple) else cos_params(obj)


def big_delta(sig: Signature | CosTriple) -> float:
    c = _cos(sig)
    return c.X**2 + c.Y**2 + c.Z**2 + 2.0 * c.X * c.Y * c.Z - 1.0


@dataclass(frozen=True)
class SideCoshes:
    cosh_a: float
    cosh_b: float
    cosh_c: float


def side_coshes(sig: Signature) -> SideCoshes:
    """Side coshes; ``cosh_b`` and ``cosh_c`` are ∞ when q = ∞."""
    c = cos_params(sig)
    sr, sp, sq = _sin_pi_over(sig.r), _sin_pi_over(sig.p), _sin_pi_over(sig.q)
    cosh_a = (c.Z + c.X * c.Y) / (sp * sr)
    if not sig.finite:
        return SideCoshes(cosh_a, INF, INF)
    return SideCoshes(
        cosh_a,
        (c.X + c.Y * c.Z) / (sp * sq),
        (c.Y + c.Z * c.X) / (sq * sr),
    )


@dataclass(frozen=True)
class ContactData:
    """
    Contact data of the inscribed circle.

    Fields
    ------
    sinh2_dr, sinh2_dp, sinh2_dq: squared sinh of the vertex-to-contact
        distances (``sinh2_dq`` is ∞ when q = ∞).
    cosh_pq_star, cosh_rp_star, cosh_qr_star: cosh of the distances between
        contact points; ``p*q*`` is the chord at the π/r vertex, ``r*p*`` the
        chord at the π/q vertex and ``q*r*`` the chord at the π/p vertex.
    cosh_c_star: the largest of the three.
    """

    sinh2_dr: float
    sinh2_dp: float
    sinh2_dq: float
    cosh_pq_star: float
    cosh_rp_star: float
    cosh_qr_star: float
    cosh_c_star: float


def contact_data(sig: Signature | CosTriple) -> ContactData:
    c = _cos(sig)
    X, Y, Z = c.X, c.Y, c.Z
    delta = big_delta(c)
    sinh2_dq = INF if Z >= 1.0 else delta / (2.0 * (1 + X) * (1 + Y) * (1 - Z))
    pq = delta / (2.0 * (1 + Y) * (1 + Z)) + 1.0
    rp = delta / (2.0 * (1 + X) * (1 + Y)) + 1.0
    qr = delta / (2.0 * (1 + X) * (1 + Z)) + 1.0
    return ContactData(
        sinh2_dr=delta / (2.0 * (1 - X) * (1 + Y) * (1 + Z)),
        sinh2_dp=delta / (2.0 * (1 + X) * (1 - Y) * (1 + Z)),
        sinh2_dq=sinh2_dq,
        cosh_pq_star=pq,
        cosh_rp_star=rp,
        cosh_qr_star=qr,
        cosh_c_star=max(pq, rp, qr),
    )


def chord(sig: Signature, kind: str) -> float:
    """Cosh of the length of one E* edge of type ``"r"`` or ``"p"``."""
    cd = contact_data(sig)
    if kind == "r":
        return 1.0 + 2.0 * cd.sinh2_dr * _sin_pi_over(sig.r) ** 2
    if kind == "p":
        return 1.0 + 2.0 * cd.sinh2_dp * _sin_pi_over(sig.p) ** 2
    msg = f"edge type must be 'r' or 'p', got {kind!r}"
    raise ValueError(msg)


# ----------------------------
# δ functions
# ----------------------------


def _delta_generic(
    n1: int | float, n2: int | float, cosh_side: float, k1: int, k2: int, name: str
) -> float:
    if not (1 <= k1 <= n1 and 1 <= k2 <= n2):
        msg = f"{name}({k1},{k2}) needs 1 ≤ k1 ≤ {n1} and 1 ≤ k2 ≤ {n2}"
        raise ValueError(msg)
    t1, t2 = k1 * math.pi / n1, k2 * math.pi / n2
    return math.sin(t1) * math.sin(t2) * cosh_side - math.cos(t1) * math.cos(t2)


def delta_fn(sig: Signature, k1: int, k2: int) -> float:
    """``δ(k1,k2) = sin(k1π/p) sin(k2π/r) cosh a − cos(k1π/p) cos(k2π/r)``."""
    return _delta_generic(sig.p, sig.r, side_coshes(sig).cosh_a, k1, k2, "δ")


def delta_prime(sig: Signature, k1: int, k2: int) -> float:
    """``δ′`` over (p, q) with ``cosh b``."""
    if not sig.finite:
        msg = "δ′ needs a finite q"
        raise ValueError(msg)
    return _delta_generic(sig.p, sig.q, side_coshes(sig).cosh_b, k1, k2, "δ′")


def delta_second(sig: Signature, k1: int, k2: int) -> float:
    """``δ″`` over (q, r) with ``cosh c``."""
    if not sig.finite:
        msg = "δ″ needs a finite q"
        raise ValueError(msg)
    return _delta_generic(sig.q, sig.r, side_coshes(sig).cosh_c, k1, k2, "δ″")


# ----------------------------
# L-table
# ----------------------------


@dataclass(frozen=True)
class LTable:
    L0: float
    L1: float
    L2: float
    L3: float
    L4: float
    L5: float
    L6: float
    L7: float
    L8: float
    L9: float
    L10: float
    L11: float
    L12: float
    L13: float

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def __getitem__(self, index: int) -> float:
        return getattr(self, f"L{index}")


def l_table(sig: Signature | CosTriple) -> LTable:
    c = _cos(sig)
    X, Y, Z = c.X, c.Y, c.Z
    return LTable(
        L0=4 * X**2 * Y + 2 * X * Z - Y,
        L1=2 * X * Y + Z,
        L2=2 * X * Z + Y,
        L3=2 * Y * Z + X,
        L4=4 * Y**2 * X + 2 * Y * Z - X,
        L5=4 * X**2 * Z + 2 * X * Y - Z,
        L6=8 * X**3 * Y + 4 * X**2 * Z - 4 * X * Y - Z,
        L7=4 * Y**2 * Z + 2 * X * Y - Z,
        L8=8 * Y**3 * X + 4 * Y**2 * Z - 4 * X * Y - Z,
        L9=8 * X**2 * Y**2 + 4 * X * Y * Z - 2 * X**2 - 2 * Y**2 + 1,
        L10=4 * X * Y * Z + 2 * Z**2 + 2 * Y**2 - 1,
        L11=4 * X * Y * Z + 2 * X**2 + 2 * Y**2 + 2 * Z**2 - 1,
        L12=4 * X * Y * Z + 2 * X**2 + 2 * Z**2 - 1,
        L13=4 * X * Y * Z + 2 * X**2 + 2 * Y**2 - 1,
    )


def l_table_delta_routes(sig: Signature) -> dict[int, float]:
    """
    The δ-expressions equal to L-table rows, for cross-checking.

    Rows whose δ indices fall out of range for ``sig`` are omitted.
    """
    r, p = sig.r, sig.p
    routes: dict[int, tuple[Callable[..., float], int, int]] = {
        0: (delta_fn, p - 1, 2),
        1: (delta_fn, p - 1, 1),
        2: (delta_fn, 1, 2),
        3: (delta_fn, 2, 1),
        4: (delta_fn, 2, r - 1),
        5: (delta_fn, 1, 3),
        6: (delta_fn, 1, r - 3),
        7: (delta_fn, 3, 1),
        8: (delta_fn, 3, r - 1),
        9: (delta_fn, 2, r - 2),
        10: (delta_prime, 2, 2),
        13: (delta_fn, 2, 2),
    }
    out = {}
    for index, (fn, k1, k2) in routes.items():
        try:
            out[index] = fn(sig, k1, k2)
        except ValueError:
            continue
    return out


# (row, condition) pairs where a row value lies strictly between 1 and L3;
# the value then coincides with the named smaller row.
L_TABLE_EXCEPTIONS = {
    0: ("r", 4, 2),
    5: ("r", 4, 1),
    6: ("r", 5, 2),
    7: ("p", 4, 1),
}


# ----------------------------
# Head formulas
# ----------------------------


def two_arcosh(value: float) -> float | None:
    """``2·arcosh(value)`` or ``None`` when ``value ≤ 1`` (not hyperbolic)."""
    if value <= 1.0:
        return None
    return 2.0 * math.acosh(value)


def r2_l1_value(p: int, q: int | float, k: int) -> float:
    """``sin(kπ/q)·cos(π/p)/sin(π/q)``; its limit ``k·cos(π/p)`` when q = ∞."""
    y = _cos_pi_over(p)
    if q == INF:
        return k * y
    return math.sin(k * math.pi / q) * y / math.sin(math.pi / q)


def r2_l2_value(p: int, q: int | float, k: int, kk: int) -> float:
    """
    ``|sin(k′π/q) sin(kπ/q) cosh 2c − cos(kπ/q) cos(k′π/q)|``.

    At q = ∞ the limit ``|2kk′Y² − 1|`` is used for fixed indices.
    """
    y = _cos_pi_over(p)
    if q == INF:
        return abs(2.0 * k * kk * y * y - 1.0)
    s = math.sin(math.pi / q)
    cosh_2c = 2.0 * (y / s) ** 2 - 1.0
    t1, t2 = k * math.pi / q, kk * math.pi / q
    return abs(math.sin(t2) * math.sin(t1) * cosh_2c - math.cos(t1) * math.cos(t2))


@dataclass(frozen=True)
class HeadFormulas:
    """
    Lengths of the first spectral values.

    ``l1``, ``l2``, ``l3`` are ``None`` when the L-value is at most 1 (this
    happens for r = 2, where the ``r2_*`` family applies instead).
    ``l2_prime`` is the second value of the (3,3,q) family.
    """

    sig: Signature
    l1: float | None
    l2: float | None
    l3: float | None
    l2_prime: float | None

    def r2_l1(self, k: int) -> float:
        if self.sig.r != 2:
            msg = "the l1(k) family is defined for r = 2"
            raise ValueError(msg)
        return 2.0 * math.acosh(r2_l1_value(self.sig.p, self.sig.q, k))

    def r2_l2(self, k: int, kk: int) -> float:
        if self.sig.r != 2:
            msg = "the l2(k,k′) family is defined for r = 2"
            raise ValueError(msg)
        return 2.0 * math.acosh(r2_l2_value(self.sig.p, self.sig.q, k, kk))


def head_formulas(sig: Signature) -> HeadFormulas:
    lt = l_table(sig)
    z = _cos_pi_over(sig.q)
    return HeadFormulas(
        sig=sig,
        l1=two_arcosh(lt.L1),
        l2=two_arcosh(lt.L2),
        l3=two_arcosh(lt.L3),
        l2_prime=two_arcosh(2 * z * z + z - 0.5),
    )


# Named r = 2 closed forms.


def r2_l2_1_qm1(p: int, q: int | float) -> float:
    y, z = _cos_pi_over(p), _cos_pi_over(q)
    return 2.0 * math.acosh(2 * y * y + 2 * z * z - 1)


def r2_l2_1_2(p: int, q: int | float) -> float:
    y, z = _cos_pi_over(p), _cos_pi_over(q)
    return 2.0 * math.acosh(z * (4 * y * y - 1))


def r2_l1_2(p: int, q: int | float) -> float:
    y, z = _cos_pi_over(p), _cos_pi_over(q)
    return 2.0 * math.acosh(2 * y * z)


def r2_l1_3(p: int, q: int | float) -> float:
    y, z = _cos_pi_over(p), _cos_pi_over(q)
    return 2.0 * math.acosh(y * (4 * z * z - 1))


def r2_l1_4(p: int, q: int | float) -> float:
    y, z = _cos_pi_over(p), _cos_pi_over(q)
    return 2.0 * math.acosh(4 * y * z * (2 * z * z - 1))


# ----------------------------
# C* bound
# ----------------------------


def canonical_l0(sig: Signature) -> float:
    l3 = two_arcosh(l_table(sig).L3)
    if l3 is None:
        msg = f"no canonical l0 for ({sig.label})"
        raise ValueError(msg)
    return l3


def alternative_l0(sig: Signature) -> float:
    """
    The l0 used in the published bound table for (3,3,5) and (3,3,6).

    Both equal the second spectral value ``2 arcosh(2Z² + Z − 1/2)``.
    """
    if sig.as_tuple() == (3, 3, 5):
        z = _cos_pi_over(5)
        return 2.0 * math.acosh(4 * z * z - 1)
    if sig.as_tuple() == (3, 3, 6):
        v = 2 * math.cos(math.pi / 12) ** 2 + 2 * math.cos(math.pi / 4) ** 2 - 1
        return 2.0 * math.acosh(v)
    msg = f"no alternative l0 is tabulated for ({sig.label})"
    raise ValueError(msg)


def c_star_bound(sig: Signature | CosTriple, l0: float) -> float:
    """``cosh C*(l0) = cosh² c*·(cosh l0 − 1) + 1``."""
    if l0 <= 0:
        msg = f"l0 must be positive, got {l0}"
        raise ValueError(msg)
    cs = contact_data(sig).cosh_c_star
    return cs * cs * (math.cosh(l0) - 1.0) + 1.0


def c_star_expanded(sig: Signature | CosTriple) -> float:
    """``cosh C*(l3)`` written out in (X, Y, Z); equals 37 at X = Y = Z = 1."""
    c = _cos(sig)
    X, Y, Z = c.X, c.Y, c.Z
    num = (big_delta(c) + 2 * (1 + X) * (1 + Y)) ** 2 * (2 * (2 * Y * Z + X) ** 2 - 2)
    return num / (4 * (1 + X) ** 2 * (1 + Y) ** 2) + 1.0


def rho5_polynomial_333(z: float) -> float:
    """Cosh of the closest sphere-5 vertex of E* in Γ(3,3,q), ``Z = cos π/q``."""
    return 16 * z**5 + 8 * z**4 - 12 * z**3 - 2 * z**2 + 3 * z + 0.5


# ----------------------------
# r = 2 quantities
# ----------------------------


@dataclass(frozen=True)
class R2Quantities:
    """
    Closed forms of the r = 2 family, as cosh values.

    The uncleared forms divide by ``1 − Z²`` and raise at q = ∞; the
    ``*_cleared`` numerators stay finite there.
    """

    p: int
    q: int | float
    Y: float
    Z: float

    def _uncleared(self, numerator: float) -> float:
        if self.q == INF:
            msg = "q = inf: use the cleared form"
            raise ValueError(msg)
        return numerator / (1.0 - self.Z**2)

    @property
    def cosh_c(self) -> float:
        if self.q == INF:
            return INF
        return self.Y / math.sin(math.pi / self.q)

    @property
    def rho3_cleared(self) -> float:
        Y, Z = self.Y, self.Z
        return 16 * Y**2 * (Y**2 + Z**2 - 1) * (2 * Y**2 - 1) + 2 * Y**2 + Z**2 - 1

    @property
    def C_l2_12_cleared(self) -> float:
        Y, Z = self.Y, self.Z
        return 2 * Y**2 * (4 * Z * Y**2 - Z - 1) * (4 * Z * Y**2 - Z + 1) + 1 - Z**2

    @property
    def C_l2_1_qm1_cleared(self) -> float:
        Y, Z = self.Y, self.Z
        return 8 * Y**2 * (Y**2 + Z**2 - 1) * (Z**2 + Y**2) + 1 - Z**2

    @property
    def rho3_closed(self) -> float:
        return self._uncleared(self.rho3_cleared)

    @property
    def C_l2_12(self) -> float:
        return self._uncleared(self.C_l2_12_cleared)

    @property
    def C_l2_1_qm1(self) -> float:
        return self._uncleared(self.C_l2_1_qm1_cleared)

    @property
    def gap_at_infinity(self) -> float:
        """Cleared difference ``ρ(3) − C(l2(1,2))``; equals ``2Y²`` at q = ∞."""
        return self.rho3_cleared - self.C_l2_12_cleared


def r2_quantities(p: int, q: int | float) -> R2Quantities:
    sig = Signature.of(2, p, q)
    if sig.p < 3:
        msg = f"r = 2 family needs p ≥ 3, got p={p}"
        raise ValueError(msg)
    return R2Quantities(sig.p, sig.q, _cos_pi_over(sig.p), _cos_pi_over(sig.q))
