"""Rational sets of the form {(0, +-a), (0, +-b)} plus x-axis points.

An x-axis point (x, 0) at rational distance from all four axis points must
satisfy x^2 + a^2 = u^2 and x^2 + b^2 = v^2 with u, v rational.  Such x are
found here two ways: brute-force search over bounded-height rationals, and
the group law on the genus-1 curve behind the pair of quadric conditions.

The cubic model used is

    Y^2 = X (X + a^2) (X + b^2),

with forward map (x, u, v) -> (X, Y) = (x^2, x*u*v) and backward map
x = Y / (sqrt(X + a^2) * sqrt(X + b^2)) where both square roots are taken
positive.  Nothing is trusted from a formula: the round-trip identities are
what the test suite pins down.  Multiples of a point coming from an actual
x-axis solution always map back (their X + a^2 and X + b^2 classes stay
square), which is what makes the generator productive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError
from .rds import PlanePoint, RationalDistanceSet, verified_set
from .scalars import QuadExt, format_rational, rational_square_root

ECPoint = Optional[tuple[Fraction, Fraction]]  # None is the point at infinity


@dataclass(frozen=True)
class HuffInstance:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if not self.a or not self.b:
            raise DomainError("instance needs nonzero a and b")
        if abs(self.a) == abs(self.b):
            raise DomainError("instance needs |a| != |b|")

    def to_json(self) -> dict:
        return {"a": format_rational(self.a), "b": format_rational(self.b)}


@dataclass(frozen=True)
class HuffPoint:
    """x with x^2 + a^2 = u^2 and x^2 + b^2 = v^2, u, v >= 0 canonically."""

    x: Fraction
    u: Fraction
    v: Fraction

    @property
    def degenerate(self) -> bool:
        return not self.x or not self.u or not self.v

    def to_json(self) -> dict:
        return {"x": format_rational(self.x), "u": format_rational(self.u), "v": format_rational(self.v)}


def huff_verify(inst: HuffInstance, x: Fraction) -> Optional[HuffPoint]:
    """HuffPoint for x when both x^2 + a^2 and x^2 + b^2 are rational
    squares; None otherwise."""
    x = Fraction(x)
    u = rational_square_root(x * x + inst.a * inst.a)
    if u is None:
        return None
    v = rational_square_root(x * x + inst.b * inst.b)
    if v is None:
        return None
    return HuffPoint(x, u, v)


def huff_search(inst: HuffInstance, height_bound: int) -> list[HuffPoint]:
    """All x = p/q with |p|, q <= height_bound (x != 0) passing
    huff_verify, in ascending order.  Complete within the bound."""
    if height_bound < 1:
        raise DomainError("height bound must be at least 1")
    from math import gcd

    found = []
    for q in range(1, height_bound + 1):
        for p in range(-height_bound, height_bound + 1):
            if p == 0 or gcd(abs(p), q) != 1:
                continue
            hp = huff_verify(inst, Fraction(p, q))
            if hp is not None:
                found.append(hp)
    found.sort(key=lambda hp: hp.x)
    return found


@dataclass(frozen=True)
class WeierstrassCurve:
    """Cubic model Y^2 = X^3 + c2 X^2 + c1 X + c0 with rational maps to and
    from the x-axis solutions of a HuffInstance."""

    c2: Fraction
    c1: Fraction
    c0: Fraction
    a: Fraction
    b: Fraction

    def rhs(self, x: Fraction) -> Fraction:
        return ((x + self.c2) * x + self.c1) * x + self.c0

    def contains(self, p: ECPoint) -> bool:
        if p is None:
            return True
        x, y = p
        return y * y == self.rhs(x)

    # -- group law ----------------------------------------------------------

    def negate(self, p: ECPoint) -> ECPoint:
        if p is None:
            return None
        return (p[0], -p[1])

    def add(self, p: ECPoint, q: ECPoint) -> ECPoint:
        if p is None:
            return q
        if q is None:
            return p
        x1, y1 = p
        x2, y2 = q
        if x1 == x2:
            if y1 == -y2:
                return None
            lam = (3 * x1 * x1 + 2 * self.c2 * x1 + self.c1) / (2 * y1)
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam - self.c2 - x1 - x2
        y3 = lam * (x1 - x3) - y1
        return (x3, y3)

    def multiply(self, p: ECPoint, n: int) -> ECPoint:
        if n < 0:
            return self.multiply(self.negate(p), -n)
        result: ECPoint = None
        base = p
        while n:
            if n & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            n >>= 1
        return result

    # -- maps to and from the quadric intersection ----------------------------

    def forward(self, hp: HuffPoint) -> ECPoint:
        """(x, u, v) -> (x^2, x*u*v); lands on the cubic exactly."""
        return (hp.x * hp.x, hp.x * hp.u * hp.v)

    def backward(self, p: ECPoint) -> Optional[Fraction]:
        """Recover x from a curve point, when defined.

        Defined iff X + a^2 and X + b^2 are rational squares and Y != 0;
        then x = Y / (sqrt(X + a^2) sqrt(X + b^2)) satisfies x^2 = X.
        """
        if p is None:
            return None
        x_coord, y_coord = p
        if not y_coord:
            return None
        ru = rational_square_root(x_coord + self.a * self.a)
        if ru is None or not ru:
            return None
        rv = rational_square_root(x_coord + self.b * self.b)
        if rv is None or not rv:
            return None
        return y_coord / (ru * rv)

    def to_json(self) -> dict:
        return {
            "c2": format_rational(self.c2),
            "c1": format_rational(self.c1),
            "c0": format_rational(self.c0),
        }


def concordant_reduction(inst: HuffInstance) -> WeierstrassCurve:
    """Cubic model for the genus-1 curve of an instance.

    Multiplying the two square conditions gives (x u v)^2 =
    x^2 (x^2 + a^2)(x^2 + b^2), i.e. Y^2 = X(X + a^2)(X + b^2) with X = x^2.
    |a| = |b| would make the cubic's right side have a double root, so the
    instance invariant guarantees a smooth curve.
    """
    m = inst.a * inst.a
    n = inst.b * inst.b
    return WeierstrassCurve(c2=m + n, c1=m * n, c0=Fraction(0), a=inst.a, b=inst.b)


@dataclass(frozen=True)
class GeneratedPoints:
    """Result of walking multiples of a seed point on the cubic model."""

    points: tuple[HuffPoint, ...]
    torsion_order: Optional[int] = None

    @property
    def torsion(self) -> bool:
        return self.torsion_order is not None


def generate_points(inst: HuffInstance, seed: HuffPoint, n: int, max_multiple: int = 0) -> GeneratedPoints:
    """Walk 2P, 3P, ... of the seed's image on the cubic, mapping each back
    and re-verifying; stops after n distinct new points or when the seed
    turns out to be torsion (a finite cycle through the point at infinity).
    """
    if n < 0:
        raise DomainError("number of requested points must be nonnegative")
    if huff_verify(inst, seed.x) != HuffPoint(seed.x, abs(seed.u), abs(seed.v)):
        raise DomainError(f"seed {seed} does not satisfy the instance equations")
    curve = concordant_reduction(inst)
    p0 = curve.forward(seed)
    if not curve.contains(p0):
        raise DomainError("seed image is not on the cubic model")
    if p0 is None or not p0[1]:
        # seed image is the identity or a 2-torsion point
        return GeneratedPoints((), torsion_order=1 if p0 is None else 2)

    if max_multiple <= 0:
        max_multiple = max(4 * n + 8, 16)
    found: list[HuffPoint] = []
    seen_x = {seed.x}
    current = p0
    for mult in range(2, max_multiple + 1):
        current = curve.add(current, p0)
        if current is None:
            return GeneratedPoints(tuple(found), torsion_order=mult)
        if len(found) >= n:
            continue
        x = curve.backward(current)
        if x is None or x in seen_x:
            continue
        seen_x.add(x)
        hp = huff_verify(inst, x)
        if hp is None:
            raise DomainError(f"generated x = {x} failed verification (map inconsistency)")
        found.append(hp)
        if len(found) >= n:
            return GeneratedPoints(tuple(found))
    return GeneratedPoints(tuple(found))


def emit_rds(inst: HuffInstance, points: list[HuffPoint]) -> RationalDistanceSet:
    """Four axis points (0, +-a), (0, +-b) plus (x_i, 0) for the given
    solutions, deduplicated; degenerate x = 0 entries are dropped.  The
    result is verified before being returned."""
    coords = {
        (Fraction(0), inst.a),
        (Fraction(0), -inst.a),
        (Fraction(0), inst.b),
        (Fraction(0), -inst.b),
    }
    for hp in points:
        if hp.degenerate:
            continue
        coords.add((hp.x, Fraction(0)))
    pts = sorted(
        (PlanePoint(QuadExt(x), QuadExt(y)) for x, y in coords),
        key=PlanePoint.sort_key,
    )
    return verified_set(pts, 1)
