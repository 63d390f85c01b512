"""Distance surfaces: construction, projectivization, the factored model
z^2 = P(x) Q(y) over Q(sqrt(k))(i), singular-locus enumeration and
classification, divisor bookkeeping and the general-type certificate.

The surface attached to points (a_1, b_1), ..., (a_m, b_m) is

    F = z^2 - prod_i ((x - a_i)^2 + (y - b_i)^2),

projectivized to degree 2m with a fourth variable w.  Writing
z_j = a_j + i b_j, the substitution x + iy -> x, x - iy -> y turns the
product into P(x) Q(y) with P = prod (x - z_j) and Q = prod (y - conj z_j).
On that model the affine singular locus is exactly the m^2 points
(z_i, conj z_j, 0), each an ordinary node, and the point at infinity of the
chart z = 1 carries the local model z^(2m-2) = x^m y^m.  For m = 2g + 2,
g >= 2 and points not all on a line, the branched-double-cover bookkeeping
(branch bidegree (2g+2, 2g+2), canonical pullback class (g-1, g-1)) and the
g^2 regular canonical forms y^k x^l (dy^dx)/z make the surface general
type; the certificate checks every one of those facts mechanically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DomainError, IntegrityError
from .poly import LaurentPoly, MPoly, TwoForm, expand_product, pullback_2form, squarefree_check
from .rds import PlanePoint, _context_k, rational_distance
from .scalars import GaussQuad, QuadExt

AFFINE_VARS = ("x", "y", "z")
PROJ_VARS = ("x", "y", "z", "w")


@dataclass(frozen=True)
class DistanceSurface:
    """A distance surface with its projectivization and factored form."""

    points: tuple[PlanePoint, ...]
    k: int
    f_affine: MPoly      # z^2 - product, variables (x, y, z), over Q(sqrt(k))
    f_proj: MPoly        # degree-2m homogenization, variables (x, y, z, w)
    p_poly: MPoly        # P(x) = prod (x - z_j), over Q(sqrt(k))(i)
    q_poly: MPoly        # Q(y) = prod (y - conj z_j)
    roots: tuple[GaussQuad, ...]

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def conj_roots(self) -> tuple[GaussQuad, ...]:
        return tuple(z.conjugate() for z in self.roots)


@dataclass(frozen=True)
class SingularPointRecord:
    location: Union[tuple[GaussQuad, GaussQuad, GaussQuad], str]
    local_type: str                  # "node" | "infinity-model" | "not-applicable"
    witness: dict

    @property
    def is_affine(self) -> bool:
        return not isinstance(self.location, str)


def build_surface(points: Sequence[PlanePoint]) -> DistanceSurface:
    """Construct the surface data for pairwise-distinct points sharing one
    field context.  Total projective degree is exactly 2m."""
    points = tuple(points)
    if not points:
        raise DomainError("need at least one point")
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if points[i] == points[j]:
                raise DomainError(
                    f"duplicate points at indices {i} and {j}: the factored polynomials "
                    "would acquire multiple roots"
                )
    k = _context_k(points)
    m = len(points)

    product = expand_product(points).extend_to(AFFINE_VARS)
    z2 = MPoly(AFFINE_VARS, {(0, 0, 2): Fraction(1)})
    f_affine = z2 - product
    f_proj = f_affine.homogenize("w", 2 * m)

    roots = tuple(GaussQuad(p.x, p.y) for p in points)
    x = MPoly.variable(("x",), "x")
    p_poly = MPoly.constant(("x",), Fraction(1))
    for z in roots:
        p_poly = p_poly * (x - MPoly.constant(("x",), z))
    y = MPoly.variable(("y",), "y")
    q_poly = MPoly.constant(("y",), Fraction(1))
    for z in roots:
        q_poly = q_poly * (y - MPoly.constant(("y",), z.conjugate()))

    return DistanceSurface(points, k, f_affine, f_proj, p_poly, q_poly, roots)


def factored_form(s: DistanceSurface) -> tuple[MPoly, MPoly]:
    return s.p_poly, s.q_poly


def factored_affine(s: DistanceSurface) -> MPoly:
    """The factored model z^2 - P(x) Q(y) over Q(sqrt(k))(i) in (x, y, z)."""
    p3 = s.p_poly.extend_to(AFFINE_VARS)
    q3 = s.q_poly.extend_to(AFFINE_VARS)
    z2 = MPoly(AFFINE_VARS, {(0, 0, 2): Fraction(1)})
    return z2 - p3 * q3


def factored_identity_check(s: DistanceSurface) -> bool:
    """Substituting x -> x + iy, y -> x - iy into P(x) Q(y) must reproduce
    the expanded distance product exactly."""
    vars_xy = ("x", "y")
    pq = s.p_poly.extend_to(vars_xy) * s.q_poly.extend_to(vars_xy)
    i_unit = GaussQuad(0, 1)
    x_img = MPoly(vars_xy, {(1, 0): Fraction(1), (0, 1): i_unit})
    y_img = MPoly(vars_xy, {(1, 0): Fraction(1), (0, 1): -i_unit})
    substituted = pq.substitute({"x": x_img, "y": y_img})
    return substituted == expand_product(s.points)


def rational_point_lift(s: DistanceSurface, p: PlanePoint) -> tuple[QuadExt, QuadExt, Fraction]:
    """Lift a point at rational distance from all construction points to an
    exact zero (x0, y0, prod of distances) of the affine surface."""
    z0 = Fraction(1)
    for a in s.points:
        z0 *= rational_distance(p, a)
    value = s.f_affine.evaluate({"x": p.x, "y": p.y, "z": QuadExt(z0)})
    if value:
        raise IntegrityError(f"lift of {p} does not vanish: {value}")
    return (p.x, p.y, z0)


# -- affine singular locus ------------------------------------------------------


def singular_affine_points(s: DistanceSurface) -> list[SingularPointRecord]:
    """The m^2 points (z_i, conj z_j, 0) of the factored model, each checked
    by exact vanishing of the model and all three partial derivatives."""
    if not squarefree_check(s.p_poly):
        raise IntegrityError("P(x) has multiple roots; input points were not distinct")
    if not squarefree_check(s.q_poly):
        raise IntegrityError("Q(y) has multiple roots; input points were not distinct")
    g = factored_affine(s)
    gx = g.partial_derivative("x")
    gy = g.partial_derivative("y")
    gz = g.partial_derivative("z")
    zero = GaussQuad(0)
    records = []
    for zi in s.roots:
        for zj_bar in s.conj_roots:
            assignment = {"x": zi, "y": zj_bar, "z": zero}
            values = {
                "f": g.evaluate(assignment),
                "df_dx": gx.evaluate(assignment),
                "df_dy": gy.evaluate(assignment),
                "df_dz": gz.evaluate(assignment),
            }
            for name, v in values.items():
                if v:
                    raise IntegrityError(
                        f"{name} does not vanish at ({zi}, {zj_bar}, 0): {v}"
                    )
            records.append(
                SingularPointRecord(
                    location=(zi, zj_bar, zero), local_type="node", witness=values
                )
            )
    return records


def _rank3(matrix: list[list[GaussQuad]]) -> int:
    rows = [[GaussQuad.lift(e) for e in row] for row in matrix]
    rank = 0
    for col in range(3):
        pivot = None
        for r in range(rank, 3):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for r in range(rank + 1, 3):
            if rows[r][col]:
                f = rows[r][col] / lead
                rows[r] = [rows[r][c] - f * rows[rank][c] for c in range(3)]
        rank += 1
    return rank


def classify_node(s: DistanceSurface, record: SingularPointRecord) -> str:
    """Translate the singular point to the origin and test that the degree-2
    part of the factored model is a rank-3 quadratic form (an ordinary node,
    locally z^2 = xy)."""
    if not record.is_affine:
        raise DomainError("classify_node expects an affine singular record")
    x0, y0, z0 = record.location
    if z0 or x0 not in s.roots or y0 not in s.conj_roots:
        raise DomainError(f"{record.location} is not an affine singular point of this surface")
    g = factored_affine(s)
    shift = g.substitute(
        {
            "x": MPoly(AFFINE_VARS, {(1, 0, 0): Fraction(1), (0, 0, 0): x0}),
            "y": MPoly(AFFINE_VARS, {(0, 1, 0): Fraction(1), (0, 0, 0): y0}),
        }
    )
    half = Fraction(1, 2)
    quad = {
        exps: c for exps, c in shift.terms.items() if sum(exps) == 2
    }

    def coeff(ex, ey, ez):
        return GaussQuad.lift(quad.get((ex, ey, ez), Fraction(0)))

    matrix = [
        [coeff(2, 0, 0), coeff(1, 1, 0) * half, coeff(1, 0, 1) * half],
        [coeff(1, 1, 0) * half, coeff(0, 2, 0), coeff(0, 1, 1) * half],
        [coeff(1, 0, 1) * half, coeff(0, 1, 1) * half, coeff(0, 0, 2)],
    ]
    rank = _rank3(matrix)
    if rank != 3:
        raise IntegrityError(
            f"quadratic part at {record.location} has rank {rank}, not an ordinary node"
        )
    return "A1 node"


# -- the point at infinity ----------------------------------------------------------


def factored_projective(s: DistanceSurface) -> MPoly:
    """Degree-2m homogenization z^2 w^(2m-2) - Ph(x, w) Qh(y, w) of the
    factored model."""
    m = s.m
    one = Fraction(1)
    x = MPoly.variable(PROJ_VARS, "x")
    y = MPoly.variable(PROJ_VARS, "y")
    w = MPoly.variable(PROJ_VARS, "w")
    ph = MPoly.constant(PROJ_VARS, one)
    qh = MPoly.constant(PROJ_VARS, one)
    for z in s.roots:
        ph = ph * (x - w.scale(z))
        qh = qh * (y - w.scale(z.conjugate()))
    z2w = MPoly(PROJ_VARS, {(0, 0, 2, 2 * m - 2): one})
    return z2w - ph * qh


def infinity_singularity(s: DistanceSurface) -> SingularPointRecord:
    """Singular point at infinity of the factored model.

    Worked in the chart z = 1, where the point [0:0:1:0] becomes the origin
    and the equation reads w^(2m-2) = Ph(x, w) Qh(y, w); the dominant
    monomials w^(2m-2) and x^m y^m give the local model exponents
    (2m-2, m, m).  Not applicable for m = 1 (the chart origin is smooth).
    """
    m = s.m
    if m < 2:
        return SingularPointRecord(
            location="infinity",
            local_type="not-applicable",
            witness={"chart": "z=1", "reason": "m = 1 gives a smooth chart origin"},
        )
    g = factored_projective(s).set_variable("z", Fraction(1))
    min_degree = min(sum(e) for e in g.terms)
    if min_degree < 2:
        raise IntegrityError("chart origin is not singular; construction is inconsistent")
    w_exp = 2 * m - 2
    c_w = g.coefficient((0, 0, 0, w_exp))
    c_xy = g.coefficient((m, m, 0, 0))
    if c_w != Fraction(1) or GaussQuad.lift(c_xy) != GaussQuad(-1):
        raise IntegrityError("dominant monomials of the infinity chart are off")
    return SingularPointRecord(
        location="infinity",
        local_type="infinity-model",
        witness={
            "chart": "z=1",
            "projective_point": (0, 0, 1, 0),
            "exponents": (2 * m - 2, m, m),
        },
    )


# -- divisor bookkeeping --------------------------------------------------------------


@dataclass(frozen=True)
class DivisorReport:
    accepted: bool
    reason: Optional[str]
    m: int
    g: Optional[int] = None
    deg_p: Optional[int] = None
    deg_q: Optional[int] = None
    branch_bidegree: Optional[tuple[int, int]] = None
    ramification_bidegree: Optional[tuple[int, int]] = None
    canonical_class: Optional[tuple[int, int]] = None
    ample: Optional[bool] = None


def ramification_bookkeeping(s: DistanceSurface) -> DivisorReport:
    """Exact integer bookkeeping for the double cover of P^1 x P^1.

    The branch divisor is {P(x) Q(y) = 0}, i.e. 2g+2 fibers of each ruling;
    twice the ramification divisor is (P) + (Q); the canonical pullback
    class is (-2, -2) + (g+1, g+1) = (g-1, g-1), ample exactly when its
    bidegree is positive (g >= 2).
    """
    m = s.m
    if m % 2:
        return DivisorReport(False, "m odd", m)
    g = (m - 2) // 2
    if g < 2:
        return DivisorReport(False, "g < 2", m, g=g)
    bidegree = (m, m)
    ram = (g + 1, g + 1)
    canonical = (g - 1, g - 1)
    return DivisorReport(
        True,
        None,
        m,
        g=g,
        deg_p=s.p_poly.degree(),
        deg_q=s.q_poly.degree(),
        branch_bidegree=bidegree,
        ramification_bidegree=ram,
        canonical_class=canonical,
        ample=canonical[0] >= 1 and canonical[1] >= 1,
    )


# -- canonical forms and the blow-up check ----------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    k: int
    l: int
    form: TwoForm


def canonical_form(k: int, l: int) -> TwoForm:
    """The 2-form y^k x^l (dy^dx)/z on the factored model; negative k or l
    are allowed so tests can plant irregular forms."""
    coeff = LaurentPoly.monomial(AFFINE_VARS, (l, k, -1))
    return TwoForm.dy_dx(coeff)


def canonical_forms(g: int) -> list[CanonicalForm]:
    """The g^2 forms y^k x^l (dy^dx)/z for 0 <= k, l <= g-1."""
    if g < 1:
        raise DomainError("genus parameter must be at least 1")
    return [
        CanonicalForm(k, l, canonical_form(k, l))
        for k in range(g)
        for l in range(g)
    ]


@dataclass(frozen=True)
class PullbackReport:
    ok: bool
    identity_ok: bool
    forms: tuple[tuple[int, int, bool], ...]   # (k, l, regular)


def _expected_omega_prime() -> TwoForm:
    # z' dy'^dx' + x' dy'^dz' + y' dz'^dx'
    out = ("x'", "y'", "z'")
    return TwoForm(
        LaurentPoly.monomial(out, (0, 0, 1)),
        LaurentPoly.monomial(out, (1, 0, 0)),
        LaurentPoly.monomial(out, (0, 1, 0)),
    )


def blowup_pullback_check(g: int) -> PullbackReport:
    """Pull every canonical form through the blow-up substitution
    x = x'z', y = y'z', z = z' and scan for negative exponents; also
    re-derives the three-term expansion of the pullback of (dy^dx)/z."""
    identity_ok = pullback_2form(canonical_form(0, 0)) == _expected_omega_prime()
    results = []
    for cf in canonical_forms(g):
        results.append((cf.k, cf.l, pullback_2form(cf.form).is_regular()))
    ok = identity_ok and all(r[2] for r in results)
    return PullbackReport(ok, identity_ok, tuple(results))


# -- the certificate -----------------------------------------------------------------------


@dataclass(frozen=True)
class GeneralTypeCertificate:
    m: int
    g: int
    non_collinear: bool
    squarefree_p: bool
    squarefree_q: bool
    node_count: int
    canonical_form_count: int
    branch_bidegree: tuple[int, int]
    canonical_pullback_class: tuple[int, int]
    pullback_regular: bool

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "g": self.g,
            "non_collinear": self.non_collinear,
            "squarefree_P": self.squarefree_p,
            "squarefree_Q": self.squarefree_q,
            "node_count": self.node_count,
            "canonical_form_count": self.canonical_form_count,
            "branch_bidegree": list(self.branch_bidegree),
            "canonical_pullback_class": list(self.canonical_pullback_class),
            "pullback_regular": self.pullback_regular,
        }


@dataclass(frozen=True)
class CertificateReport:
    accepted: bool
    reason: Optional[str] = None
    certificate: Optional[GeneralTypeCertificate] = None


def _all_collinear(points: Sequence[PlanePoint]) -> bool:
    from .rds import collinear

    if len(points) < 3:
        return True
    p0, p1 = points[0], points[1]
    return all(collinear(p0, p1, p) for p in points[2:])


def general_type_certificate(points: Sequence[PlanePoint]) -> CertificateReport:
    """Run the full pipeline and certify general type, or reject with the
    first failed hypothesis.

    Checked facts: m = 2g+2 even with g >= 2; points not all on a line;
    P, Q squarefree; exactly m^2 verified nodes of rank 3; infinity model
    exponents (2m-2, m, m); branch bidegree (2g+2, 2g+2) with canonical
    pullback class (g-1, g-1); g^2 canonical forms, all pulling back to
    regular forms on the blow-up.
    """
    points = tuple(points)
    if not points:
        return CertificateReport(False, "empty point set")
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if points[i] == points[j]:
                return CertificateReport(False, "duplicate points")
    m = len(points)
    if m % 2:
        return CertificateReport(False, "m odd")
    g = (m - 2) // 2
    if g < 2:
        return CertificateReport(False, "g < 2")
    if _all_collinear(points):
        return CertificateReport(False, "collinear")

    s = build_surface(points)
    sq_p = squarefree_check(s.p_poly)
    sq_q = squarefree_check(s.q_poly)
    if not sq_p:
        return CertificateReport(False, "P not squarefree")
    if not sq_q:
        return CertificateReport(False, "Q not squarefree")

    try:
        records = singular_affine_points(s)
    except IntegrityError as exc:
        return CertificateReport(False, f"singular locus check failed: {exc}")
    if len(records) != m * m:
        return CertificateReport(False, "node count mismatch")
    try:
        for record in records:
            classify_node(s, record)
    except IntegrityError:
        return CertificateReport(False, "node rank deficient")

    inf = infinity_singularity(s)
    if inf.local_type != "infinity-model" or inf.witness["exponents"] != (2 * m - 2, m, m):
        return CertificateReport(False, "infinity model mismatch")

    book = ramification_bookkeeping(s)
    if not book.accepted:
        return CertificateReport(False, book.reason)

    forms = canonical_forms(g)
    if len(forms) != g * g:
        return CertificateReport(False, "canonical form count mismatch")
    pull = blowup_pullback_check(g)
    if not pull.ok:
        return CertificateReport(False, "irregular pullback")

    cert = GeneralTypeCertificate(
        m=m,
        g=g,
        non_collinear=True,
        squarefree_p=sq_p,
        squarefree_q=sq_q,
        node_count=len(records),
        canonical_form_count=len(forms),
        branch_bidegree=book.branch_bidegree,
        canonical_pullback_class=book.canonical_class,
        pullback_regular=pull.ok,
    )
    return CertificateReport(True, None, cert)


# -- n-dimensional construction ---------------------------------------------------------------


def hypersurface_nd(points: Sequence[Sequence[Union[int, Fraction]]]) -> MPoly:
    """Homogeneous degree-2m model of x_{n+1}^2 = prod_i sum_j (x_j - a_ij)^2
    for rational points in n-space (construction only, no classification).

    Variables are x1, ..., xn, x{n+1} (the square), and the homogenizer w.
    """
    pts = [tuple(Fraction(c) for c in p) for p in points]
    if not pts:
        raise DomainError("need at least one point")
    n = len(pts[0])
    if n < 2:
        raise DomainError("ambient dimension must be at least 2")
    if any(len(p) != n for p in pts):
        raise DomainError("points live in different dimensions")
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pts[i] == pts[j]:
                raise DomainError(f"duplicate points at indices {i} and {j}")
    m = len(pts)
    variables = tuple(f"x{i}" for i in range(1, n + 2))
    product = MPoly.constant(variables, Fraction(1))
    for p in pts:
        square_sum = MPoly.zero(variables)
        for j, a in enumerate(p):
            d = MPoly.variable(variables, f"x{j + 1}") - MPoly.constant(variables, a)
            square_sum = square_sum + d * d
        product = product * square_sum
    z = MPoly.variable(variables, f"x{n + 1}")
    affine = z * z - product
    return affine.homogenize("w", 2 * m)
