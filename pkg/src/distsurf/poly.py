"""Exact multivariate polynomials over the package's scalar types, plus the
Laurent polynomials and 2-forms used by the blow-up pullback check.

Coefficients may be Fraction, QuadExt or GaussQuad; the engine only needs
ring operations and truthiness ("nonzero"), so the same code runs over Q,
Q(sqrt(k)) and Q(sqrt(k))(i).  Monomial order everywhere is graded
lexicographic with x < y < z (< w): higher total degree first, ties broken
by the exponents of later (larger) variables.
"""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence, Union

from .errors import DomainError
from .scalars import GaussQuad, QuadExt, render_scalar

SCALAR_TYPES = (int, Fraction, QuadExt, GaussQuad)

if TYPE_CHECKING:  # avoids a runtime cycle with rds
    from .rds import PlanePoint

Scalar = object  # Fraction | QuadExt | GaussQuad; duck-typed ring element


def _monomial_sort_key(exps: tuple[int, ...]):
    # graded lex, later variables weigh more; used descending
    return (sum(exps), tuple(reversed(exps)))


class MPoly:
    """Sparse multivariate polynomial with a fixed, explicit variable tuple.

    terms maps exponent tuples to nonzero coefficients; exponents are
    nonnegative (see LaurentPoly for the signed-exponent variant).
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Scalar] | None = None):
        variables = tuple(variables)
        clean: dict[tuple[int, ...], Scalar] = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != len(variables):
                    raise DomainError(f"exponent tuple {exps} does not match variables {variables}")
                if any(e < 0 for e in exps):
                    raise DomainError(f"negative exponent in {exps}; use LaurentPoly")
                if coeff:
                    clean[exps] = coeff
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MPoly values are immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MPoly":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], c: Scalar) -> "MPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str, one: Scalar = Fraction(1)) -> "MPoly":
        variables = tuple(variables)
        if name not in variables:
            raise DomainError(f"unknown variable {name!r} (have {variables})")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: one})

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self._index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def _index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise DomainError(f"unknown variable {name!r} (have {self.variables})") from None

    def coefficient(self, exps: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(exps), Fraction(0))

    def used_variables(self) -> set[str]:
        used = set()
        for exps in self.terms:
            for v, e in zip(self.variables, exps):
                if e:
                    used.add(v)
        return used

    def is_univariate(self) -> bool:
        return len(self.used_variables()) <= 1

    def _check_same_vars(self, other: "MPoly"):
        if self.variables != other.variables:
            raise DomainError(
                f"variable sets differ: {self.variables} vs {other.variables}"
            )

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check_same_vars(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            acc = terms.get(exps)
            s = c if acc is None else acc + c
            if s:
                terms[exps] = s
            elif acc is not None:
                del terms[exps]
        return MPoly(self.variables, terms)

    def __neg__(self):
        return MPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MPoly):
            self._check_same_vars(other)
            terms: dict[tuple[int, ...], Scalar] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    exps = tuple(a + b for a, b in zip(e1, e2))
                    prod = c1 * c2
                    acc = terms.get(exps)
                    s = prod if acc is None else acc + prod
                    if s:
                        terms[exps] = s
                    elif acc is not None:
                        del terms[exps]
            return MPoly(self.variables, terms)
        if isinstance(other, SCALAR_TYPES):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, SCALAR_TYPES):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: Scalar) -> "MPoly":
        if not c:
            return MPoly.zero(self.variables)
        return MPoly(self.variables, {e: coeff * c for e, coeff in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MPoly.constant(self.variables, Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- calculus / substitution ---------------------------------------------

    def partial_derivative(self, name: str) -> "MPoly":
        i = self._index(name)
        terms: dict[tuple[int, ...], Scalar] = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            new = list(exps)
            new[i] = e - 1
            coeff = c * e
            if coeff:
                terms[tuple(new)] = coeff
        return MPoly(self.variables, terms)

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Scalar:
        """Full evaluation; every variable must be assigned."""
        for v in self.variables:
            if v not in assignment:
                raise DomainError(f"no value for variable {v!r}")
        powers: list[dict[int, Scalar]] = [dict() for _ in self.variables]
        values = [assignment[v] for v in self.variables]

        def power(i: int, e: int) -> Scalar:
            cache = powers[i]
            got = cache.get(e)
            if got is None:
                got = values[i] ** e
                cache[e] = got
            return got

        total: Scalar = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            total = term + total
        return total

    def substitute(self, images: Mapping[str, "MPoly | Scalar"]) -> "MPoly":
        """Polynomial composition.  Unmapped variables map to themselves;
        all polynomial images must share one output variable tuple."""
        out_vars = None
        for img in images.values():
            if isinstance(img, MPoly):
                if out_vars is None:
                    out_vars = img.variables
                elif img.variables != out_vars:
                    raise DomainError("substitution images disagree on variables")
        if out_vars is None:
            out_vars = self.variables
        full: dict[str, MPoly] = {}
        for v in self.variables:
            img = images.get(v)
            if img is None:
                full[v] = MPoly.variable(out_vars, v)
            elif isinstance(img, MPoly):
                full[v] = img
            else:
                full[v] = MPoly.constant(out_vars, img)

        cache: dict[tuple[str, int], MPoly] = {}

        def image_power(v: str, e: int) -> MPoly:
            got = cache.get((v, e))
            if got is None:
                got = full[v] ** e
                cache[(v, e)] = got
            return got

        total = MPoly.zero(out_vars)
        for exps, c in self.terms.items():
            term = MPoly.constant(out_vars, c)
            for v, e in zip(self.variables, exps):
                if e:
                    term = term * image_power(v, e)
            total = total + term
        return total

    def set_variable(self, name: str, value: Scalar) -> "MPoly":
        """Partial evaluation; the variable stays in the tuple at exponent 0."""
        i = self._index(name)
        terms: dict[tuple[int, ...], Scalar] = {}
        for exps, c in self.terms.items():
            e = exps[i]
            coeff = c * (value ** e) if e else c
            new = list(exps)
            new[i] = 0
            key = tuple(new)
            acc = terms.get(key)
            s = coeff if acc is None else acc + coeff
            if s:
                terms[key] = s
            elif acc is not None:
                del terms[key]
        return MPoly(self.variables, terms)

    def homogenize(self, new_var: str, target_degree: int | None = None) -> "MPoly":
        if new_var in self.variables:
            raise DomainError(f"variable {new_var!r} already present")
        deg = self.degree()
        if target_degree is None:
            target_degree = deg
        if deg > target_degree:
            raise DomainError(f"cannot homogenize degree {deg} to {target_degree}")
        variables = self.variables + (new_var,)
        terms = {}
        for exps, c in self.terms.items():
            terms[exps + (target_degree - sum(exps),)] = c
        return MPoly(variables, terms)

    def extend_to(self, variables: Sequence[str]) -> "MPoly":
        """Embed into a larger variable tuple (the old one must be a subset)."""
        variables = tuple(variables)
        positions = [variables.index(v) for v in self.variables]
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * len(variables)
            for pos, e in zip(positions, exps):
                new[pos] = e
            terms[tuple(new)] = c
        return MPoly(variables, terms)

    # -- rendering ------------------------------------------------------------

    def render(self) -> str:
        """Canonical text form (sorted monomials, exact coefficients)."""
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=_monomial_sort_key, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v
                for v, e in zip(self.variables, exps)
                if e
            )
            txt = render_scalar(c)
            plain_rational = isinstance(c, (int, Fraction)) or (
                hasattr(c, "is_rational") and getattr(c, "b", None) is not None and c.is_rational()
            ) or (hasattr(c, "is_real") and c.is_real() and c.re.is_rational())
            if not plain_rational:
                txt = f"({txt})"
            if mono:
                if txt == "1":
                    parts.append(mono)
                elif txt == "-1":
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{txt}*{mono}")
            else:
                parts.append(txt)
        out = parts[0]
        for p in parts[1:]:
            if p.startswith("-"):
                out += f" - {p[1:]}"
            else:
                out += f" + {p}"
        return out

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"MPoly({self.variables}, {self.render()!r})"


def expand_product(points: "Sequence[PlanePoint]") -> MPoly:
    """Expanded prod_i ((x - a_i)**2 + (y - b_i)**2) over Q(sqrt(k)),
    as a polynomial in (x, y).  Empty input gives the constant 1."""
    vars_xy = ("x", "y")
    result = MPoly.constant(vars_xy, Fraction(1))
    x = MPoly.variable(vars_xy, "x")
    y = MPoly.variable(vars_xy, "y")
    for p in points:
        dx = x - MPoly.constant(vars_xy, p.x)
        dy = y - MPoly.constant(vars_xy, p.y)
        result = result * (dx * dx + dy * dy)
    return result


def partial_derivative(f: MPoly, name: str) -> MPoly:
    return f.partial_derivative(name)


def _univariate_coeffs(f: MPoly) -> tuple[str, list]:
    used = f.used_variables()
    if len(used) > 1:
        raise DomainError(f"polynomial is not univariate: uses {sorted(used)}")
    if not f.terms:
        raise DomainError("zero polynomial")
    name = next(iter(used)) if used else f.variables[0]
    i = f._index(name)
    deg = max(e[i] for e in f.terms)
    coeffs = [Fraction(0)] * (deg + 1)
    for exps, c in f.terms.items():
        coeffs[exps[i]] = c
    return name, coeffs


def _trim(coeffs: list) -> list:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _poly_mod(u: list, v: list) -> list:
    """Remainder of dense univariate division over a field."""
    u = list(u)
    dv = len(v) - 1
    lead = v[-1]
    while len(u) - 1 >= dv and u:
        du = len(u) - 1
        q = u[-1] / lead
        for i in range(dv + 1):
            u[du - dv + i] = u[du - dv + i] - q * v[i]
        u.pop()
        _trim(u)
    return u


def _poly_gcd(u: list, v: list) -> list:
    u, v = _trim(list(u)), _trim(list(v))
    while v:
        u, v = v, _poly_mod(u, v)
    return u


def squarefree_check(f: MPoly) -> bool:
    """True iff the univariate f has no repeated roots: gcd(f, f') is a
    nonzero constant (exact Euclid over the coefficient field)."""
    name, coeffs = _univariate_coeffs(f)
    if len(coeffs) == 1:
        return True  # nonzero constant has no roots at all
    deriv = [coeffs[i] * i for i in range(1, len(coeffs))]
    g = _poly_gcd(coeffs, _trim(deriv))
    return len(g) == 1


class LaurentPoly:
    """Sparse polynomial with integer (possibly negative) exponents."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Scalar] | None = None):
        variables = tuple(variables)
        clean: dict[tuple[int, ...], Scalar] = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != len(variables):
                    raise DomainError(f"exponent tuple {exps} does not match variables {variables}")
                if coeff:
                    clean[exps] = coeff
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly values are immutable")

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "LaurentPoly":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], c: Scalar) -> "LaurentPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Sequence[int], c: Scalar = Fraction(1)) -> "LaurentPoly":
        return cls(variables, {tuple(exps): c})

    @classmethod
    def from_mpoly(cls, f: MPoly) -> "LaurentPoly":
        return cls(f.variables, f.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check_same_vars(self, other: "LaurentPoly"):
        if self.variables != other.variables:
            raise DomainError(f"variable sets differ: {self.variables} vs {other.variables}")

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check_same_vars(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            acc = terms.get(exps)
            s = c if acc is None else acc + c
            if s:
                terms[exps] = s
            elif acc is not None:
                del terms[exps]
        return LaurentPoly(self.variables, terms)

    def __neg__(self):
        return LaurentPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            self._check_same_vars(other)
            terms: dict[tuple[int, ...], Scalar] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    exps = tuple(a + b for a, b in zip(e1, e2))
                    prod = c1 * c2
                    acc = terms.get(exps)
                    s = prod if acc is None else acc + prod
                    if s:
                        terms[exps] = s
                    elif acc is not None:
                        del terms[exps]
            return LaurentPoly(self.variables, terms)
        if isinstance(other, SCALAR_TYPES):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, SCALAR_TYPES):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: Scalar) -> "LaurentPoly":
        if not c:
            return LaurentPoly.zero(self.variables)
        return LaurentPoly(self.variables, {e: coeff * c for e, coeff in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def partial_derivative(self, name: str) -> "LaurentPoly":
        i = self.variables.index(name)
        terms: dict[tuple[int, ...], Scalar] = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            new = list(exps)
            new[i] = e - 1
            coeff = c * e
            if coeff:
                terms[tuple(new)] = coeff
        return LaurentPoly(self.variables, terms)

    def substitute_monomials(
        self, images: Mapping[str, "LaurentPoly"], out_vars: Sequence[str]
    ) -> "LaurentPoly":
        """Substitution where every image is a single Laurent term (only such
        images can be raised to negative powers)."""
        out_vars = tuple(out_vars)
        image_parts: dict[str, tuple[tuple[int, ...], Scalar]] = {}
        for v in self.variables:
            img = images.get(v)
            if img is None:
                img = LaurentPoly.monomial(out_vars, tuple(1 if o == v else 0 for o in out_vars))
            if img.variables != out_vars:
                raise DomainError("substitution image has wrong variables")
            if len(img.terms) != 1:
                raise DomainError(f"image of {v!r} is not a monomial")
            (exps, coeff), = img.terms.items()
            image_parts[v] = (exps, coeff)
        terms: dict[tuple[int, ...], Scalar] = {}
        for exps, c in self.terms.items():
            out_exps = [0] * len(out_vars)
            coeff = c
            for v, e in zip(self.variables, exps):
                if not e:
                    continue
                img_exps, img_coeff = image_parts[v]
                for i, ie in enumerate(img_exps):
                    out_exps[i] += ie * e
                if img_coeff != 1:
                    coeff = coeff * (img_coeff ** e)
            key = tuple(out_exps)
            acc = terms.get(key)
            s = coeff if acc is None else acc + coeff
            if s:
                terms[key] = s
            elif acc is not None:
                del terms[key]
        return LaurentPoly(out_vars, terms)

    def min_exponents(self) -> tuple[int, ...] | None:
        if not self.terms:
            return None
        return tuple(min(e[i] for e in self.terms) for i in range(len(self.variables)))

    def has_negative_exponent(self) -> bool:
        return any(e < 0 for exps in self.terms for e in exps)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=_monomial_sort_key, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                f"{v}^{e}" if e != 1 else v
                for v, e in zip(self.variables, exps)
                if e
            )
            txt = render_scalar(c)
            if mono:
                parts.append(mono if txt == "1" else (f"-{mono}" if txt == "-1" else f"{txt}*{mono}"))
            else:
                parts.append(txt)
        out = parts[0]
        for p in parts[1:]:
            if p.startswith("-"):
                out += f" - {p[1:]}"
            else:
                out += f" + {p}"
        return out

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"LaurentPoly({self.variables}, {self.render()!r})"


BLOWUP_OUTPUT_VARS = ("x'", "y'", "z'")


class TwoForm:
    """2-form c_xy * dy^dx + c_yz * dy^dz + c_zx * dz^dx with Laurent
    polynomial coefficients in three variables (x, y, z by default)."""

    __slots__ = ("c_xy", "c_yz", "c_zx")

    def __init__(self, c_xy: LaurentPoly, c_yz: LaurentPoly, c_zx: LaurentPoly):
        if not (c_xy.variables == c_yz.variables == c_zx.variables):
            raise DomainError("2-form coefficients disagree on variables")
        if len(c_xy.variables) != 3:
            raise DomainError("2-forms live in three variables")
        object.__setattr__(self, "c_xy", c_xy)
        object.__setattr__(self, "c_yz", c_yz)
        object.__setattr__(self, "c_zx", c_zx)

    def __setattr__(self, name, value):
        raise AttributeError("TwoForm values are immutable")

    @property
    def variables(self) -> tuple[str, str, str]:
        return self.c_xy.variables

    @classmethod
    def zero(cls, variables: Sequence[str] = ("x", "y", "z")) -> "TwoForm":
        z = LaurentPoly.zero(variables)
        return cls(z, z, z)

    @classmethod
    def dy_dx(cls, coeff: LaurentPoly) -> "TwoForm":
        z = LaurentPoly.zero(coeff.variables)
        return cls(coeff, z, z)

    def __add__(self, other):
        if not isinstance(other, TwoForm):
            return NotImplemented
        return TwoForm(self.c_xy + other.c_xy, self.c_yz + other.c_yz, self.c_zx + other.c_zx)

    def __mul__(self, f: LaurentPoly | Scalar):
        if isinstance(f, LaurentPoly):
            return TwoForm(self.c_xy * f, self.c_yz * f, self.c_zx * f)
        return TwoForm(self.c_xy.scale(f), self.c_yz.scale(f), self.c_zx.scale(f))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TwoForm):
            return NotImplemented
        return (
            self.c_xy == other.c_xy
            and self.c_yz == other.c_yz
            and self.c_zx == other.c_zx
        )

    def __hash__(self):
        return hash((self.c_xy, self.c_yz, self.c_zx))

    def is_regular(self) -> bool:
        """No negative exponent survives in any coefficient."""
        return not (
            self.c_xy.has_negative_exponent()
            or self.c_yz.has_negative_exponent()
            or self.c_zx.has_negative_exponent()
        )

    def pullback(
        self,
        images: Mapping[str, LaurentPoly] | None = None,
        out_vars: Sequence[str] | None = None,
    ) -> "TwoForm":
        """Transform under a coordinate substitution.

        Default is the blow-up chart x = x'z', y = y'z', z = z'.  Both the
        coefficients and the basis forms are transformed: each d(image) is
        expanded via the product rule, so dy^dx etc. pick up the induced
        wedge terms.  Images must be single Laurent terms.
        """
        vx, vy, vz = self.variables
        if images is None:
            out_vars = tuple(out_vars) if out_vars is not None else BLOWUP_OUTPUT_VARS
            ox, oy, oz = out_vars
            images = {
                vx: LaurentPoly.monomial(out_vars, _exps(out_vars, {ox: 1, oz: 1})),
                vy: LaurentPoly.monomial(out_vars, _exps(out_vars, {oy: 1, oz: 1})),
                vz: LaurentPoly.monomial(out_vars, _exps(out_vars, {oz: 1})),
            }
        else:
            some = next(iter(images.values()))
            out_vars = tuple(out_vars) if out_vars is not None else some.variables
        out_vars = tuple(out_vars)
        if len(out_vars) != 3:
            raise DomainError("pullback target must have three variables")

        imgs = {}
        for v in (vx, vy, vz):
            img = images.get(v)
            if img is None:
                img = LaurentPoly.monomial(out_vars, tuple(1 if o == v else 0 for o in out_vars))
            imgs[v] = img
        grads = {
            v: tuple(imgs[v].partial_derivative(o) for o in out_vars) for v in (vx, vy, vz)
        }

        def wedge(u: str, v: str) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
            # d(image u) ^ d(image v) in the output basis dy'^dx', dy'^dz', dz'^dx'
            u0, u1, u2 = grads[u]
            v0, v1, v2 = grads[v]
            a01 = u0 * v1 - u1 * v0   # on dx'^dy' = -dy'^dx'
            a12 = u1 * v2 - u2 * v1   # on dy'^dz'
            a02 = u0 * v2 - u2 * v0   # on dx'^dz' = -dz'^dx'
            return (-a01, a12, -a02)

        result = [LaurentPoly.zero(out_vars)] * 3
        for coeff, (u, v) in ((self.c_xy, (vy, vx)), (self.c_yz, (vy, vz)), (self.c_zx, (vz, vx))):
            if coeff.is_zero():
                continue
            sub = coeff.substitute_monomials(imgs, out_vars)
            parts = wedge(u, v)
            result = [acc + sub * p for acc, p in zip(result, parts)]
        return TwoForm(*result)

    def render(self) -> str:
        vx, vy, vz = self.variables
        return (
            f"({self.c_xy.render()}) d{vy}^d{vx}"
            f" + ({self.c_yz.render()}) d{vy}^d{vz}"
            f" + ({self.c_zx.render()}) d{vz}^d{vx}"
        )

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"TwoForm({self.render()})"


def _exps(variables: Sequence[str], spec: Mapping[str, int]) -> tuple[int, ...]:
    return tuple(spec.get(v, 0) for v in variables)


def pullback_2form(w: TwoForm) -> TwoForm:
    """Blow-up substitution x = x'z', y = y'z', z = z' including the induced
    transformation of the form basis; output in primed variables."""
    return w.pullback()
