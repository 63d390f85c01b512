"""Exact scalar arithmetic: rationals, real quadratic fields Q(sqrt(k)) and
their Gaussian extensions Q(sqrt(k))(i).

Plain rationals are `fractions.Fraction`; helpers here add exact square-root
testing, squarefree decomposition and the "p/q" string form used by every
file format in the package.  `QuadExt` and `GaussQuad` are immutable value
types; all operations are pure and never touch floating point, so everything
is safe to share across threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Optional, Union

from .errors import DomainError

RationalLike = Union[int, Fraction]


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational string "p/q" or "p".

    Decimal notation is rejected on purpose: the file formats carry exact
    values only.
    """
    if not isinstance(text, str):
        raise DomainError(f"rational must be a string like 'p/q', got {text!r}")
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise DomainError(f"decimals are forbidden, write an exact fraction: {text!r}")
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"malformed rational {text!r}") from exc


def format_rational(q: RationalLike) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_square_root(q: RationalLike) -> Optional[Fraction]:
    """Exact square root in Q, or None when q is not a rational square.

    Total: negative input simply returns None.  Relies on the canonical
    form of Fraction (coprime, positive denominator), so numerator and
    denominator can be tested separately.
    """
    q = Fraction(q)
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn = isqrt(num)
    if rn * rn != num:
        return None
    rd = isqrt(den)
    if rd * rd != den:
        return None
    return Fraction(rn, rd)


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = s * f**2 with s squarefree and sign(s) = sign(n).

    Trial division; fine for the desk-scale integers this package meets.
    """
    if n == 0:
        raise DomainError("0 has no squarefree decomposition")
    sign = 1 if n > 0 else -1
    m = abs(n)
    s, f = 1, 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e % 2:
                s *= p
            f *= p ** (e // 2)
        p += 1 if p == 2 else 2
    s *= m
    return sign * s, f


_SQUAREFREE_CACHE: dict[int, bool] = {}


def _is_squarefree_positive(k: int) -> bool:
    if k < 1:
        return False
    cached = _SQUAREFREE_CACHE.get(k)
    if cached is None:
        cached = squarefree_decompose(k)[1] == 1
        _SQUAREFREE_CACHE[k] = cached
    return cached


def _common_k(j: int, k: int) -> int:
    """Unify two field contexts.  Rational values (k = 1) embed anywhere;
    two genuinely different radicals never mix."""
    if j == k:
        return j
    if j == 1:
        return k
    if k == 1:
        return j
    raise DomainError(f"cannot mix values from Q(sqrt({j})) and Q(sqrt({k}))")


class QuadExt:
    """Element a + b*sqrt(k) of Q(sqrt(k)), k a squarefree positive integer.

    Canonical form: a value with b = 0 is a plain rational and is stored
    with k = 1, so rationals compare equal across contexts and k = 1 never
    carries a phantom radical part.
    """

    __slots__ = ("a", "b", "k")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0, k: int = 1):
        a = Fraction(a)
        b = Fraction(b)
        k = int(k)
        if not _is_squarefree_positive(k):
            raise DomainError(f"k must be a squarefree positive integer, got {k}")
        if k == 1 and b:
            a, b = a + b, Fraction(0)
        if not b:
            k = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "k", k)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt values are immutable")

    # -- basic predicates -------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def as_rational(self) -> Fraction:
        if self.b:
            raise DomainError(f"{self} is not rational")
        return self.a

    # -- coercion ---------------------------------------------------------

    @classmethod
    def lift(cls, value: "QuadExtLike") -> "QuadExt":
        if isinstance(value, QuadExt):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise DomainError(f"cannot interpret {value!r} as a Q(sqrt(k)) element")

    def _pair(self, other) -> Optional[tuple["QuadExt", "QuadExt", int]]:
        if isinstance(other, (int, Fraction)):
            other = QuadExt(other)
        if not isinstance(other, QuadExt):
            return None
        k = _common_k(self.k, other.k)
        return self, other, k

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y, k = pair
        return QuadExt(x.a + y.a, x.b + y.b, k)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.k)

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y, k = pair
        return QuadExt(x.a - y.a, x.b - y.b, k)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y, k = pair
        return QuadExt(x.a * y.a + k * x.b * y.b, x.a * y.b + x.b * y.a, k)

    __rmul__ = __mul__

    def inverse(self) -> "QuadExt":
        n = self.field_norm()
        if not n:
            raise ZeroDivisionError("division by zero in Q(sqrt(k))")
        return QuadExt(self.a / n, -self.b / n, self.k)

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        _, y, _ = pair
        return self * y.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadExt(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- field structure --------------------------------------------------

    def conjugate(self) -> "QuadExt":
        """Galois conjugate a - b*sqrt(k)."""
        return QuadExt(self.a, -self.b, self.k)

    def field_norm(self) -> Fraction:
        """Norm to Q: a**2 - k*b**2.  Zero only for the zero element
        (k squarefree rules out a**2 = k*b**2 otherwise)."""
        return self.a * self.a - self.k * self.b * self.b

    # -- equality / ordering keys ------------------------------------------

    def __eq__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y, _ = pair
        return x.a == y.a and x.b == y.b

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.k))

    def sort_key(self) -> tuple[Fraction, Fraction, int]:
        """Arbitrary but total ordering key, used for canonical output."""
        return (self.a, self.b, self.k)

    # -- text / json --------------------------------------------------------

    def __str__(self):
        if not self.b:
            return format_rational(self.a)
        b_txt = f"{format_rational(self.b)}*sqrt({self.k})"
        if not self.a:
            return b_txt
        sign = "+" if self.b > 0 else "-"
        mag = f"{format_rational(abs(self.b))}*sqrt({self.k})"
        return f"{format_rational(self.a)} {sign} {mag}"

    def __repr__(self):
        return f"QuadExt({self.a!r}, {self.b!r}, {self.k})"

    def to_json(self) -> dict:
        return {"a": format_rational(self.a), "b": format_rational(self.b), "k": self.k}

    @classmethod
    def from_json(cls, doc: dict) -> "QuadExt":
        if not isinstance(doc, dict) or "a" not in doc or "b" not in doc:
            raise DomainError(f"malformed Q(sqrt(k)) element: {doc!r}")
        k = doc.get("k", 1)
        if not isinstance(k, int):
            raise DomainError(f"field index k must be an integer, got {k!r}")
        return cls(parse_rational(doc["a"]), parse_rational(doc["b"]), k)


QuadExtLike = Union[int, Fraction, QuadExt]


class GaussQuad:
    """Element re + i*im of Q(sqrt(k))(i), with re and im in a common
    Q(sqrt(k)).

    The ambient field is real quadratic, so re**2 + im**2 = 0 forces
    re = im = 0; conjugate/norm division is always safe away from zero.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: QuadExtLike = 0, im: QuadExtLike = 0):
        re = QuadExt.lift(re)
        im = QuadExt.lift(im)
        _common_k(re.k, im.k)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("GaussQuad values are immutable")

    @property
    def k(self) -> int:
        return self.re.k if self.re.k != 1 else self.im.k

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    @classmethod
    def lift(cls, value: "GaussLike") -> "GaussQuad":
        if isinstance(value, GaussQuad):
            return value
        return cls(QuadExt.lift(value))

    def _pair(self, other) -> Optional["GaussQuad"]:
        if isinstance(other, (int, Fraction, QuadExt)):
            return GaussQuad(other)
        if isinstance(other, GaussQuad):
            return other
        return None

    def __add__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return GaussQuad(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussQuad(-self.re, -self.im)

    def __sub__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return GaussQuad(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return GaussQuad(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussQuad":
        return GaussQuad(self.re, -self.im)

    def norm(self) -> QuadExt:
        """re**2 + im**2, an element of Q(sqrt(k))."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussQuad":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero in Q(sqrt(k))(i)")
        c = self.conjugate()
        return GaussQuad(c.re / n, c.im / n)

    def __truediv__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = GaussQuad(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"({self.im})*i"
        return f"({self.re}) + ({self.im})*i"

    def __repr__(self):
        return f"GaussQuad({self.re!r}, {self.im!r})"


GaussLike = Union[int, Fraction, QuadExt, GaussQuad]


def gauss_conjugate(e: GaussQuad) -> GaussQuad:
    """Complex conjugation on Q(sqrt(k))(i): (re, im) -> (re, -im)."""
    return e.conjugate()


I_UNIT = GaussQuad(0, 1)


def render_scalar(c) -> str:
    """Canonical text for any coefficient the polynomial layer carries."""
    if isinstance(c, (int, Fraction)):
        return format_rational(c)
    if isinstance(c, QuadExt):
        return str(c)
    if isinstance(c, GaussQuad):
        return str(c)
    raise DomainError(f"unknown scalar type {type(c).__name__}")
