"""Shared test utilities: independent oracles and hypothesis strategies.

Everything here is deliberately written against the most naive formulation
available (dense lists, textbook recurrences, direct enumeration) so the
library code under test never certifies itself.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from hypothesis import strategies as st

from distsurf import GaussQuad, QuadExt


# -- dense univariate algebra over any field scalar ---------------------------------


def dense_trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def dense_add(u, v):
    out = list(u) + [Fraction(0)] * max(0, len(v) - len(u))
    for i, c in enumerate(v):
        out[i] = out[i] + c
    return dense_trim(out)


def dense_scale(u, c):
    return dense_trim([a * c for a in u])


def dense_mul(u, v):
    if not u or not v:
        return []
    out = [Fraction(0)] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            out[i + j] = out[i + j] + a * b
    return dense_trim(out)


def dense_divmod(u, v):
    """Quotient and remainder over a field."""
    u = dense_trim(list(u))
    v = dense_trim(list(v))
    if not v:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(0, len(u) - len(v) + 1)
    lead = v[-1]
    while len(u) >= len(v):
        shift = len(u) - len(v)
        factor = u[-1] / lead
        q[shift] = factor
        for i in range(len(v)):
            u[shift + i] = u[shift + i] - factor * v[i]
        u = dense_trim(u)
        if not u:
            break
    return dense_trim(q), u


def dense_ext_gcd(u, v):
    """(g, s, t) with s*u + t*v = g; verified by the caller via dense_mul."""
    r0, r1 = dense_trim(list(u)), dense_trim(list(v))
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = dense_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, dense_add(s0, dense_scale(dense_mul(q, s1), Fraction(-1)))
        t0, t1 = t1, dense_add(t0, dense_scale(dense_mul(q, t1), Fraction(-1)))
    return r0, s0, t0


def mpoly_univariate_coeffs(p, var):
    """Dense coefficient list of a univariate MPoly, lowest degree first."""
    idx = p.variables.index(var)
    deg = max((e[idx] for e in p.terms), default=0)
    out = [Fraction(0)] * (deg + 1)
    for exps, c in p.terms.items():
        out[exps[idx]] = c
    return dense_trim(out)


def elimination_singular_points(surface):
    """Independent elimination over the factored model z^2 = P(x) Q(y).

    The partial in z forces z = 0; there the system reads P*Q = P'*Q =
    P*Q' = 0.  A Bezout identity s*P + t*P' = 1 (verified here by dense
    multiplication) rules out any common root of P and P', so a solution
    with Q != 0 would give 1 = 0; symmetrically for Q.  Hence the solution
    set is exactly roots(P) x roots(Q) x {0}.  The root lists are checked
    against the polynomials by exact reconstruction, and returned as the
    full solution set.
    """
    from itertools import zip_longest

    from distsurf import GaussQuad

    for poly, var, roots in (
        (surface.p_poly, "x", surface.roots),
        (surface.q_poly, "y", surface.conj_roots),
    ):
        coeffs = mpoly_univariate_coeffs(poly, var)
        deriv = dense_trim([coeffs[i] * i for i in range(1, len(coeffs))])
        if deriv:
            g, bez_s, bez_t = dense_ext_gcd(coeffs, deriv)
            assert len(g) == 1, "P and P' share a root; elimination breaks down"
            lead = g[0]
            bez_s = [c / lead for c in bez_s]
            bez_t = [c / lead for c in bez_t]
            identity = dense_trim(
                [
                    a + b
                    for a, b in zip_longest(
                        dense_mul(bez_s, coeffs),
                        dense_mul(bez_t, deriv),
                        fillvalue=Fraction(0),
                    )
                ]
            )
            assert identity == [Fraction(1)], "Bezout certificate failed"
        assert len(set(roots)) == len(roots), "claimed roots are not distinct"
        product = [Fraction(1)]
        for r in roots:
            product = dense_mul(product, [-r, Fraction(1)])
        assert dense_trim(product) == coeffs, "claimed roots do not rebuild the polynomial"

    zero = GaussQuad(0)
    return {(zi, zj, zero) for zi in surface.roots for zj in surface.conj_roots}


# -- naive second opinions --------------------------------------------------------


def naive_is_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def naive_huff_scan(a: Fraction, b: Fraction, height: int):
    """Unreduced double loop over p/q; dedupes by value afterwards."""
    xs = set()
    for q in range(1, height + 1):
        for p in range(-height, height + 1):
            if p == 0:
                continue
            x = Fraction(p, q)
            if abs(x.numerator) > height or x.denominator > height:
                continue
            if naive_is_square(x * x + a * a) and naive_is_square(x * x + b * b):
                xs.add(x)
    return sorted(xs)


def det4_fraction(rows):
    """Textbook Laplace expansion for a 4x4 matrix of exact scalars."""

    def det3(m):
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    total = rows[0][0] * 0
    sign = 1
    for j in range(4):
        minor = [[rows[r][c] for c in range(4) if c != j] for r in range(1, 4)]
        term = rows[0][j] * det3(minor)
        total = total + (term if sign > 0 else -term)
        sign = -sign
    return total


# -- hypothesis strategies ---------------------------------------------------------


def fractions_st(max_num=30, max_den=12):
    return st.builds(
        Fraction,
        st.integers(min_value=-max_num, max_value=max_num),
        st.integers(min_value=1, max_value=max_den),
    )


def nonzero_fractions_st(max_num=30, max_den=12):
    return fractions_st(max_num, max_den).filter(bool)


SQUAREFREE_KS = (1, 2, 3, 5, 6, 7, 10, 11)


def quadext_st(k, max_num=12, max_den=6):
    return st.builds(
        QuadExt,
        fractions_st(max_num, max_den),
        fractions_st(max_num, max_den),
        st.just(k),
    )


def gaussquad_st(k, max_num=8, max_den=4):
    return st.builds(
        GaussQuad,
        quadext_st(k, max_num, max_den),
        quadext_st(k, max_num, max_den),
    )


@st.composite
def quadext_tuple_st(draw, size, max_num=12, max_den=6):
    """A tuple of QuadExt values sharing one radical context."""
    k = draw(st.sampled_from(SQUAREFREE_KS))
    return tuple(draw(quadext_st(k, max_num, max_den)) for _ in range(size))


@st.composite
def gaussquad_tuple_st(draw, size, max_num=8, max_den=4):
    k = draw(st.sampled_from(SQUAREFREE_KS))
    return tuple(draw(gaussquad_st(k, max_num, max_den)) for _ in range(size))
