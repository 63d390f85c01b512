"""Rational distance sets as first-class objects: verification, the
normalize-to-(0,0),(1,0) transform, radical detection, inversion about a
member point, general-position selection and a brute-force grid oracle.

Background facts this module mechanizes, stated operationally:

* a set normalized so two of its points sit at (0,0) and (1,0) has every
  point of the shape (r1, r2*sqrt(k)) with r1, r2 rational and one
  squarefree k shared by the whole set;
* inversion about a member point with rational radius sends the rest of a
  rational set to a rational set.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import BudgetError, DomainError, IntegrityError
from .scalars import (
    QuadExt,
    QuadExtLike,
    format_rational,
    parse_rational,
    rational_square_root,
)


@dataclass(frozen=True)
class PlanePoint:
    """Point of the plane with coordinates in a common Q(sqrt(k))."""

    x: QuadExt
    y: QuadExt

    def __post_init__(self):
        object.__setattr__(self, "x", QuadExt.lift(self.x))
        object.__setattr__(self, "y", QuadExt.lift(self.y))
        self.k  # raises on mixed radicals

    @property
    def k(self) -> int:
        from .scalars import _common_k

        return _common_k(self.x.k, self.y.k)

    def sort_key(self):
        return self.x.sort_key() + self.y.sort_key()

    def __str__(self):
        return f"({self.x}, {self.y})"


def point(x: QuadExtLike, y: QuadExtLike) -> PlanePoint:
    return PlanePoint(QuadExt.lift(x), QuadExt.lift(y))


def dist2(p: PlanePoint, q: PlanePoint) -> QuadExt:
    """Squared Euclidean distance, exact in Q(sqrt(k))."""
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


@dataclass(frozen=True)
class RationalityVerdict:
    ok: bool
    pair: Optional[tuple[int, int]] = None
    dist2: Optional[QuadExt] = None


def is_rational_set(points: Sequence[PlanePoint]) -> RationalityVerdict:
    """Check that every pairwise distance is rational.

    Returns ok=True, or the first offending index pair together with its
    squared distance.  Duplicate points are rejected outright.
    """
    points = list(points)
    if not points:
        raise DomainError("empty point set")
    seen: dict[PlanePoint, int] = {}
    for i, p in enumerate(points):
        if p in seen:
            raise DomainError(f"duplicate points at indices {seen[p]} and {i}: {p}")
        seen[p] = i
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            d2 = dist2(points[i], points[j])
            if not d2.is_rational() or rational_square_root(d2.a) is None:
                return RationalityVerdict(False, (i, j), d2)
    return RationalityVerdict(True)


def rational_distance(p: PlanePoint, q: PlanePoint) -> Fraction:
    d2 = dist2(p, q)
    if not d2.is_rational():
        raise DomainError(f"distance^2 {d2} is irrational")
    r = rational_square_root(d2.a)
    if r is None:
        raise DomainError(f"distance^2 {d2} is not a rational square")
    return r


@dataclass(frozen=True)
class RationalDistanceSet:
    """Ordered point list plus its field context k and a verified flag.

    When verified is True every pairwise distance has been checked to be a
    rational number, exactly.
    """

    points: tuple[PlanePoint, ...]
    k: int
    verified: bool = False

    @property
    def size(self) -> int:
        return len(self.points)

    def require_verified(self):
        if not self.verified:
            raise DomainError("operation requires a verified rational distance set")

    def verify(self) -> "RationalDistanceSet":
        verdict = is_rational_set(self.points)
        if not verdict.ok:
            i, j = verdict.pair
            raise DomainError(
                f"not a rational set: dist^2({self.points[i]}, {self.points[j]}) = {verdict.dist2}"
            )
        return RationalDistanceSet(self.points, self.k, True)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "points": [
                {
                    "x": {"a": format_rational(p.x.a), "b": format_rational(p.x.b)},
                    "y": {"a": format_rational(p.y.a), "b": format_rational(p.y.b)},
                }
                for p in self.points
            ],
        }


def make_set(points: Iterable[PlanePoint], k: Optional[int] = None) -> RationalDistanceSet:
    """Bundle points into an unverified set, inferring k when not given."""
    points = tuple(points)
    if not points:
        raise DomainError("empty point set")
    ks = {p.k for p in points if p.k != 1}
    if len(ks) > 1:
        raise DomainError(f"points mix several field contexts: {sorted(ks)}")
    inferred = ks.pop() if ks else 1
    if k is None:
        k = inferred
    elif inferred != 1 and k != inferred:
        raise DomainError(f"declared k={k} but coordinates use sqrt({inferred})")
    return RationalDistanceSet(points, int(k), False)


def verified_set(points: Iterable[PlanePoint], k: Optional[int] = None) -> RationalDistanceSet:
    return make_set(points, k).verify()


def set_from_json(doc: dict) -> RationalDistanceSet:
    """Exact parse of the point-set JSON document; no verification."""
    if not isinstance(doc, dict):
        raise DomainError("point-set document must be a JSON object")
    if "k" not in doc:
        raise DomainError("point-set document is missing the field 'k'")
    k = doc["k"]
    if not isinstance(k, int) or isinstance(k, bool):
        raise DomainError(f"'k' must be an integer, got {k!r}")
    raw_points = doc.get("points")
    if not isinstance(raw_points, list) or not raw_points:
        raise DomainError("point-set document needs a non-empty 'points' list")
    points = []
    for idx, item in enumerate(raw_points):
        try:
            px = item["x"]
            py = item["y"]
            x = QuadExt(parse_rational(px["a"]), parse_rational(px["b"]), k)
            y = QuadExt(parse_rational(py["a"]), parse_rational(py["b"]), k)
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed point at index {idx}: {item!r}") from exc
        points.append(PlanePoint(x, y))
    seen: dict[PlanePoint, int] = {}
    for i, p in enumerate(points):
        if p in seen:
            raise DomainError(f"duplicate points at indices {seen[p]} and {i}")
        seen[p] = i
    return make_set(points, k)


# -- predicates -------------------------------------------------------------


def collinear(p: PlanePoint, q: PlanePoint, r: PlanePoint) -> bool:
    """3x3 orientation determinant; degenerate (repeated) triples count as
    collinear so that "no 3 collinear" rejects multisets."""
    det = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    return not det


def concyclic(p: PlanePoint, q: PlanePoint, r: PlanePoint, s: PlanePoint) -> bool:
    """Lifting determinant on (x^2+y^2, x, y, 1).

    Requires four pairwise distinct points with no three collinear, so a
    vanishing determinant means a genuine common circle.
    """
    pts = (p, q, r, s)
    for i in range(4):
        for j in range(i + 1, 4):
            if pts[i] == pts[j]:
                raise DomainError(f"concyclic needs distinct points; arguments {i} and {j} coincide")
    from itertools import combinations

    for a, b, c in combinations(pts, 3):
        if collinear(a, b, c):
            raise DomainError("concyclic needs no three collinear points; run collinear first")

    rows = []
    for t in pts:
        rows.append([t.x * t.x + t.y * t.y, t.x, t.y, QuadExt(1)])
    return not _det4(rows)


def _det4(rows) -> QuadExt:
    # Laplace expansion along the last (constant) column is fine at 4x4.
    def det3(m):
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    total = QuadExt(0)
    sign = 1
    for i in range(4):
        minor = [rows[r][:3] for r in range(4) if r != i]
        term = rows[i][3] * det3(minor)
        total = total + (term if sign > 0 else -term)
        sign = -sign
    return total


# -- similarity transforms -----------------------------------------------------


@dataclass(frozen=True)
class SimilarityTransform:
    """p -> M p + t with M a nonzero scalar multiple of an orthogonal
    matrix; entries live in Q(sqrt(k))."""

    m00: QuadExt
    m01: QuadExt
    m10: QuadExt
    m11: QuadExt
    tx: QuadExt
    ty: QuadExt

    def apply(self, p: PlanePoint) -> PlanePoint:
        return PlanePoint(
            self.m00 * p.x + self.m01 * p.y + self.tx,
            self.m10 * p.x + self.m11 * p.y + self.ty,
        )

    def apply_set(self, s: RationalDistanceSet) -> RationalDistanceSet:
        pts = tuple(self.apply(p) for p in s.points)
        return RationalDistanceSet(pts, _context_k(pts), s.verified)

    def to_json(self) -> dict:
        return {
            "matrix": [[self.m00.to_json(), self.m01.to_json()],
                       [self.m10.to_json(), self.m11.to_json()]],
            "translation": [self.tx.to_json(), self.ty.to_json()],
        }


def _context_k(points: Sequence[PlanePoint]) -> int:
    ks = {p.k for p in points if p.k != 1}
    if len(ks) > 1:
        raise DomainError(f"points mix several field contexts: {sorted(ks)}")
    return ks.pop() if ks else 1


def rotation_scale_translate(
    t: Fraction, scale: Fraction, tx: QuadExtLike, ty: QuadExtLike
) -> SimilarityTransform:
    """Similarity built from a rational rotation (tangent half-angle t),
    a nonzero rational scale, and a translation.  Such maps preserve the
    rationality of all pairwise distances."""
    t = Fraction(t)
    scale = Fraction(scale)
    if not scale:
        raise DomainError("scale must be nonzero")
    den = 1 + t * t
    cos = QuadExt((1 - t * t) / den)
    sin = QuadExt(2 * t / den)
    s = QuadExt(scale)
    return SimilarityTransform(
        s * cos, -(s * sin), s * sin, s * cos, QuadExt.lift(tx), QuadExt.lift(ty)
    )


# -- normalization (two anchors to (0,0) and (1,0)) ----------------------------


def normalize_set(
    s: RationalDistanceSet, i: int, j: int
) -> tuple[RationalDistanceSet, SimilarityTransform]:
    """Similarity-transform the set so point i lands on (0,0) and point j
    on (1,0).

    All pairwise squared distances are divided by dist2(i, j) exactly.  The
    residual reflection freedom is fixed by making the first non-anchor
    image with nonzero ordinate have positive irrational coefficient.
    """
    s.require_verified()
    n = s.size
    if not (0 <= i < n and 0 <= j < n):
        raise DomainError(f"anchor indices {i}, {j} out of range for {n} points")
    if i == j:
        raise DomainError("anchor indices must differ")
    pi, pj = s.points[i], s.points[j]
    d2 = dist2(pi, pj)
    if not d2.is_rational() or rational_square_root(d2.a) is None:
        raise DomainError(f"anchor distance^2 {d2} is not a rational square")
    ux = pj.x - pi.x
    uy = pj.y - pi.y
    inv = QuadExt(1) / d2
    m00, m01 = inv * ux, inv * uy
    m10, m11 = -(inv * uy), inv * ux

    def images(m00, m01, m10, m11):
        tx = -(m00 * pi.x + m01 * pi.y)
        ty = -(m10 * pi.x + m11 * pi.y)
        tr = SimilarityTransform(m00, m01, m10, m11, tx, ty)
        return tr, [tr.apply(p) for p in s.points]

    tr, imgs = images(m00, m01, m10, m11)
    for idx, q in enumerate(imgs):
        if idx in (i, j) or not q.y:
            continue
        coeff = q.y.b if q.y.b else q.y.a
        if coeff < 0:
            tr, imgs = images(m00, m01, -m10, -m11)
        break

    out = RationalDistanceSet(tuple(imgs), _context_k(imgs), False).verify()
    return out, tr


def detect_k(source: Union[RationalDistanceSet, Sequence[PlanePoint]]) -> int:
    """Unique squarefree k with every point of a normalized set of the
    shape (r1, r2*sqrt(k)); all-rational sets give k = 1.

    Raises IntegrityError when the shapes are inconsistent -- that means a
    set that is not actually rational slipped through.
    """
    points = source.points if isinstance(source, RationalDistanceSet) else tuple(source)
    zero = PlanePoint(QuadExt(0), QuadExt(0))
    one = PlanePoint(QuadExt(1), QuadExt(0))
    if zero not in points or one not in points:
        raise DomainError("detect_k expects a normalized set containing (0,0) and (1,0)")
    k: Optional[int] = None
    for p in points:
        if not p.x.is_rational():
            raise IntegrityError(f"normalized point {p} has irrational abscissa")
        y = p.y
        if not y:
            continue
        if y.b and y.a:
            raise IntegrityError(f"normalized point {p} is not of the shape (r1, r2*sqrt(k))")
        this_k = y.k if y.b else 1
        if k is None:
            k = this_k
        elif k != this_k:
            raise IntegrityError(f"inconsistent radicals: sqrt({k}) vs sqrt({this_k})")
    return 1 if k is None else k


# -- inversion -------------------------------------------------------------------


def invert_point(center: PlanePoint, radius: Fraction, p: PlanePoint) -> PlanePoint:
    """Inversion map p -> c + r^2 (p - c)/|p - c|^2; involutive away from c."""
    radius = Fraction(radius)
    if radius <= 0:
        raise DomainError("inversion radius must be positive")
    dx = p.x - center.x
    dy = p.y - center.y
    d2 = dx * dx + dy * dy
    if not d2:
        raise DomainError("cannot invert the center itself")
    factor = QuadExt(radius * radius) / d2
    return PlanePoint(center.x + factor * dx, center.y + factor * dy)


def invert_set(s: RationalDistanceSet, center: int, radius: Fraction) -> RationalDistanceSet:
    """Invert every non-center point about the center; the image is again a
    rational set (checked, not assumed) of size |S| - 1."""
    s.require_verified()
    if not (0 <= center < s.size):
        raise DomainError(f"center index {center} out of range")
    radius = Fraction(radius)
    if radius <= 0:
        raise DomainError("inversion radius must be positive")
    c = s.points[center]
    images = tuple(invert_point(c, radius, p) for idx, p in enumerate(s.points) if idx != center)
    out = RationalDistanceSet(images, _context_k(images), False)
    verdict = is_rational_set(out.points)
    if not verdict.ok:
        raise IntegrityError(
            f"inversion image failed rationality at pair {verdict.pair}: {verdict.dist2}"
        )
    return RationalDistanceSet(out.points, out.k, True)


# -- general position -------------------------------------------------------------


DEFAULT_SEARCH_BUDGET = 200_000


def select_general_position(
    s: RationalDistanceSet, n: int = 6, budget: int = DEFAULT_SEARCH_BUDGET
) -> Optional[list[PlanePoint]]:
    """First n points (greedy scan with backtracking, input order) with no 3
    collinear and no 4 concyclic; None means no such subset exists.

    The scan is exhaustive, so None is definitive; a BudgetError signals the
    configured node budget ran out first.
    """
    s.require_verified()
    if n < 1:
        raise DomainError("subset size must be positive")
    if s.size < n:
        raise DomainError(f"set has {s.size} points, need at least {n}")
    points = s.points
    nodes = 0

    def compatible(candidate: PlanePoint, chosen: list[PlanePoint]) -> bool:
        for a in range(len(chosen)):
            for b in range(a + 1, len(chosen)):
                if collinear(chosen[a], chosen[b], candidate):
                    return False
        for a in range(len(chosen)):
            for b in range(a + 1, len(chosen)):
                for c in range(b + 1, len(chosen)):
                    if concyclic(chosen[a], chosen[b], chosen[c], candidate):
                        return False
        return True

    def extend(start: int, chosen: list[PlanePoint]) -> Optional[list[PlanePoint]]:
        nonlocal nodes
        if len(chosen) == n:
            return list(chosen)
        for idx in range(start, len(points)):
            if len(points) - idx < n - len(chosen):
                break
            nodes += 1
            if nodes > budget:
                raise BudgetError(f"general-position search exceeded {budget} nodes")
            cand = points[idx]
            if compatible(cand, chosen):
                chosen.append(cand)
                found = extend(idx + 1, chosen)
                if found is not None:
                    return found
                chosen.pop()
        return None

    return extend(0, [])


# -- grid oracle ---------------------------------------------------------------------


def _grid_points(k: int, height_bound: int) -> list[PlanePoint]:
    points = []
    from math import gcd

    seen = set()
    for c in range(1, height_bound + 1):
        for a in range(-height_bound, height_bound + 1):
            for b in range(-height_bound, height_bound + 1):
                if gcd(gcd(abs(a), abs(b)), c) != 1:
                    continue
                key = (Fraction(a, c), Fraction(b, c))
                if key in seen:
                    continue
                seen.add(key)
                x = QuadExt(key[0])
                y = QuadExt(0, key[1], k) if k != 1 else QuadExt(key[1])
                points.append(PlanePoint(x, y))
    points.sort(key=PlanePoint.sort_key)
    return points


def _pair_is_rational(p: PlanePoint, q: PlanePoint) -> bool:
    d2 = dist2(p, q)
    return d2.is_rational() and rational_square_root(d2.a) is not None


_ADJ_POINTS: list[PlanePoint] = []


def _adjacency_rows(args: tuple[int, int]) -> list[tuple[int, list[int]]]:
    lo, hi = args
    points = _ADJ_POINTS
    out = []
    for i in range(lo, hi):
        row = [j for j in range(i + 1, len(points)) if _pair_is_rational(points[i], points[j])]
        out.append((i, row))
    return out


def _build_adjacency(points: list[PlanePoint], workers: int) -> list[set[int]]:
    n = len(points)
    adj: list[set[int]] = [set() for _ in range(n)]
    if workers > 1 and n > 64:
        import multiprocessing

        global _ADJ_POINTS
        _ADJ_POINTS = points
        chunk = max(1, n // (workers * 8))
        ranges = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
        with multiprocessing.Pool(workers, initializer=_pool_init, initargs=(points,)) as pool:
            for rows in pool.map(_adjacency_rows, ranges):
                for i, row in rows:
                    for j in row:
                        adj[i].add(j)
                        adj[j].add(i)
    else:
        for i in range(n):
            for j in range(i + 1, n):
                if _pair_is_rational(points[i], points[j]):
                    adj[i].add(j)
                    adj[j].add(i)
    return adj


def _pool_init(points):
    global _ADJ_POINTS
    _ADJ_POINTS = points


def _maximal_cliques(adj: list[set[int]]) -> list[list[int]]:
    """Bron-Kerbosch with pivoting; deterministic traversal over sorted ids."""
    cliques: list[list[int]] = []

    def expand(r: list[int], p: set[int], x: set[int]):
        if not p and not x:
            cliques.append(sorted(r))
            return
        pivot, best = -1, -1
        for u in sorted(p | x):
            score = len(p & adj[u])
            if score > best:
                pivot, best = u, score
        for v in sorted(p - adj[pivot]):
            expand(r + [v], p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    expand([], set(range(len(adj))), set())
    return cliques


def worker_count() -> int:
    """Worker parallelism cap from the RD_THREADS environment variable."""
    raw = os.environ.get("RD_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"RD_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def grid_search_rational_sets(
    k: int,
    height_bound: int,
    target_size: int,
    workers: Optional[int] = None,
) -> list[RationalDistanceSet]:
    """Brute-force oracle: enumerate grid points (a/c, (b/c)*sqrt(k)) with
    |a|, |b|, c <= height_bound, and return the maximal cliques of the
    pairwise-rational-distance graph with at least target_size points.

    Output is canonically ordered (points sorted within each set, sets
    sorted by their point keys) and every set is verified.
    """
    if height_bound < 1:
        raise DomainError("height bound must be at least 1")
    if target_size < 3:
        raise DomainError("target size must be at least 3")
    from .scalars import _is_squarefree_positive

    if not _is_squarefree_positive(k):
        raise DomainError(f"k must be a squarefree positive integer, got {k}")
    if workers is None:
        workers = worker_count()

    points = _grid_points(k, height_bound)
    adj = _build_adjacency(points, workers)
    cliques = [c for c in _maximal_cliques(adj) if len(c) >= target_size]

    sets = []
    for clique in cliques:
        pts = sorted((points[i] for i in clique), key=PlanePoint.sort_key)
        sets.append(RationalDistanceSet(tuple(pts), k, False).verify())
    sets.sort(key=lambda s: tuple(p.sort_key() for p in s.points))
    return sets
