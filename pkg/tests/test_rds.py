import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import distsurf as ds
from distsurf import (
    DomainError,
    IntegrityError,
    PlanePoint,
    QuadExt,
    collinear,
    concyclic,
    detect_k,
    dist2,
    invert_point,
    invert_set,
    is_rational_set,
    normalize_set,
    point,
    select_general_position,
    verified_set,
)

from conftest import random_similarity
from helpers import det4_fraction, fractions_st


TRIANGLE = [point(0, 0), point(1, 0), point(0, Fraction(4, 3))]


class TestDist2:
    def test_unit(self):
        assert dist2(point(0, 0), point(1, 0)) == QuadExt(1)

    def test_three_four_five(self):
        assert dist2(point(0, 0), point(3, 4)) == QuadExt(25)

    def test_equilateral_k3(self):
        p = PlanePoint(QuadExt(Fraction(1, 2)), QuadExt(0, Fraction(1, 2), 3))
        assert dist2(point(0, 0), p) == QuadExt(1)

    def test_symmetry_and_zero(self):
        p, q = point(2, 3), point(-1, 5)
        assert dist2(p, q) == dist2(q, p)
        assert not dist2(p, p)

    def test_mixed_radicals_rejected(self):
        p = PlanePoint(QuadExt(0, 1, 2), QuadExt(0))
        q = PlanePoint(QuadExt(0, 1, 3), QuadExt(0))
        with pytest.raises(DomainError):
            dist2(p, q)


class TestIsRationalSet:
    def test_triangle_with_derived_distances(self):
        # independent arithmetic: the three squared distances and their roots
        d01 = dist2(TRIANGLE[0], TRIANGLE[1]).as_rational()
        d02 = dist2(TRIANGLE[0], TRIANGLE[2]).as_rational()
        d12 = dist2(TRIANGLE[1], TRIANGLE[2]).as_rational()
        assert (d01, d02, d12) == (Fraction(1), Fraction(16, 9), Fraction(25, 9))
        assert is_rational_set(TRIANGLE).ok

    def test_counterexample_pair(self):
        verdict = is_rational_set([point(0, 0), point(1, 1)])
        assert not verdict.ok
        assert verdict.pair == (0, 1)
        assert verdict.dist2 == QuadExt(2)

    def test_singleton(self):
        assert is_rational_set([point(7, 9)]).ok

    def test_duplicates_rejected(self):
        with pytest.raises(DomainError, match="duplicate"):
            is_rational_set([point(1, 2), point(1, 2)])


class TestPredicates:
    def test_collinear_on_axis(self):
        assert collinear(point(0, 0), point(1, 0), point(2, 0))

    def test_not_collinear(self):
        assert not collinear(point(0, 0), point(1, 0), point(0, 1))

    def test_degenerate_triple_is_collinear(self):
        assert collinear(point(0, 0), point(0, 0), point(5, 3))

    def test_concyclic_unit_circle(self):
        assert concyclic(point(1, 0), point(0, 1), point(-1, 0), point(0, -1))

    def test_concyclic_square(self):
        assert concyclic(point(0, 0), point(1, 0), point(0, 1), point(1, 1))

    def test_not_concyclic_derived_determinant(self):
        pts = [(0, 0), (1, 0), (0, 1), (3, 5)]
        rows = [
            [Fraction(x * x + y * y), Fraction(x), Fraction(y), Fraction(1)]
            for x, y in pts
        ]
        assert det4_fraction(rows) != 0  # oracle: the lifting determinant
        assert not concyclic(*(point(x, y) for x, y in pts))

    def test_concyclic_requires_distinct(self):
        with pytest.raises(DomainError):
            concyclic(point(0, 0), point(0, 0), point(1, 0), point(0, 1))

    def test_concyclic_requires_no_collinear_triple(self):
        with pytest.raises(DomainError):
            concyclic(point(0, 0), point(1, 0), point(2, 0), point(0, 1))

    @given(perm=st.permutations(range(4)))
    def test_concyclic_permutation_invariant(self, perm):
        pts = [point(1, 0), point(0, 1), point(-1, 0), point(0, -1)]
        assert concyclic(*(pts[i] for i in perm))
        pts2 = [point(0, 0), point(1, 0), point(0, 1), point(3, 5)]
        assert not concyclic(*(pts2[i] for i in perm))


class TestNormalize:
    def test_identity_when_already_normalized(self):
        s = verified_set(TRIANGLE)
        out, tr = normalize_set(s, 0, 1)
        assert out.points == s.points
        assert tr.apply(point(5, 7)) == point(5, 7)

    def test_scaling_derived(self):
        # oracle: scaling by 1/2 halves every distance
        big = verified_set([point(0, 0), point(2, 0), point(0, Fraction(8, 3))])
        out, _ = normalize_set(big, 0, 1)
        assert list(out.points) == TRIANGLE
        d_old = dist2(big.points[0], big.points[2]).as_rational()
        d_new = dist2(out.points[0], out.points[2]).as_rational()
        assert d_new == d_old / dist2(big.points[0], big.points[1]).as_rational()

    def test_similarity_invariance_and_reflection_convention(self):
        rng = random.Random(12345)
        for _ in range(10):
            tr = random_similarity(rng)
            moved = tr.apply_set(verified_set(TRIANGLE)).verify()
            out, _ = normalize_set(moved, 0, 1)
            # reflection convention pins the sign: always +4/3
            assert list(out.points) == TRIANGLE

    def test_anchor_errors(self):
        s = verified_set(TRIANGLE)
        with pytest.raises(DomainError):
            normalize_set(s, 1, 1)
        with pytest.raises(DomainError):
            normalize_set(s, 0, 99)

    def test_unverified_rejected(self):
        s = ds.make_set(TRIANGLE)
        with pytest.raises(DomainError):
            normalize_set(s, 0, 1)

    def test_lemma_shape_x_coordinate(self, oracle_h3):
        # x-image must equal (q1^2 - q2^2 + 1)/2 with q1, q2 the distances
        # to the anchors measured after scaling
        for s in oracle_h3[:12]:
            out, _ = normalize_set(s, 0, 1)
            zero, one = out.points[0], out.points[1]
            assert (zero, one) == (point(0, 0), point(1, 0))
            for q in out.points:
                q1sq = dist2(q, zero).as_rational()
                q2sq = dist2(q, one).as_rational()
                assert q.x == QuadExt((q1sq - q2sq + 1) / 2)


class TestDetectK:
    def test_plain_rational(self):
        assert detect_k(verified_set(TRIANGLE)) == 1

    def test_equilateral(self):
        s = verified_set(
            [point(0, 0), point(1, 0), PlanePoint(QuadExt(Fraction(1, 2)), QuadExt(0, Fraction(1, 2), 3))]
        )
        assert detect_k(s) == 3

    def test_mixed_radicals_flagged(self):
        pts = [
            point(0, 0),
            point(1, 0),
            PlanePoint(QuadExt(2), QuadExt(0, 1, 2)),
            PlanePoint(QuadExt(3), QuadExt(0, 1, 3)),
        ]
        with pytest.raises(IntegrityError):
            detect_k(pts)

    def test_requires_anchors(self):
        with pytest.raises(DomainError):
            detect_k([point(5, 5), point(6, 5)])

    def test_irrational_abscissa_flagged(self):
        pts = [point(0, 0), point(1, 0), PlanePoint(QuadExt(0, 1, 2), QuadExt(0))]
        with pytest.raises(IntegrityError):
            detect_k(pts)


class TestInversion:
    def test_triangle_derived(self):
        s = verified_set(TRIANGLE)
        out = invert_set(s, 0, Fraction(1))
        assert list(out.points) == [point(1, 0), point(0, Fraction(3, 4))]
        assert dist2(out.points[0], out.points[1]) == QuadExt(Fraction(25, 16))

    def test_point_on_radius_is_fixed(self):
        assert invert_point(point(0, 0), Fraction(1), point(1, 0)) == point(1, 0)

    def test_involution_pointwise(self):
        c = point(2, 3)
        r = Fraction(5, 7)
        p = point(-1, Fraction(1, 2))
        assert invert_point(c, r, invert_point(c, r, p)) == p

    def test_double_inversion_restores_set(self):
        s = verified_set(TRIANGLE)
        r = Fraction(2, 3)
        once = invert_set(s, 0, r)
        again = verified_set([s.points[0], *once.points])
        back = invert_set(again, 0, r)
        assert set(back.points) == set(TRIANGLE[1:])

    def test_center_removed(self):
        s = verified_set(TRIANGLE)
        out = invert_set(s, 1, Fraction(3))
        assert out.size == 2
        assert point(1, 0) not in out.points

    def test_bad_arguments(self):
        s = verified_set(TRIANGLE)
        with pytest.raises(DomainError):
            invert_set(s, 0, Fraction(0))
        with pytest.raises(DomainError):
            invert_set(s, 5, Fraction(1))


class TestSelectGeneralPosition:
    def test_quadruple_from_cross_set(self):
        s = verified_set(
            [point(0, 4), point(0, -4), point(0, 0), point(3, 0), point(-3, 0),
             point(Fraction(5, 3), 0), point(Fraction(-5, 3), 0)]
        )
        got = select_general_position(s, 4)
        assert got is not None and len(got) == 4
        # re-verify both predicates on the output
        for a, b, c in itertools.combinations(got, 3):
            assert not collinear(a, b, c)
        assert not concyclic(*got)

    def test_triple(self):
        s = verified_set(TRIANGLE)
        got = select_general_position(s, 3)
        assert got is not None
        assert not collinear(*got)

    def test_all_collinear_fails_definitively(self):
        s = verified_set([point(i, 0) for i in range(7)])
        assert select_general_position(s, 3) is None

    def test_too_small(self):
        s = verified_set(TRIANGLE)
        with pytest.raises(DomainError):
            select_general_position(s, 6)

    def test_budget(self):
        s = verified_set([point(i, 0) for i in range(12)])
        with pytest.raises(ds.BudgetError):
            select_general_position(s, 3, budget=2)


class TestGridOracle:
    def test_height_one_frozen(self):
        # frozen from an oracle run: six 3-point maximal cliques on the
        # +-1 grid (axis triples and the rows/columns at +-1)
        sets = ds.grid_search_rational_sets(1, 1, 3)
        as_tuples = [
            tuple((p.x.a, p.y.a) for p in s.points) for s in sets
        ]
        assert as_tuples == [
            ((-1, -1), (-1, 0), (-1, 1)),
            ((-1, -1), (0, -1), (1, -1)),
            ((-1, 0), (0, 0), (1, 0)),
            ((-1, 1), (0, 1), (1, 1)),
            ((0, -1), (0, 0), (0, 1)),
            ((1, -1), (1, 0), (1, 1)),
        ]

    def test_height_four_contains_triangle(self, oracle_h4):
        triangle = set(TRIANGLE)
        assert any(triangle <= set(s.points) for s in oracle_h4)

    def test_all_outputs_verified_and_canonical(self, oracle_h3):
        assert len(oracle_h3) >= 20
        for s in oracle_h3:
            assert s.verified
            keys = [p.sort_key() for p in s.points]
            assert keys == sorted(keys)

    def test_unreachable_target_size_empty(self):
        assert ds.grid_search_rational_sets(1, 1, 5) == []

    def test_deterministic_and_thread_cap_agrees(self, oracle_h3, monkeypatch):
        again = ds.grid_search_rational_sets(1, 3, 3)
        assert [s.to_json() for s in again] == [s.to_json() for s in oracle_h3]
        monkeypatch.setenv("RD_THREADS", "2")
        parallel = ds.grid_search_rational_sets(1, 3, 3)
        assert [s.to_json() for s in parallel] == [s.to_json() for s in oracle_h3]

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            ds.grid_search_rational_sets(1, 0, 3)
        with pytest.raises(DomainError):
            ds.grid_search_rational_sets(1, 2, 2)
        with pytest.raises(DomainError):
            ds.grid_search_rational_sets(4, 2, 3)


class TestJsonFormat:
    def test_round_trip(self):
        s = verified_set(TRIANGLE)
        doc = s.to_json()
        back = ds.set_from_json(doc)
        assert back.points == s.points
        assert back.k == s.k

    def test_round_trip_k3(self, oracle_k3):
        for s in oracle_k3[:5]:
            assert ds.set_from_json(s.to_json()).points == s.points

    def test_missing_k(self):
        with pytest.raises(DomainError, match="'k'"):
            ds.set_from_json({"points": []})

    def test_duplicate_points_rejected(self):
        doc = {
            "k": 1,
            "points": [
                {"x": {"a": "1", "b": "0"}, "y": {"a": "0", "b": "0"}},
                {"x": {"a": "1", "b": "0"}, "y": {"a": "0", "b": "0"}},
            ],
        }
        with pytest.raises(DomainError, match="duplicate"):
            ds.set_from_json(doc)

    def test_decimal_rejected(self):
        doc = {
            "k": 1,
            "points": [{"x": {"a": "0.5", "b": "0"}, "y": {"a": "0", "b": "0"}}],
        }
        with pytest.raises(DomainError, match="decimal"):
            ds.set_from_json(doc)


class TestOracleInvariants:
    def test_normalization_soundness_over_oracle(self, oracle_h3, oracle_k3):
        corpus = oracle_h3[:10] + oracle_k3[:6]
        for s in corpus:
            for i, j in itertools.combinations(range(min(s.size, 3)), 2):
                out, _ = normalize_set(s, i, j)
                assert point(0, 0) in out.points and point(1, 0) in out.points
                k = detect_k(out)
                for p in out.points:
                    assert p.x.is_rational()
                    assert not p.y.b or p.y.k == k

    def test_scale_covariance(self, oracle_h3):
        for s in oracle_h3[:8]:
            d_anchor = dist2(s.points[0], s.points[1]).as_rational()
            out, _ = normalize_set(s, 0, 1)
            for a in range(s.size):
                for b in range(a + 1, s.size):
                    before = dist2(s.points[a], s.points[b]).as_rational()
                    after = dist2(out.points[a], out.points[b]).as_rational()
                    assert after == before / d_anchor

    def test_inversion_closure_random_radii(self, oracle_h3):
        rng = random.Random(99)
        for s in oracle_h3[:6]:
            for center in range(s.size):
                for _ in range(3):
                    r = Fraction(rng.randint(1, 9), rng.randint(1, 9))
                    out = invert_set(s, center, r)
                    assert out.verified and out.size == s.size - 1
