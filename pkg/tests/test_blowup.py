import random

import pytest

from gen import rand_h, rand_poly, rand_proj_element
from wtrank.blowup import (ChartPoint, ResolutionError, blowup_pullback, f1_chart_point,
                           f1_chart_pullback, find_pole_point, is_monomial_times_unit,
                           proj_pullback, reduced_denominator_nonconstant, resolve_monomialize)
from wtrank.graded import ProjElement
from wtrank.parsing import parse_series
from wtrank.series import TruncationError, TSeries

X = ["x1", "x2"]
V = ["v1", "v2"]


def ps(text, names=X, trunc=None):
    return parse_series(text, names, trunc)


class TestCharts:
    def test_chart_one(self):
        assert f1_chart_pullback(ps("x2^2 - x1^3"), 0) == ps("v1^2*v2^2 - v1^3", V)

    def test_chart_c(self):
        assert f1_chart_pullback(ps("x2^2 - x1^3"), 1) == ps("v1^2*v2^4 - v1^3*v2^3", V)

    def test_matches_chart_point(self):
        rng = random.Random(11)
        for c in range(4):
            p = f1_chart_point(c)
            for _ in range(5):
                f = rand_poly(rng, 2, 5, 4)
                assert blowup_pullback(f, p) == f1_chart_pullback(f, c)

    def test_ring_homomorphism(self):
        rng = random.Random(12)
        p = ChartPoint().child(1, 2).child(2).child(1)
        for _ in range(20):
            f, g = rand_poly(rng, 2, 4, 4), rand_poly(rng, 2, 4, 4)
            assert blowup_pullback(f * g, p) == blowup_pullback(f, p) * blowup_pullback(g, p)
            assert blowup_pullback(f + g, p) == blowup_pullback(f, p) + blowup_pullback(g, p)

    def test_exceptional_order(self):
        # a series of order d pulls back to v1^d times the strict transform
        rng = random.Random(13)
        for _ in range(20):
            f = rand_poly(rng, 2, 6, 5, mindeg=1)
            d = f.valuation()
            g = blowup_pullback(f, ChartPoint().child(1))
            assert min(t[0] for t in g.terms) == d
            assert g.coeff((d, 0)) == f.coeff((d, 0))

    def test_divisor_labels(self):
        p = ChartPoint().child(1).child(2)
        assert p.divisor_labels() == [(0, "F_2^(1)"), (1, "F_2^(2)")]
        q = ChartPoint().child(1, 1)
        assert q.divisor_labels() == [(0, "F_1^(1)")]
        assert q.fmt_path() == "chart1[v2 -> v2 + 1]"
        assert ChartPoint().child(1, -1).fmt_path() == "chart1[v2 -> v2 - 1]"


class TestMonomial:
    def test_examples(self):
        assert is_monomial_times_unit(ps("v1^2*v2*(1+v1)", V)) == (2, 1)
        assert is_monomial_times_unit(ps("v1 + v2", V)) is None
        with pytest.raises(TruncationError):
            is_monomial_times_unit(TSeries.zero(2, 5))


class TestResolve:
    @pytest.mark.parametrize("text,depth", [
        ("x1*x2", 0), ("x2^2 - x1^2", 1), ("x2^2 - x1^3", 3), ("x2^3 - x1^5", 4)])
    def test_depths(self, text, depth):
        tree = resolve_monomialize(ps(text))
        assert tree.depth == depth and tree.resolved
        for leaf in tree.leaves:
            assert is_monomial_times_unit(leaf.transform) is not None

    def test_conjugate_centers(self):
        tree = resolve_monomialize(ps("x2^2 + x1^2"))
        assert tree.resolved and tree.depth == 1
        assert sum(leaf.point.conjugates for leaf in tree.leaves if leaf.point.path[0].translation != 0) == 2

    def test_max_depth(self):
        with pytest.raises(ResolutionError):
            resolve_monomialize(ps("x2^2 - x1^3"), max_depth=2)

    def test_needs_exact(self):
        with pytest.raises(TruncationError):
            resolve_monomialize(ps("x2^2 - x1^3", trunc=6))


class TestProjPullback:
    def test_pole(self):
        A = ProjElement(ps("x2"), 0, 1, {1: ps("x1^2")})
        res = proj_pullback(A, 0)
        assert res.has_pole and res.pole_pieces == (1,)

    def test_extends(self):
        A = ProjElement(ps("x1"), 0, 1, {1: ps("x2^2")})
        res = proj_pullback(A, 0)
        assert res.verdict == "extends"
        assert res.value == ps("v1*v2^2", V)

    def test_pole_search_examples(self):
        assert find_pole_point(ProjElement(ps("x2"), 0, 1, {1: ps("x1^2")})) is not None
        # extends on the (v1, v1*v2) chart, but not at the other end of the line
        res = find_pole_point(ProjElement(ps("x1"), 0, 1, {1: ps("x2^2")}))
        assert res is not None and res.point == "inf"
        assert find_pole_point(ProjElement(ps("x1 + x2"), 0, 1, {1: ps("x1^2 + x1*x2")})) is None

    def test_translated_center(self):
        h = ps("x2 - x1")
        A = ProjElement(h, 0, 1, {1: ps("x1^2")})
        assert proj_pullback(A, 0, 1).has_pole
        assert not proj_pullback(A, 0, 0).has_pole

    def test_random_poles(self):
        rng = random.Random(14)
        seen = 0
        while seen < 15:
            A = rand_proj_element(rng, rand_h(rng))
            if not reduced_denominator_nonconstant(A):
                continue
            seen += 1
            assert find_pole_point(A) is not None
