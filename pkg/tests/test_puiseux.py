import random
from fractions import Fraction

import pytest

from gen import curve_coeffs, fixture_curves, rand_coeff
from wtrank.fields import ExtensionField, QQ_FIELD
from wtrank.graded import (GradingError, HomogElement, ProjElement, WeightedHomogPoly,
                           gamma_blowup_transform, gamma_transform_identity,
                           is_weighted_homog, multiply_graded, proj_eval_truncate,
                           proj_normalize, valuation_ext)
from wtrank.npe import check_graded_recomposition, npe_factor
from wtrank.parsing import parse_series
from wtrank.puiseux import (NotSquarefreeError, check_recomposition, newton_puiseux,
                            puiseux_branches)
from wtrank.series import TSeries

XY = ["x", "y"]
X = ["x1", "x2"]
XZ = ["x1", "x2", "z"]


def curve(text):
    return curve_coeffs(parse_series(text, XY))


def substitute_root(P, root):
    """``P(lam*T^q, y(T))`` as a univariate series in ``T``."""
    body = root.materialize()
    n = body.trunc if body.trunc is not None else 12
    T = TSeries.var(0, 1, n)
    x = T ** root.q
    if root.x_scale != 1:
        x = x.map_coeffs(lambda c: c * root.x_scale)
    acc = TSeries.zero(1, n)
    ypow = TSeries.one(1, n)
    for a in P:
        acc = acc + a.compose([x], order=n) * ypow
        ypow = ypow * body.truncate(n)
    return acc


class TestNewtonPuiseux:
    def test_cusp(self):
        roots = newton_puiseux(curve("y^2 - x^3"), 20)
        assert len(roots) == 2
        assert all(r.q == 2 and r.leading_exponent == Fraction(3, 2) for r in roots)

    def test_square_root_series(self):
        roots = newton_puiseux(curve("y^2 - x^2*(1+x)"), 6)
        assert [r.q for r in roots] == [1, 1]
        bodies = sorted(r.materialize().truncate(3).coeff((3,)) for r in roots)
        assert bodies == [Fraction(-1, 8), Fraction(1, 8)]
        for r in roots:
            b = r.materialize()
            assert abs(b.coeff((1,))) == 1 and abs(b.coeff((2,))) == Fraction(1, 2)

    def test_linear(self):
        (root,) = newton_puiseux(curve("y - x"), 5)
        assert root.q == 1 and root.materialize() == TSeries.var(0, 1)

    def test_not_squarefree(self):
        with pytest.raises(NotSquarefreeError):
            puiseux_branches(curve("(y - x)^2"), 5)

    def test_deck_closure(self):
        for text in ("y^2 - x^3", "y^2 - x^3 - x^4", "y^2 - 2*x^2"):
            P = curve(text)
            for r in newton_puiseux(P, 10):
                val = substitute_root(P, r)
                assert val.is_zero(), text

    def test_recomposition_fixtures(self):
        curves = fixture_curves()
        assert len(curves) == 20
        for label, P in curves:
            coeffs = curve_coeffs(P)
            assert check_recomposition(coeffs, puiseux_branches(coeffs, 20), 20), label


class TestWeighted:
    def test_examples(self):
        assert is_weighted_homog(parse_series("z^2 - x1*x2", XZ), 1)
        assert is_weighted_homog(parse_series("z^2 - x1^3", XZ), Fraction(3, 2))
        assert not is_weighted_homog(parse_series("z^2 - x1", XZ), 1)

    def test_valuation_ext(self):
        g1 = HomogElement(WeightedHomogPoly(parse_series("z^2 - x1*x2", XZ), 1))
        assert valuation_ext([parse_series("x1^2", X), parse_series("x2", X)], g1) == 2
        g2 = HomogElement(WeightedHomogPoly(parse_series("z^2 - x1^3", XZ), Fraction(3, 2)))
        assert valuation_ext([TSeries.zero(2), TSeries.one(2)], g2) == Fraction(3, 2)
        g3 = HomogElement(WeightedHomogPoly(parse_series("z^2 - x1", XZ), Fraction(1, 2)))
        assert valuation_ext([parse_series("x1", X), parse_series("x1^3", X)], g3) == 1
        with pytest.raises(ValueError):
            valuation_ext([TSeries.one(2)], g1)

    def test_valuation_is_multiplicative(self):
        rng = random.Random(8)
        g = HomogElement(WeightedHomogPoly(parse_series("z^2 - x1*x2", XZ), 1))

        def graded():
            deg = rng.randint(0, 3)
            a = TSeries(2, {(deg, 0): rand_coeff(rng), (0, deg): rand_coeff(rng)})
            b = TSeries(2, {(deg, 1): rand_coeff(rng)}) if rng.random() < 0.8 else TSeries.zero(2)
            return [a, b]
        for _ in range(40):
            a, b = graded(), graded()
            prod = multiply_graded(a, b, g)
            assert valuation_ext(prod, g) == valuation_ext(a, g) + valuation_ext(b, g)


class TestProj:
    def test_normalize(self):
        x1 = parse_series("x1", X)
        proj_normalize(x1, 0, 1, {1: parse_series("x2^2", X)})
        with pytest.raises(GradingError) as err:
            proj_normalize(x1, 0, 1, {1: parse_series("x2", X)})
        assert err.value.k == 1
        h = parse_series("x1^2 + x2^2", X)
        proj_normalize(h, 1, 0, {2: h ** 2 * parse_series("x1*x2", X)})

    def test_eval(self):
        x1 = parse_series("x1", X)
        num, den, _ = proj_eval_truncate(ProjElement(x1, 0, 1, {1: parse_series("x2^2", X)}), 4)
        assert num == parse_series("x2^2", X) and den == x1
        A = ProjElement(x1, 0, 1, {0: x1, 1: parse_series("x2^2", X)})
        num, den, _ = proj_eval_truncate(A, 4)
        assert num == parse_series("x1 + x2^2", X) and den == x1

    def test_eval_with_alpha(self):
        x1 = parse_series("x1", X)
        A = ProjElement(x1, 1, 0, {1: parse_series("x1*x2", X), 2: parse_series("x1*x2^3", X)})
        num, den, K = proj_eval_truncate(A, 5)
        assert K == 2 and den == parse_series("x1^2", X)
        assert num == parse_series("x1^2*x2 + x1*x2^3", X)


class TestGammaTransform:
    def test_examples(self):
        g = WeightedHomogPoly(parse_series("z^2 - x1*x2", XZ), 1)
        assert gamma_blowup_transform(g, 1) == parse_series("z^2 - v2^3", ["v2", "z"])
        g = WeightedHomogPoly(parse_series("z - x1", XZ), 1)
        assert gamma_blowup_transform(g, 0) == parse_series("z - 1", ["v2", "z"])
        g = WeightedHomogPoly(parse_series("z^2 - x1^3", XZ), Fraction(3, 2))
        assert gamma_blowup_transform(g, 0) == parse_series("z^2 - 1", ["v2", "z"])
        assert gamma_transform_identity(g, 2)

    def test_not_monic(self):
        with pytest.raises(ValueError):
            HomogElement(WeightedHomogPoly(parse_series("2*z^2 - x1*x2", XZ), 1))


class TestNPE:
    V = ["x1", "x2", "y"]

    def factor(self, text, N=10):
        P = parse_series(text, self.V)
        fact = npe_factor(P, N)
        assert check_graded_recomposition(P, fact)
        return fact

    def test_cone(self):
        fact = self.factor("y^2 - x1*x2")
        (f,) = fact.factors
        assert f.degree == 2 and f.gamma.minimal.poly == parse_series("z^2 - x1*x2", XZ)
        assert f.gamma.omega == 1

    def test_split(self):
        fact = self.factor("(y - x1)*(y - x2)")
        assert [f.degree for f in fact.factors] == [1, 1]
        assert fact.h == TSeries.one(2)

    def test_cusp(self):
        (f,) = self.factor("y^2 - x1^3").factors
        assert f.gamma.minimal.poly == parse_series("z^2 - x1^3", XZ)
        assert f.gamma.omega == Fraction(3, 2)

    def test_denominator(self):
        fact = self.factor("y^2 - x1^2 - x2^3")
        assert fact.h == parse_series("x1", X)

    def test_conjugates_share_minimal(self):
        (f,) = self.factor("y^2 + x1^2 + x2^2").factors
        conj = f.conjugates()
        assert len(conj) == 2 and conj[0].minimal == conj[1].minimal


def test_extension_trace():
    K = ExtensionField(QQ_FIELD, (1, 1, 1))
    assert K.trace(K.gen) == -1
    assert K.trace(K.gen ** 2) == -1
    assert K.minpoly(K.gen) == (1, 1, 1)
