import random
from fractions import Fraction

import pytest

from gen import rand_poly, rand_regular
from wtrank.parsing import parse_series
from wtrank.series import TSeries
from wtrank.weierstrass import (DegenerateError, NotRegularError, implicit_solve,
                                poly_divide_bound, regular_order, wdivide, wprepare)

X = ["x1", "x2"]


def ps(text, names=X, trunc=None):
    return parse_series(text, names, trunc)


class TestRegularOrder:
    def test_examples(self):
        assert regular_order(ps("x2^2-x1^3"), 1) == 2
        assert regular_order(ps("x2+x1"), 1) == 1
        with pytest.raises(NotRegularError):
            regular_order(ps("x1*x2"), 1)


class TestDivide:
    def test_single_step(self):
        res = wdivide(ps("x2"), ps("x2-x1"), 1, order=5)
        assert res.quotient == ps("1") and res.remainder == ps("x1")

    def test_cubic(self):
        res = wdivide(ps("x2^3"), ps("x2^2-x1"), 1, order=5)
        assert res.quotient == ps("x2") and res.remainder == ps("x1*x2")

    def test_remainder_only(self):
        res = wdivide(ps("x1"), ps("x2^2-x1"), 1, order=5)
        assert res.quotient.is_zero() and res.remainder == ps("x1")

    def test_exact_inputs_need_order(self):
        with pytest.raises(ValueError):
            wdivide(ps("x2"), ps("x2-x1"), 1)

    def test_truncated_certified_orders(self):
        G, F = ps("x2^3 + x1*x2", trunc=9), ps("x2^2 - x1 + x1*x2", trunc=9)
        res = wdivide(G, F, 1)
        assert res.quotient.trunc == (9 - 2) // 3
        assert [r.trunc for r in res.remainder_coeffs] == [3, 2]
        resid = G - (F * res.quotient + res.remainder)
        assert resid.truncate(res.certified_order).is_zero()

    def test_shift_property(self):
        rng = random.Random(5)
        for _ in range(20):
            F = rand_regular(rng, 2, 1, 2, 10)
            G = rand_poly(rng, 2, 10, 6).truncate(10)
            h = rand_poly(rng, 2, 2, 3)
            a, b = wdivide(G, F, 1), wdivide(G + F * h, F, 1)
            n = a.quotient.trunc
            assert b.quotient.truncate(n) == (a.quotient + h).truncate(n)
            for r1, r2 in zip(a.remainder_coeffs, b.remainder_coeffs):
                assert r1 == r2


class TestPrepare:
    def test_unit_times_poly(self):
        U, P = wprepare(ps("(1+x1)*(x2^2-x1)"), 1, order=6)
        assert U.truncate(6) == ps("1+x1", trunc=6)
        assert P.to_series().equal_to_order(ps("x2^2-x1"), 6)

    def test_already_prepared(self):
        U, P = wprepare(ps("x2^2-x1^3"), 1, order=6)
        assert U == TSeries.one(2) and P.to_series() == ps("x2^2-x1^3")

    def test_geometric(self):
        U, P = wprepare(ps("(1+x1)*x2-x1"), 1, order=6)
        assert U.truncate(5) == ps("1+x1", trunc=5)
        a1 = P.coeffs[0]
        expected = parse_series("-x1+x1^2-x1^3+x1^4-x1^5", ["x1"], 5)
        assert a1.truncate(5) == expected

    def test_recomposition(self):
        rng = random.Random(6)
        for _ in range(20):
            f = rand_regular(rng, 2, 1, rng.randint(1, 3), 9)
            U, P = wprepare(f, 1)
            n = min(U.trunc, 9 // (P.degree + 1))
            assert (U * P.to_series()).truncate(n) == f.truncate(n)
            assert U.constant_term() != 0


class TestPolyDivide:
    Z = ["x", "z"]

    def test_examples(self):
        q, r, ok = poly_divide_bound(parse_series("z^2", self.Z), parse_series("z^2-x", self.Z))
        assert q == TSeries.one(2) and r == parse_series("x", self.Z) and ok
        q, r, ok = poly_divide_bound(parse_series("z", self.Z), parse_series("z^2-x", self.Z))
        assert q.is_zero() and r == parse_series("z", self.Z) and ok
        q, r, ok = poly_divide_bound(parse_series("x*z^3", self.Z), parse_series("z^2-x", self.Z))
        assert q == parse_series("x*z", self.Z) and r == parse_series("x^2*z", self.Z) and ok

    def test_not_monic(self):
        with pytest.raises(ValueError):
            poly_divide_bound(parse_series("z^2", self.Z), parse_series("2*z^2-x", self.Z))


class TestImplicit:
    U = ["u1", "u2"]

    def test_examples(self):
        xi = implicit_solve(parse_series("u1-u2^2", self.U), 0, order=6)
        assert xi == parse_series("u2^2", ["u2"], 6)
        xi = implicit_solve(parse_series("u1-u2-u1*u2", self.U), 0, order=5)
        assert xi == parse_series("u2+u2^2+u2^3+u2^4+u2^5", ["u2"], 5)
        with pytest.raises(DegenerateError):
            implicit_solve(parse_series("u1^2-u2", self.U), 0, order=4)

    def test_residual(self):
        g = parse_series("u1 + u2^2 + u1*u2 - 3*u1^2", self.U)
        xi = implicit_solve(g, 0, order=7)
        val = g.compose([xi, TSeries.var(0, 1, 7)])
        assert val.is_zero()
        assert xi.constant_term() == Fraction(0)
