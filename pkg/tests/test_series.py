import random
from fractions import Fraction

import pytest

from wtrank.fields import ExtensionError, ExtensionField, QQ_FIELD, QS_FIELD
from wtrank.parsing import ParseError, parse_series
from wtrank.series import AtLeast, NotAUnitError, TSeries

X = ["x1", "x2"]


def ps(text, names=X, trunc=None):
    return parse_series(text, names, trunc)


def rand_series(rng, nvars, trunc, density=0.5, unit=False):
    terms = {}
    for deg in range(trunc + 1):
        for _ in range(3):
            a = [0] * nvars
            for _ in range(deg):
                a[rng.randrange(nvars)] += 1
            if rng.random() < density:
                terms[tuple(a)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    if unit:
        terms[(0,) * nvars] = Fraction(rng.choice([-2, -1, 1, 3]))
    return TSeries(nvars, terms, trunc)


class TestArith:
    def test_cancellation(self):
        assert ps("x1+x2") + ps("x1-x2") == ps("2*x1")

    def test_product_truncates(self):
        assert ps("1+x1", trunc=5) * ps("1-x1", trunc=5) == ps("1-x1^2", trunc=5)

    def test_product_at_four(self):
        got = ps("x2^2-x1^3", trunc=4) * ps("1+x1", trunc=4)
        assert got == ps("x2^2 + x1*x2^2 - x1^3 - x1^4", trunc=4)

    def test_truncation_is_min(self):
        assert (ps("x1", trunc=3) + ps("x2", trunc=7)).trunc == 3
        assert (ps("x1") * ps("x2", trunc=7)).trunc == 7

    def test_nvars_mismatch(self):
        with pytest.raises(ValueError):
            ps("x1") + TSeries.var(0, 3)

    def test_ring_laws(self):
        rng = random.Random(1)
        for _ in range(30):
            a, b, c = (rand_series(rng, 2, 6) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c
            assert a * b == b * a


class TestInvert:
    def test_geometric(self):
        f = parse_series("1-x", ["x"], 3)
        assert f.invert() == parse_series("1+x+x^2+x^3", ["x"], 3)

    def test_two_vars(self):
        f = ps("1+x1+x2", trunc=2)
        assert f.invert() == ps("1-x1-x2+x1^2+2*x1*x2+x2^2", trunc=2)

    def test_non_unit(self):
        with pytest.raises(NotAUnitError):
            ps("x1", trunc=3).invert()

    def test_round_trip(self):
        rng = random.Random(2)
        for _ in range(200):
            f = rand_series(rng, rng.choice([1, 2, 3]), 5, unit=True)
            assert f * f.invert() == TSeries.one(f.nvars, 5)


class TestCompose:
    U = ["u1", "u2"]

    def test_simple(self):
        g = [parse_series("u1", self.U), parse_series("u1*u2", self.U)]
        assert ps("x1+x2").compose(g) == parse_series("u1+u1*u2", self.U)

    def test_toric_relation(self):
        g = [parse_series("u1^2", ["u1"]), parse_series("u1^3", ["u1"])]
        assert ps("x2^2-x1^3").compose(g).is_zero()

    def test_constant(self):
        g = [parse_series("u1", self.U), parse_series("u2", self.U)]
        assert ps("1").compose(g) == TSeries.one(2)

    def test_constant_term_rejected(self):
        g = [parse_series("1+u1", self.U), parse_series("u2", self.U)]
        with pytest.raises(ValueError):
            ps("x1", trunc=4).compose(g)

    def test_homomorphism(self):
        rng = random.Random(3)
        for _ in range(20):
            f, h = rand_series(rng, 2, 5), rand_series(rng, 2, 5)
            g = [rand_series(rng, 2, 5) for _ in range(2)]
            g = [gi - TSeries.const(gi.constant_term(), 2, 5) for gi in g]
            assert (f * h).compose(g) == f.compose(g) * h.compose(g)


class TestValuation:
    def test_examples(self):
        assert ps("x1^2*x2").valuation() == 3
        assert TSeries.zero(2, 8).valuation() == AtLeast(9)
        assert ps("x2^2-x1^3").valuation() == 2
        assert str(AtLeast(9)) == ">= 9"

    def test_additive(self):
        rng = random.Random(4)
        for _ in range(50):
            a, b = rand_series(rng, 2, 8), rand_series(rng, 2, 8)
            va, vb = a.valuation(), b.valuation()
            if isinstance(va, int) and isinstance(vb, int) and va + vb <= 8:
                assert (a * b).valuation() == va + vb


class TestRamify:
    def test_examples(self):
        assert ps("x1+x2").ramify(1, 2) == ps("x1+x2^2")
        f = ps("x2^2-x1^3")
        assert f.ramify(0, 1) == f
        assert f.ramify(0, 2) == ps("x2^2-x1^6")


class TestExtension:
    def test_sqrt2(self):
        K = ExtensionField(QQ_FIELD, (-2, 0, 1))
        c = K.gen
        assert (1 + c) * (1 - c) == -1
        assert c * c == 2

    def test_requires_squarefree(self):
        with pytest.raises(ValueError):
            ExtensionField(QQ_FIELD, (1, 2, 1))

    def test_no_nesting(self):
        K = ExtensionField(QQ_FIELD, (-2, 0, 1))
        with pytest.raises(ExtensionError):
            ExtensionField(K, (-K.gen, 0, 1))

    def test_factor_over_function_field(self):
        s = QS_FIELD.s
        facs = QS_FIELD.factor((-4 * s ** 2, 0, 1))
        assert len(facs) == 2 and all(len(f) == 2 for f, _ in facs)


class TestParse:
    def test_rational_coefficient(self):
        assert ps("3/4*x1").coeff((1, 0)) == Fraction(3, 4)

    def test_power_operator(self):
        assert ps("x1**2") == ps("x1^2")

    def test_error_position(self):
        with pytest.raises(ParseError) as err:
            ps("x1 + $")
        assert err.value.line == 1 and err.value.col == 6

    def test_unknown_variable(self):
        with pytest.raises(ParseError):
            ps("x3")

    def test_division_by_series(self):
        with pytest.raises(ParseError):
            ps("1/x1")

    def test_exp_needs_trunc(self):
        with pytest.raises(ParseError):
            ps("exp(x1)")
        e = parse_series("exp(x)", ["x"], 4)
        assert e.coeff((4,)) == Fraction(1, 24)

    def test_canonical_format(self):
        assert ps("x2^2 - x1^3 + x1*x2").fmt(X) == "x1*x2 + x2^2 - x1^3"
        assert ps("1 + x1", trunc=3).fmt(X) == "1 + x1 + O(x^4)"
