"""Exact coefficient fields.

Three kinds of field are supported:

* the rationals, with elements :class:`fractions.Fraction`;
* the rational function field ``Q(s)`` in one transcendental parameter,
  with elements taken from sympy's sparse fraction field;
* a single simple algebraic extension ``F[c]/(m(c))`` of either of the above,
  with elements :class:`AlgNum`.

Extensions of extensions are rejected with :class:`ExtensionError`.

Dense univariate polynomials are plain tuples of coefficients, lowest degree
first, and the ``p*`` helpers below work over any of these fields.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property

import sympy
from sympy import QQ
from sympy.polys.fields import FracElement, field as _frac_field


class ExtensionError(ValueError):
    """An operation would need a second, nested algebraic extension."""


# ---------------------------------------------------------------------------
# dense univariate polynomials, coefficients low -> high

def ptrim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def pdeg(p):
    return len(p) - 1


def padd(a, b):
    n = max(len(a), len(b))
    return ptrim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                 for i in range(n))


def psub(a, b):
    n = max(len(a), len(b))
    return ptrim((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                 for i in range(n))


def pscale(a, c):
    return ptrim(x * c for x in a)


def pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return ptrim(out)


def ppow(a, k):
    out = (1,)
    for _ in range(k):
        out = pmul(out, a)
    return out


def pdivmod(a, b):
    """Euclidean division ``a = b*q + r`` with ``deg r < deg b``."""
    b = ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(ptrim(a))
    db = len(b) - 1
    lead = b[-1]
    if len(r) <= db:
        return (), tuple(r)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db]
        if c == 0:
            continue
        c = c / lead if lead != 1 else c
        q[k] = c
        for j in range(db + 1):
            r[k + j] = r[k + j] - c * b[j]
    return ptrim(q), ptrim(r[:db])


def pmonic(a):
    a = ptrim(a)
    if not a or a[-1] == 1:
        return a
    lead = a[-1]
    return tuple(x / lead for x in a[:-1]) + (a[-1] / lead,)


def pgcd(a, b):
    """Monic gcd of two polynomials over a field."""
    a, b = ptrim(a), ptrim(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    return pmonic(a)


def pxgcd(a, b):
    """Return ``(g, u, v)`` with ``u*a + v*b = g`` and ``g`` monic."""
    r0, r1 = ptrim(a), ptrim(b)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1))
        t0, t1 = t1, psub(t0, pmul(q, t1))
    lead = r0[-1]
    return (pmonic(r0), tuple(x / lead for x in s0), tuple(x / lead for x in t0))


def pderiv(a):
    return ptrim(a[i] * i for i in range(1, len(a)))


def peval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pcompose(a, b):
    """``a(b(z))``."""
    acc = ()
    for c in reversed(a):
        acc = padd(pmul(acc, b), (c,) if c != 0 else ())
    return acc


def psquarefree(a):
    """Squarefree part in characteristic zero."""
    g = pgcd(a, pderiv(a))
    return pmonic(pdivmod(a, g)[0]) if pdeg(g) > 0 else pmonic(a)


# ---------------------------------------------------------------------------
# fields

def _mpq_to_fraction(c):
    return Fraction(int(c.numerator), int(c.denominator))


class RationalField:
    """The field of rational numbers."""

    name = "QQ"
    is_extension = False
    base = None
    zero = Fraction(0)
    one = Fraction(1)

    def convert(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, AlgNum) and x.is_base():
            return self.convert(x.coeffs[0] if x.coeffs else 0)
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def contains(self, x):
        return isinstance(x, (int, Fraction))

    def factor(self, poly):
        """Irreducible monic factors of a squarefree-or-not polynomial.

        Returns a list of ``(factor, multiplicity)`` in canonical order.
        """
        z = sympy.Symbol("z")
        expr = sum(sympy.Rational(c.numerator, c.denominator) * z**i
                   for i, c in enumerate(map(Fraction, poly)))
        _, facs = sympy.factor_list(sympy.Poly(expr, z, domain=QQ))
        out = []
        for f, mult in facs:
            coeffs = tuple(_mpq_to_fraction(QQ.convert(c))
                           for c in reversed(f.all_coeffs()))
            out.append((pmonic(coeffs), mult))
        return sorted(out, key=lambda fm: (pdeg(fm[0]), _poly_key(fm[0])))

    def __repr__(self):
        return "QQ"

    def fmt(self, x):
        return str(x)


class FunctionField:
    """``Q(s)``: rational functions in one transcendental parameter."""

    is_extension = False
    base = None

    def __init__(self, var="s"):
        self.var = var
        self.K, self.s = _frac_field(var, QQ)
        self.zero = self.K.zero
        self.one = self.K.one
        self._sym = sympy.Symbol(var)

    @property
    def name(self):
        return f"QQ({self.var})"

    def convert(self, x):
        if isinstance(x, FracElement):
            return x
        if isinstance(x, int):
            return self.K(x)
        if isinstance(x, Fraction):
            return self.K(QQ(x.numerator, x.denominator))
        if isinstance(x, AlgNum) and x.is_base():
            return self.convert(x.coeffs[0] if x.coeffs else 0)
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def contains(self, x):
        return isinstance(x, (int, Fraction, FracElement))

    def from_poly(self, coeffs):
        """Element ``sum coeffs[i] s^i`` for rational coefficients."""
        return sum((self.convert(c) * self.s**i for i, c in enumerate(coeffs)),
                   self.zero)

    def numer_denom(self, x):
        """Numerator and monic denominator as rational coefficient tuples."""
        x = self.convert(x)
        num = _polyelem_coeffs(x.numer)
        den = _polyelem_coeffs(x.denom)
        lead = den[-1]
        return tuple(c / lead for c in num), tuple(c / lead for c in den)

    def factor(self, poly):
        z = sympy.Symbol("z")
        elems = [self.convert(c) for c in poly]
        den_expr = sympy.lcm_list([e.denom.as_expr() for e in elems]) if elems else 1
        expr = sum(sympy.cancel(e.as_expr() * den_expr) * z**i
                   for i, e in enumerate(elems))
        _, facs = sympy.factor_list(sympy.Poly(expr, z, self._sym, domain=QQ))
        out = []
        for f, mult in facs:
            if f.degree(z) == 0:
                continue
            fz = sympy.Poly(f.as_expr(), z)
            coeffs = tuple(self.K.from_expr(c) if c != 0 else self.zero
                           for c in reversed(fz.all_coeffs()))
            out.append((pmonic(coeffs), mult))
        return sorted(out, key=lambda fm: (pdeg(fm[0]), _poly_key(fm[0])))

    def factor_rational(self, coeffs):
        """Factor a polynomial in ``s`` with rational coefficients over Q."""
        return QQ_FIELD.factor(coeffs)

    def __repr__(self):
        return self.name

    def fmt(self, x):
        return str(x)


def _polyelem_coeffs(p):
    """Dense rational coefficients (low -> high) of a sympy PolyElement in s."""
    if p == 0:
        return ()
    deg = p.degree()
    out = [Fraction(0)] * (deg + 1)
    for (e,), c in p.terms():
        out[e] = _mpq_to_fraction(c)
    return ptrim(out)


def _poly_key(p):
    return tuple(str(c) for c in reversed(p))


QQ_FIELD = RationalField()
QS_FIELD = FunctionField("s")


class ExtensionField:
    """A simple algebraic extension ``base[c]/(m(c))``.

    Parameters
    ----------
    base : RationalField or FunctionField
        Ground field.  Extensions of extensions are not allowed.
    modulus : sequence
        Monic squarefree polynomial ``m`` of degree at least 2, low -> high.
    name : str
        Printed name of the generator.
    """

    is_extension = True

    def __init__(self, base, modulus, name="c"):
        if getattr(base, "is_extension", False):
            raise ExtensionError("nested algebraic extensions are not supported")
        m = ptrim(base.convert(c) for c in modulus)
        if pdeg(m) < 2:
            raise ValueError("extension modulus must have degree >= 2")
        if m[-1] != 1:
            raise ValueError("extension modulus must be monic")
        if pdeg(pgcd(m, pderiv(m))) > 0:
            raise ValueError("extension modulus must be squarefree")
        self.base = base
        self.modulus = m
        self.degree = pdeg(m)
        self.name = name
        self.zero = AlgNum(self, ())
        self.one = AlgNum(self, (base.one,))

    def __eq__(self, other):
        return (isinstance(other, ExtensionField) and other.base is self.base
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash((id(self.base), self.modulus))

    def __repr__(self):
        return f"{self.base.name}[{self.name}]/({self.fmt_modulus()})"

    def fmt_modulus(self):
        return fmt_upoly(self.modulus, self.name, self.base.fmt)

    @property
    def gen(self):
        return AlgNum(self, (self.base.zero, self.base.one))

    def convert(self, x):
        if isinstance(x, AlgNum):
            if x.field is self or x.field == self:
                return x if x.field is self else AlgNum(self, x.coeffs)
            if x.is_base():
                return self.convert(x.coeffs[0] if x.coeffs else 0)
            raise ExtensionError("elements of two different extensions mixed")
        return AlgNum(self, (self.base.convert(x),))

    def contains(self, x):
        return isinstance(x, AlgNum) and x.field == self or self.base.contains(x)

    def reduce(self, coeffs):
        m = self.modulus
        e = self.degree
        c = list(ptrim(coeffs))
        for k in range(len(c) - 1, e - 1, -1):
            lead = c[k]
            if lead == 0:
                continue
            for j in range(e):
                c[k - e + j] = c[k - e + j] - lead * m[j]
            c[k] = 0
        return ptrim(c[:e])

    @cached_property
    def power_sums(self):
        """Traces of ``c^k`` for ``k < 2*degree`` via Newton's identities."""
        e = self.degree
        m = self.modulus
        # elementary symmetric: m = z^e + m_{e-1} z^{e-1} + ..., e_k = (-1)^k m_{e-k}
        el = [self.base.one] + [(-1) ** k * m[e - k] for k in range(1, e + 1)]
        p = [self.base.convert(e)]
        for k in range(1, 2 * e):
            acc = self.base.zero
            for i in range(1, min(k - 1, e) + 1):
                term = el[i] * p[k - i]
                acc = acc + term if i % 2 == 1 else acc - term
            if k <= e:
                acc = acc + (k * el[k] if k % 2 == 1 else -k * el[k])
            p.append(acc)
        return p

    def trace(self, x):
        x = self.convert(x)
        ps = self.power_sums
        return sum((c * ps[i] for i, c in enumerate(x.coeffs)), self.base.zero)

    def charpoly(self, x):
        """Characteristic polynomial of multiplication by ``x`` over the base."""
        x = self.convert(x)
        e = self.degree
        traces = []
        y = self.one
        for _ in range(e):
            y = y * x
            traces.append(self.trace(y))
        return newton_to_poly(traces, e, self.base)

    def minpoly(self, x):
        return psquarefree(self.charpoly(x))

    def is_primitive(self, x):
        return pdeg(self.minpoly(x)) == self.degree

    def coords(self, x):
        x = self.convert(x)
        return tuple(x.coeffs) + (self.base.zero,) * (self.degree - len(x.coeffs))

    def factor(self, poly):
        """Factor over the extension; only linear factors are supported.

        Uses Trager's norm method.  A nonlinear irreducible factor would need a
        second extension and raises :class:`ExtensionError`.
        """
        facs = self.factor_full(poly)
        for f, _ in facs:
            if pdeg(f) > 1:
                raise ExtensionError(
                    "a further algebraic extension would be required")
        return facs

    def factor_full(self, poly):
        poly = pmonic(tuple(self.convert(c) for c in poly))
        out = []
        for part, mult in _squarefree_decomposition(poly):
            if pdeg(part) == 0:
                continue
            for f in self._factor_squarefree(part):
                out.append((f, mult))
        return sorted(out, key=lambda fm: (pdeg(fm[0]), _poly_key(fm[0])))

    def _factor_squarefree(self, f):
        if pdeg(f) == 1:
            return [f]
        theta = self.gen
        for k in (0, 1, -1, 2, -2, 3, -3, 4, 5, 6):
            shifted = pcompose(f, (-k * theta, self.one))   # f(z - k c)
            nrm = self.norm_poly(shifted)
            if pdeg(pgcd(nrm, pderiv(nrm))) > 0:
                continue
            factors = []
            rest = f
            for g, _ in self.base.factor(nrm):
                lifted = pcompose(tuple(self.convert(c) for c in g),
                                  (k * theta, self.one))   # g(z + k c)
                h = pgcd(rest, lifted)
                if pdeg(h) > 0:
                    factors.append(h)
                    rest = pdivmod(rest, h)[0]
            return factors
        raise RuntimeError("no separating shift found for norm factorization")

    def norm_poly(self, f):
        """Norm to the base field of a polynomial with coefficients here."""
        e = self.degree
        # element sum_j f_j(c) z^j as a matrix over base[z]
        cols = []
        for i in range(e):
            shifted = [self.convert(c) * self.gen**i for c in f]
            col = []
            for r in range(e):
                col.append(ptrim(self.coords(c)[r] for c in shifted))
            cols.append(col)
        mat = [[cols[j][i] for j in range(e)] for i in range(e)]
        return pmonic(_poly_det(mat))

    def fmt(self, x):
        x = self.convert(x)
        return "(" + fmt_upoly(x.coeffs, self.name, self.base.fmt) + ")"


def _squarefree_decomposition(f):
    """Yun's algorithm; returns ``[(part, multiplicity), ...]``."""
    out = []
    g = pgcd(f, pderiv(f))
    w = pdivmod(f, g)[0]
    i = 1
    while pdeg(w) > 0:
        y = pgcd(w, g)
        z = pdivmod(w, y)[0]
        if pdeg(z) > 0:
            out.append((pmonic(z), i))
        w = y
        g = pdivmod(g, y)[0]
        i += 1
    return out


def _poly_det(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    acc = ()
    for j in range(n):
        if not mat[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = pmul(mat[0][j], _poly_det(minor))
        acc = padd(acc, term) if j % 2 == 0 else psub(acc, term)
    return acc


def newton_to_poly(power_sums, degree, base):
    """Monic polynomial with the given power sums ``p_1..p_d`` of its roots."""
    el = [base.one]
    for k in range(1, degree + 1):
        acc = base.zero
        for i in range(1, k + 1):
            term = el[k - i] * power_sums[i - 1]
            acc = acc + term if i % 2 == 1 else acc - term
        el.append(acc / k)
    # z^d - e1 z^{d-1} + e2 z^{d-2} - ...
    coeffs = [base.zero] * (degree + 1)
    for k in range(degree + 1):
        coeffs[degree - k] = el[k] if k % 2 == 0 else -el[k]
    return tuple(coeffs)


class AlgNum:
    """Element of an :class:`ExtensionField`, reduced modulo the modulus."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = field.reduce(coeffs) if len(coeffs) >= field.degree \
            else ptrim(coeffs)

    def is_base(self):
        return len(self.coeffs) <= 1

    def _coerce(self, other):
        if isinstance(other, AlgNum):
            if other.field is not self.field and other.field != self.field:
                raise ExtensionError("elements of two different extensions mixed")
            return other.coeffs
        return ptrim((self.field.base.convert(other),))

    def __add__(self, other):
        return AlgNum(self.field, padd(self.coeffs, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return AlgNum(self.field, psub(self.coeffs, self._coerce(other)))

    def __rsub__(self, other):
        return AlgNum(self.field, psub(self._coerce(other), self.coeffs))

    def __neg__(self):
        return AlgNum(self.field, tuple(-c for c in self.coeffs))

    def __pos__(self):
        return self

    def __mul__(self, other):
        return AlgNum(self.field, self.field.reduce(pmul(self.coeffs, self._coerce(other))))

    __rmul__ = __mul__

    def inverse(self):
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero in an extension field")
        g, u, _ = pxgcd(self.coeffs, self.field.modulus)
        if pdeg(g) != 0:
            raise ZeroDivisionError("element is not invertible")
        return AlgNum(self.field, self.field.reduce(u))

    def __truediv__(self, other):
        if isinstance(other, AlgNum):
            return self * other.inverse()
        c = self.field.base.convert(other)
        return AlgNum(self.field, tuple(x / c for x in self.coeffs))

    def __rtruediv__(self, other):
        return self.field.convert(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            return self.coeffs == self._coerce(other)
        except (TypeError, ExtensionError):
            return NotImplemented

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else 0)
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return self.field.fmt(self)

    __str__ = __repr__


def fmt_upoly(coeffs, var, fmt=str):
    """Human-readable univariate polynomial, highest degree first."""
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        cs = fmt(c)
        if mon and cs == "1":
            parts.append(mon)
        elif mon and cs == "-1":
            parts.append("-" + mon)
        elif mon:
            if any(ch in cs[1:] for ch in "+-/") or (cs.startswith("-") and "/" in cs):
                cs = f"({cs})"
            parts.append(f"{cs}*{mon}")
        else:
            parts.append(cs)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def field_of(values, default=QQ_FIELD):
    """The smallest supported field containing all ``values``."""
    ext = None
    fun = False
    for v in values:
        if isinstance(v, AlgNum):
            if ext is not None and v.field != ext:
                raise ExtensionError("elements of two different extensions mixed")
            ext = v.field
        elif isinstance(v, FracElement):
            fun = True
    if ext is not None:
        return ext
    if fun:
        return QS_FIELD
    return default
