"""Rational Newton-Puiseux expansions of a monic polynomial in ``y`` with
coefficients in ``K[[x]]``.

The algorithm is Duval's rational variant of the Newton polygon method: an
edge with slope ``m/q`` and a root ``xi`` of its characteristic polynomial are
absorbed by the change of variables ``X = xi^v X1^q``, ``Y = X1^m (xi^u + Y1)``
with ``u*q - v*m = 1``, so no ``q``-th roots are ever taken.  Each branch ends
in the regular case, which is finished by Newton-Hensel lifting.

A branch is described by a field ``K_b`` (the ground field or one simple
extension), a ramification index ``e``, a scale ``lam`` and a series
``xi(T)`` such that ``x = lam*T^e`` and ``y = xi(T)`` is a root.  It stands
for ``e*[K_b:K]`` roots of the polynomial: the field conjugates times the
``e`` deck transformations ``T -> zeta*T``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, gcd, inf

import sympy

from .fields import (AlgNum, ExtensionError, ExtensionField, QQ_FIELD, field_of,
                     pdeg)
from .series import AtLeast, TSeries, TruncationError


class NotSquarefreeError(ValueError):
    """The polynomial has a repeated root (to the available precision)."""


# ---------------------------------------------------------------------------
# dense univariate series helpers (lists of coefficients, length = precision)

def smul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x == 0:
            continue
        for j in range(min(len(b), n - i)):
            y = b[j]
            if y != 0:
                out[i + j] = out[i + j] + x * y
    return out


def sadd(a, b, n):
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def ssub(a, b, n):
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def sinv(a, n):
    """Inverse of a unit series modulo ``T^n``."""
    inv0 = 1 / a[0]
    out = [0] * n
    out[0] = inv0
    for k in range(1, n):
        acc = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j] != 0 and out[k - j] != 0:
                acc = acc + a[j] * out[k - j]
        out[k] = -acc * inv0 if acc != 0 else 0
    return out


def spow_list(a, kmax, n, one):
    """``[a^0, a^1, ..., a^kmax]`` modulo ``T^n``."""
    out = [[one] + [0] * (n - 1)]
    for _ in range(kmax):
        out.append(smul(out[-1], a, n))
    return out


# ---------------------------------------------------------------------------
# polynomials in (X, Y) as dicts {(i, j): coeff}

@dataclass
class _Task:
    F: dict
    prec: int | None        # terms with X-degree < prec are known; None: exact
    field: object
    rmax: int               # roots of interest: those with Y(0) = 0, multiplicity rmax
    first: bool
    e: int
    lam: object
    ppoly: dict             # accumulated part of y as {T-power: coeff}
    kappa: object
    M: int
    depth: int


@dataclass
class Branch:
    """One rational Puiseux branch: ``x = lam*T^e``, ``y = body(T)``.

    ``body`` holds the coefficients of ``T^0 .. T^(prec-1)``; when ``exact`` is
    true the list is the whole (finite) expansion.
    """

    field: object
    e: int
    lam: object
    body: list
    prec: int
    exact: bool
    index: int = 0

    @property
    def degree(self):
        """Number of roots represented: ``e * [K_b : K]``."""
        f = self.field.degree if getattr(self.field, "is_extension", False) else 1
        return self.e * f

    @property
    def ext_degree(self):
        return self.field.degree if getattr(self.field, "is_extension", False) else 1

    def body_series(self):
        terms = {(k,): c for k, c in enumerate(self.body) if c != 0}
        return TSeries(1, terms, None if self.exact else self.prec - 1)


@dataclass(frozen=True)
class PuiseuxSeries:
    """A single Puiseux root ``y = body(T)`` with ``x = x_scale*T^q``.

    ``conj`` numbers the field conjugates and ``deck`` the substitutions
    ``T -> zeta^deck * T`` with ``zeta`` a primitive ``q``-th root of unity;
    both act on the shared ``body`` of the branch.
    """

    q: int
    x_scale: object
    body: TSeries
    field: object
    branch: int
    conj: int = 0
    deck: int = 0

    @property
    def leading_exponent(self):
        v = self.body.valuation()
        if isinstance(v, AtLeast) or v == inf:
            return v
        return Fraction(v, self.q)

    def materialize(self):
        """Explicit body for this root when it is expressible in ``field``.

        Deck transformations are materialized for ``q <= 2`` and conjugates for
        quadratic extensions; otherwise ``None``.
        """
        body = self.body
        if self.deck:
            if self.q != 2:
                return None
            body = TSeries(1, {a: (-c if a[0] % 2 else c) for a, c in body.terms.items()},
                           body.trunc)
        if self.conj:
            fld = self.field
            if not getattr(fld, "is_extension", False) or fld.degree != 2:
                return None
            other = -fld.modulus[1] - fld.gen
            body = body.map_coeffs(lambda c: _conj_quadratic(c, other))
        return body

    def fmt(self, names=("t",)):
        scale = "" if self.x_scale == 1 else f"{_fmt_c(self.x_scale)}*"
        return f"q={self.q}; x = {scale}t^{self.q}; y = {self.body.fmt(list(names))}"


def _conj_quadratic(c, other):
    if isinstance(c, AlgNum):
        coeffs = c.coeffs
        a0 = coeffs[0] if coeffs else 0
        a1 = coeffs[1] if len(coeffs) > 1 else 0
        return other * a1 + a0
    return c


def _fmt_c(c):
    return str(c).replace("**", "^")


def _newton_hull(points):
    """Lower convex hull of points ``(j, i)`` sorted by ``j``."""
    hull = []
    for p in sorted(points):
        while len(hull) >= 2:
            (j1, i1), (j2, i2) = hull[-2], hull[-1]
            # remove hull[-1] if it lies on or above segment hull[-2] -> p
            if (i2 - i1) * (p[0] - j1) >= (p[1] - i1) * (j2 - j1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _bezout(q, m):
    if m == 0:
        return 1, 0
    if m == 1:
        return 1, q - 1
    u = pow(q, -1, m)
    if u == 0:
        u = m
    v = (u * q - 1) // m
    return u, v


def _as_poly_dict(coeffs, base):
    """Coefficient series list ``a_0..a_D`` -> ``({(i, j): c}, prec)``."""
    F = {}
    prec = None
    for j, a in enumerate(coeffs):
        if a.nvars != 1:
            raise ValueError("coefficients must be univariate series")
        if a.trunc is not None:
            prec = a.trunc + 1 if prec is None else min(prec, a.trunc + 1)
        for (i,), c in a.terms.items():
            F[(i, j)] = base.convert(c) if hasattr(base, "convert") else c
    if prec is not None:
        F = {k: c for k, c in F.items() if k[0] < prec}
    return F, prec


class _Duval:
    def __init__(self, coeffs, N, base):
        self.N = N
        self.base = base
        self.D = len(coeffs) - 1
        if self.D < 1:
            raise ValueError("polynomial must have positive degree in y")
        lead = coeffs[-1]
        if set(lead.terms) != {(0,)} or lead.constant_term() != 1:
            raise ValueError("polynomial must be monic in y")
        self.F, self.prec = _as_poly_dict(coeffs, base)
        self.branches = []

    def run(self):
        one = self.base.one
        stack = [_Task(self.F, self.prec, self.base, self.D, True, 1, one, {}, one, 0, 0)]
        while stack:
            task = stack.pop()
            if task.depth > 64 + 8 * self.N * self.D:
                raise NotSquarefreeError("Newton polygon iteration does not separate the roots")
            children = self._step(task)
            stack.extend(reversed(children))
        total = sum(b.degree for b in self.branches)
        if total != self.D:
            raise RuntimeError(f"found {total} roots for a polynomial of degree {self.D}")
        for k, b in enumerate(self.branches):
            b.index = k
        return self.branches

    def _step(self, t):
        if not t.first and t.rmax == 1:
            self._hensel(t)
            return []
        F = t.F
        rmax = t.rmax
        low = {}
        for (i, j), c in F.items():
            if j <= rmax and c != 0:
                if j not in low or i < low[j]:
                    low[j] = i
        children = []
        if 0 not in low:
            if t.prec is None:
                self._emit_exact(t)
                if rmax == 1:
                    return []
            else:
                raise TruncationError(
                    "constant coefficient vanishes to the available precision; "
                    "the input is not squarefree to this order or its truncation is too small")
        points = sorted((j, i) for j, i in low.items())
        hull = _newton_hull(points)
        edges = []
        for (ja, ia), (jb, ib) in zip(hull, hull[1:]):
            if ib > ia:
                break
            edges.append((ja, ia, jb, ib))
        for ja, ia, jb, ib in edges:
            dj, di = jb - ja, ia - ib
            g = gcd(dj, di) if di else dj
            m, q = di // g, dj // g
            l = m * ja + q * ia
            deg_phi = (jb - ja) // q
            phi = [t.field.zero] * (deg_phi + 1)
            for (i, j), c in F.items():
                if ja <= j <= jb and m * j + q * i == l and c != 0:
                    phi[(j - ja) // q] = phi[(j - ja) // q] + c
            lead = phi[-1]
            phi = [c / lead for c in phi]
            for fac, mult in t.field.factor(phi):
                children.append(self._descend(t, m, q, l, fac, mult))
        return children

    def _descend(self, t, m, q, l, fac, mult):
        fld = t.field
        if pdeg(fac) == 1:
            xi = -fac[0]
        else:
            if getattr(fld, "is_extension", False):
                raise ExtensionError("a second algebraic extension would be required")
            fld = ExtensionField(fld, fac, name="c")
            xi = fld.gen
        u, v = _bezout(q, m)
        powcache = {}

        def xpow(k):
            if k not in powcache:
                powcache[k] = xi ** k if k else fld.one
            return powcache[k]

        F1 = {}
        new_prec = None if t.prec is None else q * t.prec - l
        xu = xpow(u)
        for (i, j), c in t.F.items():
            if c == 0:
                continue
            E = q * i + m * j - l
            if new_prec is not None and E >= new_prec:
                continue
            base_c = c * xpow(v * i) if v * i else c
            for k in range(j + 1):
                coef = base_c * comb(j, k)
                if j - k:
                    coef = coef * xu ** (j - k) if (j - k) > 1 else coef * xu
                key = (E, k)
                F1[key] = F1[key] + coef if key in F1 else coef
        F1 = {k: c for k, c in F1.items() if c != 0}
        # reparametrize the accumulated part: T_old = xi^v * T^q
        ppoly = {}
        for k, c in t.ppoly.items():
            ppoly[q * k] = c * xpow(v * k)
        top = q * t.M + m
        add = t.kappa * xpow(v * t.M + u)
        ppoly[top] = ppoly.get(top, 0) + add
        kappa = t.kappa * xpow(v * t.M)
        lam = t.lam * xpow(v * t.e)
        return _Task(F1, new_prec, fld, mult, False, t.e * q, lam, ppoly, kappa, top,
                     t.depth + 1)

    def _target(self, t):
        return t.e * self.N

    def _assemble(self, t, Y, prec, exact):
        n = prec
        body = [0] * n
        for k, c in t.ppoly.items():
            if k < n:
                body[k] = body[k] + c
        for k, c in enumerate(Y):
            if t.M + k < n and c != 0:
                body[t.M + k] = body[t.M + k] + t.kappa * c
        if exact:
            while body and body[-1] == 0:
                body.pop()
        return body

    def _emit_exact(self, t):
        n = self._target(t)
        body = self._assemble(t, [], max(n, max(t.ppoly, default=-1) + 1), True)
        self.branches.append(Branch(t.field, t.e, t.lam, body, n, True))

    def _hensel(self, t):
        n_body = self._target(t)
        need = n_body - t.M
        if need <= 0:
            self.branches.append(Branch(t.field, t.e, t.lam,
                                        self._assemble(t, [], n_body, False), n_body, False))
            return
        if t.prec is not None and t.prec < need:
            raise TruncationError(
                f"input precision too small: need {need} terms in the last chart, have {t.prec}")
        K = need
        fld = t.field
        deg = max(j for _, j in t.F) if t.F else 0
        A = [[0] * K for _ in range(deg + 1)]
        for (i, j), c in t.F.items():
            if i < K:
                A[j][i] = A[j][i] + c
        exact_zero = t.prec is None and all(c == 0 for c in A[0]) and \
            all(c == 0 for (i, j), c in t.F.items() if j == 0)
        if exact_zero:
            body = self._assemble(t, [], max(n_body, max(t.ppoly, default=-1) + 1), True)
            self.branches.append(Branch(fld, t.e, t.lam, body, n_body, True))
            return
        dA = [[c * j for c in A[j]] for j in range(1, deg + 1)]
        Y = [fld.zero] * K
        prec = 1
        while prec < K:
            prec = min(2 * prec, K)
            val = _horner(A, Y, prec)
            der = _horner(dA, Y, prec)
            corr = smul(val, sinv(der, prec), prec)
            Y = ssub(Y[:prec], corr, prec) + Y[prec:]
        Y = Y[:K]
        body = self._assemble(t, Y, n_body, False)
        self.branches.append(Branch(fld, t.e, t.lam, body, n_body, False))


def _horner(A, Y, n):
    acc = list(A[-1][:n])
    for row in reversed(A[:-1]):
        acc = sadd(smul(acc, Y, n), row, n)
    return acc


def _coeff_list(P):
    """Accept a list of univariate coefficient series or a bivariate series."""
    if isinstance(P, TSeries):
        if P.nvars != 2:
            raise ValueError("expected a series in (x, y)")
        parts = P.coeffs_in(1)
        D = max(parts)
        return [parts.get(j, TSeries(1, {}, P.trunc)) for j in range(D + 1)]
    return list(P)


def puiseux_branches(P, N, base=None):
    """Rational Puiseux branches of ``P`` with roots known modulo ``x^N``.

    Parameters
    ----------
    P : list of TSeries or TSeries
        Coefficients ``a_0, ..., a_D`` (univariate, ``a_D = 1``) of
        ``sum a_j(x) y^j``, or a bivariate series in ``(x, y)``.
    N : int
        Target order in ``x``.
    base : field, optional
        Ground field; inferred from the coefficients by default.
    """
    coeffs = _coeff_list(P)
    if base is None:
        base = field_of([c for a in coeffs for c in a.terms.values()])
    if all(a.is_exact for a in coeffs):
        _check_squarefree(coeffs, base)
    return _Duval(coeffs, N, base).run()


def _check_squarefree(coeffs, base):
    if getattr(base, "is_extension", False):
        return
    x, y = sympy.symbols("x y")
    expr = 0
    for j, a in enumerate(coeffs):
        for (i,), c in a.terms.items():
            expr += to_sympy(c) * x**i * y**j
    expr = sympy.together(expr)
    num = sympy.numer(expr)
    g = sympy.gcd(num, sympy.diff(num, y))
    if sympy.Poly(g, y).degree() > 0:
        raise NotSquarefreeError("polynomial has a repeated factor")


def to_sympy(c):
    if isinstance(c, Fraction):
        return sympy.Rational(c.numerator, c.denominator)
    if isinstance(c, int):
        return sympy.Integer(c)
    return c.as_expr()


def newton_puiseux(P, N, base=None):
    """All ``deg_y P`` Puiseux roots, grouped by branch.

    Returns
    -------
    list of PuiseuxSeries
        Roots ordered by branch, then field conjugate, then deck index.
    """
    out = []
    for b in puiseux_branches(P, N, base):
        body = b.body_series()
        for conj in range(b.ext_degree):
            for deck in range(b.e):
                out.append(PuiseuxSeries(b.e, b.lam, body, b.field, b.index, conj, deck))
    return out


def branch_power_sums(branch, N, base):
    """Power sums ``S_1..S_d`` of the roots of one branch, as dense series in
    ``x`` modulo ``x^N`` over the ground field."""
    e = branch.e
    n = e * N
    one = base.one
    body = list(branch.body[:n]) + [0] * max(0, n - len(branch.body))
    fld = branch.field
    ext = getattr(fld, "is_extension", False)
    lam_inv = 1 / branch.lam if branch.lam != 1 else one
    lam_pows = [one]
    for _ in range(N):
        lam_pows.append(lam_pows[-1] * lam_inv)
    powk = [one] + [0] * (n - 1)
    sums = []
    for _ in range(branch.degree):
        powk = smul(powk, body, n)
        S = []
        for xn in range(N):
            c = powk[e * xn]
            if c == 0:
                S.append(base.zero)
                continue
            val = c * lam_pows[xn]
            tr = fld.trace(val) if ext else val
            S.append(base.convert(tr) * e)
        sums.append(S)
    return sums


def power_sums_to_poly(sums, N, base):
    """Monic polynomial (coefficients ``c_0..c_d`` as series mod ``x^N``) with
    the given power sums of its roots."""
    d = len(sums)
    one = [base.one] + [base.zero] * (N - 1)
    el = [one]
    for k in range(1, d + 1):
        acc = [base.zero] * N
        for i in range(1, k + 1):
            term = smul(el[k - i], sums[i - 1], N)
            acc = sadd(acc, term, N) if i % 2 == 1 else ssub(acc, term, N)
        el.append([c / k for c in acc])
    coeffs = [None] * (d + 1)
    for k in range(d + 1):
        coeffs[d - k] = el[k] if k % 2 == 0 else [-c for c in el[k]]
    return coeffs


def branch_factor(branch, N, base):
    """Factor of ``P`` over ``K[[x]]`` contributed by one branch, mod ``x^N``."""
    return power_sums_to_poly(branch_power_sums(branch, N, base), N, base)


def poly_product(polys, N, base):
    """Product of polynomials in ``y`` whose coefficients are dense series."""
    out = [[base.one] + [base.zero] * (N - 1)]
    for p in polys:
        new = [[base.zero] * N for _ in range(len(out) + len(p) - 1)]
        for i, a in enumerate(out):
            for j, b in enumerate(p):
                new[i + j] = sadd(new[i + j], smul(a, b, N), N)
        out = new
    return out


def recompose(branches, N, base):
    """``prod (y - xi)`` over all roots, coefficients as dense series mod ``x^N``."""
    return poly_product([branch_factor(b, N, base) for b in branches], N, base)


def check_recomposition(P, branches, N, base=None):
    """Whether the product of the branch factors equals ``P`` modulo ``x^N``."""
    coeffs = _coeff_list(P)
    if base is None:
        base = field_of([c for a in coeffs for c in a.terms.values()])
    prod = recompose(branches, N, base)
    if len(prod) != len(coeffs):
        return False
    for a, b in zip(coeffs, prod):
        for k in range(N):
            if base.convert(a.coeff((k,))) != b[k]:
                return False
    return True
