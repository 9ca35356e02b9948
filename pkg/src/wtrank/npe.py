"""Graded factorization of a monic polynomial in ``y`` over ``K[[x1, x2]]``.

The coefficients are restricted to the generic line ``x2 = s*x1`` with ``s``
transcendental, so the problem becomes univariate over ``Q(s)``.  Each
rational Puiseux branch there gives one factor ``Q_i`` (through the traces of
its roots) and one homogeneous element ``gamma_i = g(s) T^p`` generating the
branch field.  Regrouping by powers of ``t = x1`` and substituting
``s = x2/x1`` turns every coefficient into a sum of homogeneous fractions
``a_k(x) / h^(alpha*k + beta)``; ``h`` is the squarefree part of all the
denominators that occur.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd

from .fields import (AlgNum, ExtensionField, QQ_FIELD, QS_FIELD, pdeg, pdivmod,
                     pmul, ppow, ptrim)
from .graded import HomogElement, ProjElement, WeightedHomogPoly, homogeneous_degree
from .puiseux import branch_factor, puiseux_branches, smul
from .series import TSeries


@dataclass(frozen=True)
class GradedFactor:
    """One factor ``Q = y^D + sum_j coeffs[j] y^j`` with its homogeneous element.

    ``xi`` maps ``K`` to the projective element ``A_K`` in
    ``xi = sum_K A_K gamma^K`` for the roots of ``Q``.
    """

    degree: int
    coeffs: tuple
    gamma: HomogElement
    xi: dict
    ramification: int
    residue_degree: int

    def conjugates(self):
        """The ``degree`` conjugate homogeneous elements of this factor."""
        return [HomogElement(self.gamma.minimal, k) for k in range(self.gamma.degree)]


@dataclass(frozen=True)
class GradedFactorization:
    factors: tuple
    h: TSeries
    order: int

    @property
    def h_degree(self):
        return homogeneous_degree(self.h)


# ---------------------------------------------------------------------------
# homogeneous polynomials in (x1, x2) <-> polynomials in s

def homogenize(coeffs, degree):
    """``x1^degree * p(x2/x1)`` for a rational coefficient tuple ``p``."""
    if pdeg(coeffs) > degree:
        raise ValueError("polynomial degree exceeds the homogeneous degree")
    return TSeries(2, {(degree - a, a): Fraction(c) for a, c in enumerate(coeffs) if c != 0})


def dehomogenize(f):
    """``f(1, s)`` as a rational coefficient tuple (``f`` homogeneous)."""
    out = {}
    for (a1, a2), c in f.terms.items():
        out[a2] = out.get(a2, 0) + c
    n = max(out, default=-1) + 1
    return ptrim(out.get(i, Fraction(0)) for i in range(n))


def on_generic_line(f, base=QS_FIELD):
    """``f(t, s t)`` as a univariate series in ``t`` over ``Q(s)``."""
    acc = {}
    for (a1, a2), c in f.terms.items():
        k = a1 + a2
        acc.setdefault(k, {})
        acc[k][a2] = acc[k].get(a2, 0) + c
    terms = {}
    for k, poly in acc.items():
        n = max(poly) + 1
        val = base.from_poly([poly.get(i, 0) for i in range(n)])
        if val != 0:
            terms[(k,)] = val
    return TSeries(1, terms, f.trunc)


# ---------------------------------------------------------------------------

class _Denominators:
    """Collects graded rational functions and builds a common ``h``."""

    def __init__(self):
        self.irreducibles = []      # monic rational tuples
        self.needs_x1 = False
        self._cache = {}

    def factor(self, den):
        if den not in self._cache:
            facs = [] if pdeg(den) == 0 else QQ_FIELD.factor(den)
            self._cache[den] = facs
            for f, _ in facs:
                if f not in self.irreducibles:
                    self.irreducibles.append(f)
        return self._cache[den]

    def register(self, k, num, den):
        self.factor(den)
        if pdeg(num) - pdeg(den) - k > 0:
            self.needs_x1 = True

    def h_parts(self):
        irr = sorted(self.irreducibles, key=lambda f: (pdeg(f), [str(c) for c in reversed(f)]))
        h1 = (Fraction(1),)
        for f in irr:
            h1 = pmul(h1, f)
        H = pdeg(h1) + (1 if self.needs_x1 else 0)
        return h1, H

    def exponent_needed(self, k, num, den):
        """Least ``E`` with ``num/den * h(1,s)^E`` polynomial of degree ``<= k + E*H``."""
        facs = self.factor(den)
        E = max((m for _, m in facs), default=0)
        o = pdeg(num) - pdeg(den) - k
        if o > 0:
            E = max(E, o)
        return E


def _choose_alpha_beta(needs):
    """Pick ``(alpha, beta)`` with ``alpha*k + beta >= E_k`` and ``>= 0``.

    The smallest feasible ``beta`` is preferred, then the smallest ``alpha``.
    """
    if not needs:
        return 0, 0
    top = max(max(E for _, E in needs), 0) + max(abs(k) for k, _ in needs) + 1
    best = None
    for alpha in range(0, top + 1):
        beta = max([0] + [E - alpha * k for k, E in needs] + [-alpha * k for k, _ in needs])
        cand = (beta, alpha)
        if best is None or cand < best:
            best = cand
    return best[1], best[0]


def _make_proj(graded, dens, h, h1, H, order):
    """``graded``: dict k -> element of Q(s) (coefficient of t^k)."""
    parts = {}
    needs = []
    for k, val in graded.items():
        num, den = QS_FIELD.numer_denom(val)
        if not num:
            continue
        parts[k] = (num, den)
        needs.append((k, dens.exponent_needed(k, num, den)))
    alpha, beta = _choose_alpha_beta(needs)
    pieces = {}
    for k, (num, den) in parts.items():
        E = alpha * k + beta
        q, r = pdivmod(pmul(num, ppow(h1, E)), den)
        if r:
            raise ArithmeticError("denominator does not divide a power of h")
        pieces[k] = homogenize(q, k + E * H)
    return ProjElement(h, alpha, beta, pieces, order)


def _primitive_choice(branch, K):
    """Find ``gamma = g*T^p`` generating the branch field over ``Q(s)((t))``."""
    fld = branch.field
    e = branch.e
    ext = getattr(fld, "is_extension", False)
    f = fld.degree if ext else 1
    lam = branch.lam
    if e == 1 and f == 1:
        return fld.one if not ext else fld.one, 1
    cands = []
    for j, y in enumerate(branch.body):
        if j >= 1 and y != 0 and gcd(j, e) == 1:
            cands.append((y, j))
    if ext:
        theta = fld.gen
        for p in range(1, 2 * e + 2):
            if gcd(p, e) == 1:
                for r in range(0, 6):
                    cands.append((theta + r, p))
    for g, p in cands:
        b = g ** e * lam ** (-p) if lam != 1 else g ** e
        if f == 1 or fld.is_primitive(b):
            return g, p
    raise ArithmeticError("no primitive homogeneous element found")


def _minpoly_in(fld, b):
    if getattr(fld, "is_extension", False):
        return fld.minpoly(b)
    return (-QS_FIELD.convert(b), QS_FIELD.one)


def _gamma_for_branch(branch, dens):
    """Build the homogeneous element and return ``(Gamma, g, p)``."""
    fld = branch.field
    e = branch.e
    ext = getattr(fld, "is_extension", False)
    f = fld.degree if ext else 1
    g, p = _primitive_choice(branch, None)
    lam = branch.lam
    b = g ** e * (lam ** (-p) if lam != 1 else 1)
    mu = _minpoly_in(fld, b)
    # clear denominators of the minimal polynomial: b -> D^e b
    dlist = [QS_FIELD.numer_denom(c)[1] for c in mu]
    D = (Fraction(1),)
    for d in dlist:
        D = _plcm(D, d)
    if pdeg(D) > 0:
        Dq = QS_FIELD.from_poly(D)
        g = g * Dq
        b = b * Dq ** e
        mu = _minpoly_in(fld, b)
    nums = [QS_FIELD.numer_denom(c)[0] for c in mu]
    k = 0
    for i in range(f):
        need = pdeg(nums[i])
        if need < 0:
            continue
        while need > (p + e * k) * (f - i):
            k += 1
    if k:
        g = g * lam ** k
        p = p + e * k
    terms = {}
    for i in range(f + 1):
        num = nums[i]
        deg = p * (f - i)
        for a, c in enumerate(num):
            if c != 0:
                terms[(deg - a, a, e * i)] = Fraction(c)
    Gamma = WeightedHomogPoly(TSeries(3, terms), Fraction(p, e))
    return Gamma, g, p, b


def _plcm(a, b):
    from .fields import pgcd
    g = pgcd(a, b)
    return pdivmod(pmul(a, b), g)[0] if pdeg(g) > 0 else pmul(a, b)


def _xi_graded(branch, g, p, b, N):
    """Coordinates ``A_K`` (graded, over Q(s)) of the branch root in the
    basis ``gamma^K``; returns ``({K: {grade: value}}, {K: order})``."""
    fld = branch.field
    e = branch.e
    ext = getattr(fld, "is_extension", False)
    f = fld.degree if ext else 1
    lam = branch.lam
    # b-basis change matrix: columns are coordinates of b^i in the theta basis
    if ext:
        cols = []
        bp = fld.one
        for _ in range(f):
            cols.append(fld.coords(bp))
            bp = bp * b
        inv = _invert_matrix([[cols[j][i] for j in range(f)] for i in range(f)])
    out = {}
    limit = len(branch.body)
    ginv = 1 / g if g != 1 else fld.one
    laminv = 1 / lam if lam != 1 else fld.one
    for j in range(limit):
        y = branch.body[j]
        if y == 0:
            continue
        kp = next(k for k in range(e) if (p * k - j) % e == 0)
        l = (j - p * kp) // e
        w = y * ginv ** kp * (laminv ** l if l >= 0 else lam ** (-l))
        if ext:
            w_coords = fld.coords(w)
            r = [sum((inv[i][c] * w_coords[c] for c in range(f)), QS_FIELD.zero)
                 for i in range(f)]
        else:
            r = [QS_FIELD.convert(w)]
        for i in range(f):
            if r[i] == 0:
                continue
            K = kp + e * i
            grade = l - p * i
            out.setdefault(K, {})
            out[K][grade] = out[K].get(grade, QS_FIELD.zero) + r[i]
    orders = {}
    for K in range(e * f):
        kp, i = K % e, K // e
        if branch.exact:
            orders[K] = None
        else:
            orders[K] = (branch.prec - 1 - p * kp) // e - p * i + 1
    return out, orders


def _invert_matrix(m):
    n = len(m)
    a = [list(row) + [QS_FIELD.one if i == j else QS_FIELD.zero for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                fac = a[r][col]
                a[r] = [x - fac * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def npe_factor(P, N):
    """Graded factorization of ``P`` modulo ``(x1, x2)^N``.

    Parameters
    ----------
    P : list of TSeries or TSeries
        Coefficients ``a_0..a_D`` in ``(x1, x2)`` of a monic polynomial in
        ``y``, or a series in ``(x1, x2, y)``.
    N : int
        Order of the factorization.

    Returns
    -------
    GradedFactorization
    """
    coeffs = _coeffs_xy(P)
    line = [on_generic_line(a) for a in coeffs]
    branches = puiseux_branches(line, N, QS_FIELD)
    dens = _Denominators()
    raw = []
    for br in branches:
        qcoeffs = branch_factor(br, N, QS_FIELD)
        graded_q = [{k: c for k, c in enumerate(series) if c != 0} for series in qcoeffs[:-1]]
        Gamma, g, p, b = _gamma_for_branch(br, dens)
        xi, orders = _xi_graded(br, g, p, b, N)
        for gq in graded_q:
            for k, v in gq.items():
                dens.register(k, *QS_FIELD.numer_denom(v))
        for K, gx in xi.items():
            for k, v in gx.items():
                dens.register(k, *QS_FIELD.numer_denom(v))
        raw.append((br, graded_q, Gamma, xi, orders))
    h1, H = dens.h_parts()
    h = homogenize(h1, H)
    factors = []
    for br, graded_q, Gamma, xi, orders in raw:
        pcoeffs = tuple(_make_proj(gq, dens, h, h1, H, N) for gq in graded_q)
        xis = {K: _make_proj(gx, dens, h, h1, H, orders.get(K)) for K, gx in sorted(xi.items())}
        factors.append(GradedFactor(br.degree, pcoeffs, HomogElement(Gamma), xis,
                                    br.e, br.ext_degree))
    return GradedFactorization(tuple(factors), h, N)


def _coeffs_xy(P):
    if isinstance(P, TSeries):
        if P.nvars != 3:
            raise ValueError("expected a series in (x1, x2, y)")
        parts = P.coeffs_in(2)
        D = max(parts)
        return [parts.get(j, TSeries(2, {}, P.trunc)) for j in range(D + 1)]
    coeffs = list(P)
    for a in coeffs:
        if a.nvars != 2:
            raise ValueError("graded factorization is implemented for two base variables")
    return coeffs


def recompose_graded(fact):
    """Multiply the factors; returns projective coefficients ``c_0..c_D``."""
    h = fact.h
    one = ProjElement.one(h)
    prod = [one]
    for fac in fact.factors:
        q = list(fac.coeffs) + [one]
        new = [None] * (len(prod) + len(q) - 1)
        for i, a in enumerate(prod):
            for j, b in enumerate(q):
                t = a * b
                new[i + j] = t if new[i + j] is None else new[i + j] + t
        prod = new
    return prod


def check_graded_recomposition(P, fact):
    """Whether ``prod Q_i`` equals ``P`` modulo ``(x)^N`` (exact comparison of
    every homogeneous piece after clearing the powers of ``h``)."""
    coeffs = _coeffs_xy(P)
    prod = recompose_graded(fact)
    if len(prod) != len(coeffs):
        return False
    N = fact.order
    for a, c in zip(coeffs, prod):
        parts = a.exact().homogeneous_parts()
        for k in range(N):
            expected = parts.get(k, TSeries.zero(2))
            got = c.pieces.get(k, TSeries.zero(2))
            if got != expected * c.h ** c.exponent(k):
                return False
    return True
