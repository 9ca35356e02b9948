"""Weierstrass division and preparation, implicit functions, and the
Euclidean division degree bound for polynomials monic in ``z``.

Division follows the order-driven scheme: the running remainder is scanned
by increasing weight ``w(a) = (d+1)*(|a| - a_i) + a_i`` where ``x_i`` is the
distinguished variable and ``d`` the regular order of the divisor.  Under this
weight the term ``x_i^d`` is the unique initial term of the divisor, so every
step strictly increases the weight of whatever is left behind.  Each initial
term is either divisible by ``x_i^d`` (it goes to the quotient) or not (it goes
to the remainder).
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .series import AtLeast, TSeries, TruncationError


class NotRegularError(ValueError):
    """The series is not regular in the requested variable to known order."""


class DegenerateError(ValueError):
    """The implicit function theorem does not apply."""


@dataclass(frozen=True)
class WPolynomial:
    """``x_i^d + a_1 x_i^{d-1} + ... + a_d`` with ``a_k(0) = 0``.

    ``coeffs[k-1]`` is ``a_k``, a series in the remaining variables.
    """

    var: int
    nvars: int
    coeffs: tuple

    def __post_init__(self):
        for a in self.coeffs:
            if a.constant_term() != 0:
                raise ValueError("Weierstrass polynomial coefficients must vanish at 0")

    @property
    def degree(self):
        return len(self.coeffs)

    def to_series(self):
        """The polynomial as a series in all ``nvars`` variables."""
        d = self.degree
        alpha = [0] * self.nvars
        alpha[self.var] = d
        out = TSeries.monomial(alpha)
        for k, a in enumerate(self.coeffs, start=1):
            lifted = a.insert_var(self.var)
            alpha[self.var] = d - k
            out = out + lifted.shift_monomial(tuple(alpha))
        return out


@dataclass(frozen=True)
class DivisionResult:
    """``G = F*Q + R`` with ``deg_{x_i} R < d``.

    Attributes
    ----------
    quotient : TSeries
        ``Q``, exact to ``quotient.trunc``.
    remainder : TSeries
        ``R`` as a series in all variables.
    remainder_coeffs : tuple of TSeries
        ``r_j`` with ``R = sum_j r_j(x') x_i^j``; each carries its own order.
    degree : int
        Regular order ``d`` of the divisor.
    weight_bound : int or None
        Largest weight processed (``None`` when the division terminated).
    """

    quotient: TSeries
    remainder: TSeries
    remainder_coeffs: tuple
    degree: int
    var: int
    weight_bound: int | None

    @property
    def certified_order(self):
        """Total degree up to which ``G - F*Q - R`` is known to vanish."""
        if self.weight_bound is None:
            return None
        return self.weight_bound // (self.degree + 1)


def regular_order(f, i):
    """Order ``d`` of ``f(0, ..., x_i, ..., 0)`` in ``x_i``."""
    v = f.restrict_axis(i).valuation()
    if isinstance(v, AtLeast) or v == float("inf"):
        raise NotRegularError(f"series is not regular in variable {i + 1} to certified order")
    return v


def _weight(alpha, i, d):
    ai = alpha[i]
    return (d + 1) * (sum(alpha) - ai) + ai


def _min_none(*vals):
    vals = [v for v in vals if v is not None]
    return min(vals) if vals else None


def wdivide(G, F, i, order=None):
    """Weierstrass division of ``G`` by ``F`` with respect to ``x_i``.

    Parameters
    ----------
    G, F : TSeries
        Dividend and divisor in the same variables; ``F`` regular in ``x_i``.
    i : int
        0-based index of the distinguished variable.
    order : int, optional
        Target total degree for the quotient when both inputs are exact
        polynomials.  Truncated inputs set their own budget.

    Returns
    -------
    DivisionResult

    Notes
    -----
    With truncation ``N = min(G.trunc, F.trunc)`` every term of weight ``<= N``
    of the running remainder is known exactly, which certifies ``Q`` to total
    degree ``(N - d) // (d + 1)`` and ``r_j`` to ``(N - j) // (d + 1)``.
    """
    if G.nvars != F.nvars:
        raise ValueError("variable count mismatch")
    d = regular_order(F, i)
    n = G.nvars
    lead = F.coeff(tuple(d if j == i else 0 for j in range(n)))
    budget = _min_none(G.trunc, F.trunc)
    if budget is None:
        if order is None:
            raise TruncationError("exact inputs need an explicit order")
        W = (d + 1) * order + d
    else:
        W = budget if order is None else min(budget, (d + 1) * order + d)
    fterms = [(a, c) for a, c in F.terms.items()]
    fweights = [(a, c, _weight(a, i, d)) for a, c in fterms]

    H = {}
    heap = []
    dropped = False
    for a, c in G.terms.items():
        w = _weight(a, i, d)
        if w <= W:
            H[a] = c
            heapq.heappush(heap, (w, a))
        else:
            dropped = True
    Q, R = {}, {}
    while heap:
        w, a = heapq.heappop(heap)
        c = H.pop(a, 0)
        if c == 0:
            continue
        if a[i] >= d:
            qa = tuple(x - d if j == i else x for j, x in enumerate(a))
            qc = c / lead
            Q[qa] = Q.get(qa, 0) + qc
            wq = w - d
            for fa, fc, fw in fweights:
                if fw + wq > W:
                    dropped = True
                    continue
                b = tuple(x + y for x, y in zip(qa, fa))
                if b == a:
                    continue
                nv = H.get(b, 0) - qc * fc
                if b not in H:
                    heapq.heappush(heap, (fw + wq, b))
                H[b] = nv
        else:
            R[a] = c
    finished = not dropped
    if budget is None and finished:
        qtrunc, rtruncs = None, [None] * d
        W_out = None
    else:
        qtrunc = (W - d) // (d + 1)
        rtruncs = [(W - j) // (d + 1) for j in range(d)]
        W_out = W
    quotient = TSeries(n, Q, qtrunc)
    rcoeffs = []
    for j in range(d):
        part = {a[:i] + a[i + 1:]: c for a, c in R.items() if a[i] == j}
        rcoeffs.append(TSeries(n - 1, part, rtruncs[j]))
    rtrunc = None if W_out is None else W // (d + 1)
    remainder = TSeries(n, R, rtrunc)
    return DivisionResult(quotient, remainder, tuple(rcoeffs), d, i, W_out)


def wprepare(f, i, order=None):
    """Weierstrass preparation ``f = U * P``.

    Divides ``x_i^d`` by ``f``: from ``x_i^d = f*Q + R`` one gets
    ``P = x_i^d - R`` and ``U = 1/Q``.

    Returns
    -------
    (TSeries, WPolynomial)
        The unit ``U`` and the Weierstrass polynomial ``P``.
    """
    d = regular_order(f, i)
    n = f.nvars
    xd = TSeries.monomial(tuple(d if j == i else 0 for j in range(n)))
    res = wdivide(xd, f, i, order=order)
    Q = res.quotient
    if Q.constant_term() == 0:
        raise NotRegularError("quotient is not a unit")
    if Q.trunc is None and len(Q.terms) == 1:
        U = Q.invert()
    else:
        U = Q.invert(order=Q.trunc if Q.trunc is not None else order)
    coeffs = tuple(-res.remainder_coeffs[d - k] for k in range(1, d + 1))
    return U, WPolynomial(i, n, coeffs)


def _deg_x(p, zvar):
    return max((sum(a) - a[zvar] for a in p.terms), default=-1)


def poly_divide_bound(p, gamma, zvar=None):
    """Euclidean division of ``p`` by ``gamma`` (monic in ``z``).

    Both inputs are exact polynomials in ``(x_1, ..., x_n, z)``; ``z`` is the
    last variable unless ``zvar`` says otherwise.

    Returns
    -------
    (TSeries, TSeries, bool)
        ``q``, ``r`` with ``p = gamma*q + r`` and ``deg_z r < deg_z gamma``,
        and whether ``deg_x r <= deg_x p + (d - e + 1) deg_x gamma`` holds with
        ``d = deg_z p`` and ``e = deg_z gamma``.
    """
    if not (p.is_exact and gamma.is_exact):
        raise ValueError("polynomial division needs exact polynomials")
    zvar = p.nvars - 1 if zvar is None else zvar
    e = gamma.deg_in(zvar)
    if e < 0:
        raise ValueError("divisor is zero")
    top = gamma.coeffs_in(zvar)[e]
    if not (len(top.terms) == 1 and top.constant_term() == 1):
        raise ValueError("divisor is not monic in z")
    d = p.deg_in(zvar)
    n = p.nvars
    q = TSeries.zero(n)
    r = p
    tail = gamma - TSeries.monomial(tuple(e if j == zvar else 0 for j in range(n)))
    while r.deg_in(zvar) >= e:
        k = r.deg_in(zvar)
        lead = r.coeffs_in(zvar)[k]
        shift = tuple(k - e if j == zvar else 0 for j in range(n))
        t = lead.insert_var(zvar).shift_monomial(shift)
        q = q + t
        # r - t*gamma; the z^k part cancels exactly
        r = r - t * gamma
    degp = _deg_x(p, zvar)
    bound = max(degp, 0) + max(d - e + 1, 0) * max(_deg_x(gamma, zvar), 0)
    ok = _deg_x(r, zvar) <= bound
    return q, r, ok


def implicit_solve(g, i, order=None):
    """Solve ``g(..., xi, ...) = 0`` for ``u_i = xi(u')`` with ``xi(0) = 0``.

    Parameters
    ----------
    g : TSeries
        Series with ``g(0) = 0`` and ``dg/du_i (0) != 0``.
    i : int
        0-based index of the solved variable.
    order : int, optional
        Required for exact polynomial ``g``; otherwise ``g.trunc`` is used.

    Returns
    -------
    TSeries
        ``xi`` in the remaining variables, exact to the returned ``trunc``.
    """
    if g.constant_term() != 0:
        raise DegenerateError("g(0) must vanish")
    n = g.nvars
    lin = g.coeff(tuple(1 if j == i else 0 for j in range(n)))
    if lin == 0:
        raise DegenerateError(f"dg/du{i + 1}(0) = 0: implicit function theorem inapplicable")
    N = _min_none(g.trunc, order)
    if N is None:
        raise TruncationError("exact inputs need an explicit order")
    m = n - 1
    others = [TSeries.var(j, m, N) for j in range(m)]
    xi = TSeries.zero(m, N)
    for k in range(1, N + 1):
        subs = others[:i] + [xi] + others[i:]
        val = g.compose(subs, order=N)
        part = val.homogeneous_part(k)
        if part.is_zero():
            continue
        xi = xi - part.scale(Fraction(1) / lin if isinstance(lin, Fraction) else 1 / lin).truncate(N)
    return xi
