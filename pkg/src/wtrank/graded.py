"""Graded objects: weighted-homogeneous polynomials and homogeneous elements,
elements of the projective rings ``P_h[[x]]``, the extended valuation, and the
transform of a weighted-homogeneous polynomial under the monomial chart
``(x1, x2) = (v1 v2^c, v1 v2^(c+1))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .series import AtLeast, TSeries


class GradingError(ValueError):
    """A piece violates ``nu(a_k) - (alpha*k + beta)*nu(h) = k``."""

    def __init__(self, k, message):
        super().__init__(f"piece k={k}: {message}")
        self.k = k


def homogeneous_degree(p):
    """Common total degree of all terms, ``None`` if not homogeneous or zero."""
    degs = {sum(a) for a in p.terms}
    return degs.pop() if len(degs) == 1 else None


def nu(a):
    """Order of vanishing at the origin of a polynomial, a projective element
    or a ``(numerator, denominator)`` pair."""
    if isinstance(a, ProjElement):
        return a.valuation()
    if isinstance(a, tuple):
        num, den = a
        return nu(num) - nu(den)
    if isinstance(a, TSeries):
        return a.valuation()
    if a == 0:
        return math.inf
    return 0


def is_weighted_homog(gamma, omega):
    """Whether every monomial ``x^a z^k`` of ``gamma`` (``z`` last) has the same
    value of ``e*|a| + p*k`` where ``omega = p/e``."""
    omega = Fraction(omega)
    p, e = omega.numerator, omega.denominator
    weights = {e * sum(a[:-1]) + p * a[-1] for a in gamma.terms}
    return len(weights) <= 1


@dataclass(frozen=True)
class WeightedHomogPoly:
    """``Gamma(x, z)`` with ``Gamma(x^e, z^p)`` homogeneous, ``omega = p/e``.

    ``poly`` is an exact series in ``(x_1, ..., x_n, z)``.
    """

    poly: TSeries
    omega: Fraction

    def __post_init__(self):
        object.__setattr__(self, "omega", Fraction(self.omega))
        if not self.poly.is_exact:
            raise ValueError("weighted-homogeneous polynomials must be exact")
        if self.omega <= 0:
            raise ValueError("weight must be positive")
        if not is_weighted_homog(self.poly, self.omega):
            raise ValueError(f"polynomial is not {self.omega}-weighted homogeneous")

    @property
    def p(self):
        return self.omega.numerator

    @property
    def e(self):
        return self.omega.denominator

    @property
    def nx(self):
        return self.poly.nvars - 1

    @property
    def degree(self):
        return self.poly.deg_in(self.nx)

    def is_monic(self):
        top = self.poly.coeffs_in(self.nx).get(self.degree)
        return top is not None and set(top.terms) == {(0,) * self.nx} and top.constant_term() == 1

    def coefficient(self, i):
        """``f_i`` in ``Gamma = z^d + sum_i f_i z^(d-i)``."""
        return self.poly.coeffs_in(self.nx).get(self.degree - i, TSeries.zero(self.nx))

    def fmt(self, names=None):
        names = names or [f"x{i + 1}" for i in range(self.nx)] + ["z"]
        return self.poly.fmt(names)


@dataclass(frozen=True)
class HomogElement:
    """A root ``gamma`` of a monic weighted-homogeneous polynomial.

    Conjugate roots share ``minimal`` and differ by ``root_tag``.
    """

    minimal: WeightedHomogPoly
    root_tag: int = 0

    def __post_init__(self):
        if not self.minimal.is_monic():
            raise ValueError("minimal polynomial must be monic in z")

    @property
    def omega(self):
        return self.minimal.omega

    @property
    def degree(self):
        return self.minimal.degree


def valuation_ext(xi, gamma):
    """``nu(sum_k a_k gamma^k) = min_k nu(a_k) + k*omega`` for ``k < d``."""
    d = gamma.degree
    if len(xi) != d:
        raise ValueError(f"expected {d} coefficients, got {len(xi)}")
    vals = []
    for k, a in enumerate(xi):
        v = nu(a)
        if isinstance(v, AtLeast):
            raise ValueError("coefficient valuation is not certified")
        if v != math.inf:
            vals.append(Fraction(v) + k * gamma.omega)
    return min(vals) if vals else math.inf


def reduce_mod_minimal(coeffs, gamma):
    """Reduce ``sum_k coeffs[k] gamma^k`` (polynomial coefficients) to degree
    below ``d`` using the minimal polynomial."""
    d = gamma.degree
    c = list(coeffs)
    fs = [gamma.minimal.coefficient(i) for i in range(d + 1)]
    for k in range(len(c) - 1, d - 1, -1):
        top = c[k]
        if top.is_zero():
            continue
        c[k] = TSeries.zero(top.nvars)
        # gamma^d = -sum_{i>=1} f_i gamma^(d-i)
        for i in range(1, d + 1):
            if not fs[i].is_zero():
                c[k - i] = c[k - i] - top * fs[i]
    out = c[:d]
    while len(out) < d:
        out.append(TSeries.zero(coeffs[0].nvars))
    return out


def multiply_graded(a, b, gamma):
    """Product of two elements written in the basis ``1, gamma, ...``."""
    n = len(a) + len(b) - 1
    nv = a[0].nvars
    out = [TSeries.zero(nv) for _ in range(n)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return reduce_mod_minimal(out, gamma)


@dataclass(frozen=True)
class ProjElement:
    """``A = sum_k a_k(x) / h^(alpha*k + beta)`` in ``P_h[[x]]``.

    Every piece is an exact homogeneous polynomial of degree
    ``k + (alpha*k + beta)*deg(h)``.  ``order`` is the first index not known
    (``None`` when the stored pieces are the whole element).
    """

    h: TSeries
    alpha: int
    beta: int
    pieces: dict = field(default_factory=dict)
    order: int | None = None

    def __post_init__(self):
        dh = homogeneous_degree(self.h)
        if dh is None:
            raise ValueError("h must be a nonzero homogeneous polynomial")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        clean = {}
        for k, a in sorted(self.pieces.items()):
            if a.is_zero():
                continue
            if not a.is_exact:
                raise GradingError(k, "pieces must be exact polynomials")
            deg = homogeneous_degree(a)
            if deg is None:
                raise GradingError(k, "piece is not homogeneous")
            expo = self.alpha * k + self.beta
            if expo < 0:
                raise GradingError(k, "negative power of h")
            if deg - expo * dh != k:
                raise GradingError(k, f"nu(a_k) - (alpha*k+beta)*nu(h) = {deg - expo * dh} != {k}")
            if self.order is not None and k >= self.order:
                continue
            clean[k] = a
        object.__setattr__(self, "pieces", clean)

    @property
    def k0(self):
        return min(self.pieces, default=None)

    @property
    def nvars(self):
        return self.h.nvars

    def valuation(self):
        if self.pieces:
            return self.k0
        if self.order is None:
            return math.inf
        return AtLeast(self.order)

    def exponent(self, k):
        return self.alpha * k + self.beta

    def is_polynomial_data(self):
        return homogeneous_degree(self.h) == 0

    def rescale(self, alpha, beta):
        """Same element with a larger denominator schedule."""
        pieces = {}
        for k, a in self.pieces.items():
            extra = (alpha - self.alpha) * k + (beta - self.beta)
            if extra < 0:
                raise ValueError(f"cannot rescale piece k={k} to a smaller power of h")
            pieces[k] = a * self.h ** extra if extra else a
        return ProjElement(self.h, alpha, beta, pieces, self.order)

    def _common(self, other):
        if other.h != self.h:
            raise ValueError("projective elements over different h")
        A = max(self.alpha, other.alpha)
        ks = list(self.pieces) + list(other.pieces)
        B = max([self.beta, other.beta]
                + [self.alpha * k + self.beta - A * k for k in self.pieces]
                + [other.alpha * k + other.beta - A * k for k in other.pieces]
                + [-A * k for k in ks])
        return A, max(B, 0)

    def __add__(self, other):
        A, B = self._common(other)
        x, y = self.rescale(A, B), other.rescale(A, B)
        pieces = dict(x.pieces)
        for k, a in y.pieces.items():
            pieces[k] = pieces[k] + a if k in pieces else a
        order = _min_order(self.order, other.order)
        return ProjElement(self.h, A, B, pieces, order)

    def __neg__(self):
        return ProjElement(self.h, self.alpha, self.beta,
                           {k: -a for k, a in self.pieces.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ProjElement):
            return ProjElement(self.h, self.alpha, self.beta,
                               {k: a.scale(other) for k, a in self.pieces.items()}, self.order)
        if other.h != self.h:
            raise ValueError("projective elements over different h")
        A = max(self.alpha, other.alpha)
        B = self.beta + other.beta
        lo = [k for k in list(self.pieces) + list(other.pieces) if k < 0]
        if lo:
            raise ValueError("products are only supported for pieces with k >= 0")
        order = None
        if self.order is not None:
            order = self.order + (other.k0 if other.k0 is not None else 0)
        if other.order is not None:
            o2 = other.order + (self.k0 if self.k0 is not None else 0)
            order = o2 if order is None else min(order, o2)
        pieces = {}
        for k, a in self.pieces.items():
            for kk, b in other.pieces.items():
                K = k + kk
                if order is not None and K >= order:
                    continue
                extra = (A - self.alpha) * k + (A - other.alpha) * kk
                term = a * b
                if extra:
                    term = term * self.h ** extra
                pieces[K] = pieces[K] + term if K in pieces else term
        return ProjElement(self.h, A, B, pieces, order)

    @classmethod
    def from_polynomial(cls, f, h, order=None):
        """Embed a polynomial (split into homogeneous parts) with ``alpha=beta=0``."""
        pieces = f.exact().homogeneous_parts()
        if order is None and f.trunc is not None:
            order = f.trunc + 1
        return cls(h, 0, 0, pieces, order)

    @classmethod
    def one(cls, h):
        return cls(h, 0, 0, {0: TSeries.one(h.nvars)})

    def fmt(self, names=None):
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for k, a in sorted(self.pieces.items()):
            parts.append(f"[k={k}] ({a.fmt(names)})/h^{self.exponent(k)}")
        return " + ".join(parts) if parts else "0"


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def proj_normalize(h, alpha, beta, pieces, order=None):
    """Validated :class:`ProjElement`; raises :class:`GradingError` on the
    first offending piece."""
    return ProjElement(h, alpha, beta, dict(pieces), order)


def proj_eval_truncate(A, N):
    """Partial sum over ``k <= K`` on the single denominator ``h^(alpha*K+beta)``.

    Returns
    -------
    (TSeries, TSeries, int)
        Numerator, denominator and the last index ``K`` included.
    """
    ks = [k for k in A.pieces if k <= N]
    if A.order is not None:
        ks = [k for k in ks if k < A.order]
    if not ks:
        return TSeries.zero(A.nvars), TSeries.one(A.nvars), None
    K = max(ks)
    num = TSeries.zero(A.nvars)
    for k in ks:
        extra = A.alpha * (K - k)
        num = num + (A.pieces[k] * A.h ** extra if extra else A.pieces[k])
    den = A.h ** A.exponent(K)
    return num, den, K


def gamma_blowup_transform(gamma, c):
    """``z^d + sum_j v2^(c*p*j) f_(e*j)(1, v2) z^(d - e*j)``.

    Parameters
    ----------
    gamma : WeightedHomogPoly
        Monic polynomial in ``(x1, x2, z)``.
    c : int
        Chart index, ``c >= 0``.

    Returns
    -------
    TSeries
        Polynomial in ``(v2, z)``.
    """
    if gamma.nx != 2:
        raise ValueError("the transform is defined for two base variables")
    if not gamma.is_monic():
        raise ValueError("polynomial is not monic in z")
    if c < 0:
        raise ValueError("chart index must be non-negative")
    d, p, e = gamma.degree, gamma.p, gamma.e
    for i in range(1, d + 1):
        if i % e and not gamma.coefficient(i).is_zero():
            raise ValueError(f"coefficient f_{i} must vanish since {e} does not divide {i}")
    terms = {(0, d): Fraction(1)}
    for j in range(1, d // e + 1):
        f = gamma.coefficient(e * j)
        for (a1, a2), coef in f.terms.items():
            key = (c * p * j + a2, d - e * j)
            terms[key] = terms.get(key, 0) + coef
    return TSeries(2, terms)


def gamma_transform_identity(gamma, c):
    """Check ``Gamma(w^e v2^c, w^e v2^(c+1), w^p z) = w^(d p) Gamma_bar(v2, z)``
    exactly, with ``v1 = w^e``; variables ordered ``(w, v2, z)``."""
    e, p, d = gamma.e, gamma.p, gamma.degree
    subs = [TSeries.monomial((e, c, 0)), TSeries.monomial((e, c + 1, 0)),
            TSeries.monomial((p, 0, 1))]
    lhs = gamma.poly.compose(subs)
    bar = gamma_blowup_transform(gamma, c)
    rhs = bar.insert_var(0).shift_monomial((d * p, 0, 0))
    return lhs == rhs
