"""Truncated multivariate formal power series with exact coefficients.

A :class:`TSeries` stores the terms of total degree ``<= trunc``; every stored
coefficient is exact and every term of degree ``<= trunc`` that is absent is
zero.  ``trunc=None`` marks an exact polynomial (finite support known).
Arithmetic takes the minimum truncation of its operands.
"""
from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction

from .fields import AlgNum


class NotAUnitError(ArithmeticError):
    """Inversion of a series with zero constant term."""


class TruncationError(ValueError):
    """A result cannot be certified at the available truncation order."""


class AtLeast:
    """Valuation sentinel for a series that vanishes up to its truncation."""

    __slots__ = ("bound",)

    def __init__(self, bound):
        self.bound = bound

    def __eq__(self, other):
        return isinstance(other, AtLeast) and other.bound == self.bound

    def __hash__(self):
        return hash(("AtLeast", self.bound))

    def __repr__(self):
        return f">= {self.bound}"


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_idx(a, b):
    return tuple(x + y for x, y in zip(a, b))


def term_key(alpha):
    """Canonical ordering: total degree ascending, then x1-heavy first."""
    return (sum(alpha), tuple(-a for a in alpha))


class TSeries:
    """Sparse truncated power series in ``nvars`` variables.

    Parameters
    ----------
    nvars : int
        Number of variables.
    terms : dict, optional
        Map from exponent tuples to exact coefficients.  Zeros and terms of
        degree above ``trunc`` are dropped.
    trunc : int or None
        Largest total degree known exactly; ``None`` for an exact polynomial.
    """

    __slots__ = ("nvars", "trunc", "terms")

    def __init__(self, nvars, terms=None, trunc=None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.nvars = nvars
        self.trunc = trunc
        clean = {}
        if terms:
            for alpha, c in terms.items():
                alpha = tuple(alpha)
                if len(alpha) != nvars:
                    raise ValueError(f"exponent {alpha} has wrong length for {nvars} variables")
                if c == 0:
                    continue
                if trunc is not None and sum(alpha) > trunc:
                    continue
                if isinstance(c, int):
                    c = Fraction(c)
                clean[alpha] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, nvars, trunc=None):
        return cls(nvars, {}, trunc)

    @classmethod
    def const(cls, c, nvars, trunc=None):
        return cls(nvars, {(0,) * nvars: c}, trunc)

    @classmethod
    def one(cls, nvars, trunc=None):
        return cls.const(Fraction(1), nvars, trunc)

    @classmethod
    def var(cls, i, nvars, trunc=None):
        """The coordinate ``x_{i+1}`` (0-based ``i``)."""
        alpha = [0] * nvars
        alpha[i] = 1
        return cls(nvars, {tuple(alpha): Fraction(1)}, trunc)

    @classmethod
    def monomial(cls, alpha, c=1, trunc=None):
        return cls(len(alpha), {tuple(alpha): c}, trunc)

    # -- basic queries -----------------------------------------------------
    @property
    def is_exact(self):
        return self.trunc is None

    def is_zero(self):
        """True when no term is known to be nonzero (exact or to order)."""
        return not self.terms

    def coeff(self, alpha):
        return self.terms.get(tuple(alpha), 0)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def degree(self):
        """Largest total degree of a stored term (-1 for zero)."""
        return max((sum(a) for a in self.terms), default=-1)

    def deg_in(self, i):
        return max((a[i] for a in self.terms), default=-1)

    def valuation(self):
        """Least total degree of a nonzero term.

        Returns an ``int`` when certified, :class:`AtLeast` ``(trunc+1)`` for a
        truncated series with no stored terms, and ``math.inf`` for the exact
        zero polynomial.
        """
        if self.terms:
            return min(sum(a) for a in self.terms)
        if self.trunc is None:
            return math.inf
        return AtLeast(self.trunc + 1)

    def order_in(self, i):
        """Least exponent of ``x_i`` among stored terms (``None`` if zero)."""
        return min((a[i] for a in self.terms), default=None)

    def homogeneous_part(self, k):
        return TSeries(self.nvars, {a: c for a, c in self.terms.items() if sum(a) == k})

    def homogeneous_parts(self):
        parts = defaultdict(dict)
        for a, c in self.terms.items():
            parts[sum(a)][a] = c
        return {k: TSeries(self.nvars, v) for k, v in sorted(parts.items())}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: term_key(t[0]))

    def coefficients(self):
        return list(self.terms.values())

    # -- truncation --------------------------------------------------------
    def truncate(self, n):
        """Forget everything above total degree ``n``."""
        if n is None:
            return self
        return TSeries(self.nvars, self.terms, _min_trunc(self.trunc, n))

    def exact(self):
        """Reinterpret the stored terms as an exact polynomial."""
        return TSeries(self.nvars, self.terms, None)

    def with_trunc(self, n):
        return TSeries(self.nvars, self.terms, n)

    # -- ring operations ---------------------------------------------------
    def _check(self, other):
        if not isinstance(other, TSeries):
            return TSeries.const(other, self.nvars)
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out[a] + c if a in out else c
        return TSeries(self.nvars, out, _min_trunc(self.trunc, other.trunc))

    __radd__ = __add__

    def __neg__(self):
        return TSeries(self.nvars, {a: -c for a, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c):
        return TSeries(self.nvars, {a: v * c for a, v in self.terms.items()}, self.trunc)

    def __mul__(self, other):
        if not isinstance(other, TSeries):
            return self.scale(other)
        other = self._check(other)
        n = _min_trunc(self.trunc, other.trunc)
        return TSeries(self.nvars, _mul_terms(self.terms, other.terms, n), n)

    def __rmul__(self, other):
        if isinstance(other, TSeries):
            return other.__mul__(self)
        return TSeries(self.nvars, {a: other * v for a, v in self.terms.items()}, self.trunc)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power; use invert()")
        out = TSeries.one(self.nvars, self.trunc)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            if other == 0:
                return not self.terms
            return NotImplemented
        return (self.nvars == other.nvars and self.trunc == other.trunc
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, self.trunc, frozenset(self.terms.items())))

    def equal_to_order(self, other, n):
        """Whether the two series agree on every term of degree ``<= n``."""
        diff = self - other
        return all(sum(a) > n for a in diff.terms)

    def map_coeffs(self, fn):
        return TSeries(self.nvars, {a: fn(c) for a, c in self.terms.items()}, self.trunc)

    # -- analytic operations -------------------------------------------------
    def invert(self, order=None):
        """Multiplicative inverse of a unit.

        The result is exact up to ``trunc`` (or ``order`` when given, which is
        required for exact polynomial inputs).
        """
        c0 = self.constant_term()
        if c0 == 0:
            raise NotAUnitError("series with zero constant term is not a unit")
        n = _min_trunc(self.trunc, order)
        if n is None:
            if len(self.terms) == 1:
                return TSeries.const(1 / c0 if not isinstance(c0, Fraction) else Fraction(1) / c0,
                                     self.nvars)
            raise TruncationError("inverse of a non-constant polynomial needs an order")
        parts = {k: p.terms for k, p in self.homogeneous_parts().items() if k > 0}
        inv0 = 1 / c0 if not isinstance(c0, Fraction) else Fraction(1) / c0
        g = {0: {(0,) * self.nvars: inv0}}
        for k in range(1, n + 1):
            acc = {}
            for j, fj in parts.items():
                if j > k or (k - j) not in g:
                    continue
                for a, c in _mul_terms(fj, g[k - j], None).items():
                    acc[a] = acc[a] + c if a in acc else c
            g[k] = {a: -c * inv0 for a, c in acc.items() if c != 0}
        out = {}
        for part in g.values():
            out.update(part)
        return TSeries(self.nvars, out, n)

    def compose(self, gs, order=None):
        """Substitute ``x_i -> gs[i]``.

        Constant terms in ``gs`` are only allowed when ``self`` is an exact
        polynomial.  The result is exact up to the minimum truncation of the
        inputs (and ``order`` when given).
        """
        if len(gs) != self.nvars:
            raise ValueError(f"expected {self.nvars} substitutions, got {len(gs)}")
        if not gs:
            return self
        m = gs[0].nvars
        for g in gs:
            if g.nvars != m:
                raise ValueError("substituted series have different variable counts")
        n = self.trunc
        if n is not None:
            for g in gs:
                if g.constant_term() != 0:
                    raise ValueError("substitution outside the maximal ideal into a truncated series")
        for g in gs:
            n = _min_trunc(n, g.trunc)
        n = _min_trunc(n, order)
        powers = [[TSeries.one(m, n)] for _ in gs]

        def power(i, k):
            p = powers[i]
            while len(p) <= k:
                p.append(TSeries(m, _mul_terms(p[-1].terms, gs[i].terms, n), n))
            return p[k]

        acc = {}
        for alpha, c in self.sorted_terms():
            if n is not None and sum(alpha) > n and all(g.constant_term() == 0 for g in gs):
                continue
            term = {(0,) * m: c}
            for i, k in enumerate(alpha):
                if k:
                    term = _mul_terms(term, power(i, k).terms, n)
                    if not term:
                        break
            for a, v in term.items():
                acc[a] = acc[a] + v if a in acc else v
        return TSeries(m, acc, n)

    def ramify(self, i, q):
        """Substitute ``x_i -> x_i^q``; the truncation order is kept."""
        if q < 1:
            raise ValueError("ramification index must be positive")
        out = {}
        for a, c in self.terms.items():
            b = list(a)
            b[i] *= q
            out[tuple(b)] = c
        return TSeries(self.nvars, out, self.trunc)

    def diff(self, i):
        """Partial derivative in ``x_i``; the truncation order drops by one."""
        out = {}
        for a, c in self.terms.items():
            if a[i]:
                b = list(a)
                b[i] -= 1
                out[tuple(b)] = c * a[i]
        return TSeries(self.nvars, out, None if self.trunc is None else self.trunc - 1)

    def restrict_axis(self, i):
        """``f(0, ..., 0, x_i, 0, ..., 0)`` as a univariate series."""
        out = {}
        for a, c in self.terms.items():
            if all(v == 0 for j, v in enumerate(a) if j != i):
                out[(a[i],)] = c
        return TSeries(1, out, self.trunc)

    def drop_var(self, i):
        """Remove variable ``i`` from series that do not depend on it."""
        out = {}
        for a, c in self.terms.items():
            if a[i]:
                raise ValueError(f"series depends on variable {i}")
            out[a[:i] + a[i + 1:]] = c
        return TSeries(self.nvars - 1, out, self.trunc)

    def insert_var(self, i):
        """Embed into a ring with one more variable inserted at position ``i``."""
        out = {a[:i] + (0,) + a[i:]: c for a, c in self.terms.items()}
        return TSeries(self.nvars + 1, out, self.trunc)

    def coeffs_in(self, i):
        """Expand as a polynomial in ``x_i``: map power -> series in the others."""
        groups = defaultdict(dict)
        for a, c in self.terms.items():
            groups[a[i]][a[:i] + a[i + 1:]] = c
        return {k: TSeries(self.nvars - 1, v, self.trunc) for k, v in groups.items()}

    def divide_monomial(self, alpha):
        """Exact division by ``x^alpha``; raises if not divisible."""
        out = {}
        for a, c in self.terms.items():
            b = tuple(x - y for x, y in zip(a, alpha))
            if min(b, default=0) < 0:
                raise ValueError("series is not divisible by the monomial")
            out[b] = c
        n = None if self.trunc is None else self.trunc - sum(alpha)
        return TSeries(self.nvars, out, n)

    def shift_monomial(self, alpha):
        out = {_add_idx(a, alpha): c for a, c in self.terms.items()}
        n = None if self.trunc is None else self.trunc + sum(alpha)
        return TSeries(self.nvars, out, n)

    # -- formatting ----------------------------------------------------------
    def fmt(self, names=None, order_marker=True):
        names = names or default_names(self.nvars)
        parts = []
        for alpha, c in self.sorted_terms():
            mon = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, alpha) if k)
            parts.append(_fmt_term(c, mon))
        out = _join_terms(parts)
        if self.trunc is not None and order_marker:
            stem = _common_stem(names)
            out = ("" if out == "0" else out + " + ") + f"O({stem}^{self.trunc + 1})"
        return out

    def __str__(self):
        return self.fmt()

    def __repr__(self):
        return f"TSeries({self.fmt()})"


def _mul_terms(a, b, n):
    """Product of two term maps, dropping total degree above ``n``."""
    if not a or not b:
        return {}
    if n is None:
        out = {}
        for x, cx in a.items():
            for y, cy in b.items():
                k = tuple(p + q for p, q in zip(x, y))
                v = cx * cy
                out[k] = out[k] + v if k in out else v
        return {k: v for k, v in out.items() if v != 0}
    bs = sorted(((sum(y), y, cy) for y, cy in b.items()), key=lambda t: t[0])
    out = {}
    for x, cx in a.items():
        dx = sum(x)
        room = n - dx
        if room < 0:
            continue
        for dy, y, cy in bs:
            if dy > room:
                break
            k = tuple(p + q for p, q in zip(x, y))
            v = cx * cy
            out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if v != 0}


def default_names(nvars, stem="x"):
    return [f"{stem}{i + 1}" for i in range(nvars)] if nvars != 1 else [stem]


def _common_stem(names):
    stems = {n.rstrip("0123456789") for n in names}
    return stems.pop() if len(stems) == 1 else "deg"


def fmt_coeff(c):
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, AlgNum):
        if c.is_base():
            return fmt_coeff(c.coeffs[0] if c.coeffs else Fraction(0))
        return str(c)
    s = str(c)
    return s.replace("**", "^")


def _fmt_term(c, mon):
    cs = fmt_coeff(c)
    if not mon:
        return cs
    if cs == "1":
        return mon
    if cs == "-1":
        return "-" + mon
    needs_paren = any(ch in cs[1:] for ch in "+-") or ("/" in cs and not _is_plain_fraction(cs))
    if needs_paren and not (cs.startswith("(") and cs.endswith(")")):
        cs = f"({cs})"
    return f"{cs}*{mon}"


def _is_plain_fraction(cs):
    body = cs[1:] if cs.startswith("-") else cs
    return all(ch.isdigit() or ch == "/" for ch in body)


def _join_terms(parts):
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-") and not p.startswith("-("):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out
