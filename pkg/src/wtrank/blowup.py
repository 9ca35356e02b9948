"""Point blow-ups of the formal plane.

A :class:`ChartPoint` is reached from the origin by a sequence of elementary
steps.  Each step blows up the origin of the current local coordinates and
moves to one chart:

* chart 1: ``(v1, v2) -> (v1, v1*(v2 + lam))``, the point ``v2 = lam`` on the
  new exceptional line ``{v1 = 0}``;
* chart 2: ``(v1, v2) -> (v1*v2, v2)``, the remaining point ``{v2 = 0}``.

The composed map expresses ``(x1, x2)`` in the local coordinates of the point.
Exceptional divisors are numbered by their creation step; at a point of depth
``r`` the strict transform of the ``k``-th one is labelled ``F_r^(k)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .fields import (AlgNum, ExtensionError, ExtensionField, QQ_FIELD, pcompose,
                     pdeg, pmul, ptrim)
from .graded import homogeneous_degree
from .series import TruncationError, TSeries


class ResolutionError(RuntimeError):
    """Resolution did not finish within the allowed number of blow-ups."""


@dataclass(frozen=True)
class Step:
    chart: int
    translation: object = 0

    def fmt(self):
        if self.chart == 2:
            return "chart2"
        lam = self.translation
        if lam == 0:
            return "chart1"
        s = _fmt_c(lam)
        s = f"- {s[1:]}" if s.startswith("-") else f"+ {s}"
        return f"chart1[v2 -> v2 {s}]"


def _fmt_c(c):
    if isinstance(c, AlgNum) and c.is_base():
        c = c.coeffs[0] if c.coeffs else 0
    return str(c)


def _identity_map():
    return (TSeries.var(0, 2), TSeries.var(1, 2))


@dataclass(frozen=True)
class ChartPoint:
    """A point over the origin after finitely many blow-ups.

    Attributes
    ----------
    path : tuple of Step
    divisors : tuple of (int, int)
        ``(axis, k)``: the strict transform of the ``k``-th exceptional
        divisor passes through the point as ``{v_(axis+1) = 0}``.
    composed_map : tuple of TSeries
        ``(x1, x2)`` as exact polynomials in ``(v1, v2)``.
    field : coefficient field of the point coordinates
    conjugates : int
        Number of Galois conjugate points this one stands for.
    """

    path: tuple = ()
    divisors: tuple = ()
    composed_map: tuple = field(default_factory=_identity_map)
    field: object = QQ_FIELD
    conjugates: int = 1

    @property
    def depth(self):
        return len(self.path)

    def child(self, chart, lam=0, fld=None, conjugates=1):
        """The point reached by blowing up this one and stepping into ``chart``."""
        v1, v2 = TSeries.var(0, 2), TSeries.var(1, 2)
        k = self.depth + 1
        if chart == 1:
            shifted = v2 + TSeries.const(lam, 2) if lam != 0 else v2
            subs = [v1, v1 * shifted]
            divs = [(0, k)]
            if lam == 0:
                divs += [(1, j) for axis, j in self.divisors if axis == 1]
        elif chart == 2:
            if lam != 0:
                raise ValueError("chart 2 is only used at its origin")
            subs = [v1 * v2, v2]
            divs = [(axis, j) for axis, j in self.divisors if axis == 0] + [(1, k)]
        else:
            raise ValueError("chart must be 1 or 2")
        new_map = tuple(c.compose(subs) for c in self.composed_map)
        return ChartPoint(self.path + (Step(chart, lam),), tuple(sorted(divs)), new_map,
                          fld or self.field, self.conjugates * conjugates)

    def divisor_labels(self):
        r = self.depth
        return [(axis, f"F_{r}^({k})") for axis, k in self.divisors]

    def fmt_path(self):
        return " / ".join(s.fmt() for s in self.path) if self.path else "origin"


def blowup_pullback(f, p):
    """``f`` composed with the chart map of ``p``.

    Every component of the composed map vanishes at the origin, so a series
    truncated at total degree ``N`` pulls back to one truncated at ``N``.
    """
    return f.compose(list(p.composed_map))


def f1_chart_pullback(f, c):
    """Substitute ``(x1, x2) -> (v1*v2^c, v1*v2^(c+1))``."""
    if c < 0:
        raise ValueError("c must be non-negative")
    return f.compose([TSeries.monomial((1, c)), TSeries.monomial((1, c + 1))])


def f1_chart_point(c):
    """The chart point realizing :func:`f1_chart_pullback`: chart 1 then ``c``
    times chart 2."""
    p = ChartPoint().child(1)
    for _ in range(c):
        p = p.child(2)
    return p


def is_monomial_times_unit(f):
    """``(a, b)`` with ``f = v1^a v2^b * unit``, or ``None``.

    For truncated input the verdict is about the known terms.
    """
    if f.nvars != 2:
        raise ValueError("expected a series in two variables")
    if f.is_zero():
        raise TruncationError("series vanishes to its truncation order; monomiality is indeterminate")
    a = min(t[0] for t in f.terms)
    b = min(t[1] for t in f.terms)
    return (a, b) if f.coeff((a, b)) != 0 else None


# ---------------------------------------------------------------------------
# resolution

@dataclass(frozen=True)
class TreeNode:
    point: ChartPoint
    transform: TSeries
    monomial: tuple | None
    generic_order: int | None = None


@dataclass(frozen=True)
class BlowupTree:
    """Centers blown up (``nodes``) and the chart points covering the
    special points of the final exceptional configuration (``leaves``).

    A point on an exceptional line that is not listed is a smooth point of
    that line away from the total transform's other components, where the
    transform is ``v1^a * unit`` with ``a`` the recorded generic order.
    """

    delta: TSeries
    nodes: tuple
    leaves: tuple
    max_depth: int

    @property
    def depth(self):
        return max((leaf.point.depth for leaf in self.leaves), default=0)

    @property
    def resolved(self):
        return all(leaf.monomial is not None for leaf in self.leaves)


def _roots_on_line(poly, fld):
    """Roots of a univariate polynomial over ``fld``; nonlinear factors over
    the rationals open one extension.  Returns ``[(lam, field, count)]``."""
    poly = ptrim(poly)
    if pdeg(poly) < 1:
        return []
    if fld is QQ_FIELD:
        facs = QQ_FIELD.factor(tuple(_as_rational(c) for c in poly))
    else:
        facs = fld.factor(tuple(fld.convert(c) for c in poly))
    out = []
    for fac, _ in facs:
        if pdeg(fac) == 1:
            lam = -fac[0] / fac[1]
            if lam != 0:
                out.append((lam, fld, 1))
        else:
            if fld is not QQ_FIELD:
                raise ExtensionError("irrational center over an extension field")
            ext = ExtensionField(QQ_FIELD, fac, name="a")
            out.append((ext.gen, ext, pdeg(fac)))
    return out


def _as_rational(c):
    if isinstance(c, AlgNum):
        if not c.is_base():
            raise ExtensionError("coefficient outside the rationals")
        return c.coeffs[0] if c.coeffs else Fraction(0)
    return Fraction(c)


def resolve_monomialize(delta, max_depth=30):
    """Blow up until the total transform of ``delta`` is a monomial times a
    unit at every point.

    Parameters
    ----------
    delta : TSeries
        Exact polynomial in ``(x1, x2)``.
    max_depth : int
        Largest allowed number of successive blow-ups along one path.

    Returns
    -------
    BlowupTree
    """
    if delta.nvars != 2:
        raise ValueError("resolution is implemented for plane curves")
    if not delta.is_exact:
        raise TruncationError("resolution needs an exact polynomial; truncation can hide tangency")
    if delta.is_zero():
        raise ValueError("cannot resolve the zero series")
    nodes, leaves = [], []
    stack = [ChartPoint()]
    while stack:
        p = stack.pop(0)
        f = blowup_pullback(delta, p)
        mono = is_monomial_times_unit(f)
        if mono is not None:
            leaves.append(TreeNode(p, f, mono))
            continue
        if p.depth >= max_depth:
            raise ResolutionError(f"max_depth={max_depth} exceeded at {p.fmt_path()}")
        g = f.compose([TSeries.var(0, 2), TSeries.monomial((1, 1))])
        a = min(t[0] for t in g.terms)
        line = {}
        for (i, j), c in g.terms.items():
            if i == a:
                line[j] = c
        poly = tuple(line.get(j, 0) for j in range(max(line) + 1))
        nodes.append(TreeNode(p, f, None, a))
        children = [p.child(1, 0)]
        for lam, fld, count in _roots_on_line(poly, p.field):
            children.append(p.child(1, lam, fld, count))
        children.append(p.child(2))
        stack.extend(children)
    return BlowupTree(delta, tuple(nodes), tuple(leaves), max_depth)


# ---------------------------------------------------------------------------
# projective elements

@dataclass(frozen=True)
class PullbackResult:
    """Pullback of ``A = sum_k a_k/h^(alpha*k+beta)`` to one chart point.

    ``pieces[k] = (shift, coeffs)`` stands for
    ``v1^k * v2^shift * sum_j coeffs[j] v2^j``; ``coeffs`` is known to
    ``len(coeffs)`` terms (exactly when ``exact``).
    """

    c: int
    point: object
    m: int
    pieces: dict
    cone: tuple
    verdict: str
    pole_pieces: tuple
    order: int
    value: TSeries | None

    @property
    def has_pole(self):
        return self.verdict == "pole"


def _dehom(f):
    out = {}
    for (a1, a2), c in f.terms.items():
        out[a2] = out.get(a2, 0) + c
    if not out:
        return ()
    return ptrim(tuple(out.get(i, Fraction(0)) for i in range(max(out) + 1)))


def _swap(f):
    return TSeries(2, {(b, a): c for (a, b), c in f.terms.items()}, f.trunc)


def _series_inverse(p, n):
    """First ``n`` coefficients of ``1/p`` for ``p(0) != 0``."""
    inv0 = 1 / p[0]
    out = [inv0]
    for k in range(1, n):
        acc = 0
        for j in range(1, min(k, len(p) - 1) + 1):
            acc = acc + p[j] * out[k - j]
        out.append(-acc * inv0)
    return out


def _cut(p, n):
    return list(p[:n]) + [0] * max(0, n - len(p))


def proj_pullback(A, c=0, point=0, order=8):
    """Pull ``A`` back to the chart ``(v1*v2^c, v1*v2^(c+1))``.

    Parameters
    ----------
    A : ProjElement
    c : int
        Chart index; ``c = 0`` is ``(v1, v1*v2)``.
    point : coefficient or ``"inf"``
        With ``c = 0``, a translation ``v2 -> v2 + point`` of the chart
        center, or ``"inf"`` for the origin of ``(v1*v2, v2)``.
    order : int
        Number of ``v2``-coefficients expanded per piece.

    Returns
    -------
    PullbackResult
        Verdict ``"pole"`` when some piece carries a negative power of ``v2``,
        ``"extends"`` otherwise.
    """
    if c < 0:
        raise ValueError("c must be non-negative")
    if point != 0 and c != 0:
        raise ValueError("translated centers are only used on the c = 0 chart")
    h, pieces = A.h, A.pieces
    lam = 0
    if isinstance(point, str):
        if point != "inf":
            raise ValueError("point must be a coefficient or 'inf'")
        h = _swap(h)
        pieces = {k: _swap(a) for k, a in pieces.items()}
    else:
        lam = point
    shift_poly = (lam, 1)
    hl = pcompose(_dehom(h), shift_poly) if lam != 0 else _dehom(h)
    m = next(i for i, x in enumerate(hl) if x != 0)
    g = hl[m:]
    g_exact = pdeg(g) == 0
    lim = order if A.order is None else min(order, A.order - 1)
    out, poles = {}, []
    for k, a in sorted(pieces.items()):
        E = A.exponent(k)
        ak = _dehom(a)
        if lam != 0:
            ak = pcompose(ak, shift_poly)
        ak = ptrim(ak)
        low = next(i for i, x in enumerate(ak) if x != 0)
        if g_exact:
            body = [x / g[0] ** E for x in ak[low:]]
        else:
            ginv = _series_inverse(g, order)
            gE = [1] + [0] * (order - 1)
            for _ in range(E):
                gE = _cut(pmul(gE, ginv), order)
            body = _cut(pmul(ak[low:], gE), order)
        shift = c * k - m * E + low
        out[k] = (shift, tuple(body))
        if shift < 0:
            poles.append(k)
    cone = ((0, 1), (1, min(0, c - m * A.alpha)))
    value = None
    if not poles:
        terms = {}
        for k, (shift, body) in out.items():
            for j, x in enumerate(body):
                if x != 0 and (g_exact or k + shift + j <= lim):
                    terms[(k, shift + j)] = x
        exact = g_exact and A.order is None
        if not exact:
            terms = {t: x for t, x in terms.items() if sum(t) <= lim}
        value = TSeries(2, terms, None if exact else lim)
    verdict = "pole" if poles else "extends"
    return PullbackResult(c, point, m, out, cone, verdict, tuple(poles), order, value)


def pole_candidates(A):
    """Points of the first exceptional line where a pole can occur: the roots
    of ``h(1, s)`` (one per conjugate class) and ``"inf"`` when ``x1 | h``."""
    hl = _dehom(A.h)
    H = homogeneous_degree(A.h)
    out = []
    if hl and hl[0] == 0:
        out.append(0)
    for lam, _, _ in _roots_on_line(hl, QQ_FIELD):
        out.append(lam)
    if pdeg(hl) < H:
        out.append("inf")
    return out


def find_pole_point(A, order=4):
    """Search the candidate points for one where ``A`` does not extend as a
    power series.  Returns the :class:`PullbackResult` or ``None``."""
    for pt in pole_candidates(A):
        res = proj_pullback(A, 0, pt, order)
        if res.has_pole:
            return res
    return None


def reduced_denominator_nonconstant(A):
    """Whether the first piece ``a_k0 / h^E`` keeps a non-constant denominator
    in lowest terms."""
    import sympy
    from .puiseux import to_sympy
    if A.k0 is None:
        return False
    x1, x2 = sympy.symbols("x1 x2")

    def expr(f):
        return sum(to_sympy(c) * x1 ** a * x2 ** b for (a, b), c in f.terms.items())
    frac = sympy.cancel(expr(A.pieces[A.k0]) / expr(A.h) ** A.exponent(A.k0))
    _, den = sympy.fraction(frac)
    return sympy.Poly(den, x1, x2).total_degree() > 0


__all__ = ["Step", "ChartPoint", "BlowupTree", "TreeNode", "ResolutionError",
           "PullbackResult", "blowup_pullback", "f1_chart_pullback", "f1_chart_point",
           "is_monomial_times_unit", "resolve_monomialize", "proj_pullback",
           "pole_candidates", "find_pole_point", "reduced_denominator_nonconstant"]
