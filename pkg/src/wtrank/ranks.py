"""Ranks of morphisms ``phi: K[[x1..xn]] -> K[[u1..um]]``.

* generic rank: rank of the Jacobian over the fraction field, by exact minors;
* formal relations: kernel elements of bounded degree, found by linear algebra
  on the coefficients of ``F(phi)`` up to a truncation order;
* monomial morphisms: the kernel is the binomial ideal of the integer left
  kernel of the exponent matrix, and every rank equals the matrix rank.

Only the generic rank lower bound is unconditional.  Everything about the
kernel is either exact (polynomial data, verified identically) or stated at
an explicit degree ``d`` and order ``N``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .fields import _mpq_to_fraction
from .series import TruncationError, TSeries, term_key

VERDICT_VERIFIED = "theorem-verified"
VERDICT_CONSISTENT = "rank-chain-consistent"
VERDICT_HYPOTHESIS_FAILS = "theorem-hypothesis-fails"
VERDICT_INCONCLUSIVE = "inconclusive-at-order-N"
VERDICTS = (VERDICT_VERIFIED, VERDICT_CONSISTENT, VERDICT_HYPOTHESIS_FAILS, VERDICT_INCONCLUSIVE)


@dataclass(frozen=True)
class Morphism:
    """``x_i -> components[i]``, each a series in ``m`` variables without
    constant term.

    ``tag`` is ``"monomial"`` (single monomials with coefficient 1),
    ``"polynomial"`` (all components exact) or ``"truncated"``.
    """

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a morphism needs at least one component")
        m = comps[0].nvars
        for c in comps:
            if c.nvars != m:
                raise ValueError("components live in different rings")
            if c.constant_term() != 0:
                raise ValueError("components must vanish at the origin")
        object.__setattr__(self, "components", comps)

    @property
    def n(self):
        return len(self.components)

    @property
    def m(self):
        return self.components[0].nvars

    @property
    def is_polynomial(self):
        return all(c.is_exact for c in self.components)

    @property
    def trunc(self):
        ts = [c.trunc for c in self.components if c.trunc is not None]
        return min(ts) if ts else None

    @property
    def exponent_matrix(self):
        """Rows of exponents when every component is a bare monomial."""
        rows = []
        for c in self.components:
            if not c.is_exact or len(c.terms) != 1:
                return None
            (alpha, coef), = c.terms.items()
            if coef != 1:
                return None
            rows.append(list(alpha))
        return rows

    @property
    def tag(self):
        if self.exponent_matrix is not None:
            return "monomial"
        return "polynomial" if self.is_polynomial else "truncated"

    @classmethod
    def monomial(cls, A):
        return cls(tuple(TSeries.monomial(tuple(row)) for row in A))

    def jacobian(self, N=None):
        """``[[d phi_i / d u_j]]`` with entries truncated at ``N - 1``."""
        rows = []
        for c in self.components:
            src = c if N is None else c.truncate(N)
            rows.append([src.diff(j) for j in range(self.m)])
        return rows


def blowup_substitution(phi):
    """``phi`` composed with ``u1 -> u1, u_i -> u1*u_i``."""
    m = phi.m
    subs = [TSeries.var(0, m)] + [TSeries.monomial(tuple(1 if k in (0, j) else 0 for k in range(m)))
                                  for j in range(1, m)]
    return Morphism(tuple(c.compose(subs) for c in phi.components))


def power_substitution(phi, k):
    """``x_i -> phi_i^k``."""
    return Morphism(tuple(c ** k for c in phi.components))


# ---------------------------------------------------------------------------
# generic rank

@dataclass(frozen=True)
class RankCertificate:
    """Generic rank ``r`` with an exact witness.

    ``witness`` is ``(rows, cols, monomial, value)``: the ``r x r`` minor on
    those rows and columns has the nonzero coefficient ``value`` at
    ``monomial``.  ``exact_upper`` says whether the vanishing of the larger
    minors is exact rather than up to degree ``order``.
    """

    r: int
    witness: tuple | None
    exact_upper: bool
    order: int | None
    n: int
    m: int

    @property
    def upper_evidence(self):
        if self.r == min(self.n, self.m):
            return "no larger minors"
        if self.exact_upper:
            return f"all {self.r + 1}-minors vanish identically"
        return f"all {self.r + 1}-minors vanish to degree {self.order}"


class _Minors:
    def __init__(self, jac):
        self.jac = jac
        self.memo = {}

    def __call__(self, rows, cols):
        key = (rows, cols)
        if key in self.memo:
            return self.memo[key]
        if len(rows) == 1:
            val = self.jac[rows[0]][cols[0]]
        else:
            r0, rest = rows[0], rows[1:]
            val = None
            for idx, c in enumerate(cols):
                entry = self.jac[r0][c]
                if entry.is_zero():
                    continue
                sub = self(rest, cols[:idx] + cols[idx + 1:])
                term = entry * sub
                if idx % 2:
                    term = -term
                val = term if val is None else val + term
            if val is None:
                val = self.jac[r0][cols[0]] * self(rest, cols[1:])
        self.memo[key] = val
        return val


def generic_rank(phi, N=None):
    """Certified generic rank of ``phi``.

    Parameters
    ----------
    phi : Morphism
    N : int, optional
        Truncation order of the components; required unless ``phi`` is
        polynomial.  Jacobian entries are known to degree ``N - 1``.
    """
    if N is None and not phi.is_polynomial:
        N = phi.trunc
    if N is not None and phi.trunc is not None and phi.trunc < N:
        raise TruncationError(f"components are only known to order {phi.trunc} < {N}")
    jac = phi.jacobian(N)
    minors = _Minors(jac)
    exact = phi.is_polynomial and N is None
    order = None if exact else N - 1
    for r in range(min(phi.n, phi.m), 0, -1):
        for rows in combinations(range(phi.n), r):
            for cols in combinations(range(phi.m), r):
                val = minors(rows, cols)
                if not val.is_zero():
                    mono, coef = val.sorted_terms()[0]
                    return RankCertificate(r, (rows, cols, mono, coef), exact, order, phi.n, phi.m)
    if not exact and any(not c.is_zero() for c in phi.components):
        raise TruncationError(f"no nonzero Jacobian entry up to degree {order}")
    return RankCertificate(0, None, exact, order, phi.n, phi.m)


def minor_value(phi, rows, cols, N=None):
    """The minor on ``rows x cols`` of the Jacobian (independent recomputation
    by the Leibniz formula)."""
    from itertools import permutations
    jac = phi.jacobian(N)
    total = None
    for perm in permutations(range(len(cols))):
        sign = 1
        for i in range(len(perm)):
            for j in range(i + 1, len(perm)):
                if perm[i] > perm[j]:
                    sign = -sign
        term = None
        for i, r in enumerate(rows):
            e = jac[r][cols[perm[i]]]
            term = e if term is None else term * e
        term = term if sign > 0 else -term
        total = term if total is None else total + term
    return total


# ---------------------------------------------------------------------------
# formal relations

def _monomials(n, d):
    out = []
    for deg in range(1, d + 1):
        def rec(prefix, left, slots):
            if slots == 1:
                out.append(tuple(prefix + [left]))
                return
            for a in range(left, -1, -1):
                rec(prefix + [a], left - a, slots - 1)
        rec([], deg, n)
    return sorted(out, key=term_key)


def _compose_powers(phi, betas, N):
    comps = [c.truncate(N) if N is not None else c for c in phi.components]
    memo = {tuple(0 for _ in comps): TSeries.one(phi.m, N)}

    def power(beta):
        if beta in memo:
            return memo[beta]
        i = next(k for k, b in enumerate(beta) if b)
        prev = tuple(b - 1 if k == i else b for k, b in enumerate(beta))
        val = power(prev) * comps[i]
        memo[beta] = val
        return val
    return [power(b) for b in betas]


def _primitive_int(vec):
    den = 1
    for x in vec:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints] if g else ints
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return ints


def relation_search(phi, d, N):
    """Polynomials ``F`` of degree ``<= d`` with ``F(phi) = 0`` mod ``(u)^(N+1)``.

    Returns a basis of the solution space (primitive integer coefficients,
    first nonzero coefficient positive), each as an exact polynomial in
    ``x1..xn``.
    """
    if d < 1:
        raise ValueError("degree bound must be at least 1")
    betas = _monomials(phi.n, d)
    powers = _compose_powers(phi, betas, N)
    rows = {}
    for j, p in enumerate(powers):
        for alpha, c in p.terms.items():
            if sum(alpha) <= N:
                rows.setdefault(alpha, {})[j] = c
    if not rows:
        basis = [[Fraction(1 if i == j else 0) for i in range(len(betas))] for j in range(len(betas))]
    else:
        order = sorted(rows, key=term_key)
        sdm = {i: {j: QQ(c.numerator, c.denominator) for j, c in rows[a].items()}
               for i, a in enumerate(order)}
        M = DomainMatrix(sdm, (len(order), len(betas)), QQ)
        ns = M.nullspace().to_list()
        basis = [[_mpq_to_fraction(x) for x in row] for row in ns]
    out = []
    for vec in basis:
        ints = _primitive_int(vec)
        terms = {betas[j]: Fraction(c) for j, c in enumerate(ints) if c}
        out.append(TSeries(phi.n, terms))
    return sorted(out, key=lambda F: [(term_key(a), c) for a, c in F.sorted_terms()])


def verify_relation(F, phi, N=None):
    """``"exact-zero"``, ``"zero-to-order-N"`` or ``"nonzero"``.

    ``"exact-zero"`` requires polynomial components and an exact ``F``; the
    composition is then carried out without truncation.
    """
    if F.nvars != phi.n:
        raise ValueError("relation and morphism disagree on the number of variables")
    if phi.is_polynomial and F.is_exact:
        return "exact-zero" if F.compose(list(phi.components)).is_zero() else "nonzero"
    if N is None:
        N = phi.trunc
    val = F.compose([c.truncate(N) for c in phi.components], order=N)
    return "zero-to-order-N" if val.is_zero() else "nonzero"


# ---------------------------------------------------------------------------
# monomial morphisms

def _integer_left_kernel(A):
    """Basis of ``{w in Z^n : w A = 0}`` in Hermite normal form."""
    n = len(A)
    m = len(A[0]) if n else 0
    rows = [list(A[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    top = 0
    for col in range(m):
        while True:
            live = [i for i in range(top, n) if rows[i][col] != 0]
            if not live:
                break
            piv = min(live, key=lambda i: abs(rows[i][col]))
            rows[top], rows[piv] = rows[piv], rows[top]
            done = True
            for i in range(top + 1, n):
                if rows[i][col]:
                    q = rows[i][col] // rows[top][col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[top])]
                    if rows[i][col]:
                        done = False
            if done:
                top += 1
                break
        if top == n:
            break
    kernel = [r[m:] for r in rows if all(x == 0 for x in r[:m])]
    return _hermite(kernel)


def _hermite(vectors):
    """Row Hermite normal form of an integer lattice basis."""
    rows = [list(v) for v in vectors]
    if not rows:
        return []
    k, n = len(rows), len(rows[0])
    top = 0
    for col in range(n):
        while True:
            live = [i for i in range(top, k) if rows[i][col] != 0]
            if not live:
                break
            piv = min(live, key=lambda i: abs(rows[i][col]))
            rows[top], rows[piv] = rows[piv], rows[top]
            clean = True
            for i in range(top + 1, k):
                if rows[i][col]:
                    q = rows[i][col] // rows[top][col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[top])]
                    if rows[i][col]:
                        clean = False
            if clean:
                break
        if top < k and rows[top][col] != 0:
            if rows[top][col] < 0:
                rows[top] = [-a for a in rows[top]]
            for i in range(top):
                q = rows[i][col] // rows[top][col]
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[top])]
            top += 1
        if top == k:
            break
    return [r for r in rows if any(r)]


def binomial(w):
    """``x^(w+) - x^(w-)`` as an exact polynomial."""
    plus = tuple(max(x, 0) for x in w)
    minus = tuple(max(-x, 0) for x in w)
    return TSeries.monomial(plus) - TSeries.monomial(minus)


def rational_rank(A):
    if not A or not A[0]:
        return 0
    return DomainMatrix([[QQ(int(x)) for x in row] for row in A], (len(A), len(A[0])), QQ).rank()


@dataclass(frozen=True)
class ToricResult:
    r: int
    kernel_vectors: tuple
    binomials: tuple


def monomial_ranks(A):
    """Rank of the exponent matrix and a binomial basis of the kernel.

    Parameters
    ----------
    A : list of list of int
        ``n x m`` non-negative exponents; row ``i`` is the exponent of
        ``phi(x_i)``.
    """
    for i, row in enumerate(A):
        if any(x < 0 for x in row):
            raise ValueError(f"row {i + 1} has a negative exponent")
        if not any(row):
            raise ValueError(f"row {i + 1} is zero: component is not in the maximal ideal")
    r = rational_rank(A)
    kernel = _integer_left_kernel(A)
    return ToricResult(r, tuple(tuple(w) for w in kernel), tuple(binomial(w) for w in kernel))


def same_lattice(basis_a, basis_b):
    """Whether two integer bases span the same lattice."""
    return _hermite(basis_a) == _hermite(basis_b)


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class RankReport:
    """Evidence about ``r <= r^F <= r^W``.

    ``rF_bounds`` is ``(lower, upper, upper_exact)``.  ``toric`` holds the
    exact triple for monomial morphisms.
    """

    generic: RankCertificate
    relations: tuple
    rF_bounds: tuple
    toric: tuple | None
    verdict: str
    d: int
    N: int | None
    tag: str
    notes: tuple = field(default_factory=tuple)


def rank_report(phi, d, N):
    """Assemble generic rank, relation search and (for monomial morphisms)
    the toric ranks into one verdict."""
    trunc_n = None if phi.is_polynomial else N
    gen = generic_rank(phi, trunc_n)
    r, n = gen.r, phi.n
    rels = []
    for F in relation_search(phi, d, N):
        rels.append((F, F.degree(), verify_relation(F, phi, N)))
    exact_rel = any(status == "exact-zero" for _, _, status in rels)
    notes = []
    toric = None
    A = phi.exponent_matrix
    if A is not None:
        tr = monomial_ranks(A)
        toric = (tr.r, tr.r, tr.r)
        lower, upper, upper_exact = tr.r, tr.r, True
        verdict = VERDICT_VERIFIED
        notes.append("monomial morphism: r = r^F = r^W = rank of the exponent matrix")
    elif r == n:
        lower, upper, upper_exact = n, n, True
        verdict = VERDICT_VERIFIED
        notes.append("generic rank equals the number of source variables")
    elif exact_rel:
        lower, upper, upper_exact = r, n - 1, True
        if r == n - 1:
            verdict = VERDICT_VERIFIED
            notes.append("exact polynomial relation: r^F <= n - 1 = r")
        else:
            verdict = VERDICT_CONSISTENT
            notes.append("exact relation bounds r^F by n - 1, above the generic rank")
    elif not rels and not phi.is_polynomial:
        lower, upper, upper_exact = r, n, False
        verdict = VERDICT_HYPOTHESIS_FAILS
        notes.append(f"no relation of degree <= {d} to order {N}: evidence r^F = {n} > r = {r}")
    else:
        lower, upper, upper_exact = r, n, False
        verdict = VERDICT_INCONCLUSIVE
        if rels:
            notes.append(f"{len(rels)} relation(s) hold only to order {N}")
        else:
            notes.append(f"polynomial morphism without relation of degree <= {d}")
    return RankReport(gen, tuple(rels), (lower, upper, upper_exact), toric, verdict, d, N,
                      phi.tag, tuple(notes))


def report_consistent(rep):
    """Whether the report respects ``r <= r^F <= r^W <= n``."""
    lower, upper, _ = rep.rF_bounds
    if not rep.generic.r <= lower <= upper <= rep.generic.n:
        return False
    if rep.toric is not None:
        a, b, c = rep.toric
        if not (a == rep.generic.r and a <= b <= c):
            return False
    if rep.verdict == VERDICT_VERIFIED and lower != upper:
        return False
    if rep.verdict == VERDICT_HYPOTHESIS_FAILS and rep.generic.r >= rep.generic.n:
        return False
    return rep.verdict in VERDICTS
