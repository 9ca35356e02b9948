"""Random instance generators shared by the test modules."""
from fractions import Fraction

from wtrank.graded import ProjElement
from wtrank.series import TSeries


def rand_coeff(rng, lo=-4, hi=4):
    c = 0
    while c == 0:
        c = rng.randint(lo, hi)
    return Fraction(c, rng.choice([1, 1, 2, 3]))


def rand_monomial(rng, nvars, deg):
    a = [0] * nvars
    for _ in range(deg):
        a[rng.randrange(nvars)] += 1
    return tuple(a)


def rand_poly(rng, nvars, maxdeg, nterms, mindeg=0):
    terms = {}
    for _ in range(nterms):
        terms[rand_monomial(rng, nvars, rng.randint(mindeg, maxdeg))] = rand_coeff(rng)
    return TSeries(nvars, terms)


def rand_regular(rng, nvars, i, d, trunc, nterms=8):
    """A series regular of order ``d`` in ``x_i``."""
    f = rand_poly(rng, nvars, trunc, nterms, mindeg=1)
    terms = {a: c for a, c in f.terms.items()
             if not (all(v == 0 for j, v in enumerate(a) if j != i) and a[i] <= d)}
    terms[tuple(d if j == i else 0 for j in range(nvars))] = rand_coeff(rng)
    return TSeries(nvars, terms, trunc)


def rand_homogeneous(rng, deg, nterms=3):
    terms = {}
    for _ in range(nterms):
        a = rng.randint(0, deg)
        terms[(a, deg - a)] = rand_coeff(rng)
    if not terms or all(c == 0 for c in terms.values()):
        terms[(deg, 0)] = Fraction(1)
    return TSeries(2, terms)


LINEAR_FORMS = ["x1", "x2", "x1 + x2", "x1 - 2*x2", "2*x1 + 3*x2"]
QUADRATIC_FORMS = ["x1^2 + x2^2", "x1^2 - 2*x2^2", "x1^2 + x1*x2 + x2^2"]


def rand_h(rng):
    from wtrank.parsing import parse_series
    forms = rng.sample(LINEAR_FORMS, rng.randint(1, 2))
    if rng.random() < 0.4:
        forms.append(rng.choice(QUADRATIC_FORMS))
    h = TSeries.one(2)
    for f in forms:
        h = h * parse_series(f, ["x1", "x2"])
    return h


def rand_proj_element(rng, h):
    """A projective element over ``h`` with random pieces ``k = k0..k0+2``."""
    from wtrank.graded import homogeneous_degree
    H = homogeneous_degree(h)
    alpha, beta = rng.randint(0, 2), rng.randint(1, 2)
    k0 = rng.randint(0, 2)
    pieces = {}
    for k in range(k0, k0 + rng.randint(1, 3)):
        deg = k + (alpha * k + beta) * H
        pieces[k] = rand_homogeneous(rng, deg, rng.randint(1, 3))
    return ProjElement(h, alpha, beta, pieces)


CLASSICAL_CURVES = [
    "y^2 - x^3",
    "y^2 - x^4 - x^5",
    "y^3 - x^4",
    "y^2 - x^2 - x^3",
    "y - x",
    "y^3 - x^5",
    "y^2 - 2*x^2",
    "(y^2 - x^3)*(y - x)",
]


def rand_curve(rng, max_dy=4, max_dx=6):
    """Random monic ``P`` in ``y`` with polynomial coefficients in ``x``."""
    from wtrank.parsing import parse_series
    D = rng.randint(2, max_dy)
    parts = [f"y^{D}"]
    for j in range(D):
        for _ in range(rng.randint(0, 2)):
            parts.append(f"({rng.randint(-3, 3)})*x^{rng.randint(1, max_dx)}*y^{j}")
    return parse_series(" + ".join(parts), ["x", "y"])


def fixture_curves(seed=2024, count=20):
    """Classical curves plus random squarefree ones, as ``(label, P)``."""
    import random
    from wtrank.parsing import parse_series
    from wtrank.puiseux import NotSquarefreeError, puiseux_branches
    out = [(c, parse_series(c, ["x", "y"])) for c in CLASSICAL_CURVES]
    rng = random.Random(seed)
    while len(out) < count:
        P = rand_curve(rng)
        try:
            puiseux_branches(curve_coeffs(P), 4)
        except NotSquarefreeError:
            continue
        out.append((P.fmt(["x", "y"]), P))
    return out


def curve_coeffs(P):
    parts = P.coeffs_in(1)
    return [parts.get(j, TSeries.zero(1, P.trunc)) for j in range(max(parts) + 1)]
