"""Plain-text reports.

Every line carrying a computed value also carries the order parameters it was
computed at (``N``, ``d``, ``depth`` ...).  :class:`Report` refuses a value
without them, and refuses numerals in free-text notes, so a number can never
appear in a report without its provenance.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .fields import fmt_upoly
from .series import TSeries

_BARE_NUMBER = re.compile(r"(?<![A-Za-z_0-9^(])\d")


class ProvenanceError(ValueError):
    """A numeric claim without its order parameters."""


@dataclass
class Claim:
    key: str
    text: str
    provenance: tuple
    value: object = None


@dataclass
class Report:
    scenario: str
    task: str
    params: dict
    claims: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    error: str | None = None

    def claim(self, key, value, text=None, **provenance):
        if not provenance:
            raise ProvenanceError(f"claim {key!r} has no order parameters")
        text = fmt_value(value) if text is None else text
        prov = tuple(sorted((k, v) for k, v in provenance.items()))
        self.claims.append(Claim(key, text, prov, value))

    def note(self, key, text):
        if _BARE_NUMBER.search(text):
            raise ProvenanceError(f"note {key!r} contains a number; use a claim")
        self.notes.append((key, text))

    def get(self, key):
        for c in self.claims:
            if c.key == key:
                return c
        return None

    @property
    def passed(self):
        return self.error is None and all(ok for _, ok, _ in self.checks)

    def render(self):
        lines = [f"scenario: {self.scenario}", f"task: {self.task}"]
        if self.params:
            lines.append("params: " + ", ".join(f"{k}={v}" for k, v in sorted(self.params.items())))
        for key, text in self.notes:
            lines.append(f"{key}: {text}")
        for c in self.claims:
            prov = ", ".join(f"{k}={v}" for k, v in c.provenance)
            lines.append(f"{c.key} = {c.text}   [{prov}]")
        if self.error is not None:
            lines.append(f"error: {self.error}")
        for key, ok, detail in self.checks:
            lines.append(f"expect {key}: {'met' if ok else 'FAILED'}" + (f" ({detail})" if detail and not ok else ""))
        lines.append(f"status: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"


def fmt_value(value, names=None):
    if isinstance(value, TSeries):
        return value.fmt(names)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(fmt_value(v, names) for v in value) + "]"
    return str(value)


def fmt_field(fld):
    mod = getattr(fld, "modulus", None)
    if mod is None:
        return getattr(fld, "name", None) or str(fld)
    base = fmt_field(fld.base)
    return f"{base}[{fld.name}]/({fmt_upoly(mod, fld.name, fld.base.fmt)})"


# ---------------------------------------------------------------------------
# task specific sections

def add_division(rep, res, names, N):
    q = res.quotient
    prov = {"N": N}
    rep.claim("quotient", q.fmt(names), **prov, certified_degree=_deg(q.trunc))
    for j, r in enumerate(res.remainder_coeffs):
        others = names[:res.var] + names[res.var + 1:]
        rep.claim(f"r_{j}", r.fmt(others), **prov, certified_degree=_deg(r.trunc))
    rep.claim("remainder", res.remainder.fmt(names), **prov)
    rep.claim("regular_order", res.degree, **prov)


def _deg(t):
    return "exact" if t is None else t


def add_preparation(rep, U, P, names, N):
    rep.claim("unit", U.fmt(names), N=N, certified_degree=_deg(U.trunc))
    rep.claim("weierstrass", P.to_series().fmt(names), N=N)
    rep.claim("regular_order", P.degree, N=N)


def add_puiseux(rep, branches, roots, N, ok):
    rep.claim("branches", len(branches), N=N)
    rep.claim("roots", len(roots), N=N)
    for b in branches:
        key = f"branch_{b.index}"
        rep.claim(f"{key}.ramification", b.e, N=N)
        rep.claim(f"{key}.field", fmt_field(b.field), N=N)
        rep.claim(f"{key}.x_scale", str(b.lam), N=N)
        body = b.body_series()
        rep.claim(f"{key}.y", body.fmt(["t"]), N=N, known_terms=_deg(None if b.exact else b.prec))
        v = body.valuation()
        if isinstance(v, int):
            rep.claim(f"{key}.leading_exponent", f"{v}/{b.e}" if b.e != 1 else str(v), N=N)
    rep.claim("recomposition", "ok" if ok else "mismatch", N=N)


def add_npe(rep, fact, ok, names):
    N = fact.order
    rep.claim("h", fact.h.fmt(names[:2]), N=N)
    rep.claim("factors", len(fact.factors), N=N)
    for i, f in enumerate(fact.factors):
        key = f"factor_{i}"
        g = f.gamma.minimal
        rep.claim(f"{key}.deg_y", f.degree, N=N)
        rep.claim(f"{key}.gamma_minimal", g.fmt(names[:2] + ["z"]), N=N)
        rep.claim(f"{key}.omega", str(g.omega), N=N)
        for j, c in enumerate(f.coeffs):
            rep.claim(f"{key}.coeff_{j}.alpha_beta", f"({c.alpha}, {c.beta})", N=N)
            rep.claim(f"{key}.coeff_{j}", c.fmt(names[:2]), N=N)
        for K, A in f.xi.items():
            rep.claim(f"{key}.xi_{K}", A.fmt(names[:2]), N=N, known_to=_deg(A.order))
    rep.claim("recomposition", "ok" if ok else "mismatch", N=N)


def add_tree(rep, tree):
    md = tree.max_depth
    rep.claim("depth", tree.depth, max_depth=md)
    rep.claim("centers", len(tree.nodes), max_depth=md)
    rep.claim("leaves", len(tree.leaves), max_depth=md)
    rep.claim("all_leaves_monomial", "yes" if tree.resolved else "no", max_depth=md)
    for i, node in enumerate(tree.nodes):
        p = node.point
        rep.claim(f"center_{i}", p.fmt_path(), depth=p.depth, generic_order=node.generic_order)
    for i, leaf in enumerate(tree.leaves):
        p = leaf.point
        key = f"leaf_{i}"
        rep.claim(f"{key}.path", p.fmt_path(), depth=p.depth)
        if p.field is not None and getattr(p.field, "modulus", None) is not None:
            rep.claim(f"{key}.field", fmt_field(p.field), depth=p.depth, conjugates=p.conjugates)
        x1, x2 = p.composed_map
        rep.claim(f"{key}.map", f"x1 = {x1.fmt(['v1', 'v2'])}; x2 = {x2.fmt(['v1', 'v2'])}",
                  depth=p.depth)
        labels = ", ".join(f"{lab} = {{v{axis + 1} = 0}}" for axis, lab in p.divisor_labels())
        rep.claim(f"{key}.divisors", labels or "none", depth=p.depth)
        rep.claim(f"{key}.monomial", f"v1^{leaf.monomial[0]}*v2^{leaf.monomial[1]}*unit"
                  if leaf.monomial else "no", depth=p.depth)


def add_pullback(rep, res, names=("v1", "v2")):
    prov = {"c": res.c, "v2_terms": res.order}
    rep.claim("point", str(res.point), **prov)
    rep.claim("m", res.m, **prov)
    rep.claim("cone", f"{res.cone[0]}, {res.cone[1]}", **prov)
    for k, (shift, body) in sorted(res.pieces.items()):
        series = " + ".join(f"({c})*v2^{shift + j}" for j, c in enumerate(body) if c != 0)
        rep.claim(f"piece_{k}", f"v1^{k} * [{series}]", **prov)
    rep.claim("verdict", res.verdict, **prov)
    if res.value is not None:
        rep.claim("value", res.value.fmt(list(names)), **prov)


def add_ranks(rep, r, xnames):
    prov = {"d": r.d, "N": r.N if r.N is not None else "exact"}
    g = r.generic
    rep.claim("tag", r.tag, **prov)
    rep.claim("generic_rank", g.r, **prov)
    if g.witness is not None:
        rows, cols, mono, coef = g.witness
        rep.claim("witness", f"rows {list(i + 1 for i in rows)}, cols {list(j + 1 for j in cols)}, "
                  f"coefficient {coef} at u^{list(mono)}", **prov)
    rep.claim("upper_evidence", g.upper_evidence, **prov)
    rep.claim("relations", len(r.relations), **prov)
    for i, (F, deg, status) in enumerate(r.relations):
        rep.claim(f"relation_{i}", f"{F.fmt(xnames)} ({status})", **prov, degree=deg)
    lo, hi, exact = r.rF_bounds
    rep.claim("rF_bounds", f"{lo} <= r^F <= {hi}" + ("" if exact else " (evidence)"), **prov)
    if r.toric is not None:
        rep.claim("toric_ranks", f"r = r^F = r^W = {r.toric[0]}", **prov)
    rep.claim("verdict", r.verdict, **prov)
    for i, text in enumerate(r.notes):
        rep.claim(f"note_{i}", text, **prov)
