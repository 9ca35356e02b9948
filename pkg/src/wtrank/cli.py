"""Command line front end and scenario runner.

A scenario file (``*.scn``) is YAML with the keys ``id``, ``task``,
``inputs``, ``params`` and an optional ``expect`` mapping from report keys to
expected values.  Expressions use the series grammar of :mod:`wtrank.parsing`.

Examples
--------
::

    wtrank wdivide "x2^3" "x2^2 - x1" --trunc 10
    wtrank ranks u1^2 u1^3 --degree 3 --trunc 12
    wtrank --suite scenarios --out golden --jobs 4
"""
from __future__ import annotations

import argparse
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import yaml

from . import blowup, npe, puiseux, ranks, weierstrass
from .graded import ProjElement
from .parsing import ParseError, parse_series, variables_in
from .series import TSeries
from .report import (Report, add_division, add_npe, add_preparation, add_pullback, add_puiseux,
                     add_ranks, add_tree)

TASKS = ("wdivide", "wprepare", "puiseux", "npe-factor", "blowup", "resolve", "proj-pullback", "ranks")
REQUIRED = {
    "wdivide": (("G", "F"), ("trunc",)),
    "wprepare": (("f",), ("trunc",)),
    "puiseux": (("P",), ("trunc",)),
    "npe-factor": (("P",), ("trunc",)),
    "blowup": (("f",), ("chart_c",)),
    "resolve": (("delta",), ()),
    "proj-pullback": (("h", "pieces"), ("chart_c",)),
    "ranks": (("morphism",), ("degree", "trunc")),
}


class ScenarioError(ValueError):
    pass


@dataclass
class Scenario:
    id: str
    task: str
    inputs: dict
    params: dict = field(default_factory=dict)
    expect: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.task not in TASKS:
            raise ScenarioError(f"unknown task {self.task!r}")
        self.params = {k.replace("-", "_"): v for k, v in (self.params or {}).items()}
        need_in, need_par = REQUIRED[self.task]
        for k in need_in:
            if k not in self.inputs:
                raise ScenarioError(f"missing input {k!r} for task {self.task}")
        for k in need_par:
            if k not in self.params:
                raise ScenarioError(f"missing parameter {k!r} for task {self.task}")
        for k, v in self.params.items():
            if k != "point" and not isinstance(v, int):
                raise ScenarioError(f"parameter {k!r} must be an integer")


def load_scenario(path):
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ScenarioError(f"malformed scenario file{where}") from exc
    if not isinstance(data, dict):
        raise ScenarioError("scenario file must be a mapping")
    for key in ("id", "task", "inputs"):
        if key not in data:
            raise ScenarioError(f"missing key {key!r}")
    return Scenario(str(data["id"]), str(data["task"]), dict(data["inputs"]),
                    dict(data.get("params") or {}), dict(data.get("expect") or {}))


def _natural(name):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def _names(texts, given=None):
    if given:
        return list(given)
    found = []
    for t in texts:
        for v in variables_in(t):
            if v not in found:
                found.append(v)
    return sorted(found, key=_natural)


def _parse(text, names, N=None):
    """Polynomials stay exact; anything needing a truncation gets ``N``."""
    text = str(text)
    trunc = N if "exp(" in text else None
    return parse_series(text, names, trunc)


# ---------------------------------------------------------------------------
# tasks

def _run_wdivide(s, rep):
    N = s.params["trunc"]
    names = _names([s.inputs["G"], s.inputs["F"]], s.inputs.get("vars"))
    var = names.index(s.inputs.get("var", names[-1]))
    G, F = _parse(s.inputs["G"], names, N), _parse(s.inputs["F"], names, N)
    res = weierstrass.wdivide(G, F, var, order=N)
    add_division(rep, res, names, N)


def _run_wprepare(s, rep):
    N = s.params["trunc"]
    names = _names([s.inputs["f"]], s.inputs.get("vars"))
    var = names.index(s.inputs.get("var", names[-1]))
    f = _parse(s.inputs["f"], names, N)
    U, P = weierstrass.wprepare(f, var, order=N)
    add_preparation(rep, U, P, names, N)


def _run_puiseux(s, rep):
    N = s.params["trunc"]
    P = _parse(s.inputs["P"], ["x", "y"], N)
    parts = P.coeffs_in(1)
    coeffs = [parts.get(j, TSeries.zero(1, P.trunc)) for j in range(max(parts) + 1)]
    branches = puiseux.puiseux_branches(coeffs, N)
    roots = puiseux.newton_puiseux(coeffs, N)
    ok = puiseux.check_recomposition(coeffs, branches, N)
    add_puiseux(rep, branches, roots, N, ok)


def _run_npe(s, rep):
    N = s.params["trunc"]
    names = ["x1", "x2", "y"]
    P = _parse(s.inputs["P"], names, N)
    fact = npe.npe_factor(P, N)
    ok = npe.check_graded_recomposition(P, fact)
    add_npe(rep, fact, ok, names)


def _run_blowup(s, rep):
    c = s.params["chart_c"]
    names = ["x1", "x2"]
    f = _parse(s.inputs["f"], names)
    direct = blowup.f1_chart_pullback(f, c)
    chained = blowup.blowup_pullback(f, blowup.f1_chart_point(c))
    rep.claim("pullback", direct.fmt(["v1", "v2"]), c=c)
    rep.claim("chart_chain_agrees", "yes" if direct == chained else "no", c=c)
    mono = blowup.is_monomial_times_unit(direct)
    rep.claim("monomial", f"v1^{mono[0]}*v2^{mono[1]}*unit" if mono else "no", c=c)


def _run_resolve(s, rep):
    md = s.params.get("max_depth", 30)
    delta = _parse(s.inputs["delta"], ["x1", "x2"])
    tree = blowup.resolve_monomialize(delta, md)
    add_tree(rep, tree)


def _run_proj_pullback(s, rep):
    c = s.params["chart_c"]
    names = ["x1", "x2"]
    h = _parse(s.inputs["h"], names)
    pieces = {int(k): _parse(v, names) for k, v in s.inputs["pieces"].items()}
    alpha, beta = int(s.inputs.get("alpha", 0)), int(s.inputs.get("beta", 0))
    A = ProjElement(h, alpha, beta, pieces)
    point = s.params.get("point", 0)
    if point != "inf":
        point = Fraction(str(point))
    res = blowup.proj_pullback(A, c, point, s.params.get("terms", 6))
    add_pullback(rep, res)


def _run_ranks(s, rep):
    d, N = s.params["degree"], s.params["trunc"]
    comps = [str(c) for c in s.inputs["morphism"]]
    names = _names(comps, s.inputs.get("vars"))
    phi = ranks.Morphism(tuple(_parse(c, names, N) for c in comps))
    r = ranks.rank_report(phi, d, N)
    add_ranks(rep, r, [f"x{i + 1}" for i in range(phi.n)])


RUNNERS = {
    "wdivide": _run_wdivide, "wprepare": _run_wprepare, "puiseux": _run_puiseux,
    "npe-factor": _run_npe, "blowup": _run_blowup, "resolve": _run_resolve,
    "proj-pullback": _run_proj_pullback, "ranks": _run_ranks,
}


def _strip_order(text):
    return re.sub(r"\s*\+\s*O\([^()]*\)\s*$", "", text.strip())


def _matches(claim, expected):
    got, want = " ".join(claim.text.split()), " ".join(str(expected).split())
    if got == want:
        return True
    try:
        g, w = _strip_order(got), _strip_order(want)
        names = _names([g, w])
        return parse_series(g, names) == parse_series(w, names)
    except (ParseError, ValueError, ZeroDivisionError):
        return False


def run_scenario(s):
    """Run one scenario; errors are recorded in the report, not raised."""
    rep = Report(s.id, s.task, dict(s.params))
    try:
        RUNNERS[s.task](s, rep)
    except Exception as exc:  # noqa: BLE001 - reported per scenario
        rep.error = f"scenario {s.id}: {type(exc).__name__}: {exc}"
        return rep
    for key, expected in sorted(s.expect.items()):
        claim = rep.get(key)
        if claim is None:
            rep.checks.append((key, False, "no such output"))
        else:
            ok = _matches(claim, expected)
            rep.checks.append((key, ok, f"got {claim.text}"))
    return rep


def _run_file(path):
    path = Path(path)
    try:
        s = load_scenario(path)
    except (ScenarioError, OSError, UnicodeDecodeError) as exc:
        rep = Report(path.stem, "unknown", {})
        rep.error = f"{path.name}: {exc}"
        return rep.scenario, rep.render(), False
    rep = run_scenario(s)
    return rep.scenario, rep.render(), rep.passed


@dataclass
class SuiteSummary:
    reports: list

    @property
    def total(self):
        return len(self.reports)

    @property
    def failed(self):
        return [sid for sid, _, ok in self.reports if not ok]

    @property
    def ok(self):
        return not self.failed


def run_suite(path, out=None, jobs=1):
    """Run every ``*.scn`` under ``path``; write ``<id>.out`` into ``out``."""
    files = sorted(Path(path).glob("*.scn"))
    if jobs and jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_file, files))
    else:
        results = [_run_file(f) for f in files]
    results.sort(key=lambda r: r[0])
    if out is not None:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        for sid, text, _ in results:
            (outdir / f"{sid}.out").write_text(text)
    return SuiteSummary(results)


# ---------------------------------------------------------------------------

def _build_parser():
    p = argparse.ArgumentParser(prog="wtrank", description=__doc__.split("\n")[0])
    p.add_argument("--suite", help="directory of *.scn scenario files")
    p.add_argument("--out", help="output file (single task) or directory (suite)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for --suite")
    sub = p.add_subparsers(dest="task")

    def add(name, *inputs, **flags):
        sp = sub.add_parser(name)
        for inp in inputs:
            sp.add_argument(inp)
        for flag, kw in flags.items():
            sp.add_argument("--" + flag.replace("_", "-"), **kw)
        sp.add_argument("--out", dest="sub_out", help="write the report to this file")
        return sp

    trunc = {"type": int, "required": True}
    add("wdivide", "G", "F", trunc=trunc, var={})
    add("wprepare", "f", trunc=trunc, var={})
    add("puiseux", "P", trunc=trunc)
    add("npe-factor", "P", trunc=trunc)
    add("blowup", "f", chart_c={"type": int, "default": 0})
    add("resolve", "delta", max_depth={"type": int, "default": 30})
    add("proj-pullback", "h", alpha={"type": int, "default": 0}, beta={"type": int, "default": 0},
        piece={"action": "append", "required": True, "help": "k:expression"},
        chart_c={"type": int, "default": 0}, point={"default": "0"})
    sp = add("ranks", degree={"type": int, "required": True}, trunc=trunc)
    sp.add_argument("morphism", nargs="+")
    return p


def _scenario_from_args(a):
    task = a.task
    params, inputs = {}, {}
    for key in ("trunc", "degree", "chart_c", "max_depth"):
        if getattr(a, key, None) is not None:
            params[key] = getattr(a, key)
    if task == "wdivide":
        inputs = {"G": a.G, "F": a.F}
    elif task in ("wprepare", "blowup"):
        inputs = {"f": a.f}
    elif task in ("puiseux", "npe-factor"):
        inputs = {"P": a.P}
    elif task == "resolve":
        inputs = {"delta": a.delta}
    elif task == "proj-pullback":
        pieces = {}
        for item in a.piece:
            k, _, expr = item.partition(":")
            pieces[int(k)] = expr
        inputs = {"h": a.h, "alpha": a.alpha, "beta": a.beta, "pieces": pieces}
        params["point"] = a.point
    elif task == "ranks":
        inputs = {"morphism": a.morphism}
    if getattr(a, "var", None):
        inputs["var"] = a.var
    return Scenario("cli", task, inputs, params)


def main(argv=None):
    args = _build_parser().parse_args(argv)
    if args.suite:
        summary = run_suite(args.suite, args.out, args.jobs)
        for sid, _, ok in summary.reports:
            print(f"{sid}: {'pass' if ok else 'FAIL'}")
        print(f"{summary.total - len(summary.failed)} of {summary.total} scenarios passed")
        return 0 if summary.ok else 1
    if not args.task:
        _build_parser().print_help()
        return 2
    try:
        s = _scenario_from_args(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rep = run_scenario(s)
    text = rep.render()
    out = getattr(args, "sub_out", None) or args.out
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
