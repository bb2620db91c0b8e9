"""Command-line front end: ``fppkit <command> ...``.

Inputs are polynomial files (``ring <TAG> vars ...`` header, one polynomial
per line) or the names of bundled datasets. Every report carries the seed
and a SHA-256 of each input. Exit codes: 0 success, 2 input error,
3 verification mismatch or nothing verified, 4 internal failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import warnings
from fractions import Fraction
from math import factorial
from pathlib import Path

from . import __version__
from .datasets import resolve_input
from .errors import (
    ArityMismatch,
    CoefficientNotInRing,
    EmptyAnsatz,
    EvenPrime,
    FppError,
    HilbertNotConstant,
    IncompatiblePattern,
    LiftFailed,
    NoEquivariantSolution,
    NonResidue,
    NotACurve,
    NotFound,
    NotStabilized,
    PolySyntaxError,
    PrecisionTooLow,
    RecognitionFailed,
    SamplingExhausted,
    SingularJacobian,
    StageError,
    UnderDeterminedWarning,
    UnknownVariable,
)
from .poly import CyclicAction, format_poly_file
from .ring import QuadElem, ZMod, ZModElem, format_quad, ring_from_tag, sqrt_mod

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH, EXIT_INTERNAL = 0, 2, 3, 4

_INPUT_ERRORS = (PolySyntaxError, UnknownVariable, CoefficientNotInRing, ArityMismatch, NonResidue, EvenPrime,
                 PrecisionTooLow, IncompatiblePattern, NotACurve, FileNotFoundError, IsADirectoryError,
                 json.JSONDecodeError)
_MISMATCH_ERRORS = (NotStabilized, NotFound, RecognitionFailed, HilbertNotConstant, NoEquivariantSolution,
                    LiftFailed, SingularJacobian, SamplingExhausted, EmptyAnsatz)


class InputError(FppError):
    """Bad command-line input."""


class Mismatch(FppError):
    """A result failed its check against an expectation."""


# --- helpers ---------------------------------------------------------------


def _default_seed() -> int:
    raw = os.environ.get("FPPKIT_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"FPPKIT_SEED={raw!r} is not an integer") from None


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _is_prime(p: int) -> bool:
    from sympy import isprime

    return isprime(p)


def _prime(p):
    if p is None:
        raise InputError("a prime is required (-p)")
    if not _is_prime(p):
        raise InputError(f"{p} is not prime")
    return p


def _load(arg, report, key="input", ring=None):
    I, text = resolve_input(arg, ring)
    report.setdefault("inputs", {})[key] = {"source": arg, "sha256": _digest(text)}
    return I


def parse_action(text: str) -> CyclicAction:
    """``N:w1,...,wn`` or ``N:w1,...,wn|q0,...,q(n-1)`` (permutation), or a JSON object
    with keys ``order``, ``weights`` and optionally ``perm``, ``scalars``."""
    text = text.strip()
    if text.startswith("{"):
        d = json.loads(text)
        perm = d.get("perm")
        scal = d.get("scalars")
        return CyclicAction(int(d["order"]), tuple(d["weights"]), None if perm is None else tuple(perm),
                            None if scal is None else tuple(scal))
    m = re.fullmatch(r"(\d+)\s*:\s*([-\d,\s]+?)(?:\|([\d,\s]+))?", text)
    if not m:
        raise InputError(f"cannot parse action {text!r} (expected N:w1,w2,... or N:w1,...|perm)")
    weights = tuple(int(x) for x in m.group(2).split(","))
    perm = tuple(int(x) for x in m.group(3).split(",")) if m.group(3) else None
    return CyclicAction(int(m.group(1)), weights, perm)


def parse_pattern(text, nvars, pin, action=None):
    """``all``, ``orbits`` (permutation orbits of ``--action``) or groups ``0,1;2;3,4``."""
    from .search.cuts import InvariantCutPattern

    pin = None if pin in (None, "none") else int(pin)
    if text in (None, "all"):
        pat = InvariantCutPattern.all_free(nvars)
        return pat if pin is None else InvariantCutPattern(pat.groups, nvars, pin)
    if text == "orbits":
        if action is None:
            raise InputError("--pattern orbits needs --action")
        return InvariantCutPattern.from_action(action, pin)
    try:
        groups = tuple(tuple(int(i) for i in g.split(",")) for g in text.split(";") if g.strip())
        return InvariantCutPattern(groups, nvars, pin)
    except ValueError as exc:
        raise InputError(f"bad pattern {text!r}: {exc}") from None


def parse_expected(text: str):
    """Hilbert polynomial in ``n`` (``3n+1``, ``2*n^2 + 3*n + 1``) or ``binom(n+a, b)``."""
    m = re.fullmatch(r"\s*binom\(\s*n\s*\+\s*(\d+)\s*,\s*(\d+)\s*\)\s*", text)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        # expand (n+a)(n+a-1)...(n+a-b+1)/b! as coefficients, lowest first
        coeffs = [Fraction(1)]
        for j in range(b):
            c = a - j
            new = [Fraction(0)] * (len(coeffs) + 1)
            for i, v in enumerate(coeffs):
                new[i] += v * c
                new[i + 1] += v
            coeffs = new
        return [c / factorial(b) for c in coeffs]
    from .vgeom.ideal import parse_upoly

    return [Fraction(c) for c in parse_upoly(re.sub(r"(\d)\s*n", r"\1*n", text))]


def _root_arg(args):
    """Residue of ``sqrt(d)`` mod ``p`` from ``--root`` (``None``: the canonical one)."""
    return None if getattr(args, "root", None) is None else int(args.root)


def _fmt(x) -> str:
    if isinstance(x, QuadElem):
        return format_quad(x)
    if isinstance(x, ZModElem):
        return str(x.value)
    return str(x)


def _print_table(rows, headers, out=sys.stdout):
    rows = [[str(c) for c in r] for r in rows]
    widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(headers)]
    out.write("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip() + "\n")
    out.write("  ".join("-" * w for w in widths) + "\n")
    for r in rows:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def _emit(args, report, human):
    if args.output and args.command not in ("forms", "sparsify"):
        Path(args.output).write_text(json.dumps(report, indent=1) + "\n")
    if args.json:
        print(json.dumps(report, indent=1))
    else:
        human(report)


# --- commands ----------------------------------------------------------------


def cmd_recognize(args):
    report = {"command": "recognize", "seed": args.seed}
    from .lift import lift_root
    from .recog import recognize_quad
    from .ring import Modulus

    p = _prime(args.p)
    mod = Modulus(p, args.k)
    if args.root is not None and args.d is not None and 0 <= args.root < p:
        s = lift_root(args.d, args.root, p, args.k)
        d = args.d
    elif args.root is not None:
        s = ZModElem(int(args.root), mod)
        d = args.d
    elif args.d is not None:
        s = lift_root(args.d, sqrt_mod(args.d, p), p, args.k)
        d = args.d
    else:
        s, d = None, None
    results = []
    for r in args.residue:
        x = ZModElem(int(r), mod)
        q = recognize_quad(x, s, args.height_bound, d=d)
        results.append({"residue": str(x.value), "modulus": {"p": p, "k": args.k},
                        "root": None if s is None else str(s.value), "result": format_quad(q)})
    report["inputs"] = {"residues": {"sha256": _digest(" ".join(args.residue))}}
    report["results"] = results

    def human(rep):
        _print_table([[r["residue"][:24] + ("..." if len(r["residue"]) > 24 else ""), r["result"]]
                      for r in rep["results"]], ["residue", "recognized"])

    if len(results) == 1 and args.json:
        report.update(results[0])
    _emit(args, report, human)
    return EXIT_OK


def cmd_hilbert(args):
    from .vgeom.graded import hilbert_polynomial

    report = {"command": "hilbert", "seed": args.seed}
    I = _load(args.input, report)
    if args.p is not None:
        from .search.guided import reduce_system

        I = reduce_system(I, _prime(args.p), _root_arg(args))[0]
    window = None
    if args.window:
        try:
            lo, hi = (int(x) for x in args.window.split(":"))
        except ValueError:
            raise InputError(f"bad window {args.window!r} (expected lo:hi)") from None
        window = (lo, hi)
    expected = parse_expected(args.expected) if args.expected else None
    try:
        hd = hilbert_polynomial(I, window, cap=args.cap, expected=expected)
    except NotStabilized as exc:
        data = getattr(exc, "data", None)
        report["hilbert"] = data.to_json() if data is not None else None
        report["status"] = "not stabilized"
        _emit(args, report, lambda rep: print(f"Hilbert function did not stabilize: {exc}"))
        return EXIT_MISMATCH
    from .vgeom.ideal import format_upoly

    report.update(hd.to_json())
    report["polynomial"] = hd.format()
    report["dimension"] = hd.dimension
    report["degree"] = hd.degree
    code = EXIT_OK
    if expected is not None:
        ok = hd.matches(expected)
        report["expected"] = format_upoly(expected)
        report["matches"] = ok
        code = EXIT_OK if ok else EXIT_MISMATCH

    def human(rep):
        _print_table([[k, v] for k, v in rep["values"].items()], ["n", "h(n)"])
        print(f"Hilbert polynomial: {rep['polynomial']} (from n = {rep['stable_from']})")
        print(f"dimension {rep['dimension']}, degree {rep['degree']}")
        if "expected" in rep:
            verdict = "matches" if rep["matches"] else "DOES NOT MATCH"
            print(f"expected: {rep['expected']}  computed: {rep['polynomial']}  -> {verdict}")

    _emit(args, report, human)
    return code


def _read_points(path, ring, report):
    from .vgeom.ideal import ProjPoint

    text = Path(path).read_text()
    report.setdefault("inputs", {})["points"] = {"source": path, "sha256": _digest(text)}
    data = json.loads(text)
    if isinstance(data, dict):
        ring = ring_from_tag(data["ring"]) if "ring" in data else ring
        data = data["points"]
    pts = []
    for row in data:
        coords = [ring.parse(str(c)) if isinstance(c, str) else ring(c) for c in row]
        pts.append(ProjPoint(coords))
    return pts, ring


def cmd_forms(args):
    from .poly import PolyRing
    from .vgeom.forms import check_vanishing, vanishing_forms
    from .vgeom.sampling import sample_points

    report = {"command": "forms", "seed": args.seed, "degree": args.degree, "order": args.order}
    act = parse_action(args.action) if args.action else None
    if args.input:
        I = _load(args.input, report)
        if args.p is not None:
            from .search.guided import reduce_system

            I = reduce_system(I, _prime(args.p), _root_arg(args))[0]
        ambient = I.ambient
        if args.points:
            pts, _ = _read_points(args.points, I.ring, report)
        else:
            if args.sample is None:
                raise InputError("give --points or --sample N")
            pts = sample_points(I, args.sample, seed=args.seed)
    else:
        if not args.points:
            raise InputError("give an input variety or --points")
        ring = ZMod(_prime(args.p)) if args.p is not None else ring_from_tag(args.ring)
        pts, ring = _read_points(args.points, ring, report)
        n = len(pts[0].coords) if pts else 0
        names = args.vars.split() if args.vars else [f"x{i}" for i in range(n)]
        ambient = PolyRing(names, ring)
    if act is not None and act.nvars != ambient.nvars:
        raise InputError("the action and the ambient space have different numbers of variables")
    weights = ([args.weight] if args.weight is not None else list(range(act.order))) if act else [None]
    classes, allforms = [], []
    for w in weights:
        wf = None if w is None else (act, w)
        forms = vanishing_forms(pts, args.degree, wf, args.order, ambient)
        if not check_vanishing(forms, pts, args.order):
            raise Mismatch(f"a form of weight {w} does not vanish at the points")
        classes.append({"weight": w, "count": len(forms)})
        allforms.extend(forms)
    report["npoints"] = len(pts)
    report["classes"] = classes
    report["total"] = len(allforms)
    text = format_poly_file(ambient, allforms, [f"degree {args.degree} forms vanishing to order {args.order} "
                                                f"at {len(pts)} points"])
    if args.output:
        Path(args.output).write_text(text)
        report["output"] = args.output
    else:
        report["forms"] = [str(f) for f in allforms]

    def human(rep):
        _print_table([["all" if c["weight"] is None else c["weight"], c["count"]] for c in rep["classes"]],
                     ["weight", "forms"])
        print(f"total: {rep['total']} forms through {rep['npoints']} points")
        if "forms" in rep:
            sys.stdout.write(text)

    _emit(args, report, human)
    return EXIT_OK


def cmd_search_cuts(args):
    from .search.cuts import search_nonreduced_cuts
    from .search.guided import reduce_system

    report = {"command": "search-cuts", "seed": args.seed}
    I = _load(args.input, report)
    p = _prime(args.p)
    if not isinstance(I.ring, ZMod):
        I = reduce_system(I, p, _root_arg(args))[0]
    elif I.ring.p != p:
        raise InputError(f"the input is over {I.ring.tag}, not GF({p})")
    act = parse_action(args.action) if args.action else None
    pat = parse_pattern(args.pattern, I.nvars, args.pin, act)
    rep = search_nonreduced_cuts(I, pat, seed=args.seed, jobs=args.jobs, trials=args.trials)
    report.update(rep.to_json())
    report["cuts"] = rep.cuts()
    report["nhits"] = len(rep.hits)

    def human(r):
        print(f"p = {r['p']}, scanned {r['candidates_scanned']} cuts in {r['timing']} s, "
              f"{r['nhits']} nonreduced")
        if r["cuts"]:
            _print_table([[i, " ".join(map(str, c))] for i, c in enumerate(r["cuts"])], ["#", "cut coefficients"])

    _emit(args, report, human)
    return EXIT_OK


def cmd_lift(args):
    from .lift import lift_point
    from .recog import recognize_vector
    from .search.guided import reduce_system
    from .vgeom.ideal import ProjPoint

    report = {"command": "lift", "seed": args.seed}
    I = _load(args.input, report)
    p = _prime(args.p)
    if isinstance(I.ring, ZMod):
        Ip, s = I, None
    else:
        Ip, s = reduce_system(I, p, _root_arg(args))
    F = ZMod(p)
    try:
        pt = ProjPoint([F(int(c)) for c in args.point.split(",")])
    except ValueError:
        raise InputError(f"bad point {args.point!r}") from None
    if not Ip.contains_point(pt):
        raise InputError(f"({args.point}) is not on the variety mod {p}")
    with warnings.catch_warnings():
        # on a positive-dimensional variety some coordinates are free; they are reported instead
        warnings.simplefilter("ignore", UnderDeterminedWarning)
        out, rep = lift_point(I, pt, args.precision, root=s, dim=args.dim, report=True)
    report["p"], report["k"] = p, args.precision
    report["free"] = [I.names[j] for j in rep.free]
    report["point"] = [str(v) for v in out.values()]
    if args.recognize:
        from .lift import lift_root

        sK = lift_root(I.ring.d, s, p, args.precision) if s is not None else None
        vec = recognize_vector(out.coords, sK, args.height_bound)
        from .search.guided import verify_solution

        report["recognized"] = [_fmt(x) for x in vec]
        report["verified"] = verify_solution(I, vec)
        if not report["verified"]:
            _emit(args, report, lambda r: print("recognized point does not satisfy the equations"))
            return EXIT_MISMATCH

    def human(r):
        _print_table([[i, v if len(v) < 60 else v[:57] + "..."] for i, v in enumerate(r["point"])],
                     ["coord", f"value mod {p}^{r['k']}"])
        if r["free"]:
            print("kept at their balanced residues: " + ", ".join(r["free"]))
        if "recognized" in r:
            print("recognized: (" + " : ".join(r["recognized"]) + ")  verified exactly")

    _emit(args, report, human)
    return EXIT_OK


def cmd_solve(args):
    from .search.guided import hilbert_guided_solve

    report = {"command": "solve", "seed": args.seed}
    I = _load(args.input, report)
    p = _prime(args.p)
    sol = hilbert_guided_solve(I, p, args.precision, args.height_bound, seed=args.seed,
                               root=_root_arg(args))
    report.update({"p": p, "k": args.precision, "hilbert_constant": sol.hilbert_constant,
                   "solutions": [[_fmt(x) for x in v] for v in sol],
                   "failures": [{"point": list(map(str, f.get("point", []))), "reason": str(f.get("reason"))}
                                for f in sol.failures],
                   "cuts": [{"path": list(path), "cut": [str(c) for c in cut], "hilbert": h}
                            for path, cut, h in sol.cuts]})

    def human(r):
        print(f"Hilbert constant mod {p}: {r['hilbert_constant']}; {len(r['solutions'])} exact solutions")
        _print_table([[i, "(" + " : ".join(v) + ")"] for i, v in enumerate(r["solutions"])], ["#", "solution"])
        for f in r["failures"]:
            print(f"not recovered: {f['point']} ({f['reason']})")

    _emit(args, report, human)
    return EXIT_OK


def _read_forms(arg, report, count=None):
    from .poly import read_poly_text

    path = Path(arg)
    if not path.exists():
        raise FileNotFoundError(f"{arg}: no such file")
    text = path.read_text()
    report.setdefault("inputs", {})["input"] = {"source": arg, "sha256": _digest(text)}
    amb, polys = read_poly_text(text)
    if count is not None and len(polys) != count:
        raise InputError(f"{arg} must hold exactly {count} polynomials, found {len(polys)}")
    return amb, polys


def cmd_coordchange(args):
    from .search.coordchange import check_coordinate_change, equivariant_coordinate_change

    report = {"command": "coordchange", "seed": args.seed}
    amb, (src, tgt) = _read_forms(args.input, report, 2)
    act = parse_action(args.action)
    M = equivariant_coordinate_change(act, src, tgt, seed=args.seed)
    if not check_coordinate_change(act, M, src, tgt):
        raise Mismatch("the coordinate change fails its exact re-check")
    report["source"], report["target"] = str(src), str(tgt)
    report["matrix"] = [[_fmt(x) for x in row] for row in M]
    report["verified"] = True

    def human(r):
        _print_table([[i] + row for i, row in enumerate(r["matrix"])], ["row"] + list(amb.names))
        print("commutes with the action and maps the source cut to a multiple of the target: verified")

    _emit(args, report, human)
    return EXIT_OK


def cmd_sparsify(args):
    from .search.sparsify import monomial_count, sparsify_basis

    report = {"command": "sparsify", "seed": args.seed}
    amb, polys = _read_forms(args.input, report)
    out = sparsify_basis(polys, trials=args.trials, seed=args.seed)
    report["monomials_before"] = monomial_count(polys)
    report["monomials_after"] = monomial_count(out)
    text = format_poly_file(amb, out, ["sparsified basis of the same span"])
    if args.output:
        Path(args.output).write_text(text)
        report["output"] = args.output
    else:
        report["basis"] = [str(f) for f in out]

    def human(r):
        print(f"monomials: {r['monomials_before']} -> {r['monomials_after']}")
        if "basis" in r:
            sys.stdout.write(text)

    _emit(args, report, human)
    return EXIT_OK


def cmd_pipeline_torsion(args):
    from .pipeline import run_torsion_pipeline

    report = {"command": "pipeline-torsion", "seed": args.seed}
    I = _load(args.input, report)
    p = _prime(args.p)
    act = parse_action(args.action) if args.action else None
    pat = parse_pattern(args.pattern, I.nvars, args.pin, act)
    target = I.ambient.parse(args.target) if args.target else None
    if target is not None and act is None:
        raise InputError("--target needs --action")
    select = args.select
    if select not in ("first", "densest"):
        try:
            select = int(select)
        except ValueError:
            raise InputError(f"--select must be an index, 'first' or 'densest', not {select!r}") from None
    rep = run_torsion_pipeline(I, p, pattern=pat, K=args.precision, H=args.height_bound, select=select,
                               seed=args.seed, action=act, target=target, jobs=args.jobs, trials=args.trials,
                               root=_root_arg(args))
    report.update(rep)

    def human(r):
        print(f"p = {r['p']}: {r['hits']} nonreduced cuts mod p")
        if r["status"] != "found":
            print(r["status"])
            return
        sel = r["selected"]
        print(f"selected hit #{sel['index']}: {' '.join(map(str, sel['cut_mod_p']))}")
        print(f"lifted to {p}^{r['K']} and recognized: " + ", ".join(r["cut"]))
        print(f"reduces back to: {' '.join(map(str, r['cut_mod_p_recomputed']))}; exact nonreducedness verified")
        if r.get("coordinate_change"):
            _print_table([[i] + row for i, row in enumerate(r["coordinate_change"])], ["row"] + list(I.ambient.names))
        _print_table([[k, v] for k, v in r["timings"].items()], ["stage", "seconds"])

    _emit(args, report, human)
    return EXIT_OK


# --- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (default: $FPPKIT_SEED or 0)")
    common.add_argument("--json", action="store_true", help="print a JSON report instead of a table")
    common.add_argument("-o", "--output", help="write the result to this file")
    common.add_argument("--jobs", type=int, default=1, help="worker processes where supported")

    ap = argparse.ArgumentParser(prog="fppkit", description="Finite-field search, lifting and recognition tools.")
    ap.add_argument("--version", action="version", version=f"fppkit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_prime(sp, required=True):
        sp.add_argument("-p", "--prime", dest="p", type=int, required=required, help="prime for reduction")
        sp.add_argument("--root", type=int, help="residue of sqrt(d) mod p (default: the canonical root)")

    sp = sub.add_parser("search-cuts", parents=[common], help="search hyperplane cuts with a nonreduced section")
    sp.add_argument("input", help="surface file or bundled dataset name")
    with_prime(sp)
    sp.add_argument("--pattern", default="all", help="'all', 'orbits' or groups like '0,1;2;3,4'")
    sp.add_argument("--pin", default="none", help="group index whose coefficient is 1, or 'none'")
    sp.add_argument("--action", help="cyclic action N:w1,...,wn[|perm]")
    sp.add_argument("--trials", type=int, default=8, help="random slices per cut before the exact test")
    sp.set_defaults(func=cmd_search_cuts)

    sp = sub.add_parser("lift", parents=[common], help="Hensel-lift a point mod p to p^k")
    sp.add_argument("input")
    with_prime(sp)
    sp.add_argument("--point", required=True, help="comma-separated residues mod p")
    sp.add_argument("-k", "--precision", type=int, default=40)
    sp.add_argument("--dim", type=int, help="dimension of the variety at the point")
    sp.add_argument("--recognize", action="store_true", help="recognize and verify the lifted coordinates")
    sp.add_argument("--height-bound", type=int)
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("recognize", parents=[common], help="recognize (a + b*sqrt(d))/c from residues mod p^k")
    sp.add_argument("residue", nargs="+")
    with_prime(sp)
    sp.add_argument("-k", type=int, required=True, help="exponent of the modulus p^k")
    sp.add_argument("-d", type=int, help="radicand (default: rational recognition unless --root is given)")
    sp.add_argument("--height-bound", type=int)
    sp.set_defaults(func=cmd_recognize)

    sp = sub.add_parser("hilbert", parents=[common], help="Hilbert function and polynomial")
    sp.add_argument("input")
    with_prime(sp, required=False)
    sp.add_argument("--window", help="degree window lo:hi")
    sp.add_argument("--cap", type=int, default=3, help="largest polynomial degree tried")
    sp.add_argument("--expected", help="expected polynomial, e.g. '3n+1' or 'binom(n+9,9)'")
    sp.set_defaults(func=cmd_hilbert)

    sp = sub.add_parser("forms", parents=[common], help="forms vanishing at points, per weight class")
    sp.add_argument("input", nargs="?", help="variety to sample points from (or to take the ambient from)")
    with_prime(sp, required=False)
    sp.add_argument("--points", help="JSON file with points (list of coordinate lists, or {ring, points})")
    sp.add_argument("--sample", type=int, help="number of points to sample on the variety mod p")
    sp.add_argument("--ring", default="QQ", help="coefficient ring of --points when there is no input")
    sp.add_argument("--vars", help="variable names when there is no input")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--order", type=int, default=1, help="vanishing order")
    sp.add_argument("--action", help="cyclic action N:w1,...,wn for the weight classes")
    sp.add_argument("--weight", type=int, help="only this weight class")
    sp.set_defaults(func=cmd_forms)

    sp = sub.add_parser("solve", parents=[common], help="Hilbert-guided solve of a zero-dimensional system")
    sp.add_argument("input")
    with_prime(sp)
    sp.add_argument("-k", "--precision", type=int, default=200)
    sp.add_argument("--height-bound", type=int)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("coordchange", parents=[common], help="equivariant change taking a cut to a target")
    sp.add_argument("input", help="file with two linear forms: source then target")
    sp.add_argument("--action", required=True)
    sp.set_defaults(func=cmd_coordchange)

    sp = sub.add_parser("sparsify", parents=[common], help="sparser basis of the span of a list of forms")
    sp.add_argument("input")
    sp.add_argument("--trials", type=int, default=200)
    sp.set_defaults(func=cmd_sparsify)

    sp = sub.add_parser("pipeline-torsion", parents=[common], help="search, lift, recognize and verify a cut")
    sp.add_argument("input")
    with_prime(sp)
    sp.add_argument("--pattern", default="all")
    sp.add_argument("--pin", default="none")
    sp.add_argument("--action")
    sp.add_argument("--target", help="target linear form for the equivariant coordinate change")
    sp.add_argument("--trials", type=int, default=8)
    sp.add_argument("--precision", type=int, default=40, help="lift to p^precision")
    sp.add_argument("--height-bound", type=int)
    sp.add_argument("--select", default="densest", help="hit to lift: index, 'first' or 'densest'")
    sp.set_defaults(func=cmd_pipeline_torsion)
    return ap


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, StageError):
        return _exit_code(exc.cause)
    if isinstance(exc, (InputError, *_INPUT_ERRORS)):
        return EXIT_INPUT
    if isinstance(exc, (Mismatch, *_MISMATCH_ERRORS)):
        return EXIT_MISMATCH
    return EXIT_INTERNAL


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.seed is None:
            args.seed = _default_seed()
        return args.func(args)
    except Exception as exc:  # report every failure with a stable exit code
        code = _exit_code(exc)
        kind = {EXIT_INPUT: "input error", EXIT_MISMATCH: "verification failed"}.get(code, "internal error")
        print(f"fppkit {args.command}: {kind}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
