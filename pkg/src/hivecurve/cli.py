"""Command-line front end wiring the modules into reproducible runs.

Exit codes: 0 success, 1 negative verdict (fail / infeasible / not_hive),
2 usage errors, 3 input schema errors, 4 numeric failures.  All randomness
flows through --seed (default 0); identical configuration and inputs give
byte-identical JSON/CSV output (SVG identical up to the version comment).
"""

import argparse
import csv
import io
import math
import sys

from . import serialize as ser
from . import svg as svgmod
from .asymptotics import (RonkinSpec, boundary_asymptotics, direct_sum_check,
                          hive4_check, main_theorem_sweep, ronkin_boundary_check,
                          ronkin_coefficient, ronkin_value)
from .errors import HiveCurveError, SchemaError
from .hive import boundary, classify_hive, convolve, horn_feasible
from .hyperbolicity import backward_inequalities, shifted_hive_check, vinnikov_check
from .patchwork import (QUADRANT_CLASSES, build_chart, find_violation_path,
                        is_vinnikov_topology, patchwork_topology)
from .pencil import (GLTriple, PencilTriple, beta_map, curve_boundary, pencil_det,
                     singular_values)
from .tropical import (amoeba_sample, classify_subdivision, regular_subdivision,
                       tropical_curve)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2
EXIT_SCHEMA = 3
EXIT_NUMERIC = 4


def _csv_text(rows, header):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_doc(doc, args):
    _emit(ser.dump(doc), args.out)


def _tols(args):
    out = {}
    for item in args.tol or ():
        key, _, val = item.partition("=")
        if not val:
            raise SchemaError(f"--tol wants KEY=VAL, got {item!r}")
        out[key] = float(val)
    return out


def _tgrid(args, default=(1e2, 1e3, 1e4, 1e5, 1e6)):
    if not args.tgrid:
        return list(default)
    try:
        return [float(x) for x in args.tgrid.split(",")]
    except ValueError as exc:
        raise SchemaError(f"bad --tgrid {args.tgrid!r}") from exc


def _triple_arg(raw, name, count=3):
    try:
        parts = [float(x) for x in raw.split(",")]
    except ValueError as exc:
        raise SchemaError(f"bad {name} {raw!r}") from exc
    if len(parts) != count:
        raise SchemaError(f"{name} wants {count} comma-separated values")
    return tuple(parts)


# --------------------------------------------------------------------------
# subcommand bodies: each returns the process exit code
# --------------------------------------------------------------------------

def _hive_check(args):
    h = ser.hive_from_doc(ser.load(args.infile))
    res = classify_hive(h)
    doc = {"schema": ser.SCHEMA, "verdict": res.verdict,
           "violated": [[list(i) for i in rh.plus + rh.minus] for rh in res.violated],
           "tight_count": len(res.tight)}
    _emit_doc(doc, args)
    return EXIT_OK if res.verdict != "not_hive" else EXIT_VERDICT


def _hive_boundary(args):
    h = ser.hive_from_doc(ser.load(args.infile))
    _emit_doc(ser.boundary_to_doc(boundary(h)), args)
    return EXIT_OK


def _hive_convolve(args):
    h1 = ser.hive_from_doc(ser.load(args.infile))
    h2 = ser.hive_from_doc(ser.load(args.infile2))
    _emit_doc(ser.hive_to_doc(convolve(h1, h2)), args)
    return EXIT_OK


def _horn_feasible(args):
    b = ser.boundary_from_doc(ser.load(args.infile))
    res = horn_feasible(b)
    doc = {"schema": ser.SCHEMA, "verdict": "feasible" if res.feasible else "infeasible",
           "witness": ser.hive_to_doc(res.witness) if res.witness else None}
    _emit_doc(doc, args)
    return EXIT_OK if res.feasible else EXIT_VERDICT


def _pencil_det(args):
    X, Y, Z = ser.triple_from_doc(ser.load(args.infile), ("X", "Y", "Z"), mode=args.mode)
    tols = _tols(args)
    form = pencil_det(PencilTriple(X, Y, Z), mode=args.mode,
                      pd_tol=tols.get("pd", 1e-12))
    _emit_doc(ser.form_to_doc(form), args)
    return EXIT_OK


def _pencil_beta(args):
    A, B, C = ser.triple_from_doc(ser.load(args.infile), ("A", "B", "C"), mode=args.mode)
    tols = _tols(args)
    pencil = beta_map(GLTriple(A, B, C), id_tol=tols.get("id", 1e-10))
    _emit_doc(ser.triple_to_doc(pencil, ("X", "Y", "Z")), args)
    return EXIT_OK


def _pencil_boundary(args):
    form = ser.form_from_doc(ser.load(args.infile))
    a, b, g = curve_boundary(form)
    _emit_doc({"schema": ser.SCHEMA, "alpha": list(a), "beta": list(b),
               "gamma": list(g)}, args)
    return EXIT_OK


def _pencil_sing(args):
    m = ser.matrix_from_doc(ser.load(args.infile))
    _emit_doc({"schema": ser.SCHEMA, "values": singular_values(m)}, args)
    return EXIT_OK


def _hyperbolic_check(args):
    form = ser.form_from_doc(ser.load(args.infile))
    tols = _tols(args)
    base = _triple_arg(args.base, "--base") if args.base else (1.0, 1.0, 1.0)
    rep = vinnikov_check(form, base=base, directions=args.probes,
                         random_directions=args.random_probes, seed=args.seed,
                         imag_tol=tols.get("imag", 1e-9),
                         cluster_tol=tols.get("cluster", 1e-9), mode=args.mode)
    doc = {"schema": ser.SCHEMA, "verdict": rep.verdict, "probes": rep.probes,
           "degenerate_reprobes": rep.degenerate_reprobes,
           "counterexample": None if rep.counterexample is None else
           {"direction": list(rep.counterexample.direction),
            "real_roots": rep.counterexample_roots}}
    _emit_doc(doc, args)
    return EXIT_OK if rep.passed() else EXIT_VERDICT


def _hyperbolic_backward(args):
    form = ser.form_from_doc(ser.load(args.infile))
    rep = backward_inequalities(form)
    doc = {"schema": ser.SCHEMA, "verdict": rep.verdict,
           "min_margin": rep.min_margin(),
           "margins": [{"family": rh.family, "anchor": list(rh.minus[0]),
                        "weight": w, "margin": m} for (rh, w, m) in rep.margins]}
    _emit_doc(doc, args)
    return EXIT_OK if rep.verdict == "pass" else EXIT_VERDICT


def _hyperbolic_v1shift(args):
    form = ser.form_from_doc(ser.load(args.infile))
    tols = _tols(args)
    res = shifted_hive_check(form, tol=tols.get("shift", 1e-12))
    doc = {"schema": ser.SCHEMA, "verdict": res.verdict,
           "violated_count": len(res.violated), "tight_count": len(res.tight)}
    _emit_doc(doc, args)
    return EXIT_OK if res.verdict != "not_hive" else EXIT_VERDICT


def _trop_subdivide(args):
    lifting = ser.lifting_from_doc(ser.load(args.infile))
    sub = regular_subdivision(lifting)
    _emit_doc(ser.subdivision_to_doc(sub, classify_subdivision(sub)), args)
    return EXIT_OK


def _trop_curve(args):
    lifting = ser.lifting_from_doc(ser.load(args.infile))
    _emit_doc(ser.curve_to_doc(tropical_curve(lifting)), args)
    return EXIT_OK


def _trop_honeycomb_svg(args):
    lifting = ser.lifting_from_doc(ser.load(args.infile))
    text = svgmod.svg_honeycomb(tropical_curve(lifting))
    _emit(text, args.svg or args.out)
    return EXIT_OK


def _trop_amoeba_svg(args):
    form = ser.form_from_doc(ser.load(args.infile))
    res = args.resolution or 64
    cloud = amoeba_sample(form, resolution=(res, res), phases=args.phases)
    curve = None
    scale = 1.0
    if args.infile2:
        curve = tropical_curve(ser.lifting_from_doc(ser.load(args.infile2)))
        if args.logt:
            scale = 1.0 / math.log(float(args.logt))
    text = svgmod.svg_amoeba(cloud, curve=curve, scale=scale)
    _emit(text, args.svg or args.out)
    return EXIT_OK


def _patchwork_charts(args):
    sl = ser.signed_lifting_from_doc(ser.load(args.infile))
    charts = {eps: build_chart(sl, eps) for eps in QUADRANT_CLASSES}
    doc = {"schema": ser.SCHEMA, "charts": [
        {"epsilon": list(eps),
         "segments": [[list(m1), list(m2)] for (m1, m2) in ch.segments],
         "signs": [{"i": i, "j": j, "k": k, "s": "+" if s > 0 else "-"}
                   for (i, j, k), s in sorted(ch.vertex_signs.items())]}
        for eps, ch in charts.items()]}
    _emit_doc(doc, args)
    return EXIT_OK


def _patchwork_classify(args):
    sl = ser.signed_lifting_from_doc(ser.load(args.infile))
    rep = patchwork_topology(sl)
    ok = is_vinnikov_topology(rep, sl.lifting.n)
    doc = {"schema": ser.SCHEMA, "ovals": rep.ovals, "pseudoline": rep.pseudoline,
           "nesting": rep.nesting_depth, "components": rep.components,
           "vinnikov": ok}
    _emit_doc(doc, args)
    return EXIT_OK if ok else EXIT_VERDICT


def _patchwork_svg(args):
    sl = ser.signed_lifting_from_doc(ser.load(args.infile))
    charts = {eps: build_chart(sl, eps) for eps in QUADRANT_CLASSES}
    _emit(svgmod.svg_patchwork(charts), args.svg or args.out)
    return EXIT_OK


def _patchwork_violation(args):
    lifting = ser.lifting_from_doc(ser.load(args.infile))
    vp = find_violation_path(regular_subdivision(lifting))
    if vp is None:
        _emit_doc({"schema": ser.SCHEMA, "verdict": "no_violating_edge",
                   "path": None}, args)
        return EXIT_OK
    doc = {"schema": ser.SCHEMA, "verdict": "violating_edge",
           "axis": vp.axis, "edge": [list(v) for v in vp.edge],
           "path": [list(v) for v in vp.path]}
    _emit_doc(doc, args)
    return EXIT_VERDICT


def _sweep_main_theorem(args):
    fam = ser.family_from_doc(ser.load(args.infile))
    grid = _tgrid(args)
    res = main_theorem_sweep(fam, grid, directions=args.probes,
                             random_directions=args.random_probes, seed=args.seed)
    rows = [(t, rep.verdict, rep.probes,
             "" if res.threshold is None else res.threshold)
            for (t, rep) in res.reports]
    _emit(_csv_text(rows, ("t", "verdict", "probes", "threshold")), args.out)
    return EXIT_OK if res.final_verdict() == "pass" else EXIT_VERDICT


def _sweep_boundary(args):
    fam = ser.family_from_doc(ser.load(args.infile))
    grid = _tgrid(args, default=(1e2, 1e3, 1e4, 1e5))
    res = boundary_asymptotics(fam, grid)
    rows = []
    ok = True
    for t in grid:
        table = res.residuals[t]
        for f, name in enumerate(("alpha", "beta", "gamma")):
            for k in range(fam.n):
                good = abs(table[f, k]) <= res.bound[k] + 1e-12
                ok = ok and good
                rows.append((t, name, k + 1, repr(float(table[f, k])),
                             repr(res.bound[k]), int(good)))
    _emit(_csv_text(rows, ("t", "family", "slot", "residual", "bound", "ok")), args.out)
    return EXIT_OK if ok else EXIT_VERDICT


def _sweep_convolution(args):
    f1 = ser.family_from_doc(ser.load(args.infile))
    f2 = ser.family_from_doc(ser.load(args.infile2))
    rep = direct_sum_check(f1, f2)
    doc = {"schema": ser.SCHEMA, "coefficient_identity": rep.coefficient_identity,
           "exponent_identity": rep.exponent_identity,
           "maxplus": [{"i": i, "j": j, "k": k, "h": ser.rat_str(h)}
                       for (i, j, k), h in sorted(rep.maxplus.items())]}
    _emit_doc(doc, args)
    return EXIT_OK if rep.ok() else EXIT_VERDICT


def _sweep_hive4(args):
    fam = ser.rmatrix_from_doc(ser.load(args.infile))
    grid = _tgrid(args, default=(1e2, 1e3, 1e4, 1e5))
    tols = _tols(args)
    rep = hive4_check(fam, grid, tolerance=tols.get("slope", 1e-2))
    doc = {"schema": ser.SCHEMA, "ok": rep.ok(),
           "exponents": [{"key": list(k), "slope": v}
                         for k, v in sorted(rep.exponents.items())],
           "pairing_margins": [{"pairs": [list(p) for p in k], "margin": v}
                               for k, v in sorted(rep.pairing_margins.items())],
           "exchange_margins": [{"double": k[0], "pair": list(k[1]), "margin": v}
                                for k, v in sorted(rep.exchange_margins.items())]}
    _emit_doc(doc, args)
    return EXIT_OK if rep.ok() else EXIT_VERDICT


def _ronkin_spec(args):
    tols = _tols(args)
    return RonkinSpec(resolution=args.resolution or 256,
                      tolerance=tols.get("ronkin", 1e-6))


def _ronkin_value(args):
    form = ser.form_from_doc(ser.load(args.infile))
    point = _triple_arg(args.point or "0,0,0", "--point")
    val = ronkin_value(form, point, _ronkin_spec(args))
    _emit_doc({"schema": ser.SCHEMA, "point": list(point), "value": val}, args)
    return EXIT_OK


def _ronkin_coeff(args):
    form = ser.form_from_doc(ser.load(args.infile))
    if not args.index:
        raise SchemaError("--index i,j,k is required")
    idx = tuple(int(x) for x in args.index.split(","))
    if len(idx) != 3 or sum(idx) != form.n:
        raise SchemaError(f"--index must be a degree-{form.n} triple")
    val = ronkin_coefficient(form, idx, _ronkin_spec(args))
    _emit_doc({"schema": ser.SCHEMA, "index": list(idx), "value": val}, args)
    return EXIT_OK


def _ronkin_boundary_check(args):
    form = ser.form_from_doc(ser.load(args.infile))
    tols = _tols(args)
    budget = tols.get("residual", 1e-2)
    res = ronkin_boundary_check(form, _ronkin_spec(args))
    ok = res <= budget
    _emit_doc({"schema": ser.SCHEMA, "residual": res, "tolerance": budget,
               "ok": ok}, args)
    return EXIT_OK if ok else EXIT_VERDICT


_COMMANDS = {
    ("hive", "check"): _hive_check,
    ("hive", "boundary"): _hive_boundary,
    ("hive", "convolve"): _hive_convolve,
    ("horn", "feasible"): _horn_feasible,
    ("pencil", "det"): _pencil_det,
    ("pencil", "beta"): _pencil_beta,
    ("pencil", "boundary"): _pencil_boundary,
    ("pencil", "sing"): _pencil_sing,
    ("hyperbolic", "check"): _hyperbolic_check,
    ("hyperbolic", "backward"): _hyperbolic_backward,
    ("hyperbolic", "v1shift"): _hyperbolic_v1shift,
    ("trop", "subdivide"): _trop_subdivide,
    ("trop", "curve"): _trop_curve,
    ("trop", "honeycomb-svg"): _trop_honeycomb_svg,
    ("trop", "amoeba-svg"): _trop_amoeba_svg,
    ("patchwork", "charts"): _patchwork_charts,
    ("patchwork", "classify"): _patchwork_classify,
    ("patchwork", "svg"): _patchwork_svg,
    ("patchwork", "violation-path"): _patchwork_violation,
    ("sweep", "main-theorem"): _sweep_main_theorem,
    ("sweep", "boundary"): _sweep_boundary,
    ("sweep", "convolution"): _sweep_convolution,
    ("sweep", "hive4"): _sweep_hive4,
    ("ronkin", "value"): _ronkin_value,
    ("ronkin", "coeff"): _ronkin_coeff,
    ("ronkin", "boundary-check"): _ronkin_boundary_check,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hivecurve",
        description="hives, determinantal curves, patchworking and tropical duality")
    groups = {}
    sub = parser.add_subparsers(dest="group", required=True)
    for (group, name) in _COMMANDS:
        if group not in groups:
            gp = sub.add_parser(group)
            groups[group] = gp.add_subparsers(dest="command", required=True)
        p = groups[group].add_parser(name)
        p.add_argument("--in", dest="infile", help="input JSON document")
        p.add_argument("--in2", dest="infile2", help="second input JSON document")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--svg", help="SVG output path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--mode", choices=("exact", "float"), default="float")
        p.add_argument("--tol", action="append", metavar="KEY=VAL")
        p.add_argument("--tgrid", help="comma-separated parameter grid")
        p.add_argument("--probes", type=int, default=360)
        p.add_argument("--random-probes", type=int, default=128)
        p.add_argument("--base", help="probe base point x,y,z")
        p.add_argument("--point", help="evaluation point x,y,z")
        p.add_argument("--index", help="grid index i,j,k")
        p.add_argument("--resolution", type=int)
        p.add_argument("--phases", type=int, default=32)
        p.add_argument("--logt", help="scale amoeba overlay by 1/log(t)")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _COMMANDS[(args.group, args.command)]
    try:
        return handler(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except FileNotFoundError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (HiveCurveError, ArithmeticError, OverflowError) as exc:
        print(f"numeric failure: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
