"""``hpqkit`` command line.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from hpqkit import kernels, serialize as ser
from hpqkit.exact import PolyParseError, parse_point, parse_poly, render_poly
from hpqkit.exact.poly import DimensionMismatch
from hpqkit.harmonics import (
    Bidegree,
    NotOnSphere,
    SpherePoint,
    harmonic_basis,
    harmonic_components,
    project_bidegree,
    zonal_kernel,
)
from hpqkit.patterns import (
    ClassificationError,
    PatternBox,
    classify_pattern,
    closure_box,
    m_ladder_closure,
    parse_family,
    parse_pattern,
    six_space_classify,
)

FORMATS = ("json", "table", "csv")


class UsageError(Exception):
    pass


@dataclass
class Output:
    payload: Any
    rows: list[dict] | None = None
    text: str | None = None
    exit_code: int = 0


# ---------------------------------------------------------------------------
# argument helpers


def _pair(text: str) -> Bidegree:
    try:
        p, q = (int(x) for x in text.strip("() ").split(","))
        return Bidegree.of((p, q))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected p,q with p,q >= 0, got {text!r}") from exc


def _read(text: str) -> str:
    """``@path`` reads the argument from a file."""
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return fh.read().strip()
    return text


def _floats(text: str) -> list[complex]:
    try:
        return [complex(x.replace(" ", "")) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad numeric vector {text!r}") from exc


def _bd(args) -> Bidegree:
    return Bidegree.of((args.p, args.q))


def _guard(args, *bds: Bidegree):
    limit = 6 if args.n <= 3 else 3
    if args.no_guard:
        return
    for b in bds:
        if b.total > limit:
            raise UsageError(f"p+q={b.total} exceeds the default limit {limit} at n={args.n}; pass --no-guard")


def _poly(args):
    return parse_poly(_read(args.poly), args.n)


def _bdlist(xs) -> str:
    return ";".join(str(Bidegree.of(b)) for b in sorted(xs))


# ---------------------------------------------------------------------------
# commands


def cmd_dim(args) -> Output:
    sp = harmonic_basis(args.n, _bd(args))
    return Output({"n": args.n, "bidegree": ser.bd_to_json(sp.bidegree), "dim": sp.dim}, text=str(sp.dim))


def cmd_basis(args) -> Output:
    _guard(args, _bd(args))
    sp = harmonic_basis(args.n, _bd(args))
    payload = {
        "n": args.n,
        "bidegree": ser.bd_to_json(sp.bidegree),
        "dim": sp.dim,
        "basis": [ser.poly_to_json(b) for b in sp.basis],
        "gram": [[ser.gauss_to_json(sp.gram[i, j]) for j in range(sp.dim)] for i in range(sp.dim)],
    }
    rows = [{"index": i, "element": render_poly(b)} for i, b in enumerate(sp.basis)]
    return Output(payload, rows)


def cmd_zonal(args) -> Output:
    _guard(args, _bd(args))
    sp = harmonic_basis(args.n, _bd(args))
    pt = SpherePoint(parse_point(args.point))
    if pt.n != args.n:
        raise UsageError(f"point has {pt.n} coordinates, expected {args.n}")
    K = zonal_kernel(sp, pt)
    kz = K.value_at_point
    payload = {
        "n": args.n,
        "bidegree": ser.bd_to_json(sp.bidegree),
        "point": [ser.gauss_to_json(c) for c in pt.coords],
        "kernel": ser.poly_to_json(K.kernel),
        "value_at_point": ser.gauss_to_json(kz),
        "norm2": ser.gauss_to_json(K.norm2),
    }
    rows = [{"kernel": render_poly(K.kernel), "K_z(z)": str(kz), "<K_z,K_z>": str(K.norm2)}]
    return Output(payload, rows)


def cmd_project(args) -> Output:
    f = _poly(args)
    h = project_bidegree(args.n, f, _bd(args))
    payload = {"n": args.n, "bidegree": ser.bd_to_json(_bd(args)), "input": ser.poly_to_json(f),
               "projection": ser.poly_to_json(h)}
    return Output(payload, [{"bidegree": str(_bd(args)), "projection": render_poly(h)}], render_poly(h))


def cmd_support(args) -> Output:
    f = _poly(args)
    comps = harmonic_components(args.n, f)
    payload = {
        "n": args.n,
        "input": ser.poly_to_json(f),
        "support": [ser.bd_to_json(b) for b in comps],
        "components": [{"bidegree": ser.bd_to_json(b), "component": ser.poly_to_json(c)} for b, c in comps.items()],
    }
    rows = [{"bidegree": str(b), "component": render_poly(c)} for b, c in comps.items()]
    return Output(payload, rows)


def cmd_product(args) -> Output:
    from hpqkit.products import product_space_support

    _guard(args, args.left, args.right)
    rep = product_space_support(args.n, args.left, args.right, rule=args.rule)
    rows = [{
        "left": str(rep.left), "right": str(rep.right), "rule": rep.rule, "match": rep.match,
        "support": _bdlist(rep.support), "predicted": _bdlist(rep.predicted),
        "missing": _bdlist(rep.missing), "extra": _bdlist(rep.extra),
    }]
    return Output(ser.report_to_json(rep), rows)


def _pattern_arg(args, attr: str = "pattern") -> PatternBox:
    return parse_pattern(_read(getattr(args, attr)), args.maxdeg)


def cmd_pattern_closure(args) -> Output:
    box = closure_box(_pattern_arg(args, "seed"), args.rule)
    return Output(ser.pattern_to_json(box) | {"rule": args.rule}, text=str(box))


def cmd_pattern_classify(args) -> Output:
    box = _pattern_arg(args)
    if args.close:
        box = closure_box(box)
    res = classify_pattern(box, check_pattern=not args.no_check)
    payload = {"family": str(res.family), "verified_box": res.verified_box, "notes": res.notes,
               "pattern": ser.pattern_to_json(box)}
    return Output(payload, [{"family": str(res.family), "verified_box": res.verified_box,
                             "notes": " | ".join(res.notes)}])


def cmd_pattern_mclosure(args) -> Output:
    box = _pattern_arg(args)
    closed = m_ladder_closure(box)
    name = six_space_classify(box)
    payload = {"closure": ser.pattern_to_json(closed), "space": name}
    return Output(payload, [{"closure": str(closed), "space": name}])


def cmd_algebra_check(args) -> Output:
    from hpqkit.products import cstar_equivalence_check

    if (args.pattern is None) == (args.family is None):
        raise UsageError("give exactly one of --pattern or --family")
    if args.family is not None:
        if args.maxdeg is None:
            raise UsageError("--family needs --maxdeg")
        box = parse_family(args.family).box(args.maxdeg)
    else:
        box = _pattern_arg(args)
    res = cstar_equivalence_check(args.n, box)
    u = res["uniform"]
    payload = {
        "n": args.n,
        "pattern": ser.pattern_to_json(box),
        "is_algebra": res["is_algebra"],
        "uniform": ser.algebra_check_to_json(u),
        "weak_star": ser.algebra_check_to_json(res["weak_star"]),
        "equivalent": res["equivalent"],
    }
    rows = [{
        "n": args.n, "maxdeg": box.maxdeg, "is_algebra": u.is_algebra,
        "pair": ";".join(map(str, u.pair)) if u.pair else "", "escaping": str(u.escaping or ""),
        "pairs_checked": u.pairs_checked,
    }]
    return Output(payload, rows, exit_code=0 if u.is_algebra else 1)


def cmd_mc(args) -> Output:
    from hpqkit import mc

    sampler = mc.HaarSampler(args.seed, args.n, args.threads)
    N = args.samples
    if N < 2:
        raise UsageError("--samples must be >= 2")
    payload: dict = {"check": args.check, "n": args.n, "seed": args.seed, "samples": N}
    a = _floats(args.a) if args.a else None
    if a is not None and len(a) != args.n:
        raise UsageError(f"--a needs {args.n} coordinates")

    if args.check == "ladder":
        if a is None:
            raise UsageError("ladder needs --a")
        rep = mc.moebius_ladder_evidence(args.p, args.q, a, args.n, sampler, N)
        rows = [{"basis": e.basis_index, "point": f"e{e.point_index + 1}", "target": str(e.target),
                 "value": f"{e.estimate.value:.6g}", "stderr": f"{e.estimate.stderr:.3g}", "nonzero": e.nonzero}
                for e in rep.entries]
        payload |= {
            "source": ser.bd_to_json(rep.source),
            "evidence": [{"target": ser.bd_to_json(t), "nonzero": v} for t, v in rep.evidence.items()],
            "antiholomorphic_zero": rep.antiholomorphic_zero,
            "ok": rep.ok,
            "entries": [{"basis": e.basis_index, "point": e.point_index, "target": ser.bd_to_json(e.target),
                         "estimate": ser.quad_to_json(e.estimate)} for e in rep.entries],
        }
        return Output(payload, rows, exit_code=0 if rep.ok else 1)

    f = _poly(args)
    if args.check == "integrate":
        target = f if a is None else mc.compose(f, mc.BallAutomorphism(a))
        est = mc.mc_integrate(target, sampler, N)
        payload |= {"estimate": ser.quad_to_json(est)}
        ok = True
    elif args.check == "haar":
        z = _floats(args.point) if args.point else [1] + [0] * (args.n - 1)
        chk = mc.haar_average_check(f, z, sampler, N)
        est = chk.mc
        payload |= {"estimate": ser.quad_to_json(est), "exact": ser.complex_to_json(chk.exact),
                    "agrees": chk.agrees}
        ok = chk.agrees
    else:
        target = f if a is None else mc.compose(f, mc.BallAutomorphism(a))
        z0 = SpherePoint(parse_point(args.point)) if args.point else None
        est = mc.mc_project(target, _bd(args), args.n, sampler, N, z0)
        payload |= {"bidegree": ser.bd_to_json(_bd(args)), "estimate": ser.quad_to_json(est),
                    "nonzero": est.nonzero()}
        ok = True
    row = {"check": args.check, "value": f"{est.value:.6g}", "stderr": f"{est.stderr:.3g}", "samples": N}
    if args.check == "haar":
        row |= {"exact": f"{chk.exact.real:.6g}", "agrees": chk.agrees}
    return Output(payload, [row], exit_code=0 if ok else 1)


def cmd_verify(args) -> Output:
    from hpqkit.verify import VerifyOptions, run_suite

    opts = VerifyOptions(args.n, args.maxdeg, args.seed, args.samples, args.rule, args.threads)
    results = run_suite(args.suite, opts)
    lines, rows, suites = [], [], []
    for r in results:
        for c in r.checks:
            mark = "PASS" if c.ok else "FAIL"
            lines.append(f"[{mark}] {r.suite}: {c.name}" + (f" ({c.detail})" if c.detail else ""))
            rows.append({"suite": r.suite, "check": c.name, "ok": c.ok, "detail": c.detail,
                         "counterexample": c.counterexample or ""})
        suites.append({"suite": r.suite, "passed": r.passed,
                       "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail,
                                   "counterexample": c.counterexample} for c in r.checks]})
    passed = all(r.passed for r in results)
    first = next((r.first_failure for r in results if r.first_failure), None)
    if first:
        lines.append(f"first counterexample: {first.counterexample}")
    lines.append("verify: " + ("pass" if passed else "FAIL"))
    payload = {"suite": args.suite, "passed": passed, "backend": kernels.BACKEND, "suites": suites,
               "first_counterexample": first.counterexample if first else None}
    return Output(payload, rows, "\n".join(lines), exit_code=0 if passed else 1)


# ---------------------------------------------------------------------------
# parser and rendering


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--threads", type=int, default=int(os.environ.get("HPQKIT_THREADS", "1")))
    common.add_argument("--output", help="write the rendered result to this file")

    parser = argparse.ArgumentParser(prog="hpqkit", description="Bidegree spherical harmonics on the sphere of C^n.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    def space(p, need_pq=True):
        p.add_argument("--n", type=int, required=True)
        if need_pq:
            p.add_argument("--p", type=int, required=True)
            p.add_argument("--q", type=int, required=True)

    def guard(p):
        p.add_argument("--no-guard", action="store_true", help="lift the default size limit")

    p = add("dim", cmd_dim, "dimension of H(p,q)")
    space(p)
    p = add("basis", cmd_basis, "integer basis of H(p,q) with its Gram matrix")
    space(p)
    guard(p)
    p = add("zonal", cmd_zonal, "zonal kernel K_z of H(p,q)")
    space(p)
    guard(p)
    p.add_argument("--point", required=True, help='exact sphere point, e.g. "3/5,4/5"')
    p = add("project", cmd_project, "projection of a polynomial onto H(p,q)")
    space(p)
    p.add_argument("--poly", required=True, help="polynomial text or @file")
    p = add("support", cmd_support, "bidegree support and components of a polynomial")
    space(p, need_pq=False)
    p.add_argument("--poly", required=True)
    p = add("product", cmd_product, "support of H(left)*H(right)")
    space(p, need_pq=False)
    guard(p)
    p.add_argument("--left", type=_pair, required=True)
    p.add_argument("--right", type=_pair, required=True)
    p.add_argument("--rule", choices=("minus", "plus"), default="minus")
    p = add("pattern-closure", cmd_pattern_closure, "closure of a seed under the combination rule")
    p.add_argument("--seed", required=True, help='pattern literal, e.g. "(1,1);(2,0)"')
    p.add_argument("--maxdeg", type=int)
    p.add_argument("--rule", choices=("minus", "plus"), default="minus")
    p = add("pattern-classify", cmd_pattern_classify, "name the family of a pattern box")
    p.add_argument("--pattern", required=True)
    p.add_argument("--maxdeg", type=int)
    p.add_argument("--close", action="store_true", help="classify the closure of the given points")
    p.add_argument("--no-check", action="store_true", help="skip the closure precondition (n=2 families)")
    p = add("pattern-mclosure", cmd_pattern_mclosure, "Moebius ladder closure and its space")
    p.add_argument("--pattern", required=True)
    p.add_argument("--maxdeg", type=int)
    p = add("algebra-check", cmd_algebra_check, "exact algebra test of a pattern box")
    space(p, need_pq=False)
    p.add_argument("--pattern")
    p.add_argument("--family", help='family literal, e.g. "GpqN2(2,1)"')
    p.add_argument("--maxdeg", type=int)
    p = add("mc", cmd_mc, "Monte Carlo estimates")
    p.add_argument("--check", choices=("integrate", "haar", "project", "ladder"), required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--poly", default="1")
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--a", help="automorphism parameter, e.g. 0.5,0")
    p.add_argument("--point", help="haar: float unit vector; project: exact reference point")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=100_000)
    p = add("verify", cmd_verify, "run invariant suites")
    p.add_argument("suite", choices=("exact-core", "harmonics", "patterns", "product-span", "mc", "all"))
    p.add_argument("--n", type=int)
    p.add_argument("--maxdeg", type=int)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--rule", choices=("minus", "plus"), default="minus")
    return parser


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return ser.dumps(out.payload)
    rows = out.rows
    if fmt == "csv":
        if rows is None:
            rows = [{"result": out.text}]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else ["result"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    if out.text is not None:
        return out.text
    if not rows:
        return ""
    cols = list(rows[0])
    cells = [[str(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(x[i]) for x in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines += ["  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
        parser.error("--n must be >= 1")
    try:
        out = args.fn(args)
    except (UsageError, PolyParseError, NotOnSphere, DimensionMismatch, ClassificationError,
            ValueError, OSError) as exc:
        print(f"hpqkit {args.command}: {exc}", file=sys.stderr)
        return 2
    text = render(out, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return out.exit_code


if __name__ == "__main__":
    sys.exit(main())
