"""Command-line front end: ``smw <subcommand> ...``.

Subcommands take ``--help`` (``-h`` is the height flag of ``count``).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

from .models import ModelSpec, ResourceError, parse_model

EXIT_FAIL = 1
EXIT_RESOURCE = 2


def _model_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model")
    g.add_argument("--model", default="s31", choices=["s21", "s31", "s32c1", "s32c2"])
    g.add_argument("--lambda", dest="lam", type=Fraction, default=None,
                   help="single-parameter coupling of S31 (0 or positive)")
    g.add_argument("--lambda1", type=Fraction, default=None)
    g.add_argument("--lambda2", type=Fraction, default=None)
    g.add_argument("--mu", type=Fraction, default=None, help="color-flip weight of S32 case 2")
    g.add_argument("--boundary", default="corrected", choices=["corrected", "original"])
    g.add_argument("--topology", default="open", choices=["open", "identified", "ring"])


def _model(args) -> ModelSpec:
    return parse_model(args.model, lam=args.lam, lambda1=args.lambda1, lambda2=args.lambda2,
                       mu=args.mu, boundary=args.boundary, topology=args.topology)


def _range(text: str) -> list[int]:
    """``"4..7"``, ``"200,500,1000"`` or ``"5"``."""
    out: list[int] = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _sub(sp, name, help_):
    p = sp.add_parser(name, help=help_, add_help=False)
    p.add_argument("--help", action="help", help="show this message and exit")
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="smw", description="Semigroup Motzkin walk toolkit")
    ap.add_argument("--cache-dir", default=None, help="count-table cache (SMW_CACHE_DIR overrides)")
    ap.add_argument("--quiet", action="store_true", help="suppress timing lines")
    ap.add_argument("--format", default="json", choices=["json", "csv", "md"])
    ap.add_argument("--precision", type=int, default=50, help="decimal digits (>= 30)")
    sp = ap.add_subparsers(dest="cmd", required=True)

    p = _sub(sp, "count", "exact number of walks")
    _model_flags(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-h", "--height", dest="h", type=int, default=0)
    p.add_argument("--from", dest="a", type=int, required=True)
    p.add_argument("--to", dest="b", type=int, required=True)
    p.add_argument("--tilde", action="store_true", help="erase colors of unmatched ascents")
    p.add_argument("--method", default="dp", choices=["dp", "enum", "recursion", "series"])
    p.add_argument("--all-methods", action="store_true", help="compare all methods")

    p = _sub(sp, "series", "generating-function coefficients")
    _model_flags(p)
    p.add_argument("--quantity", default="11")
    p.add_argument("-h", "--height", dest="h", type=int, default=0)
    p.add_argument("--order", type=int, default=20)
    p.add_argument("--tilde", action="store_true")

    p = _sub(sp, "gsd", "ground-state degeneracy table")
    _model_flags(p)
    p.add_argument("-n", "--n-range", dest="ns", type=_range, default=_range("4..7"))
    p.add_argument("--mode", default="auto", choices=["auto", "exact", "float"])
    p.add_argument("--representation", default="reduced", choices=["reduced", "link"])

    p = _sub(sp, "ham-export", "Hamiltonian in coordinate format")
    _model_flags(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--representation", default="reduced", choices=["reduced", "link"])
    p.add_argument("--float", dest="exact", action="store_false")
    p.add_argument("--out", default="-")

    p = _sub(sp, "classes", "equivalence classes of valid walks")
    _model_flags(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--representation", default="reduced", choices=["reduced", "link"])
    p.add_argument("--states", action="store_true", help="list every member walk")

    p = _sub(sp, "entropy", "half-chain entanglement entropy")
    _model_flags(p)
    p.add_argument("--sector", default="11")
    p.add_argument("-n", "--n-grid", dest="ns", type=_range, default=_range("200,500,1000"))
    p.add_argument("--method", default="counts", choices=["counts", "density", "fit"])

    p = _sub(sp, "phase-report", "phase-diagram tables")
    p.add_argument("--quick", action="store_true", help="smaller grids")

    p = _sub(sp, "verify", "run the acceptance checks")
    p.add_argument("--suite", default="smoke", choices=["smoke", "full"])
    p.add_argument("--only", default=None, help="comma-separated check ids")
    return ap


# ----------------------------------------------------------------------------

def _emit_rows(rows: list[dict], fmt: str) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    if fmt == "json":
        return json.dumps(rows, indent=1)
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.DictWriter(buf, cols, lineterminator="\n")
        wr.writeheader()
        wr.writerows(rows)
        return buf.getvalue().rstrip("\n")
    head = "| " + " | ".join(cols) + " |\n|" + "---|" * len(cols)
    return head + "\n" + "\n".join("| " + " | ".join(str(r[c]) for c in cols) + " |" for r in rows)


def cmd_count(args, out) -> int:
    from .counting import CountTable, count, recursion_count
    from .series import closed_form
    from .walks import brute_force_table
    m = _model(args)
    n, h, a, b, tilde = args.n, args.h, args.a, args.b, args.tilde

    def run(method):
        if method == "dp":
            return CountTable.cached(m, n, args.cache_dir, tilde).get(n, h, a, b, tilde) \
                if (args.cache_dir or os.environ.get("SMW_CACHE_DIR")) else count(m, n, h, a, b, tilde)
        if method == "enum":
            full, tl = brute_force_table(m, n)
            return int((tl if tilde else full)[a - 1, h, b - 1]) if h <= n else 0
        if method == "recursion":
            return recursion_count(m, n, h, a, b, tilde)
        return int(closed_form(m, f"{a}{b}", h, order=n, tilde=tilde).coeffs[n])

    if args.all_methods:
        vals = {meth: run(meth) for meth in ("enum", "recursion", "series", "dp")}
        agree = len(set(vals.values())) == 1
        for k, v in vals.items():
            print(f"{k}: {v}", file=out)
        print("agree" if agree else "DISAGREE", file=out)
        return 0 if agree else EXIT_FAIL
    print(run(args.method), file=out)
    return 0


def cmd_series(args, out) -> int:
    from .series import closed_form
    m = _model(args)
    ser = closed_form(m, args.quantity, args.h, order=args.order, tilde=args.tilde)
    print(" ".join(str(c) for c in ser.coeffs), file=out)
    return 0


def cmd_gsd(args, out) -> int:
    from .ground import ground_classes, kernel_dimension
    from .hamiltonian import build_hamiltonian
    m = _model(args)
    rows = []
    for n in args.ns:
        H = build_hamiltonian(m, n, args.representation)
        k = kernel_dimension(H, args.mode)
        live = sum(g.survives for g in ground_classes(H, scope="all"))
        rows.append({"n": n, "dim": H.dim, "gsd_spectral": k.dim, "mode": k.mode,
                     "gsd_classes": live, "agree": k.dim == live})
    print(_emit_rows(rows, args.format), file=out)
    return 0 if all(r["agree"] for r in rows) else EXIT_FAIL


def cmd_ham_export(args, out) -> int:
    from .hamiltonian import build_hamiltonian
    H = build_hamiltonian(_model(args), args.n, args.representation)
    lines = H.export_coo(exact=args.exact)
    if args.out == "-":
        for line in lines:
            print(line, file=out)
    else:
        with open(args.out, "w") as fh:
            fh.writelines(line + "\n" for line in lines)
    return 0


def cmd_classes(args, out) -> int:
    from .ground import ground_classes, walk_basis_operator
    m = _model(args)
    H = walk_basis_operator(m, args.n, args.representation)
    rows = []
    for g in ground_classes(H, scope="all"):
        row = {"label": g.label, "size": len(g.members), "survives": g.survives,
               "representative": H.render_state(int(g.members[0]))}
        if args.states:
            row["members"] = [H.render_state(int(p)) for p in g.members]
        rows.append(row)
    print(_emit_rows(rows, args.format) if args.format != "json" or not args.states
          else json.dumps(rows, indent=1), file=out)
    return 0


def cmd_entropy(args, out) -> int:
    from .entangle import entropy_from_counts, entropy_from_state, entropy_scan_and_fit, ground_state
    m = _model(args)
    if args.method == "fit":
        rep = entropy_scan_and_fit(m, args.sector, args.ns, dps=args.precision)
        print(rep.to_csv() if args.format == "csv" else rep.to_json(), file=out)
        return 0
    rows = []
    for n in args.ns:
        if args.method == "counts":
            pt = entropy_from_counts(m, n, args.sector, dps=args.precision)
        else:
            H, g = ground_state(m, n, args.sector)
            pt = entropy_from_state(H, g)
        rows.append({"model": m.key(), "sector": args.sector, "n": n,
                     "S": str(pt.S), "method": pt.method})
    print(_emit_rows(rows, args.format), file=out)
    return 0


def phase_report(quick: bool = False) -> str:
    """Markdown tables backing the two phase diagrams and the three-phase table."""
    from .entangle import entropy_from_counts, leading_sqrt_coefficient, log_law_constant
    from .ground import kernel_dimension, smw_classes
    from .hamiltonian import build_hamiltonian
    import mpmath as mp
    ns = (50, 100, 200) if quick else (100, 200, 500, 1000)
    out = ["## lambda axis (S31)", "",
           "| n | S (lambda>0) | S (lambda=0) | S(lambda=0) - ln(n)/2 |", "|---|---|---|---|"]
    for n in ns:
        sp_ = entropy_from_counts(ModelSpec.s31(1), n, "11").S
        s0 = entropy_from_counts(ModelSpec.s31(0), n, "11").S
        out.append(f"| {n} | {mp.nstr(sp_, 8)} | {mp.nstr(s0, 8)} | {mp.nstr(s0 - mp.log(n) / 2, 6)} |")
    out.append(f"\nlambda>0: area law; lambda=0: S ~ ln(n)/2 + {mp.nstr(log_law_constant(), 6)}\n")
    out += ["## mu axis (S32 case 2)", "",
            "| n | S (mu=0, homogeneous class) | S (mu>0) | (S(mu>0) - ln(n)/2)/sqrt(n) |", "|---|---|---|---|"]
    for n in ns:
        s0 = entropy_from_counts(ModelSpec.s32(2, mu=0), n, "11").S
        s1 = entropy_from_counts(ModelSpec.s32(2), n, "11").S
        out.append(f"| {n} | {mp.nstr(s0, 8)} | {mp.nstr(s1, 8)} | "
                   f"{mp.nstr((s1 - mp.log(n) / 2) / mp.sqrt(n), 6)} |")
    out.append(f"\nmu=0: logarithmic; mu>0: sqrt(n) law, leading coefficient "
               f"{mp.nstr(leading_sqrt_coefficient(), 6)}\n")
    out += ["## (lambda1, lambda2) phases (S31 GSD)", "",
            "| n | I: lambda1>0, lambda2=0 | II: lambda1=lambda2=0 | III: lambda1=0, lambda2>0 |",
            "|---|---|---|---|"]
    for n in range(4, 7 if quick else 8):
        g = [kernel_dimension(build_hamiltonian(m, n), "exact").dim
             for m in (ModelSpec.s31_phase(1, 0), ModelSpec.s31_phase(0, 0), ModelSpec.s31_phase(0, 1))]
        out.append(f"| {n} | {g[0]} | {g[1]} | {g[2]} |")
    out += ["", "## mu = 0 class counts (S32 case 2, valid-walk classes)", "", "| n | classes | ratio |", "|---|---|---|"]
    prev = None
    for n in range(4, 8 if quick else 9):
        c = sum(g.survives for g in smw_classes(ModelSpec.s32(2, mu=0), n))
        out.append(f"| {n} | {c} | {'' if prev is None else f'{c / prev:.4f}'} |")
        prev = c
    return "\n".join(out)


def cmd_phase_report(args, out) -> int:
    print(phase_report(args.quick), file=out)
    return 0


def cmd_verify(args, out) -> int:
    from .checks import CHECKS, SUITES, run_check
    keys = args.only.split(",") if args.only else SUITES[args.suite]
    quick = args.suite == "smoke"
    failed = []
    for k in keys:
        if k not in CHECKS:
            print(f"unknown check {k}", file=sys.stderr)
            return EXIT_FAIL
        res = run_check(k, quick=quick)
        line = res.line() if args.quiet else f"{res.line()} ({res.seconds:.1f} s)"
        print(line, file=out, flush=True)
        if not res.ok:
            failed.append(res)
    print(f"{len(keys) - len(failed)}/{len(keys)} checks passed", file=out)
    if failed:
        print(f"first failure: {failed[0].name}: {failed[0].detail}", file=sys.stderr)
        return EXIT_FAIL
    return 0


COMMANDS = {"count": cmd_count, "series": cmd_series, "gsd": cmd_gsd, "ham-export": cmd_ham_export,
            "classes": cmd_classes, "entropy": cmd_entropy, "phase-report": cmd_phase_report,
            "verify": cmd_verify}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.precision < 30:
        print("precision must be at least 30 digits", file=sys.stderr)
        return EXIT_FAIL
    if os.environ.get("SMW_CACHE_DIR"):
        args.cache_dir = os.environ["SMW_CACHE_DIR"]
    t = time.perf_counter()
    try:
        code = COMMANDS[args.cmd](args, out)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, KeyError, LookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if not args.quiet and args.cmd != "verify":
        print(f"# {time.perf_counter() - t:.2f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
