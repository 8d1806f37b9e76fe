"""Command line entry point.

Exit status 0 on success, 1 on errors (parse, budget, stratification),
2 when a split-mode request is refused on semantic grounds.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from . import ael, bench, dl, document, lp, oracle, syntax
from .formula import to_text
from .lattice import BudgetExceeded

LP_SEMANTICS = lp.SEMANTICS
AEL_SEMANTICS = ael.SEMANTICS


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str, dialect: Optional[str]):
    dialect = dialect or syntax.detect_dialect(path)
    return dialect, syntax.PARSERS[dialect](_read(path))


def _check_semantics(dialect: str, s: str):
    allowed = LP_SEMANTICS if dialect == "lp" else AEL_SEMANTICS
    if s not in allowed:
        raise ValueError(f"semantics {s!r} is not available for .{dialect}; choose from {', '.join(allowed)}")


def _mode(values) -> tuple:
    if not values:
        return "monolithic", None
    mode = values[0]
    if mode in ("monolithic", "split"):
        if len(values) > 1:
            raise ValueError(f"--mode {mode} takes no argument")
        return mode, None
    if mode == "split-file":
        if len(values) != 2:
            raise ValueError("--mode split-file needs exactly one file")
        return mode, syntax.parse_splitting(_read(values[1]))
    raise ValueError(f"unknown mode {mode!r}")


def _splitting_for(dialect, inst, mode, file_split):
    if mode == "split-file":
        return file_split
    if mode != "split":
        return None
    if dialect == "lp":
        return lp.compute_splitting(inst)
    if dialect == "ael":
        return inst.splitting or ael.infer_stratification(inst)
    return inst.splitting or dl.infer_partition(inst)


def solve_document(dialect: str, inst, semantics: str, mode: str = "monolithic", split=None,
                   exact_only: bool = False, budget: Optional[int] = None, deterministic: bool = False,
                   consistent: bool = False) -> dict:
    """Solve and wrap the result as a model document."""
    _check_semantics(dialect, semantics)
    trace: list = []
    engine_mode = "monolithic" if mode == "monolithic" else "split"
    notes = {}
    t0 = time.perf_counter()
    if dialect == "lp":
        res = lp.solve(inst, semantics, engine_mode, splitting=split, exact_only=exact_only,
                       budget=budget, trace=trace)
        models = document.lp_models(inst, semantics, res, exact_only and semantics == "stable")
    else:
        if dialect == "ael":
            T = inst
        else:
            T = dl.konolige_theory(inst)
            if split is not None:
                T = T.with_splitting(split, dl.default_strata(inst, split))
        space = ael.PwsSpace(T.alphabet)
        if engine_mode == "split":
            res = ael.solve_split(T, semantics, split, budget=budget, trace=trace)
            notes["consistent_only"] = True
            if dialect == "dl":
                notes["components"] = _dl_components(inst, split, T, semantics, res)
        else:
            res = ael.solve_monolithic(T, semantics, budget, space)
            if consistent:
                res = ael.consistent(semantics, res)
                notes["consistent_only"] = True
        models = document.ael_models(space, semantics, res)
        if exact_only and semantics in ("partial_expansions", "partial_extensions"):
            models = [m for m in models if m["lower"] == m["upper"]]
    seconds = time.perf_counter() - t0
    return document.build(dialect, semantics, mode, models, split, trace if engine_mode == "split" else None,
                          seconds, deterministic, inst.alphabet, notes or None)


def _dl_components(D, split, T, semantics, res, limit: int = 8) -> list:
    """Per-stratum component default theories in the context of each model."""
    st = ael.AelStrata(T, split)
    out = []
    items = [res] if semantics in ("kk", "wf") else list(res)
    for m in items[:limit]:
        lo, hi = (m, m) if isinstance(m, int) else (m[0], m[1])
        if not (lo and hi):
            continue
        plo, phi = st.kappa_inverse(lo), st.kappa_inverse(hi)
        dlo, dhi = st.product.to_dict(plo), st.product.to_dict(phi)
        strata = []
        for i in st.poset.linearization:
            below = st.poset.strictly_below(i)
            U = {j: dlo[j] for j in below}
            V = {j: dhi[j] for j in below}
            con, lib = dl.component_defaults(D, i, U, V, split)
            strata.append({"stratum": str(i), "conservative": _dl_lines(con), "liberal": _dl_lines(lib)})
        out.append(strata)
    return out


def _dl_lines(D) -> list:
    return [syntax.format_default(d) for d in D.defaults] + [f"axiom {to_text(w)}." for w in D.axioms]


def cmd_solve(args) -> int:
    dialect, inst = _load(args.file, args.dialect)
    mode, file_split = _mode(args.mode)
    split = _splitting_for(dialect, inst, mode, file_split)
    doc = solve_document(dialect, inst, args.semantics, mode, split, args.exact_only, args.budget,
                         args.deterministic, args.consistent)
    sys.stdout.write(document.dumps(doc) if args.json else document.render_text(doc))
    return 0


def cmd_split_show(args) -> int:
    dialect, inst = _load(args.file, args.dialect)
    if args.split_file:
        split = syntax.parse_splitting(_read(args.split_file))
    else:
        split = _splitting_for(dialect, inst, "split", None)
    info = {"splitting": document.splitting_dict(split), "strata": []}
    if dialect == "lp":
        lp.validate_splitting(inst, split)
        parts = lp.strata_programs(inst, split)
        for i in split.poset.linearization:
            info["strata"].append({"stratum": str(i), "clauses": [str(c) for c in parts[i]]})
    elif dialect == "ael":
        st = ael.AelStrata(inst, split)
        for i in split.poset.linearization:
            info["strata"].append({
                "stratum": str(i),
                "formulas": [to_text(f) for f in st.formulas[i]],
                "normal_form": [to_text(f) for f in st.normal_form(i)],
                "permaconsistent": ael.is_permaconsistent_formulas(st.formulas[i], st.blocks[i]),
            })
    else:
        dl.check_stratifiable(inst, split)
        index = dl.default_strata(inst, split)
        nd = len(inst.defaults)
        for i in split.poset.linearization:
            info["strata"].append({
                "stratum": str(i),
                "defaults": [syntax.format_default(d) for d, j in zip(inst.defaults, index) if j == i],
                "axioms": [to_text(w) + "." for w, j in zip(inst.axioms, index[nd:]) if j == i],
            })
        info["modally_separated"] = dl.is_modally_separated(inst, split)
    if args.json:
        sys.stdout.write(json.dumps(info, indent=2, sort_keys=True) + "\n")
        return 0
    sys.stdout.write(syntax.format_splitting(split) + "\n")
    for s in info["strata"]:
        sys.stdout.write(f"-- {s['stratum']}\n")
        for key in ("clauses", "formulas", "defaults", "axioms"):
            for line in s.get(key, []):
                sys.stdout.write(f"  {line}\n")
        if "normal_form" in s:
            sys.stdout.write("  separated: " + "; ".join(s["normal_form"]) + "\n")
    return 0


def cmd_oracle_compare(args) -> int:
    dialect, inst = _load(args.file, args.dialect)
    _check_semantics(dialect, args.semantics)
    doc = solve_document(dialect, inst, args.semantics, budget=args.budget, exact_only=args.exact_only)
    if dialect == "lp":
        which = "exact_stable" if args.exact_only and args.semantics == "stable" else args.semantics
        expected = oracle.oracle_semantics_lp(inst, which)
    elif dialect == "ael":
        expected = oracle.oracle_semantics_ael(inst, args.semantics)
    else:
        expected = oracle.oracle_semantics_dl(inst, args.semantics)
    report = oracle.compare(oracle.instance_digest(syntax.PARSERS[dialect](_read(args.file))),
                            args.semantics, doc["models"], expected)
    if args.json:
        sys.stdout.write(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(str(report) + "\n")
    return 0 if report.match else 1


def cmd_bench(args) -> int:
    report = bench.run(args.family, args.n, args.k, args.semantics, args.budget, args.repeat)
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_generate(args) -> int:
    sys.stdout.write(syntax.format_lp(lp.even_prefix(args.n)))
    return 0


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1; 2 is kept for semantic refusals
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aftkit", description="Stratified fixpoint semantics for LP, AEL and DL.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="compute models of a .lp, .ael or .dl file")
    s.add_argument("file")
    s.add_argument("--semantics", required=True)
    s.add_argument("--mode", nargs="+", metavar="MODE",
                   help="monolithic (default), split, or split-file FILE")
    s.add_argument("--json", action="store_true")
    s.add_argument("--exact-only", action="store_true", help="keep only exact (two-valued) stable models")
    s.add_argument("--consistent", action="store_true", help="drop inconsistent structures (AEL/DL)")
    s.add_argument("--budget", type=int)
    s.add_argument("--dialect", choices=sorted(syntax.PARSERS))
    s.add_argument("--deterministic", action="store_true", help="zero all timings")
    s.set_defaults(fn=cmd_solve)

    sp = sub.add_parser("split", help="inspect splittings")
    ssub = sp.add_subparsers(dest="split_command", required=True)
    show = ssub.add_parser("show", help="print the splitting and the strata")
    show.add_argument("file")
    show.add_argument("--split-file")
    show.add_argument("--dialect", choices=sorted(syntax.PARSERS))
    show.add_argument("--json", action="store_true")
    show.set_defaults(fn=cmd_split_show)

    o = sub.add_parser("oracle", help="check the engine against brute force")
    osub = o.add_subparsers(dest="oracle_command", required=True)
    cmp_ = osub.add_parser("compare")
    cmp_.add_argument("file")
    cmp_.add_argument("--semantics", required=True)
    cmp_.add_argument("--exact-only", action="store_true")
    cmp_.add_argument("--budget", type=int)
    cmp_.add_argument("--dialect", choices=sorted(syntax.PARSERS))
    cmp_.add_argument("--json", action="store_true")
    cmp_.set_defaults(fn=cmd_oracle_compare)

    b = sub.add_parser("bench", help="monolithic versus split timing report (JSON)")
    b.add_argument("family", choices=bench.FAMILIES)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--semantics", default="wf", choices=LP_SEMANTICS)
    b.add_argument("--repeat", type=int, default=1)
    b.add_argument("--budget", type=int)
    b.set_defaults(fn=cmd_bench)

    g = sub.add_parser("generate", help="emit generated programs")
    g.add_argument("what", choices=["even"])
    g.add_argument("--n", type=int, required=True)
    g.set_defaults(fn=cmd_generate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ael.SemanticRefusal as e:
        print(f"refused: {e}", file=sys.stderr)
        return 2
    except (syntax.ParseError, BudgetExceeded, oracle.OracleBudgetError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
