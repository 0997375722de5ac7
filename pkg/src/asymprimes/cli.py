"""Command line front end.

    asymprimes PROBLEM.json [--window LO:HI] [--confirm W] [--sat K]
               [--holdout H] [--seed N] [--tasks t1,t2] [--format human|machine]
               [--out FILE]

Exit status: 0 success, 2 invalid input, 3 window too small for a requested
detection, 4 an internal consistency check failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace
from importlib import resources

from . import __version__
from .asymptotics import (
    HEURISTIC,
    WINDOW_CERTIFIED,
    StabilityReport,
    WindowInsufficient,
    analyze_family,
    ass_profile,
    detect_stabilization,
    fit_profile,
    length_profile,
    rank_profile,
)
from .base_ring import set_seed
from .family import FamilyError, WindowError
from .functors import apply_family
from .problem import TASKS, Options, ProblemDescription, ProblemError, dumps, load_problem, parse_problem
from .rees import NormalizationError, OracleError, amao_crosscheck, filtration_check, normalize

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_WINDOW = 3
EXIT_INVARIANT = 4


@dataclass
class Report:
    document: dict
    status: int

    def machine(self) -> str:
        return dumps(self.document)

    def human(self) -> str:
        return render_human(self.document)


def _num(x):
    if x == math.inf:
        return "inf"
    return x


def _ass(s) -> list[str]:
    return [str(P) for P in s.sorted()]


def _fit_doc(fit, kind, note) -> dict:
    if fit is None:
        return {"polynomial": None, "kind": kind, "note": note or "no polynomial tail within the window"}
    return {
        "polynomial": str(fit.poly),
        "coefficients": fit.poly.to_json(),
        "degree": fit.degree,
        "kind": kind,
        "tail_start": fit.start,
        "fit_end": fit.fit_end,
        "holdout": fit.holdout,
        "note": note,
    }


def _ass_doc(rep: StabilityReport, X) -> dict:
    return {
        "profile": [
            {"degree": n, "module": str(X.component(n)), "ass": _ass(a)}
            for n, a in zip(range(rep.lo, rep.hi + 1), rep.ass)
        ],
        "n0": rep.n0,
        "stable_ass": None if rep.n0 is None else _ass(rep.stable_ass),
    }


def _hilbert_doc(rep: StabilityReport) -> dict:
    d = {"lengths": [_num(x) for x in rep.lengths]}
    d.update(_fit_doc(rep.fit, rep.fit_kind, rep.fit_note))
    d["local_lengths"] = {str(P): v for P, v in rep.local_lengths.items()}
    return d


def _grade_doc(rep: StabilityReport) -> list[dict]:
    return [
        {
            "ideal": str(g.ideal),
            "grades": [_num(x) for x in g.grades],
            "c_J": g.c_J,
            "stable": _num(g.stable_direct) if g.stable_direct is not None else None,
            "ext_route": [_num(x) for x in g.scan_grades],
            "stable_ext_route": _num(g.stable_scan) if g.stable_scan is not None else None,
            "agree": g.agree,
        }
        for g in rep.grades
    ]


def _qf_doc(rep: StabilityReport) -> dict:
    qf = rep.quasi_finite
    return {
        "K": None,
        "rows": [
            {
                "degree": r.degree,
                "h0_zero": r.h0_zero,
                "h0_certified": r.h0_certified,
                "joint_injective": r.injective,
                "ass_contained": r.ass_contained,
            }
            for r in qf.rows
        ],
        "n_star": qf.n_star,
        "violations": qf.violations,
        "ok": qf.ok,
    }


def run(problem: ProblemDescription, options: Options | None = None) -> Report:
    """Execute the problem's tasks; never raises for analysis outcomes."""
    opts = options or problem.options
    set_seed(opts.seed)
    tasks = problem.tasks
    doc: dict = {"tool": "asymprimes", "version": __version__, "problem": problem.to_dict()}
    doc["problem"]["options"] = opts.to_dict()
    results: dict = {}
    doc["results"] = results
    insufficient: list[str] = []
    violations: list[str] = []

    try:
        X = problem.build_family(opts.hi + opts.K)
        need_qf = "quasi_finite" in tasks
        ideals = problem.ideals if "grade" in tasks else ()
        rep = analyze_family(X, opts.lo, opts.hi, opts.W, opts.holdout, ideals, opts.K if need_qf else None)
    except FamilyError as exc:
        doc["error"] = str(exc)
        return Report(doc, EXIT_INVALID)
    except (WindowInsufficient, WindowError) as exc:
        doc["error"] = str(exc)
        return Report(doc, EXIT_WINDOW)

    doc["family"] = {"label": X.label, "provenance": X.provenance.value, "lower_bound": X.lower_bound}
    if "ass_stability" in tasks:
        results["ass_stability"] = _ass_doc(rep, X)
        results["ass_stability"]["confirm"] = opts.W
        if rep.n0 is None:
            insufficient.append("ass_stability: no stabilization detected")
    if "hilbert" in tasks:
        results["hilbert"] = _hilbert_doc(rep)
        if rep.fit is None:
            insufficient.append("hilbert: no polynomial fit")
    if "grade" in tasks:
        results["grade"] = _grade_doc(rep)
        for g in rep.grades:
            if g.c_J is None:
                insufficient.append(f"grade {g.ideal}: no c_J detected")
            elif not g.agree:
                violations.append(f"grade {g.ideal}: routes disagree")
    if "quasi_finite" in tasks:
        results["quasi_finite"] = _qf_doc(rep)
        results["quasi_finite"]["K"] = opts.K
        if not rep.quasi_finite.ok:
            violations.append("quasi_finite: injective degree without Ass containment")
    if "functor_stability" in tasks:
        out = []
        for F in problem.functors:
            FX = apply_family(F, X)
            prof = ass_profile(FX, opts.lo, opts.hi)
            n0 = detect_stabilization(prof, opts.W, opts.lo)
            lens = length_profile(FX, opts.lo, opts.hi)
            fit, kind, note = fit_profile(lens, rank_profile(FX, opts.lo, opts.hi), opts.lo, opts.holdout)
            out.append(
                {
                    "functor": str(F),
                    "profile": [
                        {"degree": n, "module": str(FX.component(n)), "ass": _ass(a)}
                        for n, a in zip(range(opts.lo, opts.hi + 1), prof)
                    ],
                    "n0": n0,
                    "stable_ass": None if n0 is None else _ass(prof[n0 - opts.lo]),
                    "lengths": [_num(x) for x in lens],
                    "fit": _fit_doc(fit, kind, note),
                }
            )
            if n0 is None:
                insufficient.append(f"functor {F}: no stabilization detected")
            if fit is None:
                insufficient.append(f"functor {F}: no polynomial fit")
        results["functor_stability"] = out
    if "amao_check" in tasks:
        try:
            results["rees_oracle"] = _amao_doc(problem, opts, rep)
            if not results["rees_oracle"]["ok"]:
                violations.append("amao_check: oracle identity failed")
        except NormalizationError as exc:
            results["rees_oracle"] = {"error": str(exc)}
            insufficient.append("amao_check: no normalizing shift")
        except OracleError as exc:
            results["rees_oracle"] = {"error": str(exc)}
            violations.append(f"amao_check: {exc}")

    certified = rep.certification == WINDOW_CERTIFIED and not insufficient and not violations
    doc["certification"] = WINDOW_CERTIFIED if certified else HEURISTIC
    doc["insufficient"] = insufficient
    doc["violations"] = violations
    status = EXIT_INVARIANT if violations else EXIT_WINDOW if insufficient else EXIT_OK
    doc["status"] = {EXIT_OK: "ok", EXIT_WINDOW: "window_insufficient", EXIT_INVARIANT: "invariant_violation"}[status]
    return Report(doc, status)


def _amao_doc(problem: ProblemDescription, opts: Options, rep: StabilityReport) -> dict:
    mods = problem.modules
    P = normalize(mods["M"], mods["N"], mods["inclusion"], opts.hi)
    j_range = range(1, P.top + 2)
    fit_degree = rep.fit.degree if rep.fit is not None and rep.fit_kind == "length" else None
    am = amao_crosscheck(P, j_range, fit_degree)
    filt = [filtration_check(P, j) for j in j_range]
    stable = rep.stable_ass
    contains_stable = None if stable is None else stable <= am.ass_union
    ok = am.ok and all(f.ok for f in filt) and contains_stable is not False
    return {
        "shift": P.r,
        "rows": [
            {
                "j": r.j,
                "quotient_length": _num(r.quotient_length),
                "lstar_lengths": [_num(x) for x in r.lstar_lengths],
                "identity": r.identity,
                "quotient_ass": _ass(r.quotient_ass),
                "lstar_ass": _ass(r.lstar_ass),
                "ass_contained": r.ass_contained,
                "filtration": [s.subquotient for s in filt[r.j - 1].steps],
                "filtration_ok": filt[r.j - 1].ok,
            }
            for r in am.rows
        ],
        "ass_union": _ass(am.ass_union),
        "contains_stable_ass": contains_stable,
        "fit_degree": fit_degree,
        "degree_bound": am.degree_bound,
        "degree_ok": am.degree_ok,
        "ok": ok,
    }


def render_human(doc: dict) -> str:
    lines = [f"{doc['problem']['name']}  ({doc.get('family', {}).get('provenance', '?')})"]
    if "error" in doc:
        lines.append(f"error: {doc['error']}")
        return "\n".join(lines) + "\n"
    res = doc["results"]
    ass = res.get("ass_stability")
    hil = res.get("hilbert")
    grades = res.get("grade", [])
    if ass or hil or grades:
        header = ["degree", "module", "length", "Ass"] + [f"grade{g['ideal']}" for g in grades]
        rows = []
        lo, hi = doc["problem"]["options"]["window"]
        for k, n in enumerate(range(lo, hi + 1)):
            row = [str(n)]
            row.append(ass["profile"][k]["module"] if ass else "")
            row.append(str(hil["lengths"][k]) if hil else "")
            row.append("{" + ", ".join(ass["profile"][k]["ass"]) + "}" if ass else "")
            row.extend(str(g["grades"][k]) for g in grades)
            rows.append(row)
        widths = [max(len(r[c]) for r in rows + [header]) for c in range(len(header))]
        fmt = " | ".join("{:<%d}" % w for w in widths)
        lines.append(fmt.format(*header))
        lines.append("-+-".join("-" * w for w in widths))
        lines.extend(fmt.format(*r) for r in rows)
    if ass:
        st = "{" + ", ".join(ass["stable_ass"]) + "}" if ass["stable_ass"] is not None else "-"
        lines.append(f"n0 = {ass['n0']}  stable Ass = {st}")
    if hil:
        if hil["polynomial"] is None:
            lines.append(f"Hilbert polynomial: none ({hil['note']})")
        else:
            lines.append(f"Hilbert polynomial ({hil['kind']}): P(n) = {hil['polynomial']}, degree {hil['degree']}, from n = {hil['tail_start']}")
            if hil["note"]:
                lines.append(f"  note: {hil['note']}")
    for g in grades:
        lines.append(f"grade{g['ideal']}: c_J = {g['c_J']}, stable value {g['stable']}, routes agree: {g['agree']}")
    qf = res.get("quasi_finite")
    if qf:
        lines.append(f"quasi-finite: h0 certified zero from n* = {qf['n_star']}, violations: {qf['violations'] or 'none'}")
    for f in res.get("functor_stability", []):
        fit = f["fit"]["polynomial"]
        st = "{" + ", ".join(f["stable_ass"]) + "}" if f["stable_ass"] is not None else "-"
        lines.append(f"{f['functor']}: n0 = {f['n0']}, stable Ass = {st}, P(n) = {fit} ({f['fit']['kind']})")
    am = res.get("rees_oracle")
    if am:
        if "error" in am:
            lines.append(f"filtration oracle: {am['error']}")
        else:
            lines.append(
                f"filtration oracle: shift r = {am['shift']}, identities hold: {am['ok']}, "
                f"Ass union = {{{', '.join(am['ass_union'])}}}, degree {am['fit_degree']} <= {am['degree_bound']}"
            )
    lines.append(f"certification: {doc['certification']}  status: {doc['status']}")
    for msg in doc["insufficient"] + doc["violations"]:
        lines.append(f"  ! {msg}")
    return "\n".join(lines) + "\n"


def corpus_names() -> list[str]:
    files = resources.files("asymprimes") / "corpus"
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def load_corpus(name: str) -> ProblemDescription:
    path = resources.files("asymprimes") / "corpus" / f"{name}.json"
    return parse_problem(path.read_text(encoding="utf-8"))


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like LO:HI") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="asymprimes", description="Degreewise associated primes, Hilbert polynomials and grades of graded families.")
    ap.add_argument("problem", help="problem file (JSON), or corpus:NAME for a bundled instance")
    ap.add_argument("--window", type=_window, metavar="LO:HI")
    ap.add_argument("--confirm", type=int, metavar="W")
    ap.add_argument("--sat", type=int, metavar="K")
    ap.add_argument("--holdout", type=int, metavar="H")
    ap.add_argument("--seed", type=int, metavar="N")
    ap.add_argument("--tasks", metavar="LIST", help=f"comma separated subset of {','.join(TASKS)} or 'all'")
    ap.add_argument("--format", choices=("human", "machine"), default="human")
    ap.add_argument("--out", metavar="FILE")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        if args.problem.startswith("corpus:"):
            problem = load_corpus(args.problem[len("corpus:"):])
        else:
            problem = load_problem(args.problem)
        changes = {}
        if args.window:
            changes["lo"], changes["hi"] = args.window
        for flag, key in (("confirm", "W"), ("sat", "K"), ("holdout", "holdout"), ("seed", "seed")):
            if getattr(args, flag) is not None:
                changes[key] = getattr(args, flag)
        opts = replace(problem.options, **changes)
        errs = opts.validate()
        if errs:
            raise ProblemError([("options", e) for e in errs])
        if args.tasks:
            tl = [t.strip() for t in args.tasks.split(",") if t.strip()]
            if tl == ["all"]:
                tl = list(TASKS)
            bad = [t for t in tl if t not in TASKS]
            if bad:
                raise ProblemError([("--tasks", f"unknown task {t!r}") for t in bad])
            if "amao_check" in tl and not problem.is_quotient:
                raise ProblemError([("--tasks", "amao_check requires M ⊆ N instance")])
            problem = replace(problem, tasks=tuple(t for t in TASKS if t in tl))
        problem = replace(problem, options=opts)
    except (ProblemError, OSError, FileNotFoundError) as exc:
        print(f"asymprimes: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID

    try:
        report = run(problem)
    except (OracleError, AssertionError) as exc:
        print(f"asymprimes: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    text = report.machine() if args.format == "machine" else report.human()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if "error" in report.document:
        print(f"asymprimes: {report.document['error']}", file=sys.stderr)
    return report.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
