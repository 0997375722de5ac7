"""Eventual behaviour of degreewise families over a finite window.

Everything is exact: associated primes come from Smith forms, Hilbert
polynomials from finite differences over the rationals.  Nothing here
claims more than the window shows; detections carry the width of the run
that supports them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .base_ring import Ideal, PrimeIdeal
from .family import DegreewiseFamily, WindowError, h0_component
from .fpmod import AssSet, FPModule, ass, grade, length, quotient_ring, structure
from .functors import CoherentFunctor, apply_family

WINDOW_CERTIFIED = "WindowCertified"
HEURISTIC = "Heuristic"


class NotFiniteLength(ValueError):
    def __init__(self, degree: int):
        super().__init__(f"not finite length at degree {degree}")
        self.degree = degree


class WindowInsufficient(ValueError):
    """The requested window cannot support the requested analysis."""


# ---------------------------------------------------------------------------
# Ass stabilisation
# ---------------------------------------------------------------------------


def ass_profile(X: DegreewiseFamily, lo: int, hi: int) -> list[AssSet]:
    return [ass(X.component(n)) for n in X.degrees(lo, hi)]


def detect_stabilization(profile: Sequence, W: int, lo: int = 0):
    """Least n0 with profile constant on [n0, hi] and hi - n0 >= W, else None."""
    if W < 1:
        raise ValueError("confirmation width must be >= 1")
    if not profile:
        return None
    last = profile[-1]
    k = len(profile) - 1
    while k > 0 and profile[k - 1] == last:
        k -= 1
    hi = lo + len(profile) - 1
    n0 = lo + k
    return n0 if hi - n0 >= W else None


# ---------------------------------------------------------------------------
# Hilbert polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QPoly:
    """Polynomial in n with rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = [Fraction(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, n) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if k == 0 else ("n" if k == 1 else f"n^{k}")
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def _differences(vals: list[int]) -> list[int]:
    return [b - a for a, b in zip(vals, vals[1:])]


def _newton(vals: Sequence[int], start: int, d: int) -> QPoly:
    """Degree <= d polynomial P with P(start + k) = vals[k] for k = 0..d."""
    # forward differences at the start point
    deltas = []
    row = list(vals[: d + 1])
    for _ in range(d + 1):
        deltas.append(row[0])
        row = _differences(row)
    coeffs = [Fraction(0)] * (d + 1)
    for k, dk in enumerate(deltas):
        # binomial(n - start, k) expanded in n
        basis = [Fraction(1)]
        for m in range(k):
            shift = -(start + m)
            nb = [Fraction(0)] * (len(basis) + 1)
            for i, b in enumerate(basis):
                nb[i] += b * shift
                nb[i + 1] += b
            basis = nb
        scale = Fraction(dk, math.factorial(k))
        for i, b in enumerate(basis):
            coeffs[i] += scale * b
    return QPoly(tuple(coeffs))


@dataclass(frozen=True)
class HilbertFit:
    poly: QPoly
    start: int  # first degree from which the fitted tail is used
    fit_end: int  # last fitted degree; the holdout follows it
    holdout: int

    @property
    def degree(self) -> int:
        return self.poly.degree


def hilbert_fit(lengths: Sequence, holdout: int, lo: int = 0, min_run: int = 2) -> HilbertFit | None:
    """Least-degree polynomial matching a tail of ``lengths`` and predicting the holdout.

    The last ``holdout`` values are never used for fitting.  Returns None when
    no tail of constant d-th differences (at least ``min_run`` of them) exists,
    or when the candidate misses a holdout value.
    """
    for k, v in enumerate(lengths):
        if v == math.inf:
            raise NotFiniteLength(lo + k)
    vals = [int(v) for v in lengths]
    if holdout < 0:
        raise ValueError("holdout must be >= 0")
    fit = vals[: len(vals) - holdout] if holdout else vals
    hold = vals[len(fit):]
    diffs = fit
    for d in range(len(fit)):
        if len(diffs) < min_run:
            return None
        last = diffs[-1]
        k = len(diffs) - 1
        while k > 0 and diffs[k - 1] == last:
            k -= 1
        if len(diffs) - k >= min_run:
            start = lo + k
            P = _newton(fit[k:], start, d)
            end = lo + len(fit) - 1
            if any(P(lo + k2) != fit[k2] for k2 in range(k, len(fit))):  # pragma: no cover - by construction
                raise AssertionError("finite-difference fit does not interpolate")
            if any(P(end + 1 + t) != hold[t] for t in range(len(hold))):
                return None
            return HilbertFit(P, start, end, holdout)
        diffs = _differences(diffs)
    return None


def length_profile(X: DegreewiseFamily, lo: int, hi: int) -> list:
    return [length(X.component(n)) for n in X.degrees(lo, hi)]


def rank_profile(X: DegreewiseFamily, lo: int, hi: int) -> list[int]:
    return [X.component(n).free_rank for n in X.degrees(lo, hi)]


def local_length_profile(X: DegreewiseFamily, lo: int, hi: int) -> dict[PrimeIdeal, list[int]]:
    """Length after localising at each maximal ideal that occurs (torsion part only)."""
    per = []
    primes = set()
    for n in X.degrees(lo, hi):
        _, tors = structure(X.component(n))
        d: dict = {}
        for p, e in tors:
            P = X.base.prime(p)
            d[P] = d.get(P, 0) + e
            primes.add(P)
        per.append(d)
    return {P: [d.get(P, 0) for d in per] for P in sorted(primes)}


# ---------------------------------------------------------------------------
# grades
# ---------------------------------------------------------------------------


@dataclass
class GradeProfile:
    ideal: Ideal
    grades: list  # per degree, values in {0, 1, inf}
    c_J: int | None
    scan_grades: list  # second route, per degree
    stable_direct: object
    stable_scan: object
    agree: bool


def _grade_from_ext(e0: AssSet, e1: AssSet, t: AssSet):
    if e0:
        return 0
    if e1:
        return 1
    if t:
        raise AssertionError("Ext^0 and Ext^1 vanish but X_n != J X_n")
    return math.inf


def grade_profile(J: Ideal, X: DegreewiseFamily, lo: int, hi: int, W: int) -> GradeProfile:
    """grade(J, X_n) directly and again from the families X ⊗ A/J, Ext^i(A/J, X)."""
    grades = [grade(J, X.component(n)) for n in X.degrees(lo, hi)]
    c_J = detect_stabilization(grades, W, lo)

    Q = quotient_ring(J)
    fams = [apply_family(F, X) for F in (CoherentFunctor.ext(0, Q), CoherentFunctor.ext(1, Q), CoherentFunctor.tensor_with(Q))]
    profiles = [ass_profile(F, lo, hi) for F in fams]
    scan = [_grade_from_ext(*sets) for sets in zip(*profiles)]
    stable_sets = []
    for prof in profiles:
        n0 = detect_stabilization(prof, W, lo)
        stable_sets.append(prof[n0 - lo] if n0 is not None else None)
    stable_scan = None if None in stable_sets else _grade_from_ext(*stable_sets)
    stable_direct = grades[c_J - lo] if c_J is not None else None

    agree = c_J is not None and stable_scan is not None and stable_direct == stable_scan
    if c_J is not None:
        agree = agree and all(grades[n - lo] == scan[n - lo] for n in range(c_J, hi + 1))
    return GradeProfile(J, grades, c_J, scan, stable_direct, stable_scan, agree)


# ---------------------------------------------------------------------------
# quasi-finiteness
# ---------------------------------------------------------------------------


@dataclass
class QuasiFiniteRow:
    degree: int
    h0_zero: bool
    h0_certified: bool
    injective: bool | None  # joint multiplication X_n -> X_{n+1}^s; None at the window end
    ass_contained: bool | None


@dataclass
class QuasiFiniteReport:
    rows: list[QuasiFiniteRow]
    n_star: int | None  # least degree from which h0 is certified zero to the end
    violations: list[int]  # degrees where injectivity holds but Ass containment fails

    @property
    def ok(self) -> bool:
        if self.violations:
            return False
        if self.n_star is None:
            return True
        return all(r.injective and r.ass_contained for r in self.rows if r.degree >= self.n_star and r.injective is not None)


def quasi_finite_check(X: DegreewiseFamily, lo: int, hi: int, K: int = 4) -> QuasiFiniteReport:
    if K < 1:
        raise ValueError("saturation bound K must be >= 1")
    if hi + K > X.window_end:
        raise WindowError(f"h0 up to degree {hi} with K={K} needs components to degree {hi + K}")
    rows = []
    violations = []
    for n in X.degrees(lo, hi):
        h = h0_component(X, n, K)
        inj = cont = None
        if n < hi:
            inj = X.joint_mult(n).is_injective()
            cont = ass(X.component(n)) <= ass(X.component(n + 1))
            if inj and not cont:
                violations.append(n)
        rows.append(QuasiFiniteRow(n, h.is_zero(), h.certified, inj, cont))
    n_star = None
    for r in reversed(rows):
        if r.h0_zero and r.h0_certified:
            n_star = r.degree
        else:
            break
    return QuasiFiniteReport(rows, n_star, violations)


# ---------------------------------------------------------------------------
# aggregate report
# ---------------------------------------------------------------------------


@dataclass
class StabilityReport:
    lo: int
    hi: int
    W: int
    ass: list[AssSet]
    n0: int | None
    lengths: list
    fit: HilbertFit | None
    fit_kind: str | None  # "length" or "rank"
    fit_note: str
    grades: list[GradeProfile] = field(default_factory=list)
    quasi_finite: QuasiFiniteReport | None = None
    local_lengths: dict = field(default_factory=dict)

    @property
    def stable_ass(self) -> AssSet | None:
        return None if self.n0 is None else self.ass[self.n0 - self.lo]

    @property
    def poly_degree(self) -> int | None:
        return None if self.fit is None else self.fit.degree

    @property
    def certification(self) -> str:
        ok = self.n0 is not None and self.fit is not None
        ok = ok and all(g.c_J is not None and g.agree for g in self.grades)
        if self.quasi_finite is not None:
            ok = ok and all(r.h0_certified for r in self.quasi_finite.rows) and self.quasi_finite.ok
        return WINDOW_CERTIFIED if ok else HEURISTIC


def fit_profile(lengths: list, ranks: list[int], lo: int, holdout: int) -> tuple[HilbertFit | None, str | None, str]:
    """Fit lengths when they are finite on a usable tail, otherwise the rank profile."""
    inf_at = [lo + k for k, v in enumerate(lengths) if v == math.inf]
    if not inf_at:
        return hilbert_fit(lengths, holdout, lo), "length", ""
    last = inf_at[-1]
    tail = lengths[last - lo + 1 :]
    if len(tail) >= holdout + 2:
        fit = hilbert_fit(tail, holdout, last + 1)
        if fit is not None:
            return fit, "length", f"length infinite up to degree {last}; fitted on the finite tail"
    return hilbert_fit(ranks, holdout, lo), "rank", f"not finite length at degree {last}; fitted the free-rank profile instead"


def analyze_family(
    X: DegreewiseFamily,
    lo: int,
    hi: int,
    W: int = 4,
    holdout: int = 4,
    ideals: Sequence[Ideal] = (),
    K: int | None = 4,
) -> StabilityReport:
    if hi - lo < W:
        raise WindowInsufficient(f"window [{lo}, {hi}] is shorter than the confirmation width {W}")
    prof = ass_profile(X, lo, hi)
    n0 = detect_stabilization(prof, W, lo)
    lengths = length_profile(X, lo, hi)
    fit, kind, note = fit_profile(lengths, rank_profile(X, lo, hi), lo, holdout)
    grades = [grade_profile(J, X, lo, hi, W) for J in ideals]
    qf = quasi_finite_check(X, lo, hi, K) if K else None
    return StabilityReport(lo, hi, W, prof, n0, lengths, fit, kind, note, grades, qf, local_length_profile(X, lo, hi))


def full_report(problem, options=None) -> StabilityReport:
    """Analyse the main family of a parsed problem description."""
    from .problem import Options

    opts = options or problem.options or Options()
    X = problem.build_family(opts.hi + opts.K)
    return analyze_family(X, opts.lo, opts.hi, opts.W, opts.holdout, problem.ideals, opts.K)
