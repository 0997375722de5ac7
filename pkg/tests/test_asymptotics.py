import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymprimes.asymptotics import (
    HEURISTIC,
    WINDOW_CERTIFIED,
    NotFiniteLength,
    QPoly,
    WindowInsufficient,
    analyze_family,
    ass_profile,
    detect_stabilization,
    fit_profile,
    grade_profile,
    hilbert_fit,
    quasi_finite_check,
)
from asymprimes.base_ring import BaseRing
from asymprimes.family import WindowError, from_graded, quotient_family
from asymprimes.graded import GradedMap, GradedModule, GradedRing

F2u = BaseRing.poly(2)
F2 = BaseRing.field(2)
Ax = GradedRing(F2u, ["x"])
Axy = GradedRing(F2u, ["x", "y"])


def quotient(M, N, entries, window):
    return quotient_family(M, N, GradedMap(M, N, entries), window)


def ux(window=10):
    return quotient(GradedModule.free(Ax, [1]), GradedModule.free(Ax), [["u*x"]], window)


def const_family(text, window=10):
    """X_n = A/(text) for n >= 1, X_0 = A."""
    return quotient(GradedModule.free(Ax, [1]), GradedModule.free(Ax), [[f"({text})*x"]], window)


def strs(profile):
    return [sorted(str(P) for P in s) for s in profile]


# -- Ass profiles and stabilisation ---------------------------------------------


def test_ass_profile_examples():
    assert strs(ass_profile(ux(), 0, 6)) == [["(0)"]] + [["(u)"]] * 6
    F = GradedModule.free(Ax)
    zero = quotient(F, F, [["1"]], 6)
    assert all(not s for s in ass_profile(zero, 0, 6))
    free = from_graded(GradedModule.free(Ax), 6)
    assert strs(ass_profile(free, 0, 6)) == [["(0)"]] * 7


def test_ass_profile_out_of_window():
    with pytest.raises(WindowError):
        ass_profile(ux(5), 0, 6)


@pytest.mark.parametrize(
    "profile, W, lo, expected",
    [
        (["a", "b", "b", "b"], 2, 0, 1),
        (["a", "b", "a", "b", "a"], 2, 0, None),
        (["c"] * 5, 3, 2, 2),
        (["a", "b", "b"], 2, 0, None),  # only one step of confirmation
        ([], 1, 0, None),
    ],
)
def test_detect_stabilization(profile, W, lo, expected):
    assert detect_stabilization(profile, W, lo) == expected


def test_detect_stabilization_rejects_zero_width():
    with pytest.raises(ValueError):
        detect_stabilization(["a"], 0)


# -- Hilbert fitting --------------------------------------------------------------


def test_hilbert_fit_examples():
    f = hilbert_fit([1, 2, 3, 4, 5, 6], holdout=1)
    assert f.poly == QPoly((1, 1)) and str(f.poly) == "n + 1"
    g = hilbert_fit([5, 1, 1, 1, 1], holdout=1)
    assert g.poly == QPoly((1,)) and g.start == 1
    h = hilbert_fit(list(range(21)), holdout=4)
    assert str(h.poly) == "n" and h.degree == 1


def test_zero_polynomial_has_degree_minus_one():
    f = hilbert_fit([3, 0, 0, 0, 0, 0], holdout=2)
    assert str(f.poly) == "0" and f.degree == -1


def test_hilbert_fit_failures():
    assert hilbert_fit([2**k for k in range(12)], holdout=3) is None
    assert hilbert_fit([1, 1, 1, 1, 1, 9], holdout=1) is None  # holdout not predicted
    with pytest.raises(NotFiniteLength) as exc:
        hilbert_fit([1, 2, math.inf, 4], holdout=1, lo=3)
    assert exc.value.degree == 5


def test_qpoly_rendering():
    p = QPoly((0, Fraction(3, 2), Fraction(1, 2)))
    assert str(p) == "1/2*n^2 + 3/2*n"
    assert str(QPoly((-1, 1))) == "n - 1"
    assert p(4) == 14


@settings(max_examples=40, deadline=None)
@given(
    coeffs=st.lists(st.integers(-3, 3), min_size=1, max_size=4),
    prefix=st.lists(st.integers(0, 50), max_size=3),
    holdout=st.integers(0, 4),
)
def test_hilbert_fit_recovers_integer_valued_polynomials(coeffs, prefix, holdout):
    # binomial basis keeps values integral; shift so values stay nonnegative
    def P(n):
        return sum(c * math.comb(n + 10, k) for k, c in enumerate(coeffs)) + 10**4

    lo = 0
    tail_start = len(prefix)
    vals = prefix + [P(n) for n in range(tail_start, tail_start + 12)]
    fit = hilbert_fit(vals, holdout, lo)
    assert fit is not None
    d = max((k for k, c in enumerate(coeffs) if c), default=0)
    assert fit.degree == d
    for n in range(fit.start, len(vals) + 5):
        if n >= tail_start:
            assert fit.poly(n) == P(n)


def test_fit_profile_falls_back_to_rank():
    fit, kind, note = fit_profile([math.inf] * 8, [1] * 8, 0, 4)
    assert kind == "rank" and str(fit.poly) == "1" and "not finite length at degree 7" in note
    fit, kind, note = fit_profile([math.inf, 1, 1, 1, 1, 1, 1, 1], [1] + [0] * 7, 0, 4)
    assert kind == "length" and str(fit.poly) == "1"


# -- grades -------------------------------------------------------------------------


def test_grade_profile_examples():
    J = F2u.ideal("u")
    g = grade_profile(J, ux(), 0, 10, 4)
    assert g.grades == [1] + [0] * 10 and g.c_J == 1 and g.agree
    free = from_graded(GradedModule.free(Ax), 10)
    g = grade_profile(J, free, 0, 10, 4)
    assert g.grades == [1] * 11 and g.c_J == 0 and g.agree
    g = grade_profile(J, const_family("1 + u"), 0, 10, 4)
    assert g.grades[1:] == [math.inf] * 10 and g.c_J == 1 and g.agree


# -- quasi-finiteness ---------------------------------------------------------------------


def test_quasi_finite_examples():
    free = from_graded(GradedModule.free(Ax), 12)
    rep = quasi_finite_check(free, 0, 8, 4)
    assert rep.ok and rep.n_star == 0
    assert all(r.h0_zero and (r.injective in (True, None)) and r.ass_contained in (True, None) for r in rep.rows)

    Q = from_graded(GradedModule(Ax, [0], [2], [["x^2"]]), 12)
    rep = quasi_finite_check(Q, 0, 8, 4)
    assert [r.h0_zero for r in rep.rows[:3]] == [False, False, True]
    assert rep.n_star == 2

    X = quotient(GradedModule.free(Ax), GradedModule.free(Axy), [["1"]], 10)
    rep = quasi_finite_check(X, 0, 6, 4)
    assert all(r.injective for r in rep.rows if 1 <= r.degree < 6)
    assert strs(ass_profile(X, 1, 6)) == [["(0)"]] * 6
    assert rep.violations == []


def test_quasi_finite_needs_room_for_saturation():
    with pytest.raises(WindowError):
        quasi_finite_check(ux(10), 0, 8, 4)
    with pytest.raises(ValueError):
        quasi_finite_check(ux(10), 0, 5, 0)


# -- aggregate reports ----------------------------------------------------------------------


def test_full_report_ux_instance():
    rep = analyze_family(ux(14), 0, 10, 4, 4, [F2u.ideal("u")], 4)
    assert rep.n0 == 1 and strs([rep.stable_ass]) == [["(u)"]]
    assert str(rep.fit.poly) == "1" and rep.fit_kind == "length"
    assert rep.grades[0].c_J == 1
    assert rep.certification == WINDOW_CERTIFIED


def test_full_report_zero_family():
    F = GradedModule.free(Ax)
    zero = quotient(F, F, [["1"]], 14)
    rep = analyze_family(zero, 0, 10, 4, 4, [F2u.ideal("u")], 4)
    assert rep.n0 == 0 and not rep.stable_ass
    assert str(rep.fit.poly) == "0"
    assert rep.grades[0].grades == [math.inf] * 11


def test_full_report_free_over_field():
    X = from_graded(GradedModule.free(GradedRing(F2, ["x"])), 14)
    rep = analyze_family(X, 0, 10, 4, 4, [], 4)
    assert strs([rep.stable_ass]) == [["(0)"]] and str(rep.fit.poly) == "1"


def test_heuristic_when_window_too_short_to_confirm():
    rep = analyze_family(const_family("u"), 0, 5, 5, 1, [], None)
    assert rep.n0 is None and rep.certification == HEURISTIC
    with pytest.raises(WindowInsufficient):
        analyze_family(ux(), 0, 3, 4, 1, [], None)


def test_local_lengths_split_by_prime():
    rep = analyze_family(const_family("u^2 + u"), 0, 6, 4, 1, [], None)
    assert {str(P): v for P, v in rep.local_lengths.items()} == {"(u)": [0] + [1] * 6, "(1 + u)": [0] + [1] * 6}
