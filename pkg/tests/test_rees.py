import pytest

from asymprimes.base_ring import BaseRing
from asymprimes.fpmod import length
from asymprimes.graded import GradedMap, GradedModule, GradedRing
from asymprimes.rees import (
    NormalizationError,
    amao_crosscheck,
    filtration_check,
    lstar_component,
    normalize,
    trivial_extension_view,
)

F2u = BaseRing.poly(2)
F3 = BaseRing.field(3)
WINDOW = 8


def pair(base, rvars, svars, Mtw, Ntw, entries, Nrels=None):
    R, S = GradedRing(base, rvars), GradedRing(base, svars)
    M = GradedModule.free(R, Mtw)
    N = GradedModule(S, Ntw, *(Nrels or ((), None)))
    return M, N, GradedMap(M, N, entries)


def R_in_S():
    return pair(F3, ["x"], ["x", "y"], [0], [0], [["1"]])


def ux():
    return pair(F2u, ["x"], ["x"], [1], [0], [["u*x"]])


# -- normalisation ------------------------------------------------------------


def test_normalize_examples():
    assert normalize(*R_in_S(), WINDOW).r == 0
    assert normalize(*ux(), WINDOW).r == 1
    M, N, iota = pair(F2u, ["x"], ["x"], [0, 2], [0, 2], [["1", "0"], ["0", "1"]])
    assert normalize(M, N, iota, WINDOW).r == 2


def test_normalized_modules_generated_in_degree_zero():
    P = normalize(*ux(), WINDOW)
    assert P.M.twists == (0,) and P.N.twists == (0,)
    for n in range(0, 5):
        assert P.M.component(n).is_isomorphic(P.original[0].component(n + 1))


def test_normalize_fails_beyond_window():
    # a new generator in every degree: no shift leaves a window generated in degree 0
    tw = list(range(6))
    ident = [["1" if a == b else "0" for b in tw] for a in tw]
    M, N, iota = pair(F2u, ["x"], ["x"], tw, tw, ident)
    with pytest.raises(NormalizationError, match="no normalizing shift within window"):
        normalize(M, N, iota, 5)


# -- L* and the filtration ----------------------------------------------------------


def test_lstar_R_in_S_matches_monomial_count():
    # T_i is spanned by the monomials of degree j-1 with x-degree >= i-1 (i >= 1),
    # so L*_{0j} = 0 and L*_{ij} is one-dimensional for 1 <= i <= j-1
    P = normalize(*R_in_S(), WINDOW)
    for j in range(1, WINDOW + 1):
        dims = [length(lstar_component(P, i, j)) for i in range(j)]
        assert dims == [0] + [1] * (j - 1)
        assert sum(dims) == j - 1 == length(P.quotient(j - 1))


def test_lstar_boundary_formulas():
    P = normalize(*ux(), WINDOW)
    for j in range(2, 6):
        # i = 0: N_{j-1} / (R_1 N_{j-2} + S_{j-1} M_0) vanishes since N is generated by N_0
        assert lstar_component(P, 0, j).is_zero()
        # i = j-1: (R_{j-1} N_0 + S_1 M_{j-2}) / M_{j-1} is the whole quotient here
        assert lstar_component(P, j - 1, j).is_isomorphic(P.quotient(j - 1))


def test_lstar_index_range():
    P = normalize(*ux(), WINDOW)
    with pytest.raises(IndexError):
        lstar_component(P, 3, 3)
    with pytest.raises(IndexError):
        lstar_component(P, 0, WINDOW + 5)


def test_filtration_examples():
    P = normalize(*ux(), WINDOW)
    f1 = filtration_check(P, 1)
    assert f1.ok and len(f1.steps) == 1
    f3 = filtration_check(P, 3)
    assert f3.ok and len(f3.steps) == 3
    assert sum(length(lstar_component(P, i, 3)) for i in range(3)) == 1
    M, N, iota = pair(F2u, ["x", "y"], ["x", "y"], [0], [0], [["1"]])
    PN = normalize(M, N, iota, 5)
    for j in range(1, 5):
        fc = filtration_check(PN, j)
        assert fc.ok and all(s.subquotient == "0" for s in fc.steps)


def test_filtration_agrees_with_lstar_on_mixed_instance():
    M, N, iota = pair(F2u, ["x"], ["x", "y"], [0], [0], [["1"]], ([1], [["u*y"]]))
    P = normalize(M, N, iota, 6)
    for j in range(1, 6):
        fc = filtration_check(P, j)
        assert fc.ok and all(s.matches_lstar for s in fc.steps)


# -- the length identity ----------------------------------------------------------------


def test_amao_examples():
    P = normalize(*R_in_S(), WINDOW)
    rep = amao_crosscheck(P, range(1, WINDOW + 1), fit_degree=1)
    assert rep.degree_bound == 1 and rep.degree_ok and rep.ok
    M, N, iota = pair(F2u, ["x"], ["x"], [0], [0], [["1"]])
    rep = amao_crosscheck(normalize(M, N, iota, 5), range(1, 6))
    assert all(r.quotient_length == 0 and not r.quotient_ass and not r.lstar_ass for r in rep.rows)
    rep = amao_crosscheck(normalize(*ux(), WINDOW), range(1, 8), fit_degree=0)
    assert rep.ok
    assert all(r.lstar_sum == 1 == r.quotient_length for r in rep.rows if r.j >= 1)
    assert [str(p) for p in rep.ass_union.sorted()] == ["(u)"]


def test_amao_flags_degree_violation():
    P = normalize(*ux(), WINDOW)
    rep = amao_crosscheck(P, range(1, 3), fit_degree=5)
    assert rep.degree_bound == 1 and rep.degree_ok is False and not rep.ok


# -- trivial extension -------------------------------------------------------------------------


def test_trivial_extension_examples():
    R = GradedRing(F2u, ["x", "y"])
    zero = GradedModule(R, [0], [0], [["1"]])
    assert trivial_extension_view(R, zero, 5).standard_graded
    view = trivial_extension_view(R, GradedModule.free(R), 5)
    assert view.standard_graded
    Rn, Mn = view.component(3)
    assert Rn.free_rank == 4 and Mn.free_rank == 3
    Rx = GradedRing(F2u, ["x"])
    assert trivial_extension_view(Rx, GradedModule.free(Rx), 6).standard_graded


def test_trivial_extension_not_standard_graded_when_unnormalized():
    R = GradedRing(F2u, ["x"])
    assert not trivial_extension_view(R, GradedModule.free(R, [0, 2]), 4).standard_graded


def test_trivial_extension_multiplication_rule():
    Rx = GradedRing(F2u, ["x"])
    view = trivial_extension_view(Rx, GradedModule.free(Rx), 3)
    one, u = F2u.one, F2u.parse("u")
    # (x, 1) * (x, u) = (x^2, x*u + x*1) in degree 2
    n, r, m = view.multiply((1, [one], [one]), (1, [one], [u]))
    assert n == 2 and r == [one] and m == [u + one]
