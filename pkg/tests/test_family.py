import pytest

from asymprimes.base_ring import BaseRing
from asymprimes.cli import corpus_names, load_corpus
from asymprimes.family import (
    ExtensionData,
    FamilyError,
    Provenance,
    WindowError,
    extend_family,
    from_graded,
    h0_component,
    pushout,
    quotient_by_fg,
    quotient_family,
    split_extension,
)
from asymprimes.fpmod import FPMap, FPModule, length
from asymprimes.graded import GradedMap, GradedModule, GradedRing
from asymprimes.matrix import Matrix

F2u = BaseRing.poly(2)
Ax = GradedRing(F2u, ["x"])
Axy = GradedRing(F2u, ["x", "y"])
WINDOW = 8


def is_(M, text):
    return M.is_isomorphic(FPModule.parse(M.ring, text))


def ux_family(window=WINDOW):
    M, N = GradedModule.free(Ax, [1]), GradedModule.free(Ax)
    return quotient_family(M, N, GradedMap(M, N, [["u*x"]]), window)


def test_ux_quotient_components():
    X = ux_family()
    assert X.provenance is Provenance.QUOTIENT
    assert is_(X.component(0), "A")
    assert all(is_(X.component(n), "A/(u)") for n in range(1, WINDOW + 1))


def test_R_in_S_quotient_is_free_of_rank_n():
    M, N = GradedModule.free(Ax), GradedModule.free(Axy)
    X = quotient_family(M, N, GradedMap(M, N, [["1"]]), WINDOW)
    assert X.variables == ("x",)
    assert [X.component(n).free_rank for n in range(WINDOW + 1)] == list(range(WINDOW + 1))


def test_identity_inclusion_gives_zero_family():
    N = GradedModule(Ax, [0], [2], [["x^2"]])
    X = quotient_family(N, N, GradedMap(N, N, [["1"]]), WINDOW)
    assert all(X.component(n).is_zero() for n in range(WINDOW + 1))


def test_non_inclusion_reports_degree():
    M, N = GradedModule.free(Ax), GradedModule(Ax, [0], [1], [["x"]])
    with pytest.raises(FamilyError, match="not an inclusion at degree 1") as exc:
        quotient_family(M, N, GradedMap(M, N, [["1"]]), WINDOW)
    assert exc.value.degree == 1


def test_window_is_enforced():
    X = ux_family()
    with pytest.raises(WindowError):
        X.component(WINDOW + 1)
    assert X.component(-3).is_zero()


# -- quotients by finitely generated submodules -------------------------------


def test_quotient_by_zero_module():
    X = ux_family()
    D = GradedModule(Ax, [0], [0], [["1"]])  # the zero module with one generator
    Y = quotient_by_fg(X, D, [[0]])
    assert all(Y.component(n).is_isomorphic(X.component(n)) for n in range(WINDOW + 1))


def test_quotient_by_degree_zero_part_killed_by_x():
    X = ux_family()
    D = GradedModule(Ax, [0], [1], [["x"]])
    Y = quotient_by_fg(X, D, [["u"]])
    assert is_(Y.component(0), "A/(u)")
    assert all(Y.component(n).is_isomorphic(X.component(n)) for n in range(1, WINDOW + 1))


def test_quotient_by_incompatible_submodule():
    X = ux_family()
    D = GradedModule(Ax, [0], [1], [["x"]])
    with pytest.raises(FamilyError) as exc:
        quotient_by_fg(X, D, [["1"]])
    assert exc.value.degree is not None


def test_quotient_by_everything():
    G = GradedModule(Axy, [0], [2], [["x*y"]])
    X = from_graded(G, WINDOW)
    Y = quotient_by_fg(X, G, [["1"]])
    assert all(Y.component(n).is_zero() for n in range(WINDOW + 1))


# -- extensions ---------------------------------------------------------------


def test_split_extension_is_direct_sum():
    X = ux_family()
    D = GradedModule(Ax, [0], [2], [["x^2"]])
    Y = split_extension(X, D)
    assert Y.provenance is Provenance.EXTENSION
    assert is_(Y.component(0), "A ⊕ A")
    assert is_(Y.component(1), "A/(u) ⊕ A")
    assert is_(Y.component(3), "A/(u)")


def test_extension_by_zero_and_of_zero():
    X = ux_family()
    zero = GradedModule(Ax, [0], [0], [["1"]])
    Y = split_extension(X, zero)
    assert all(Y.component(n).is_isomorphic(X.component(n)) for n in range(WINDOW + 1))
    F = GradedModule.free(Ax)
    Z = quotient_family(F, F, GradedMap(F, F, [["1"]]), WINDOW)
    D = GradedModule(Ax, [1], [3], [["x^2"]])
    W = split_extension(Z, D)
    DF = from_graded(D, WINDOW)
    assert all(W.component(n).is_isomorphic(DF.component(n)) for n in range(WINDOW + 1))


def test_quotient_family_rejects_foreign_map():
    F, G = GradedModule.free(Ax), GradedModule.free(Ax)
    with pytest.raises(FamilyError):
        quotient_family(F, GradedModule.free(Ax), GradedMap(G, G, [["1"]]), WINDOW)


def test_bad_extension_data_rejected():
    X = ux_family()
    D = from_graded(GradedModule.free(Ax), WINDOW)
    # middle = X_n ⊕ D_n but the projection is zero: not exact
    split = split_extension(X, D)
    data = ExtensionData(
        middle=split.component,
        incl=lambda n: FPMap.zero(X.component(n), split.component(n)),
        proj=lambda n: FPMap.zero(split.component(n), D.component(n)),
        mults=split.mult_maps,
    )
    with pytest.raises(FamilyError):
        extend_family(X, D, data)


def test_pushout_of_modules():
    A = FPModule.free(F2u, 1)
    f = FPMap(A, A, Matrix.parse(F2u, [[F2u.parse("u")]]))
    g = FPMap(A, FPModule.zero(F2u), Matrix.zeros(F2u, 0, 1))
    C, iz, _ = pushout(f, g)
    assert is_(C, "A/(u)") and iz.is_surjective()


# -- local cohomology in degree zero ---------------------------------------------


def test_h0_examples():
    Q = from_graded(GradedModule(Ax, [0], [2], [["x^2"]]), WINDOW)
    h = h0_component(Q, 1, K=1)
    assert is_(h.module, "A")
    F = from_graded(GradedModule.free(Ax), WINDOW)
    assert all(h0_component(F, n, K).is_zero() for n in range(3) for K in (1, 2, 3))
    M, N = GradedModule.free(Ax), GradedModule.free(Axy)
    X = quotient_family(M, N, GradedMap(M, N, [["1"]]), WINDOW)
    for n in range(0, 4):
        h = h0_component(X, n, 4)
        assert h.is_zero() and h.certified


def test_h0_certification_flag():
    Q = from_graded(GradedModule(Ax, [0], [3], [["x^3"]]), WINDOW)
    # x^2 kills X_1 but x does not: the kernel still grows between K = 1 and K = 2
    assert not h0_component(Q, 1, K=2).certified
    assert h0_component(Q, 1, K=3).certified


# -- corpus-wide family invariants (short window) -------------------------------


@pytest.fixture(scope="module")
def corpus_families():
    return {name: load_corpus(name).build_family(WINDOW) for name in corpus_names()}


def test_corpus_mult_maps_commute(corpus_families):
    for name, X in corpus_families.items():
        for n in range(0, WINDOW - 1):
            for v in range(X.nvars):
                for w in range(v + 1, X.nvars):
                    a = X.mult(n + 1, w) @ X.mult(n, v)
                    b = X.mult(n + 1, v) @ X.mult(n, w)
                    assert a == b, (name, n, v, w)


def test_corpus_quotient_exactness():
    for name in corpus_names():
        p = load_corpus(name)
        if not p.is_quotient:
            continue
        M, N = p.modules["M"], p.modules["N"]
        X = p.build_family(WINDOW)
        for n in range(0, WINDOW + 1):
            lm, ln, lx = length(M.component(n)), length(N.component(n)), length(X.component(n))
            if max(lm, ln, lx) != float("inf"):
                assert ln == lm + lx, (name, n)


def test_fg_corpus_modules_are_quasi_finite(corpus_families):
    for name, X in corpus_families.items():
        if X.provenance is not Provenance.FG:
            continue
        tail = [h0_component(X, n, 3) for n in range(WINDOW - 4, WINDOW - 3)]
        assert all(h.is_zero() and h.certified for h in tail), name
