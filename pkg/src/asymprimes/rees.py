"""Filtration oracle for quotient families N/M.

After normalising M ⊆ N so that both are generated in degree 0, the
component N_{j-1}/M_{j-1} is filtered by

    T_i = R_i N_{j-1-i} + S_{j-i} M_{i-1},   i = 0..j,

with T_0 = N_{j-1} and T_j = M_{j-1} (M_{-1} = N_{-1} = 0).  The successive
quotients L*_{ij} = T_i / T_{i+1} are computed directly inside N_{j-1}; their
lengths must add up to the length of N_{j-1}/M_{j-1} and their associated
primes must cover those of the quotient.  None of this goes through the
degreewise-family machinery used by the analyser, which is what makes it a
useful cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .fpmod import (
    AssSet,
    ContainmentError,
    FPMap,
    FPModule,
    ass,
    cokernel,
    contains,
    induced_map,
    length,
    submodule,
    subquotient,
)
from .graded import GradedMap, GradedModule, GradedRing, truncate_and_shift, truncate_map
from .matrix import Matrix, smith
from .family import from_graded


class NormalizationError(ValueError):
    pass


class OracleError(AssertionError):
    """A check that holds by theorem failed: an implementation bug."""


def _span_basis(Nd: FPModule, cols: list[list]) -> Matrix:
    """A small generating set for the span of ``cols`` in the diagonal module Nd."""
    ring = Nd.ring
    if not cols:
        return Matrix.zeros(ring, Nd.ngens, 0)
    diag = [Nd.relations[k, k] if k < Nd.relations.ncols else ring.zero for k in range(Nd.ngens)]
    red = []
    seen = set()
    for c in cols:
        c = [x % d if d else x for x, d in zip(c, diag)]
        key = tuple(x.c for x in c)
        if any(c) and key not in seen:
            seen.add(key)
            red.append(c)
    if not red:
        return Matrix.zeros(ring, Nd.ngens, 0)
    T = Matrix.from_columns(ring, Nd.ngens, red)
    if T.ncols <= Nd.ngens:
        return T
    sf = smith(T, left_inv=True)
    basis = []
    for k in range(sf.rank):
        col = [x * sf.diag[k] for x in sf.U_inv.column(k)]
        basis.append([x % d if d else x for x, d in zip(col, diag)])
    return Matrix.from_columns(ring, Nd.ngens, basis)


class NormalizedPair:
    """M' ⊆ N' (both generated in degree 0) with the shift r used to get there."""

    def __init__(self, r: int, M: GradedModule, N: GradedModule, iota: GradedMap, top: int, original=None):
        self.r = r
        self.M = M
        self.N = N
        self.iota = iota
        self.top = top  # last degree of N' in the window
        self.original = original
        self.R = M.ring
        self.S = N.ring
        self.Mf = from_graded(M, top)
        self.Nf = from_graded(N, top)  # multiplied by all S-variables
        self.r_vars = [self.S.var_index(v) for v in self.R.variables]
        self._iota: dict[int, FPMap] = {}
        self._B: dict = {}
        self._C: dict = {}

    def iota_component(self, n: int) -> FPMap:
        """M'_n -> N'_n between the pruned components."""
        if n not in self._iota:
            raw = self.iota.component(n, check=False)
            _, _, back = self.M.component(n).pruned()
            _, to, _ = self.N.component(n).pruned()
            self._iota[n] = FPMap(back.source, to.target, to.matrix @ raw.matrix @ back.matrix, check=False)
        return self._iota[n]

    def _step(self, prev: Matrix, d: int, variables) -> Matrix:
        """Span of x * prev for x among ``variables``; prev lives in N'_{d-1}."""
        Nd = self.Nf.component(d)
        cols = []
        for v in variables:
            img = self.Nf.mult(d - 1, v).matrix @ prev
            cols.extend(img.columns())
        return _span_basis(Nd, cols)

    def R_times_N(self, i: int, d: int) -> Matrix:
        """R_i N_{d-i} inside N'_d (columns)."""
        key = (i, d)
        if key not in self._B:
            Nd = self.Nf.component(d)
            if d - i < 0:
                out = Matrix.zeros(self.N.base, Nd.ngens, 0)
            elif i == 0:
                out = Matrix.identity(self.N.base, Nd.ngens)
            else:
                out = self._step(self.R_times_N(i - 1, d - 1), d, self.r_vars)
            self._B[key] = out
        return self._B[key]

    def S_times_M(self, k: int, d: int) -> Matrix:
        """S_k M_{d-k} inside N'_d (columns)."""
        key = (k, d)
        if key not in self._C:
            Nd = self.Nf.component(d)
            if d - k < 0:
                out = Matrix.zeros(self.N.base, Nd.ngens, 0)
            elif k == 0:
                out = _span_basis(Nd, self.iota_component(d).matrix.columns())
            else:
                out = self._step(self.S_times_M(k - 1, d - 1), d, range(self.S.nvars))
            self._C[key] = out
        return self._C[key]

    def T(self, i: int, j: int) -> Matrix:
        """R_i N_{j-1-i} + S_{j-i} M_{i-1} inside N'_{j-1}."""
        d = j - 1
        a, b = self.R_times_N(i, d), self.S_times_M(j - i, d)
        return _span_basis(self.Nf.component(d), a.columns() + b.columns())

    def quotient(self, n: int) -> FPModule:
        """N'_n / M'_n."""
        return cokernel(self.iota_component(n))[0]


def _generated_in_degree_zero(G: GradedModule, top: int) -> int | None:
    """First degree n <= top where G_n is not R_1 * G_{n-1}, or None."""
    F = from_graded(G, top)
    for n in range(0, top):
        maps = F.mult_maps(n)
        tgt = F.component(n + 1)
        if not maps:
            if not tgt.is_zero():
                return n + 1
            continue
        mat = maps[0].matrix.hstack(*[m.matrix for m in maps[1:]])
        src = FPModule.free(G.base, mat.ncols)
        if not FPMap(src, tgt, mat, check=False).is_surjective():
            return n + 1
    return None


def normalize(M: GradedModule, N: GradedModule, iota: GradedMap, window: int) -> NormalizedPair:
    """Smallest shift r < window after which M and N are both generated in degree 0.

    The shift must leave at least one degree above 0 in the window, otherwise
    generation in degree 0 would hold vacuously.
    """
    start = min(0, M.lower_bound, N.lower_bound)
    failures = []
    for r in range(start, window):
        top = window - r
        Mt = truncate_and_shift(M, r)
        Nt = truncate_and_shift(N, r)
        badM = _generated_in_degree_zero(Mt, top)
        badN = _generated_in_degree_zero(Nt, top)
        if badM is None and badN is None:
            it = truncate_map(iota, r, Mt, Nt)
            return NormalizedPair(r, Mt, Nt, it, top, (M, N, iota))
        failures.append((r, badM, badN))
    diag = "; ".join(f"r={r}: M fails at {a}, N fails at {b}" for r, a, b in failures[-3:])
    raise NormalizationError(f"no normalizing shift within window (last tries: {diag})")


def lstar_component(P: NormalizedPair, i: int, j: int) -> FPModule:
    """L*_{ij} = T_i / T_{i+1} as a module (0 <= i <= j - 1)."""
    if not (1 <= j <= P.top + 1) or not (0 <= i <= j - 1):
        raise IndexError(f"(i, j) = ({i}, {j}) outside 0 <= i < j <= {P.top + 1}")
    Nd = P.Nf.component(j - 1)
    try:
        return subquotient(Nd, P.T(i, j), P.T(i + 1, j))
    except ContainmentError as exc:
        raise OracleError(f"T_{i + 1} not inside T_{i} for j = {j}: {exc}") from None


@dataclass
class FiltrationStep:
    i: int
    submodule: str  # normal form of T_i
    subquotient: str  # T_i / T_{i+1}
    matches_lstar: bool


@dataclass
class FiltrationCheck:
    j: int
    steps: list[FiltrationStep]
    ok: bool
    failure: str = ""


def filtration_check(P: NormalizedPair, j: int) -> FiltrationCheck:
    """Verify M_{j-1} = T_j ⊆ ... ⊆ T_0 = N_{j-1} and compare the steps with L*."""
    if not 1 <= j <= P.top + 1:
        raise IndexError(f"j = {j} outside [1, {P.top + 1}]")
    Nd = P.Nf.component(j - 1)
    subs = [submodule(Nd, P.T(i, j)) for i in range(j + 1)]
    # end points of the chain
    if not contains(subs[0][1], Matrix.identity(Nd.ring, Nd.ngens)):
        return FiltrationCheck(j, [], False, "T_0 is not all of N_{j-1}")
    Mimg = P.iota_component(j - 1).matrix
    if not (contains(subs[j][1], Mimg) and contains(FPMap(FPModule.free(Nd.ring, Mimg.ncols), Nd, Mimg, check=False), subs[j][1].matrix)):
        return FiltrationCheck(j, [], False, "T_j differs from M_{j-1}")
    steps = []
    ok = True
    for i in range(j):
        (Ti, inc_i), (Tn, inc_n) = subs[i], subs[i + 1]
        try:
            step = induced_map(FPMap.identity(Nd), inc_n, inc_i)
        except ContainmentError:
            return FiltrationCheck(j, steps, False, f"T_{i + 1} not contained in T_{i}")
        q = cokernel(step)[0]
        same = q.is_isomorphic(lstar_component(P, i, j))
        ok &= same
        steps.append(FiltrationStep(i, str(Ti), str(q), same))
    return FiltrationCheck(j, steps, ok)


@dataclass
class AmaoRow:
    j: int
    quotient_length: object
    lstar_lengths: list
    lstar_sum: object
    identity: bool | None  # None when the quotient has infinite length
    quotient_ass: AssSet
    lstar_ass: AssSet
    ass_contained: bool


@dataclass
class AmaoReport:
    rows: list[AmaoRow]
    ass_union: AssSet
    fit_degree: int | None
    degree_bound: int
    degree_ok: bool | None
    shift: int

    @property
    def ok(self) -> bool:
        return (
            all(r.identity is not False and r.ass_contained for r in self.rows)
            and self.degree_ok is not False
        )


def degree_bound(P: NormalizedPair) -> int:
    """dim S - 1 with dim S = number of S-variables + dim A."""
    return P.S.dim - 1


def amao_crosscheck(P: NormalizedPair, j_range: Sequence[int], fit_degree: int | None = None) -> AmaoReport:
    rows = []
    union = AssSet()
    for j in j_range:
        Q = P.quotient(j - 1)
        lq = length(Q)
        parts = [lstar_component(P, i, j) for i in range(j)]
        lens = [length(L) for L in parts]
        total = sum(lens) if all(x != math.inf for x in lens) else math.inf
        ident = None if lq == math.inf else (total == lq)
        qa = ass(Q)
        la = AssSet().union(*[ass(L) for L in parts]) if parts else AssSet()
        la = AssSet(la)
        union = AssSet(union | qa)
        rows.append(AmaoRow(j, lq, lens, total, ident, qa, la, qa <= la))
    bound = degree_bound(P)
    ok = None if fit_degree is None else fit_degree <= bound
    return AmaoReport(rows, union, fit_degree, bound, ok, P.r)


@dataclass
class TrivialExtensionView:
    """Components R~_n = (R_n, M_{n-1}) of R ⋉ M[-1]."""

    R: GradedRing
    M: GradedModule
    window: int
    surjective: list[bool] = field(default_factory=list)  # R~_1 R~_n -> R~_{n+1}, n = 0..window-1

    @property
    def standard_graded(self) -> bool:
        return all(self.surjective)

    def component(self, n: int) -> tuple[FPModule, FPModule]:
        Rf = GradedModule.free(self.R)
        return Rf.component(n), self.M.component(n - 1)

    def multiply(self, a, b):
        """(r, m)(r', m') = (r r', r m' + r' m) on coordinate vectors.

        ``a`` and ``b`` are (degree, r-vector, m-vector) in the monomial bases
        of R_n and M_{n-1}; the product is returned in the same form.
        """
        n, r, m = a
        n2, r2, m2 = b
        base = self.R.base
        mons, mons2 = self.R.monomials(n), self.R.monomials(n2)
        out_mons = self.R.monomials(n + n2)
        idx = {mu: k for k, mu in enumerate(out_mons)}
        rr = [base.zero] * len(out_mons)
        for c1, m1 in zip(r, mons):
            for c2, mm in zip(r2, mons2):
                k = idx[tuple(x + y for x, y in zip(m1, mm))]
                rr[k] = rr[k] + c1 * c2
        size = self.M.component(n + n2 - 1).ngens
        mm_out = [base.zero] * size
        for coeffs, mon_list, vec, deg in ((r, mons, m2, n2 - 1), (r2, mons2, m, n - 1)):
            if not vec:
                continue
            for c, mu in zip(coeffs, mon_list):
                if c:
                    img = self.M.monomial_matrix(deg, mu).apply(vec)
                    mm_out = [x + c * y for x, y in zip(mm_out, img)]
        return (n + n2, rr, mm_out)


def trivial_extension_view(R: GradedRing, M: GradedModule, window: int) -> TrivialExtensionView:
    """Build R ⋉ M[-1] degreewise and check R~_1 R~_n = R~_{n+1} for n < window."""
    if M.ring != R:
        raise ValueError("M must be a module over R")
    view = TrivialExtensionView(R, M, window)
    Rf = GradedModule.free(R)
    base = R.base
    for n in range(window):
        # ring part: R_1 R_n -> R_{n+1}
        cols = []
        for v in range(R.nvars):
            cols.extend(Rf.monomial_matrix(n, R.unit_monomial(v)).columns())
        Rn1 = Rf.component(n + 1)
        ok = _spans(Rn1, cols)
        # module part: R_1 M_{n-1} + M_0 R_n -> M_n
        Mn = M.component(n)
        cols = []
        if n >= 1:
            for v in range(R.nvars):
                cols.extend(M.monomial_matrix(n - 1, R.unit_monomial(v)).columns())
        for mu in R.monomials(n):
            cols.extend(M.monomial_matrix(0, mu).columns())
        ok = ok and _spans(Mn, cols)
        view.surjective.append(ok)
    return view


def _spans(X: FPModule, cols: list[list]) -> bool:
    if X.ngens == 0:
        return True
    mat = Matrix.from_columns(X.ring, X.ngens, cols)
    return FPMap(FPModule.free(X.ring, mat.ncols), X, mat, check=False).is_surjective()
