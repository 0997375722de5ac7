"""Degreewise families n ↦ X_n of A-modules with multiplication maps.

A family only knows a finite window of degrees.  Components are produced on
demand and memoised; every constructor here hands out pruned (diagonal)
components so later Smith computations stay small.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Sequence

from .base_ring import BaseRing, RingElem
from .fpmod import (
    ContainmentError,
    FPMap,
    FPModule,
    cokernel,
    cokernel_section,
    contains,
    direct_sum_maps,
    image,
    kernel,
    subquotient,
)
from .graded import GradedMap, GradedModule, GradedRing, Monomial, RingInclusion
from .matrix import Matrix, block_diag


class Provenance(str, enum.Enum):
    FG = "fg"  # class 0
    QUOTIENT = "quotient"  # class 1
    EXTENSION = "extension"  # class 2
    FUNCTOR_IMAGE = "functor_image"
    DERIVED = "derived"


class WindowError(IndexError):
    """A degree outside the constructed window was requested."""


class FamilyError(ValueError):
    """Invalid constructor input; ``degree`` is the witness, if any."""

    def __init__(self, msg: str, degree: int | None = None):
        super().__init__(msg)
        self.degree = degree


class DegreewiseFamily:
    """X_n for lower_bound <= n <= window_end, zero below lower_bound."""

    def __init__(
        self,
        base: BaseRing,
        variables: Sequence[str],
        lower_bound: int,
        window_end: int,
        component_fn: Callable[[int], FPModule],
        mult_fn: Callable[[int], list[FPMap]],
        provenance: Provenance = Provenance.DERIVED,
        label: str = "",
    ):
        self.base = base
        self.variables = tuple(variables)
        self.lower_bound = lower_bound
        self.window_end = window_end
        self.provenance = provenance
        self.label = label
        self._component_fn = component_fn
        self._mult_fn = mult_fn
        # single-writer memo: values are deterministic, a racing write stores an equal value
        self._components: dict[int, FPModule] = {}
        self._mults: dict[int, list[FPMap]] = {}
        self._zero = FPModule.zero(base)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def _check(self, n: int):
        if n > self.window_end:
            raise WindowError(f"degree {n} is beyond the window end {self.window_end}")

    def component(self, n: int) -> FPModule:
        if n < self.lower_bound:
            return self._zero
        self._check(n)
        X = self._components.get(n)
        if X is None:
            X = self._components[n] = self._component_fn(n)
        return X

    def mult_maps(self, n: int) -> list[FPMap]:
        """One map X_n -> X_{n+1} per variable."""
        self._check(n + 1)
        if n < self.lower_bound:
            z = FPMap.zero(self.component(n), self.component(n + 1))
            return [z] * self.nvars
        maps = self._mults.get(n)
        if maps is None:
            maps = self._mults[n] = self._mult_fn(n)
        return maps

    def mult(self, n: int, v) -> FPMap:
        if isinstance(v, str):
            v = self.variables.index(v)
        return self.mult_maps(n)[v]

    def joint_mult(self, n: int) -> FPMap:
        """X_n -> X_{n+1}^s, z ↦ (x_1 z, ..., x_s z)."""
        maps = self.mult_maps(n)
        src, tgt = self.component(n), self.component(n + 1)
        T = FPModule(self.base, tgt.ngens * len(maps), block_diag(self.base, [tgt.relations] * len(maps)))
        if not maps:
            return FPMap.zero(src, T)
        mat = maps[0].matrix.vstack(*[m.matrix for m in maps[1:]])
        return FPMap(src, T, mat, check=False)

    def monomial_map(self, n: int, mono: Monomial) -> FPMap:
        """Multiplication by a monomial in the family's variables, X_n -> X_{n+deg}."""
        f = FPMap.identity(self.component(n))
        d = n
        for v, e in enumerate(mono):
            for _ in range(e):
                f = self.mult(d, v) @ f
                d += 1
        return f

    def degrees(self, lo: int, hi: int) -> range:
        if lo > hi:
            raise WindowError(f"empty degree range [{lo}, {hi}]")
        self._check(hi)
        return range(lo, hi + 1)

    def __repr__(self):
        return f"DegreewiseFamily({self.label or self.provenance.value}, vars={self.variables}, [{self.lower_bound}, {self.window_end}])"


def _conjugate(f: FPMap, to: FPMap, back: FPMap) -> FPMap:
    """to ∘ f ∘ back, for a map between raw modules and pruned replacements."""
    return FPMap(back.source, to.target, to.matrix @ f.matrix @ back.matrix, check=False)


def _mult_indices(G: GradedModule, over: GradedRing | None) -> tuple[tuple[str, ...], list[int]]:
    if over is None:
        over = G.ring
    RingInclusion(over, G.ring)
    return over.variables, [G.ring.var_index(v) for v in over.variables]


def from_graded(G: GradedModule, window_end: int, over: GradedRing | None = None, label: str = "") -> DegreewiseFamily:
    """The family of components of a graded module, multiplied by the variables of ``over``."""
    names, idx = _mult_indices(G, over)
    isos: dict[int, tuple] = {}

    def pruned(n):
        if n not in isos:
            isos[n] = G.component(n).pruned()
        return isos[n]

    def comp(n):
        return pruned(n)[0]

    def mults(n):
        _, _, back = pruned(n)
        _, to, _ = pruned(n + 1)
        return [_conjugate(G.mult_map(n, v), to, back) for v in idx]

    prov = Provenance.FG if over is None or over == G.ring else Provenance.DERIVED
    return DegreewiseFamily(G.base, names, G.lower_bound, window_end, comp, mults, prov, label)


class _Quotient:
    """X_n = coker(j_n : D_n -> Y_n) with mult maps induced from Y."""

    def __init__(self, j: Callable[[int], FPMap], ymult: Callable[[int], list[FPMap]]):
        self.j = j
        self.ymult = ymult
        self.cache: dict[int, tuple] = {}

    def coker(self, n):
        if n not in self.cache:
            self.cache[n] = cokernel(self.j(n))
        return self.cache[n]

    def comp(self, n):
        return self.coker(n)[0]

    def mults(self, n):
        Q, _ = self.coker(n)
        _, proj = self.coker(n + 1)
        sec = cokernel_section(Q)
        return [FPMap(Q, proj.target, proj.matrix @ m.matrix @ sec, check=False) for m in self.ymult(n)]


def quotient_family(
    M: GradedModule,
    N: GradedModule,
    iota: GradedMap,
    degree_bound: int,
    label: str = "",
    check: bool = True,
) -> DegreewiseFamily:
    """N/M for graded M over R included in graded N over S, as a family over R."""
    if iota.source is not M or iota.target is not N:
        raise FamilyError("inclusion map does not go from M to N")
    names, idx = _mult_indices(N, M.ring)
    lower = min(M.lower_bound, N.lower_bound)
    if check:
        for n in range(lower, degree_bound + 1):
            f = iota.component(n)
            if not kernel(f)[0].is_zero():
                raise FamilyError(f"not an inclusion at degree {n}", n)
    q = _Quotient(lambda n: iota.component(n, check=False), lambda n: [N.mult_map(n, v) for v in idx])
    return DegreewiseFamily(N.base, names, lower, degree_bound, q.comp, q.mults, Provenance.QUOTIENT, label)


def submodule_maps(X: DegreewiseFamily, D: GradedModule, images: Sequence[Sequence]) -> Callable[[int], FPMap]:
    """Degreewise maps D_n -> X_n sending generator k of D to ``images[k]`` in X_{a_k}.

    Generators of D are sent to elements in the family; monomial multiples
    follow the family's multiplication maps.
    """
    if len(images) != D.ngens:
        raise FamilyError(f"{len(images)} generator images for {D.ngens} generators")
    if D.ring.variables != X.variables:
        raise FamilyError("D must be a module over the family's ring")
    imgs = [[X.base(c) for c in v] for v in images]
    for k, (a, v) in enumerate(zip(D.twists, imgs)):
        if len(v) != X.component(a).ngens:
            raise FamilyError(f"image of generator {k} has the wrong size for degree {a}", a)

    def j(n):
        Dn, Xn = D.component(n), X.component(n)
        cols = [X.monomial_map(D.twists[k], mu).apply(imgs[k]) for k, mu in D.basis(n)]
        mat = Matrix.from_columns(X.base, Xn.ngens, cols)
        try:
            return FPMap(Dn, Xn, mat)
        except ValueError:
            raise FamilyError(f"generator images do not respect the relations of D in degree {n}", n) from None

    return j


def quotient_by_fg(
    X: DegreewiseFamily,
    D: GradedModule,
    j,
    label: str = "",
    check: bool = True,
) -> DegreewiseFamily:
    """X/D for a finitely generated graded submodule D of X.

    ``j`` is either a callable n ↦ FPMap D_n -> X_n or a list of generator
    images (see :func:`submodule_maps`).
    """
    if not callable(j):
        j = submodule_maps(X, D, j)
    if D.ring.variables != X.variables:
        raise FamilyError("D must be a module over the family's ring")
    lower = min(X.lower_bound, D.lower_bound)
    if check:
        for n in range(lower, X.window_end + 1):
            jn = j(n)
            if not kernel(jn)[0].is_zero():
                raise FamilyError(f"D -> X is not injective at degree {n}", n)
            if n == X.window_end:
                break
            jn1 = j(n + 1)
            for v in range(X.nvars):
                lhs = jn1 @ D.mult_map(n, v)
                rhs = X.mult(n, v) @ jn
                if not (lhs - FPMap(lhs.source, lhs.target, rhs.matrix, check=False)).is_zero():
                    raise FamilyError(
                        f"D -> X does not commute with multiplication by {X.variables[v]} at degree {n}", n
                    )
    q = _Quotient(j, X.mult_maps)
    return DegreewiseFamily(X.base, X.variables, lower, X.window_end, q.comp, q.mults, Provenance.DERIVED, label)


@dataclass
class ExtensionData:
    """Witness for 0 -> X -> Y -> D -> 0, degree by degree."""

    middle: Callable[[int], FPModule]
    incl: Callable[[int], FPMap]  # X_n -> Y_n
    proj: Callable[[int], FPMap]  # Y_n -> D_n
    mults: Callable[[int], list[FPMap]]  # Y_n -> Y_{n+1}


def _same_map(f: FPMap, g: FPMap) -> bool:
    return (f - FPMap(f.source, f.target, g.matrix, check=False)).is_zero()


def extend_family(
    X: DegreewiseFamily,
    D: GradedModule | DegreewiseFamily,
    data: ExtensionData,
    label: str = "",
    check: bool = True,
) -> DegreewiseFamily:
    """The class-2 family Y of an extension 0 -> X -> Y -> D -> 0."""
    if isinstance(D, GradedModule):
        D = from_graded(D, X.window_end)
    if D.variables != X.variables:
        raise FamilyError("X and D must be families over the same ring")
    lower = min(X.lower_bound, D.lower_bound)
    if check:
        for n in range(lower, X.window_end + 1):
            _check_extension_degree(X, D, data, n)
    return DegreewiseFamily(X.base, X.variables, lower, X.window_end, data.middle, data.mults, Provenance.EXTENSION, label)


def _check_extension_degree(X, D, data: ExtensionData, n: int):
    Y = data.middle(n)
    i, p = data.incl(n), data.proj(n)
    if i.source.ngens != X.component(n).ngens or i.target.ngens != Y.ngens:
        raise FamilyError(f"inclusion has the wrong shape at degree {n}", n)
    if p.target.ngens != D.component(n).ngens or p.source.ngens != Y.ngens:
        raise FamilyError(f"projection has the wrong shape at degree {n}", n)
    if not (p @ i).is_zero():
        raise FamilyError(f"projection ∘ inclusion is not zero at degree {n}", n)
    if not kernel(i)[0].is_zero():
        raise FamilyError(f"X_{n} -> Y_{n} is not injective", n)
    if not p.is_surjective():
        raise FamilyError(f"Y_{n} -> D_{n} is not surjective", n)
    _, kin = kernel(p)
    _, iin = image(i)
    if not contains(iin, kin.matrix):
        raise FamilyError(f"sequence is not exact in the middle at degree {n}", n)
    if n >= X.window_end:
        return
    ym = data.mults(n)
    i1, p1 = data.incl(n + 1), data.proj(n + 1)
    for v in range(X.nvars):
        if not _same_map(i1 @ X.mult(n, v), ym[v] @ i):
            raise FamilyError(f"inclusion does not commute with {X.variables[v]} at degree {n}", n)
        if not _same_map(p1 @ ym[v], D.mult(n, v) @ p):
            raise FamilyError(f"projection does not commute with {X.variables[v]} at degree {n}", n)


def split_extension(X: DegreewiseFamily, D: GradedModule | DegreewiseFamily, label: str = "") -> DegreewiseFamily:
    """Y = X ⊕ D with the obvious extension data."""
    if isinstance(D, GradedModule):
        D = from_graded(D, X.window_end)
    sums: dict[int, tuple] = {}

    def parts(n):
        if n not in sums:
            sums[n] = direct_sum_maps(X.component(n), D.component(n))
        return sums[n]

    def mults(n):
        S0, _, (px, pd) = parts(n)
        S1, (ix, id_), _ = parts(n + 1)
        return [ix @ X.mult(n, v) @ px + id_ @ D.mult(n, v) @ pd for v in range(X.nvars)]

    data = ExtensionData(
        middle=lambda n: parts(n)[0],
        incl=lambda n: parts(n)[1][0],
        proj=lambda n: parts(n)[2][1],
        mults=mults,
    )
    return extend_family(X, D, data, label, check=False)


def pushout(f: FPMap, g: FPMap) -> tuple[FPModule, FPMap, FPMap]:
    """Pushout of f: Y -> Z and g: Y -> V; returns (C, Z -> C, V -> C)."""
    Z, V = f.target, g.target
    S, (iz, iv), _ = direct_sum_maps(Z, V)
    rel = iz @ f - iv @ g
    C, q = cokernel(rel)
    return C, q @ iz, q @ iv


def pushout_family(
    Y: DegreewiseFamily,
    Z: DegreewiseFamily,
    V: DegreewiseFamily,
    i: Callable[[int], FPMap],
    pi: Callable[[int], FPMap],
    label: str = "",
) -> DegreewiseFamily:
    """Degreewise pushout of i: Y -> Z and pi: Y -> V, with induced multiplication."""
    cache: dict[int, tuple] = {}

    def po(n):
        if n not in cache:
            C, gz, gv = pushout(i(n), pi(n))
            cache[n] = (C, gz, gv)
        return cache[n]

    def mults(n):
        C, gz, gv = po(n)
        _, gz1, gv1 = po(n + 1)
        sec = cokernel_section(C)
        # C_n is a quotient of Z_n ⊕ V_n; act on both summands and push forward
        out = []
        for v in range(Y.nvars):
            amb = (gz1 @ Z.mult(n, v)).matrix.hstack((gv1 @ V.mult(n, v)).matrix)
            out.append(FPMap(C, gz1.target, amb @ sec, check=False))
        return out

    lower = min(Y.lower_bound, Z.lower_bound, V.lower_bound)
    return DegreewiseFamily(Y.base, Y.variables, lower, Y.window_end, lambda n: po(n)[0], mults, Provenance.DERIVED, label)


# ---------------------------------------------------------------------------
# torsion with respect to the irrelevant ideal
# ---------------------------------------------------------------------------


@dataclass
class H0Component:
    module: FPModule
    inclusion: FPMap
    certified: bool
    K: int

    def is_zero(self) -> bool:
        return self.module.is_zero()


def _annihilated_by_power(X: DegreewiseFamily, n: int, k: int) -> FPMap:
    """Inclusion of {z in X_n : R_+^k z = 0} (k = 0 gives the zero submodule)."""
    src = X.component(n)
    if k == 0:
        return kernel(FPMap.identity(src))[1]
    # images of X_n's generators under every degree-k monomial, built one variable at a time
    level = {(0,) * X.nvars: Matrix.identity(X.base, src.ngens)}
    for d in range(k):
        nxt = {}
        for mono, mat in level.items():
            for v in range(X.nvars):
                m2 = tuple(e + (1 if w == v else 0) for w, e in enumerate(mono))
                if m2 not in nxt:
                    nxt[m2] = X.mult(n + d, v).matrix @ mat
        level = nxt
    tgt = X.component(n + k)
    mats = [level[m] for m in sorted(level, reverse=True)]
    T = FPModule(X.base, tgt.ngens * len(mats), block_diag(X.base, [tgt.relations] * len(mats)))
    f = FPMap(src, T, mats[0].vstack(*mats[1:]), check=False)
    return kernel(f)[1]


def h0_component(X: DegreewiseFamily, n: int, K: int = 4) -> H0Component:
    """Elements of X_n killed by R_+^K, certified when the answer already holds at K - 1."""
    if K < 1:
        raise ValueError("saturation bound K must be >= 1")
    incl = _annihilated_by_power(X, n, K)
    prev = _annihilated_by_power(X, n, K - 1)
    try:
        gap = subquotient(X.component(n), incl.matrix, prev.matrix)
        certified = gap.is_zero()
    except ContainmentError:  # pragma: no cover - kernels only grow with k
        certified = False
    return H0Component(incl.source, incl, certified, K)
