"""Finitely presented A-modules and A-linear maps.

A module is the cokernel of its relation matrix ``A^c -> A^g`` (relations
are columns).  Everything here reduces to Smith normal form over the
principal ideal domain A, so isomorphism testing is complete: two modules
are isomorphic exactly when their free ranks and invariant factors agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .base_ring import BaseRing, Ideal, PrimeIdeal, RingElem, factor, normalize_ideal
from .matrix import Matrix, SmithForm, block_diag, kron, smith, smith_normal_form

__all__ = [
    "AssSet",
    "ContainmentError",
    "FPMap",
    "FPModule",
    "NormalForm",
    "ass",
    "cokernel",
    "direct_sum",
    "ext",
    "grade",
    "grade_ext_scan",
    "hom",
    "hom_map",
    "image",
    "induced_map",
    "kernel",
    "length",
    "smith_normal_form",
    "structure",
    "submodule",
    "subquotient",
    "tensor",
    "tensor_map",
    "tor",
]


class ContainmentError(ValueError):
    """A requested submodule is not contained where it must be."""


class AssSet(frozenset):
    """A finite set of primes of A, iterated and printed in canonical order."""

    def sorted(self) -> list[PrimeIdeal]:
        return sorted(super().__iter__(), key=PrimeIdeal.sort_key)

    def __str__(self):
        return "{" + ", ".join(str(p) for p in self.sorted()) + "}"

    def __repr__(self):
        return f"AssSet{self}"

    def __or__(self, other):
        return AssSet(frozenset.__or__(self, other))

    def __and__(self, other):
        return AssSet(frozenset.__and__(self, other))


@dataclass(frozen=True)
class NormalForm:
    """Free rank plus the nonunit invariant factors d_1 | d_2 | ... (coefficient tuples)."""

    free_rank: int
    invariants: tuple[tuple[int, ...], ...]

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.invariants


def _render_power(f: RingElem, e: int) -> str:
    s = str(f)
    if e == 1:
        return s
    if " + " in s or "*" in s:
        s = f"({s})"
    return f"{s}^{e}"


class FPModule:
    """coker(A^c -> A^g) given by a g x c relation matrix."""

    def __init__(self, ring: BaseRing, ngens: int, relations: Matrix | None = None):
        if relations is None:
            relations = Matrix.zeros(ring, ngens, 0)
        if relations.nrows != ngens:
            raise ValueError(f"relation matrix has {relations.nrows} rows for {ngens} generators")
        self.ring = ring
        self.ngens = ngens
        self.relations = relations
        self._sf: SmithForm | None = None
        self._pruned = None
        self._memo: dict = {}

    # -- constructors --------------------------------------------------------

    @classmethod
    def free(cls, ring: BaseRing, rank: int) -> "FPModule":
        return cls(ring, rank)

    @classmethod
    def zero(cls, ring: BaseRing) -> "FPModule":
        return cls(ring, 0)

    @classmethod
    def cyclic(cls, ring: BaseRing, d) -> "FPModule":
        """A/(d); ``d == 0`` gives A itself."""
        d = ring(d)
        if not d:
            return cls(ring, 1)
        return cls(ring, 1, Matrix(ring, [[d]], 1))

    @classmethod
    def from_invariants(cls, ring: BaseRing, free_rank: int, factors: Sequence) -> "FPModule":
        """A^free_rank plus A/(d) for each d in ``factors``, torsion first."""
        ds = [ring(d) for d in factors]
        g = len(ds) + free_rank
        return cls(ring, g, Matrix.diagonal(ring, g, ds))

    @classmethod
    def from_matrix(cls, ring: BaseRing, rows: Sequence[Sequence], ngens: int | None = None, nrels: int | None = None) -> "FPModule":
        if not rows:
            return cls(ring, ngens or 0, Matrix.zeros(ring, ngens or 0, nrels or 0))
        m = Matrix.parse(ring, rows)
        return cls(ring, m.nrows, m)

    @classmethod
    def parse(cls, ring: BaseRing, text: str) -> "FPModule":
        """Parse a normal-form string such as ``"A^2 ⊕ A/(u) ⊕ A/((1 + u)^2)"``."""
        text = text.strip()
        if text == "0":
            return cls.zero(ring)
        free = 0
        tors = []
        for part in text.split("⊕"):
            part = part.strip()
            if part == "A":
                free += 1
            elif part.startswith("A^"):
                free += int(part[2:])
            elif part.startswith("A/(") and part.endswith(")"):
                tors.append(_parse_power(ring, part[3:-1]))
            else:
                raise ValueError(f"cannot parse module summand {part!r}")
        return cls.from_invariants(ring, free, tors)

    # -- Smith data ------------------------------------------------------------

    @property
    def smith(self) -> SmithForm:
        # idempotent memo: a racing recomputation stores an identical value
        if self._sf is None:
            self._sf = smith(self.relations, left=True, left_inv=True)
        return self._sf

    @property
    def invariant_factors(self) -> tuple[RingElem, ...]:
        return tuple(d for d in self.smith.diag if not d.is_unit())

    @property
    def free_rank(self) -> int:
        return self.ngens - self.smith.rank

    def normal_form(self) -> NormalForm:
        return NormalForm(self.free_rank, tuple(d.c for d in self.invariant_factors))

    def is_isomorphic(self, other: "FPModule") -> bool:
        return self.normal_form() == other.normal_form()

    def is_zero(self) -> bool:
        return self.normal_form().is_zero()

    def structure(self) -> tuple[int, list[tuple[RingElem, int]]]:
        return structure(self)

    def ass(self) -> AssSet:
        return ass(self)

    def length(self):
        return length(self)

    def __str__(self):
        free, tors = structure(self)
        parts = [f"A/({_render_power(p, e)})" for p, e in tors]
        if free:
            parts.append("A" if free == 1 else f"A^{free}")
        return " ⊕ ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FPModule({self.ring}: {self})"

    # -- elements ----------------------------------------------------------------

    def _kept(self) -> list[int]:
        sf = self.smith
        tors = [i for i, d in enumerate(sf.diag) if not d.is_unit()]
        return tors + list(range(sf.rank, self.ngens))

    def reduce(self, v: Sequence[RingElem]) -> tuple[RingElem, ...]:
        """Canonical coordinates of the class of ``v`` (equal iff same element)."""
        sf = self.smith
        z = sf.U.apply(v)
        out = []
        for i in self._kept():
            if i < sf.rank:
                out.append(z[i] % sf.diag[i])
            else:
                out.append(z[i])
        return tuple(out)

    def is_zero_element(self, v: Sequence[RingElem]) -> bool:
        return not any(self.reduce(v))

    def pruned(self) -> tuple["FPModule", "FPMap", "FPMap"]:
        """An isomorphic diagonal presentation with the isomorphisms both ways."""
        if self._pruned is None:
            sf = self.smith
            kept = self._kept()
            tors = [sf.diag[i] for i in kept if i < sf.rank]
            P = FPModule(self.ring, len(kept), Matrix.diagonal(self.ring, len(kept), tors))
            P._pruned = (P, FPMap.identity(P), FPMap.identity(P))
            to = FPMap(self, P, sf.U.submatrix(rows=kept), check=False)
            back = FPMap(P, self, sf.U_inv.submatrix(cols=kept), check=False)
            self._pruned = (P, to, back)
        return self._pruned

    def is_diagonal(self) -> bool:
        return self._pruned is not None and self._pruned[0] is self


def _parse_power(ring: BaseRing, text: str) -> RingElem:
    text = text.strip()
    if text.startswith("(") and ")^" in text:
        base, exp = text[1:].rsplit(")^", 1)
        return ring(base) ** int(exp)
    return ring(text)


class FPMap:
    """An A-linear map given on generators (target.ngens x source.ngens)."""

    def __init__(self, source: FPModule, target: FPModule, matrix: Matrix, check: bool = True):
        if matrix.shape != (target.ngens, source.ngens):
            raise ValueError(f"map matrix {matrix.shape} does not fit {source.ngens} -> {target.ngens}")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            bad = self._ill_defined_relation()
            if bad is not None:
                raise ValueError(f"map is not well defined: relation column {bad} does not map to zero")

    def _ill_defined_relation(self):
        img = self.matrix @ self.source.relations
        for j in range(img.ncols):
            if not self.target.is_zero_element(img.column(j)):
                return j
        return None

    @classmethod
    def identity(cls, M: FPModule) -> "FPMap":
        return cls(M, M, Matrix.identity(M.ring, M.ngens), check=False)

    @classmethod
    def zero(cls, M: FPModule, N: FPModule) -> "FPMap":
        return cls(M, N, Matrix.zeros(M.ring, N.ngens, M.ngens), check=False)

    def __matmul__(self, other: "FPMap") -> "FPMap":
        """Composition ``self ∘ other``."""
        if other.target is not self.source and other.target.ngens != self.source.ngens:
            raise ValueError("composition of incompatible maps")
        return FPMap(other.source, self.target, self.matrix @ other.matrix, check=False)

    def __add__(self, other: "FPMap") -> "FPMap":
        return FPMap(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other: "FPMap") -> "FPMap":
        return FPMap(self.source, self.target, self.matrix - other.matrix, check=False)

    def __eq__(self, other):
        if not isinstance(other, FPMap):
            return NotImplemented
        if self.matrix.shape != other.matrix.shape:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return all(self.target.is_zero_element(c) for c in self.matrix.columns())

    def apply(self, v: Sequence[RingElem]) -> list[RingElem]:
        return self.matrix.apply(v)

    def is_injective(self) -> bool:
        return kernel(self)[0].is_zero()

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_zero()

    def __repr__(self):
        return f"FPMap({self.source} -> {self.target}, {self.matrix.shape})"


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


def structure(M: FPModule) -> tuple[int, list[tuple[RingElem, int]]]:
    """M ≅ A^free_rank ⊕ ⊕ A/(p^e), with (p, e) sorted canonically."""
    tors = []
    for d in M.invariant_factors:
        tors.extend(factor(d))
    tors.sort(key=lambda t: (t[0].sort_key(), t[1]))
    return M.free_rank, tors


def ass(M: FPModule) -> AssSet:
    free, tors = structure(M)
    primes = {PrimeIdeal(M.ring, p) for p, _ in tors}
    if free:
        primes.add(PrimeIdeal(M.ring, None))
    return AssSet(primes)


def length(M: FPModule):
    """Composition length; ``math.inf`` for infinite length over F_p[u]."""
    free, tors = structure(M)
    if M.ring.is_field:
        return free
    if free:
        return math.inf
    return sum(e for _, e in tors)


# ---------------------------------------------------------------------------
# kernels, images, quotients
# ---------------------------------------------------------------------------


def _prune_sub(S: FPModule, incl_matrix: Matrix, M: FPModule, prune: bool):
    incl = FPMap(S, M, incl_matrix, check=False)
    if not prune:
        return S, incl
    P, _, back = S.pruned()
    return P, incl @ back


def submodule(M: FPModule, gens: Matrix, prune: bool = True) -> tuple[FPModule, FPMap]:
    """The submodule of M generated by the columns of ``gens`` with its inclusion."""
    k = gens.ncols
    B = gens.hstack(M.relations)
    sf = smith(B, right=True)
    rels = [v[:k] for v in sf.kernel_basis()]
    rels = [r for r in rels if any(r)]
    S = FPModule(M.ring, k, Matrix.from_columns(M.ring, k, rels))
    return _prune_sub(S, gens, M, prune)


def kernel(f: FPMap, prune: bool = True) -> tuple[FPModule, FPMap]:
    memo = getattr(f, "_kernel", None)
    if memo is not None and prune:
        return memo
    M, N = f.source, f.target
    B = f.matrix.hstack(N.relations)
    sf = smith(B, right=True)
    gens = [v[: M.ngens] for v in sf.kernel_basis()]
    gens = [g for g in gens if any(g)]
    K = Matrix.from_columns(M.ring, M.ngens, gens)
    out = submodule(M, K, prune)
    if prune:
        f._kernel = out
    return out


def cokernel(f: FPMap, prune: bool = True) -> tuple[FPModule, FPMap]:
    N = f.target
    C = FPModule(N.ring, N.ngens, N.relations.hstack(f.matrix))
    proj = FPMap(N, C, Matrix.identity(N.ring, N.ngens), check=False)
    if not prune:
        return C, proj
    P, to, back = C.pruned()
    # C is private to this call, so P is too
    P._memo["section"] = back.matrix
    return P, FPMap(N, P, to.matrix, check=False)


def image(f: FPMap, prune: bool = True) -> tuple[FPModule, FPMap]:
    return submodule(f.target, f.matrix, prune)


def subquotient(M: FPModule, top: Matrix, bottom: Matrix, prune: bool = True) -> FPModule:
    """(span(top) + 0) / (span(bottom)) inside M; bottom must lie in span(top)."""
    k = top.ncols
    B = top.hstack(M.relations)
    sf = smith(B, left=True, right=True)
    rels = [v[:k] for v in sf.kernel_basis()]
    for j in range(bottom.ncols):
        x = sf.solve(bottom.column(j))
        if x is None:
            raise ContainmentError(f"bottom generator {j} is not in the top submodule")
        rels.append(x[:k])
    rels = [r for r in rels if any(r)]
    Q = FPModule(M.ring, k, Matrix.from_columns(M.ring, k, rels))
    return Q.pruned()[0] if prune else Q


class Lifter:
    """Solve ``incl(x) == v`` in the target of an inclusion-like map."""

    def __init__(self, incl: FPMap):
        self.incl = incl
        self.k = incl.source.ngens
        self._sf = smith(incl.matrix.hstack(incl.target.relations), left=True, right=True)

    def lift(self, v: Sequence[RingElem]) -> list[RingElem] | None:
        x = self._sf.solve(v)
        return None if x is None else x[: self.k]


def contains(incl: FPMap, vectors: Matrix) -> bool:
    """Whether every column of ``vectors`` lies in the image of ``incl``."""
    lf = Lifter(incl)
    return all(lf.lift(c) is not None for c in vectors.columns())


def induced_map(ambient: FPMap, src: FPMap, tgt: FPMap) -> FPMap:
    """The map S -> T with ``tgt ∘ h == ambient ∘ src`` for inclusions src: S -> X, tgt: T -> Y."""
    lf = Lifter(tgt)
    img = ambient.matrix @ src.matrix
    cols = []
    for j in range(img.ncols):
        x = lf.lift(img.column(j))
        if x is None:
            raise ContainmentError(f"image of generator {j} leaves the target submodule")
        cols.append(x)
    S, T = src.source, tgt.source
    return FPMap(S, T, Matrix.from_columns(S.ring, T.ngens, cols), check=False)


# ---------------------------------------------------------------------------
# sums, powers, hom and tensor
# ---------------------------------------------------------------------------


def direct_sum(*mods: FPModule) -> FPModule:
    ring = mods[0].ring
    return FPModule(ring, sum(m.ngens for m in mods), block_diag(ring, [m.relations for m in mods]))


def direct_sum_maps(*mods: FPModule) -> tuple[FPModule, list[FPMap], list[FPMap]]:
    """The direct sum with its canonical inclusions and projections."""
    S = direct_sum(*mods)
    ring = S.ring
    incs, projs = [], []
    off = 0
    for m in mods:
        inc = Matrix.zeros(ring, S.ngens, m.ngens)
        proj = Matrix.zeros(ring, m.ngens, S.ngens)
        for i in range(m.ngens):
            inc.rows[off + i][i] = ring.one
            proj.rows[i][off + i] = ring.one
        incs.append(FPMap(m, S, inc, check=False))
        projs.append(FPMap(S, m, proj, check=False))
        off += m.ngens
    return S, incs, projs


def power(M: FPModule, a: int) -> FPModule:
    """M^a, copy-major generator order."""
    return FPModule(M.ring, a * M.ngens, kron(Matrix.identity(M.ring, a), M.relations))


def kron_map(C: Matrix, g: FPMap) -> FPMap:
    """The map M^a -> N^b sending copy k to sum_k' C[k', k] g(copy k)."""
    return FPMap(power(g.source, C.ncols), power(g.target, C.nrows), kron(C, g.matrix), check=False)


def _power_kernel(C: Matrix, M: FPModule) -> tuple[FPModule, FPMap]:
    key = ("ker", _mkey(C))
    if key not in M._memo:
        f = kron_map(C, FPMap.identity(M))
        M._memo[key] = kernel(f)
    return M._memo[key]


def _power_cokernel(C: Matrix, M: FPModule) -> tuple[FPModule, FPMap]:
    key = ("coker", _mkey(C))
    if key not in M._memo:
        f = kron_map(C, FPMap.identity(M))
        M._memo[key] = cokernel(f)
    return M._memo[key]


def _mkey(C: Matrix):
    return (C.nrows, C.ncols, tuple(tuple(x.c for x in r) for r in C.rows))


def power_kernel(C: Matrix, M: FPModule) -> FPModule:
    """ker(C ⊗ M : M^a -> M^b)."""
    return _power_kernel(C, M)[0]


def power_cokernel(C: Matrix, M: FPModule) -> FPModule:
    """coker(C ⊗ M : M^a -> M^b)."""
    return _power_cokernel(C, M)[0]


def power_kernel_map(C: Matrix, g: FPMap) -> FPMap:
    """Functoriality of ``power_kernel(C, -)``."""
    a = C.ncols
    _, src = _power_kernel(C, g.source)
    _, tgt = _power_kernel(C, g.target)
    return induced_map(kron_map(Matrix.identity(g.source.ring, a), g), src, tgt)


def power_cokernel_map(C: Matrix, g: FPMap) -> FPMap:
    """Functoriality of ``power_cokernel(C, -)``."""
    b = C.nrows
    Qs, _ = _power_cokernel(C, g.source)
    _, pt = _power_cokernel(C, g.target)
    amb = kron_map(Matrix.identity(g.source.ring, b), g)
    return FPMap(Qs, pt.target, pt.matrix @ amb.matrix @ cokernel_section(Qs), check=False)


def cokernel_section(Q: FPModule) -> Matrix:
    """Generator lifts of a pruned cokernel back to the ambient generators."""
    return Q._memo["section"]


def hom_embedding(M: FPModule, N: FPModule) -> tuple[FPModule, FPMap]:
    """Hom(M, N) as a submodule of N^{g_M} (images of M's generators)."""
    return _power_kernel(M.relations.T, N)


def hom(M: FPModule, N: FPModule) -> FPModule:
    return hom_embedding(M, N)[0]


def hom_map(f: FPMap, g: FPMap) -> FPMap:
    """Hom(f, g): Hom(M, N) -> Hom(M2, N2) for f: M2 -> M, g: N -> N2, φ ↦ g∘φ∘f."""
    _, src = hom_embedding(f.target, g.source)
    _, tgt = hom_embedding(f.source, g.target)
    return induced_map(kron_map(f.matrix.T, g), src, tgt)


def tensor(M: FPModule, N: FPModule) -> FPModule:
    ring = M.ring
    rels = kron(M.relations, Matrix.identity(ring, N.ngens)).hstack(kron(Matrix.identity(ring, M.ngens), N.relations))
    return FPModule(ring, M.ngens * N.ngens, rels)


def tensor_map(f: FPMap, g: FPMap) -> FPMap:
    return FPMap(tensor(f.source, g.source), tensor(f.target, g.target), kron(f.matrix, g.matrix), check=False)


# ---------------------------------------------------------------------------
# Tor, Ext, grade
# ---------------------------------------------------------------------------


def resolution(U: FPModule) -> Matrix:
    """The injective matrix P with 0 -> A^c -> A^g -> U -> 0 (pruned Smith form)."""
    P = U.pruned()[0]
    return P.relations


def tor(i: int, U: FPModule, M: FPModule) -> FPModule:
    """Tor_i(U, M); zero for i >= 2 since A is hereditary."""
    P = resolution(U)
    if i == 0:
        return power_cokernel(P, M)
    if i == 1:
        return power_kernel(P, M)
    return FPModule.zero(M.ring)


def ext(i: int, U: FPModule, M: FPModule) -> FPModule:
    """Ext^i(U, M); zero for i >= 2 since A is hereditary."""
    P = resolution(U)
    if i == 0:
        return power_kernel(P.T, M)
    if i == 1:
        return power_cokernel(P.T, M)
    return FPModule.zero(M.ring)


def quotient_ring(J: Ideal) -> FPModule:
    """A/J as a cyclic module."""
    _, g = normalize_ideal(J)
    return FPModule.cyclic(J.ring, g)


def grade(J: Ideal, M: FPModule):
    """grade(J, M) in {0, 1, math.inf}; ``inf`` exactly when M = JM."""
    Q = quotient_ring(J)
    if tensor(M, Q).is_zero():
        return math.inf
    if not hom(Q, M).is_zero():
        return 0
    return 1


def grade_ext_scan(J: Ideal, M: FPModule):
    """grade(J, M) as the least i with Ext^i(A/J, M) != 0."""
    Q = quotient_ring(J)
    for i in (0, 1):
        if not ext(i, Q, M).is_zero():
            return i
    if not tensor(Q, M).is_zero():
        raise AssertionError("Ext^0 and Ext^1 vanish but M != JM")
    return math.inf
