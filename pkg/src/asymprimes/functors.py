"""Coherent functors on finitely generated A-modules.

A presentation functor is given by a map f: V -> U and sends M to
coker(Hom(U, M) -> Hom(V, M)).  The built-ins (Hom, tensor, Tor, Ext) are
computed directly in :mod:`asymprimes.fpmod`; all values are returned in
pruned form and every functor is also applied to maps, so families can be
pushed through degree by degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .family import DegreewiseFamily, Provenance
from .fpmod import (
    FPMap,
    FPModule,
    _mkey,
    cokernel,
    cokernel_section,
    ext,
    hom,
    hom_map,
    power_cokernel_map,
    power_kernel_map,
    resolution,
    tensor,
    tensor_map,
    tor,
)
from .matrix import Matrix

KINDS = ("presentation", "hom", "tensor", "tor", "ext")


@dataclass(frozen=True, eq=False)
class CoherentFunctor:
    kind: str
    U: FPModule | None = None
    i: int = 0
    f: FPMap | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown functor kind {self.kind!r}")
        if self.kind == "presentation":
            if self.f is None:
                raise ValueError("presentation functor needs its defining map")
        elif self.U is None:
            raise ValueError(f"{self.kind} functor needs a module")
        if self.kind in ("tor", "ext") and self.i < 0:
            raise ValueError("homological degree must be >= 0")

    @classmethod
    def presentation(cls, f: FPMap, name: str = "") -> "CoherentFunctor":
        return cls("presentation", f=f, name=name)

    @classmethod
    def hom_from(cls, U: FPModule) -> "CoherentFunctor":
        return cls("hom", U)

    @classmethod
    def tensor_with(cls, U: FPModule) -> "CoherentFunctor":
        return cls("tensor", U)

    @classmethod
    def tor(cls, i: int, U: FPModule) -> "CoherentFunctor":
        return cls("tor", U, i)

    @classmethod
    def ext(cls, i: int, U: FPModule) -> "CoherentFunctor":
        return cls("ext", U, i)

    def key(self):
        if self.kind == "presentation":
            f = self.f
            return ("presentation", _mkey(f.source.relations), _mkey(f.target.relations), _mkey(f.matrix))
        return (self.kind, self.i, self.U.ngens, _mkey(self.U.relations))

    def __str__(self):
        if self.name:
            return self.name
        if self.kind == "presentation":
            return f"coker(Hom({self.f.target}, -) -> Hom({self.f.source}, -))"
        U = str(self.U)
        return {
            "hom": f"Hom({U}, -)",
            "tensor": f"{U} ⊗ -",
            "tor": f"Tor_{self.i}({U}, -)",
            "ext": f"Ext^{self.i}({U}, -)",
        }[self.kind]

    def apply(self, M: FPModule) -> FPModule:
        return apply(self, M)

    def apply_map(self, g: FPMap) -> FPMap:
        return apply_map(self, g)


def _tensor_parts(F: CoherentFunctor, M: FPModule):
    key = ("functor",) + F.key()
    if key not in M._memo:
        raw = tensor(F.U, M)
        M._memo[key] = raw.pruned()
    return M._memo[key]


def _presentation_parts(F: CoherentFunctor, M: FPModule):
    key = ("functor",) + F.key()
    if key not in M._memo:
        M._memo[key] = cokernel(hom_map(F.f, FPMap.identity(M)))
    return M._memo[key]


def apply(F: CoherentFunctor, M: FPModule) -> FPModule:
    k = F.kind
    if k == "hom":
        return hom(F.U, M)
    if k == "tensor":
        return _tensor_parts(F, M)[0]
    if k == "tor":
        return tor(F.i, F.U, M)
    if k == "ext":
        return ext(F.i, F.U, M)
    return _presentation_parts(F, M)[0]


def apply_map(F: CoherentFunctor, g: FPMap) -> FPMap:
    """F(g): F(M) -> F(N) for g: M -> N."""
    k = F.kind
    src, tgt = apply(F, g.source), apply(F, g.target)
    if k == "hom":
        return hom_map(FPMap.identity(F.U), g)
    if k == "tensor":
        _, _, back = _tensor_parts(F, g.source)
        _, to, _ = _tensor_parts(F, g.target)
        raw = tensor_map(FPMap.identity(F.U), g)
        return FPMap(src, tgt, to.matrix @ raw.matrix @ back.matrix, check=False)
    if k in ("tor", "ext") and F.i >= 2:
        return FPMap.zero(src, tgt)
    if k == "tor":
        P = resolution(F.U)
        return power_cokernel_map(P, g) if F.i == 0 else power_kernel_map(P, g)
    if k == "ext":
        P = resolution(F.U).T
        return power_kernel_map(P, g) if F.i == 0 else power_cokernel_map(P, g)
    # presentation: descend Hom(V, g) to the cokernels
    _, proj = _presentation_parts(F, g.target)
    Hv = hom_map(FPMap.identity(F.f.source), g)
    return FPMap(src, tgt, proj.matrix @ Hv.matrix @ cokernel_section(src), check=False)


def apply_family(F: CoherentFunctor, X: DegreewiseFamily) -> DegreewiseFamily:
    """n ↦ F(X_n), with F applied to the multiplication maps."""
    return DegreewiseFamily(
        X.base,
        X.variables,
        X.lower_bound,
        X.window_end,
        lambda n: apply(F, X.component(n)),
        lambda n: [apply_map(F, m) for m in X.mult_maps(n)],
        Provenance.FUNCTOR_IMAGE,
        f"{F}({X.label})" if X.label else str(F),
    )


def tensor_as_presentation(U: FPModule) -> CoherentFunctor:
    """U ⊗ - written as coker(Hom(A^c, -) -> Hom(A^g, -)) from a diagonal presentation of U."""
    P = resolution(U)  # g x c, injective
    ring = U.ring
    g, c = P.nrows, P.ncols
    V, W = FPModule.free(ring, g), FPModule.free(ring, c)
    return CoherentFunctor.presentation(FPMap(V, W, P.T, check=False), name=f"{U} ⊗ - (presented)")
