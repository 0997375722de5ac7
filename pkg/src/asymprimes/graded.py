"""Standard graded polynomial rings over A and their finitely presented modules.

A graded module is ``coker(⊕ S(-b_j) -> ⊕ S(-a_i))`` with homogeneous
entries; its degree-n component is an :class:`FPModule` over A whose
generators are the pairs (i, monomial of degree n - a_i), ordered by i and
then lexicographically (largest exponent of the first variable first).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .base_ring import BaseRing, RingElem
from .fpmod import FPMap, FPModule
from .matrix import Matrix

Monomial = tuple[int, ...]
GPoly = dict  # Monomial -> nonzero RingElem


class GradedError(ValueError):
    """Malformed graded data (inhomogeneous entries, unknown variables, ...)."""


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[Monomial, ...]:
    """Monomials of a given degree, lexicographically descending."""
    if degree < 0:
        return ()
    if nvars == 0:
        return ((),) if degree == 0 else ()
    out = []
    for e in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - e):
            out.append((e,) + rest)
    return tuple(out)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def split_monomial(m: Monomial, d: int) -> tuple[Monomial, Monomial]:
    """Write m = m1 * m2 with deg m1 = d, taking m1 from the leading variables."""
    m1 = []
    rest = d
    for e in m:
        take = min(e, rest)
        m1.append(take)
        rest -= take
    if rest:
        raise ValueError("monomial degree too small to split")
    return tuple(m1), tuple(e - t for e, t in zip(m, m1))


# ---------------------------------------------------------------------------
# polynomials over the graded ring (dicts monomial -> coefficient)
# ---------------------------------------------------------------------------


def gp_add(f: GPoly, g: GPoly) -> GPoly:
    out = dict(f)
    for m, c in g.items():
        s = out.get(m)
        s = c if s is None else s + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def gp_mul(f: GPoly, g: GPoly) -> GPoly:
    out: GPoly = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = mono_mul(m1, m2)
            s = out.get(m)
            s = c1 * c2 if s is None else s + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def gp_scale(f: GPoly, c: RingElem) -> GPoly:
    return {m: c * a for m, a in f.items() if c * a}


def gp_degree(f: GPoly) -> int | None:
    """Degree of a nonzero homogeneous polynomial; ``None`` for zero; -1 if inhomogeneous."""
    if not f:
        return None
    degs = {sum(m) for m in f}
    return degs.pop() if len(degs) == 1 else -1


@dataclass(frozen=True)
class GradedRing:
    """A[x_1, ..., x_m], every variable of degree 1."""

    base: BaseRing
    variables: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise GradedError("repeated variable")
        if self.base.var is not None and self.base.var in self.variables:
            raise GradedError(f"variable {self.base.var} is already the base variable")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def dim(self) -> int:
        """Krull dimension: number of variables plus dim A."""
        return self.nvars + self.base.krull_dim

    def monomials(self, degree: int) -> tuple[Monomial, ...]:
        return monomials(self.nvars, degree)

    def var_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise GradedError(f"unknown variable {name}") from None

    def unit_monomial(self, v: int) -> Monomial:
        return tuple(1 if k == v else 0 for k in range(self.nvars))

    def one(self) -> GPoly:
        return {(0,) * self.nvars: self.base.one}

    def parse(self, text) -> GPoly:
        if isinstance(text, int):
            c = self.base(text)
            return {(0,) * self.nvars: c} if c else {}
        if isinstance(text, dict):
            return text
        return _PolyParser(self, str(text)).parse()

    def render(self, f: GPoly) -> str:
        if not f:
            return "0"
        terms = []
        for m in sorted(f, reverse=True):
            c = f[m]
            ms = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, m) if e
            )
            cs = str(c)
            if not ms:
                terms.append(cs)
            elif c.is_one():
                terms.append(ms)
            elif sum(1 for a in c.c if a) == 1:
                terms.append(f"{cs}*{ms}")
            else:
                terms.append(f"({cs})*{ms}")
        return " + ".join(terms)


class _PolyParser:
    _tok = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")

    def __init__(self, ring: GradedRing, text: str):
        self.ring = ring
        self.text = text
        self.toks = []
        pos = 0
        while pos < len(text):
            m = self._tok.match(text, pos)
            if not m:
                break
            if m.group(0).strip() == "":
                break
            self.toks.append(m.group(1) or m.group(2) or m.group(3))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg="") -> GradedError:
        return GradedError(f"cannot parse polynomial {self.text!r} {msg}".strip())

    def parse(self) -> GPoly:
        if not self.toks:
            raise self.error("(empty)")
        f = self.expr()
        if self.peek() is not None:
            raise self.error(f"(unexpected {self.peek()!r})")
        return f

    def expr(self) -> GPoly:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        f = self.term()
        if sign < 0:
            f = gp_scale(f, -self.ring.base.one)
        while self.peek() in ("+", "-"):
            op = self.take()
            g = self.term()
            if op == "-":
                g = gp_scale(g, -self.ring.base.one)
            f = gp_add(f, g)
        return f

    def term(self) -> GPoly:
        f = self.factor()
        while self.peek() == "*":
            self.take()
            f = gp_mul(f, self.factor())
        return f

    def factor(self) -> GPoly:
        t = self.take()
        ring = self.ring
        zero = (0,) * ring.nvars
        if t is None:
            raise self.error("(truncated)")
        if t == "(":
            f = self.expr()
            if self.take() != ")":
                raise self.error("(unbalanced parenthesis)")
        elif t.isdigit():
            c = ring.base(int(t))
            f = {zero: c} if c else {}
        elif t == ring.base.var:
            f = {zero: ring.base.gen()}
        elif t in ring.variables:
            f = {ring.unit_monomial(ring.var_index(t)): ring.base.one}
        else:
            raise GradedError(f"unknown symbol {t!r} in {self.text!r}")
        if self.peek() == "^":
            self.take()
            e = self.take()
            if e is None or not e.isdigit():
                raise self.error("(bad exponent)")
            g = ring.one()
            for _ in range(int(e)):
                g = gp_mul(g, f)
            f = g
        return f


@dataclass(frozen=True)
class RingInclusion:
    """R ⊆ S sending each variable of R to the S-variable of the same name."""

    small: GradedRing
    big: GradedRing

    def __post_init__(self):
        if self.small.base != self.big.base:
            raise GradedError("R and S must share the base ring")
        for v in self.small.variables:
            if v not in self.big.variables:
                raise GradedError(f"R-variable {v} not in S")

    @property
    def index(self) -> tuple[int, ...]:
        return tuple(self.big.var_index(v) for v in self.small.variables)

    def embed(self, m: Monomial) -> Monomial:
        out = [0] * self.big.nvars
        for e, k in zip(m, self.index):
            out[k] = e
        return tuple(out)

    @classmethod
    def identity(cls, ring: GradedRing) -> "RingInclusion":
        return cls(ring, ring)


# ---------------------------------------------------------------------------
# graded modules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Truncation:
    """Generator provenance for a module built by :func:`truncate_and_shift`."""

    parent: "GradedModule"
    shift: int
    gens: tuple[tuple[int, Monomial | None], ...]  # (parent generator, monomial factor)


class GradedModule:
    """coker(⊕ S(-b_j) -> ⊕ S(-a_i)) with homogeneous entries."""

    def __init__(
        self,
        ring: GradedRing,
        twists: Sequence[int],
        rel_twists: Sequence[int] = (),
        matrix: Sequence[Sequence] | None = None,
        truncation: Truncation | None = None,
    ):
        self.ring = ring
        self.twists = tuple(int(a) for a in twists)
        self.rel_twists = tuple(int(b) for b in rel_twists)
        g, c = len(self.twists), len(self.rel_twists)
        if matrix is None:
            matrix = [[{} for _ in range(c)] for _ in range(g)]
        rows = [[ring.parse(x) for x in r] for r in matrix]
        if len(rows) != g or any(len(r) != c for r in rows):
            raise GradedError(f"presentation matrix must be {g} x {c}")
        for i, r in enumerate(rows):
            for j, f in enumerate(r):
                d = gp_degree(f)
                if d is not None and d != self.rel_twists[j] - self.twists[i]:
                    raise GradedError(
                        f"entry ({i}, {j}) = {ring.render(f)} is not homogeneous of degree "
                        f"{self.rel_twists[j] - self.twists[i]}"
                    )
        self.matrix = rows
        self.truncation = truncation
        self._cache: dict = {}

    @classmethod
    def free(cls, ring: GradedRing, twists: Sequence[int] = (0,)) -> "GradedModule":
        return cls(ring, twists)

    @property
    def ngens(self) -> int:
        return len(self.twists)

    @property
    def base(self) -> BaseRing:
        return self.ring.base

    @property
    def lower_bound(self) -> int:
        """All components below this degree vanish."""
        return min(self.twists) if self.twists else 0

    def basis(self, n: int) -> tuple[tuple[int, Monomial], ...]:
        key = ("basis", n)
        if key not in self._cache:
            self._cache[key] = tuple(
                (i, m) for i, a in enumerate(self.twists) for m in self.ring.monomials(n - a)
            )
        return self._cache[key]

    def index(self, n: int) -> dict:
        key = ("index", n)
        if key not in self._cache:
            self._cache[key] = {b: k for k, b in enumerate(self.basis(n))}
        return self._cache[key]

    def vector(self, n: int, elem: Sequence[GPoly]) -> list[RingElem]:
        """Coordinates in the degree-n basis of a homogeneous element of the free cover."""
        idx = self.index(n)
        v = [self.base.zero] * len(idx)
        for i, f in enumerate(elem):
            for m, c in f.items():
                k = idx[(i, m)]
                v[k] = v[k] + c
        return v

    def component(self, n: int) -> FPModule:
        """The A-module X_n."""
        key = ("component", n)
        if key not in self._cache:
            basis = self.basis(n)
            cols = []
            for j, b in enumerate(self.rel_twists):
                col = [self.matrix[i][j] for i in range(self.ngens)]
                for mu in self.ring.monomials(n - b):
                    muf = {mu: self.base.one}
                    cols.append(self.vector(n, [gp_mul(muf, f) for f in col]))
            rels = Matrix.from_columns(self.base, len(basis), cols)
            self._cache[key] = FPModule(self.base, len(basis), rels)
        return self._cache[key]

    def monomial_matrix(self, n: int, mono: Monomial) -> Matrix:
        """Multiplication by a monomial of S as a matrix X_n -> X_{n + deg}."""
        d = sum(mono)
        src = self.basis(n)
        idx = self.index(n + d)
        out = Matrix.zeros(self.base, len(idx), len(src))
        one = self.base.one
        for k, (i, m) in enumerate(src):
            out.rows[idx[(i, mono_mul(m, mono))]][k] = one
        return out

    def mult_map(self, n: int, v) -> FPMap:
        """Multiplication by the variable ``v`` (name or index): X_n -> X_{n+1}."""
        if isinstance(v, str):
            v = self.ring.var_index(v)
        return FPMap(
            self.component(n),
            self.component(n + 1),
            self.monomial_matrix(n, self.ring.unit_monomial(v)),
            check=False,
        )

    def render_matrix(self) -> list[list[str]]:
        return [[self.ring.render(f) for f in r] for r in self.matrix]

    def __repr__(self):
        return f"GradedModule({self.ring.variables}, twists={self.twists}, rel_twists={self.rel_twists})"


class GradedMap:
    """A degree-0 map M -> N of graded modules over R ⊆ S (entries in S)."""

    def __init__(self, source: GradedModule, target: GradedModule, matrix: Sequence[Sequence], inclusion: RingInclusion | None = None):
        if inclusion is None:
            inclusion = RingInclusion(source.ring, target.ring)
        if inclusion.small != source.ring or inclusion.big != target.ring:
            raise GradedError("inclusion does not match the module rings")
        self.source = source
        self.target = target
        self.inclusion = inclusion
        S = target.ring
        rows = [[S.parse(x) for x in r] for r in matrix]
        if len(rows) != target.ngens or any(len(r) != source.ngens for r in rows):
            raise GradedError(f"map matrix must be {target.ngens} x {source.ngens}")
        for i, r in enumerate(rows):
            for j, f in enumerate(r):
                d = gp_degree(f)
                want = source.twists[j] - target.twists[i]
                if d is not None and d != want:
                    raise GradedError(f"map entry ({i}, {j}) = {S.render(f)} is not homogeneous of degree {want}")
        self.matrix = rows
        self._cache: dict = {}

    def image_of(self, j: int, mono: Monomial) -> list[GPoly]:
        """Image in the free cover of N of the element mono * e_j of M."""
        emb = {self.inclusion.embed(mono): self.source.base.one}
        return [gp_mul(emb, self.matrix[i][j]) for i in range(self.target.ngens)]

    def component(self, n: int, check: bool = True) -> FPMap:
        key = ("component", n, check)
        if key not in self._cache:
            cols = [self.target.vector(n, self.image_of(j, m)) for j, m in self.source.basis(n)]
            M_n, N_n = self.source.component(n), self.target.component(n)
            mat = Matrix.from_columns(self.source.base, N_n.ngens, cols)
            try:
                self._cache[key] = FPMap(M_n, N_n, mat, check=check)
            except ValueError as exc:
                raise GradedError(f"map is not well defined in degree {n}: {exc}") from None
        return self._cache[key]

    def render_matrix(self) -> list[list[str]]:
        return [[self.target.ring.render(f) for f in r] for r in self.matrix]


def component(X: GradedModule, n: int) -> FPModule:
    return X.component(n)


def mult_map(X: GradedModule, n: int, v) -> FPMap:
    return X.mult_map(n, v)


# ---------------------------------------------------------------------------
# truncation
# ---------------------------------------------------------------------------


def truncate_and_shift(X: GradedModule, r: int) -> GradedModule:
    """The submodule X_{>=r}, regraded so that degree r becomes degree 0.

    Generators of degree below r are replaced by their multiples by all
    monomials reaching degree r; the linear syzygies among those monomial
    multiples are added to the relations.
    """
    ring = X.ring
    one = X.base.one
    gens: list[tuple[int, Monomial | None]] = []
    for i, a in enumerate(X.twists):
        if a >= r:
            gens.append((i, None))
        else:
            gens.extend((i, m) for m in ring.monomials(r - a))
    pos = {g: k for k, g in enumerate(gens)}
    twists = [X.twists[i] - r if m is None else 0 for i, m in gens]

    def lift(elem: Sequence[GPoly]) -> list[GPoly]:
        out: list[GPoly] = [{} for _ in gens]
        for i, f in enumerate(elem):
            a = X.twists[i]
            for m, c in f.items():
                if a >= r:
                    k, rest = pos[(i, None)], m
                else:
                    head, rest = split_monomial(m, r - a)
                    k = pos[(i, head)]
                out[k] = gp_add(out[k], {rest: c})
        return out

    cols: list[list[GPoly]] = []
    rel_twists: list[int] = []
    for j, b in enumerate(X.rel_twists):
        col = [X.matrix[i][j] for i in range(X.ngens)]
        if b >= r:
            cols.append(lift(col))
            rel_twists.append(b - r)
        else:
            for mu in ring.monomials(r - b):
                cols.append(lift([gp_mul({mu: one}, f) for f in col]))
                rel_twists.append(0)
    for i, a in enumerate(X.twists):
        if a >= r:
            continue
        d = r - a
        for tau in ring.monomials(d + 1):
            pairs = []
            for v in range(ring.nvars):
                if tau[v]:
                    mu = tuple(e - (1 if k == v else 0) for k, e in enumerate(tau))
                    pairs.append((mu, v))
            for (m1, v1), (m2, v2) in zip(pairs, pairs[1:]):
                col: list[GPoly] = [{} for _ in gens]
                col[pos[(i, m1)]] = {ring.unit_monomial(v1): one}
                col[pos[(i, m2)]] = {ring.unit_monomial(v2): -one}
                cols.append(col)
                rel_twists.append(1)
    matrix = [[cols[j][k] for j in range(len(cols))] for k in range(len(gens))]
    out = GradedModule(ring, twists, rel_twists, matrix, Truncation(X, r, tuple(gens)))
    out._lift = lift
    return out


def truncate_map(f: GradedMap, r: int, source: GradedModule | None = None, target: GradedModule | None = None) -> GradedMap:
    """The map M_{>=r} -> N_{>=r} induced by f, between shifted truncations."""
    Mt = source if source is not None else truncate_and_shift(f.source, r)
    Nt = target if target is not None else truncate_and_shift(f.target, r)
    R = f.source.ring
    cols = []
    for j, m in Mt.truncation.gens:
        mono = m if m is not None else (0,) * R.nvars
        cols.append(Nt._lift(f.image_of(j, mono)))
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(Nt.ngens)]
    return GradedMap(Mt, Nt, matrix, f.inclusion)
