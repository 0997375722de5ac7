"""Independent reference computations used to check the library.

Nothing here calls Smith normal form or the factorizer: ranks come from
fraction-free elimination, residue fields are handled by brute force, and
irreducibility is trial division.  Slow, but only ever run on small inputs.
"""

from __future__ import annotations

import math
from functools import lru_cache

from asymprimes.base_ring import BaseRing, RingElem


def rank_fraction_field(rows: list[list[RingElem]]) -> int:
    """Rank over Frac(A) by Bareiss elimination."""
    A = [list(r) for r in rows]
    if not A:
        return 0
    ring = A[0][0].ring
    m, n = len(A), len(A[0])
    prev = ring.one
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, m):
            for k in range(c + 1, n):
                A[i][k] = (A[r][c] * A[i][k] - A[i][c] * A[r][k]).exact_div(prev)
            A[i][c] = ring.zero
        prev = A[r][c]
        r += 1
        if r == m:
            break
    return r


@lru_cache(maxsize=None)
def _inverse_mod(ring: BaseRing, a: tuple, q: tuple) -> RingElem:
    a, q = RingElem(ring, a), RingElem(ring, q)
    for cand in residues(ring, q.degree):
        if (a * cand) % q == ring.one:
            return cand
    raise ZeroDivisionError("not invertible modulo q")


def residues(ring: BaseRing, d: int):
    """All polynomials of degree < d (the residues modulo a degree-d modulus)."""
    for k in range(ring.p**d):
        c = []
        for _ in range(d):
            c.append(k % ring.p)
            k //= ring.p
        yield ring.from_coeffs(c)


def rank_mod(rows: list[list[RingElem]], q: RingElem) -> int:
    """Rank over the residue field A/(q), q irreducible."""
    A = [[x % q for x in r] for r in rows]
    if not A:
        return 0
    ring = q.ring
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = _inverse_mod(ring, A[r][c].c, q.c)
        A[r] = [(x * inv) % q for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % q for x, y in zip(A[i], A[r])]
        r += 1
    return r


def is_irreducible_brute(f: RingElem) -> bool:
    if f.degree < 1:
        return False
    for d in range(1, f.degree // 2 + 1):
        for g in f.ring.monic_polys(d):
            if not f % g:
                return False
    return True


def irreducibles_up_to(ring: BaseRing, max_degree: int) -> list[RingElem]:
    return [g for d in range(1, max_degree + 1) for g in ring.monic_polys(d) if is_irreducible_brute(g)]


def ass_brute(ngens: int, relation_columns: list[list[RingElem]], candidates) -> set:
    """Ass of coker(relations) among ``candidates`` plus the zero prime.

    Returns generators (``None`` for the zero prime).  (q) is associated iff
    M has q-torsion iff the rank drops modulo q.
    """
    rows = [[col[i] for col in relation_columns] for i in range(ngens)]
    rk = rank_fraction_field(rows) if relation_columns else 0
    out = set()
    if ngens - rk > 0:
        out.add(None)
    for q in candidates:
        rq = rank_mod(rows, q) if relation_columns else 0
        if rq < rk:
            out.add(q)
    return out


def binomial_dim(nvars: int, n: int) -> int:
    """Number of degree-n monomials in nvars variables."""
    return math.comb(n + nvars - 1, nvars - 1) if n >= 0 else 0
