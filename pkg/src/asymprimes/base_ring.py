"""Coefficient rings A = F_p and A = F_p[u].

Elements of both kinds are stored as coefficient tuples over F_p, lowest
degree first, with no trailing zeros (``()`` is zero).  Over F_p every
nonzero element is a constant, so the Euclidean machinery of F_p[u]
specialises without extra code paths: division by a nonzero constant is
exact and every nonzero element is a unit.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

FIELD = "field"
POLY = "poly"

MAX_PRIME = 1 << 16
DEFAULT_SEED = 0


class DomainError(ArithmeticError):
    """Division by zero or inversion of a non-unit."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class BaseRing:
    """F_p (``kind="field"``) or F_p[var] (``kind="poly"``)."""

    kind: str
    p: int
    var: str | None = None

    def __post_init__(self):
        if self.kind not in (FIELD, POLY):
            raise ValueError(f"unknown base ring kind {self.kind!r}")
        if not _is_prime(self.p) or self.p >= MAX_PRIME:
            raise ValueError(f"modulus {self.p} is not a prime below {MAX_PRIME}")
        if self.kind == POLY and not self.var:
            raise ValueError("polynomial base ring needs a variable name")
        if self.kind == FIELD and self.var is not None:
            raise ValueError("prime field takes no variable")

    @classmethod
    def field(cls, p: int) -> "BaseRing":
        return cls(FIELD, p)

    @classmethod
    def poly(cls, p: int, var: str = "u") -> "BaseRing":
        return cls(POLY, p, var)

    @property
    def is_field(self) -> bool:
        return self.kind == FIELD

    @property
    def krull_dim(self) -> int:
        return 0 if self.is_field else 1

    @property
    def zero(self) -> "RingElem":
        return RingElem(self, ())

    @property
    def one(self) -> "RingElem":
        return RingElem(self, (1,))

    def __call__(self, value) -> "RingElem":
        if isinstance(value, RingElem):
            if value.ring != self:
                raise ValueError(f"element of {value.ring} used in {self}")
            return value
        if isinstance(value, int):
            return RingElem(self, _trim([value % self.p]))
        if isinstance(value, str):
            return self.parse(value)
        return self.from_coeffs(value)

    def from_coeffs(self, coeffs: Sequence[int]) -> "RingElem":
        c = _trim([int(a) % self.p for a in coeffs])
        if self.is_field and len(c) > 1:
            raise ValueError("prime field elements are constants")
        return RingElem(self, c)

    def gen(self) -> "RingElem":
        if self.is_field:
            raise ValueError("prime field has no variable")
        return RingElem(self, (0, 1))

    def __str__(self):
        return f"F_{self.p}" if self.is_field else f"F_{self.p}[{self.var}]"

    # -- text -------------------------------------------------------------

    def parse(self, text: str) -> "RingElem":
        """Parse ``"1 + 2*u + u^3"`` style input (any order, ``-`` allowed)."""
        s = re.sub(r"\s+", "", text)
        if not s:
            raise ValueError("empty polynomial string")
        if s[0] not in "+-":
            s = "+" + s
        pieces = re.findall(r"([+-])([^+-]+)", s)
        if "".join(sign + term for sign, term in pieces) != s:
            raise ValueError(f"cannot parse ring element {text!r}")
        coeffs: dict[int, int] = {}
        for sign, term in pieces:
            c, e = self._parse_term(term, text)
            coeffs[e] = coeffs.get(e, 0) + (-c if sign == "-" else c)
        deg = max(coeffs) if coeffs else 0
        out = [0] * (deg + 1)
        for e, c in coeffs.items():
            out[e] = c
        return self.from_coeffs(out)

    def _parse_term(self, term: str, text: str) -> tuple[int, int]:
        coef, exp = 1, 0
        for factor in term.split("*"):
            if not factor:
                raise ValueError(f"cannot parse ring element {text!r}")
            if factor.isdigit():
                coef *= int(factor)
                continue
            m = re.fullmatch(r"([A-Za-z_]\w*)(?:\^(\d+))?", factor)
            if not m or self.is_field or m.group(1) != self.var:
                raise ValueError(f"unknown symbol {factor!r} in {text!r} over {self}")
            exp += int(m.group(2) or 1)
        return coef, exp

    # -- ideals and primes -------------------------------------------------

    def ideal(self, *gens) -> "Ideal":
        return Ideal(self, tuple(self(g) for g in gens))

    def prime(self, generator=None) -> "PrimeIdeal":
        """The prime ideal (0) (no argument) or (f) for irreducible f."""
        if generator is None:
            return PrimeIdeal(self, None)
        f = self(generator).monic()
        facs = factor(f)
        if len(facs) != 1 or facs[0][1] != 1:
            raise ValueError(f"{f} is not irreducible over {self}")
        return PrimeIdeal(self, f)

    def monic_polys(self, degree: int) -> Iterator["RingElem"]:
        """All monic polynomials of the given degree, lexicographically."""
        if self.is_field:
            if degree == 0:
                yield self.one
            return
        for k in range(self.p ** degree):
            low = []
            for _ in range(degree):
                low.append(k % self.p)
                k //= self.p
            yield RingElem(self, tuple(low) + (1,))

    def random_elem(self, rng: random.Random, max_degree: int) -> "RingElem":
        if self.is_field:
            return self(rng.randrange(self.p))
        d = rng.randint(-1, max_degree)
        return self.from_coeffs([rng.randrange(self.p) for _ in range(d + 1)])


class RingElem:
    """An immutable element of a :class:`BaseRing`."""

    __slots__ = ("ring", "c")

    def __init__(self, ring: BaseRing, c: tuple[int, ...]):
        self.ring = ring
        self.c = c

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.c

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def __bool__(self):
        return bool(self.c)

    def is_unit(self) -> bool:
        return len(self.c) == 1

    def is_one(self) -> bool:
        return self.c == (1,)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.c == other.c and self.ring == other.ring

    def __hash__(self):
        return hash(self.c)

    def _coerce(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError(f"mixing {self.ring} and {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, p = self.c, other.c, self.ring.p
        if not a:
            return other
        if not b:
            return self
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = (out[i] + x) % p
        return RingElem(self.ring, _trim(out))

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return RingElem(self.ring, tuple((p - x) % p for x in self.c))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, p = self.c, other.c, self.ring.p
        if not a or not b:
            return RingElem(self.ring, ())
        if len(b) == 1:
            if b[0] == 1:
                return self
            k = b[0]
            return RingElem(self.ring, tuple(x * k % p for x in a))
        if len(a) == 1:
            if a[0] == 1:
                return other
            k = a[0]
            return RingElem(self.ring, tuple(x * k % p for x in b))
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return RingElem(self.ring, _trim([x % p for x in out]))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.ring.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "RingElem":
        if not self.is_unit():
            raise DomainError(f"{self} is not a unit in {self.ring}")
        return RingElem(self.ring, (pow(self.c[0], -1, self.ring.p),))

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other:
            raise DomainError("division by zero")
        p = self.ring.p
        b = other.c
        db = len(b) - 1
        inv = pow(b[-1], -1, p)
        r = list(self.c)
        if len(r) - 1 < db:
            return RingElem(self.ring, ()), self
        q = [0] * (len(r) - db)
        for k in range(len(r) - 1, db - 1, -1):
            coef = r[k] * inv % p
            if coef:
                q[k - db] = coef
                off = k - db
                for i, y in enumerate(b):
                    r[off + i] = (r[off + i] - coef * y) % p
        return RingElem(self.ring, _trim(q)), RingElem(self.ring, _trim(r[:db]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "RingElem") -> bool:
        """True when ``self`` divides ``other`` (zero divides only zero)."""
        if not self:
            return not other
        return not (other % self)

    def exact_div(self, other: "RingElem") -> "RingElem":
        q, r = divmod(self, other)
        if r:
            raise DomainError(f"{other} does not divide {self}")
        return q

    def monic(self) -> "RingElem":
        if not self or self.c[-1] == 1:
            return self
        return self * pow(self.c[-1], -1, self.ring.p)

    def __call__(self, x: int) -> int:
        acc = 0
        for a in reversed(self.c):
            acc = (acc * x + a) % self.ring.p
        return acc

    def sort_key(self) -> tuple:
        return (len(self.c), tuple(reversed(self.c)))

    def __str__(self):
        if not self.c:
            return "0"
        var = self.ring.var
        terms = []
        for e, a in enumerate(self.c):
            if not a:
                continue
            if e == 0:
                terms.append(str(a))
                continue
            mono = var if e == 1 else f"{var}^{e}"
            terms.append(mono if a == 1 else f"{a}*{mono}")
        return " + ".join(terms)

    def __repr__(self):
        return f"RingElem({self.ring}, {str(self)!r})"


def gcd(a: RingElem, b: RingElem) -> RingElem:
    """Monic greatest common divisor (``gcd(0, 0) == 0``)."""
    while b:
        a, b = b, a % b
    return a.monic()


def xgcd(a: RingElem, b: RingElem) -> tuple[RingElem, RingElem, RingElem]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g`` and ``g`` monic."""
    ring = a.ring
    r0, r1 = a, b
    s0, s1 = ring.one, ring.zero
    t0, t1 = ring.zero, ring.one
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    k = pow(r0.lc, -1, ring.p)
    return r0 * k, s0 * k, t0 * k


def _derivative(f: RingElem) -> RingElem:
    p = f.ring.p
    return f.ring.from_coeffs([(i * a) % p for i, a in enumerate(f.c)][1:])


def _pth_root(f: RingElem) -> RingElem:
    # coefficients of F_p are fixed by Frobenius
    return f.ring.from_coeffs(f.c[:: f.ring.p])


def _powmod(a: RingElem, n: int, f: RingElem) -> RingElem:
    result, base = f.ring.one % f, a % f
    while n:
        if n & 1:
            result = result * base % f
        base = base * base % f
        n >>= 1
    return result


def _squarefree(f: RingElem) -> list[tuple[RingElem, int]]:
    """Yun-style squarefree decomposition of a monic ``f``."""
    p = f.ring.p
    if f.degree < 1:
        return []
    df = _derivative(f)
    if not df:
        return [(g, e * p) for g, e in _squarefree(_pth_root(f))]
    out = []
    c = gcd(f, df)
    w = f // c
    i = 1
    while w.degree > 0:
        y = gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z, i))
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        out.extend((g, e * p) for g, e in _squarefree(_pth_root(c)))
    return out


def _distinct_degree(f: RingElem) -> list[tuple[RingElem, int]]:
    ring = f.ring
    x = ring.gen()
    out = []
    h = x
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = _powmod(h, ring.p, f)
        g = gcd(h - x, f)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def _equal_degree(f: RingElem, d: int, rng: random.Random) -> list[RingElem]:
    if f.degree == d:
        return [f]
    ring = f.ring
    p = ring.p
    while True:
        a = ring.from_coeffs([rng.randrange(p) for _ in range(f.degree)])
        if a.degree < 1:
            continue
        if p == 2:
            b, t = a, a
            for _ in range(d - 1):
                t = t * t % f
                b = b + t
        else:
            b = _powmod(a, (p ** d - 1) // 2, f) - 1
        g = gcd(b, f)
        if 0 < g.degree < f.degree:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


@lru_cache(maxsize=4096)
def _factor_monic(ring: BaseRing, coeffs: tuple[int, ...], seed: int):
    f = RingElem(ring, coeffs)
    rng = random.Random(seed)
    mult: dict[tuple[int, ...], int] = {}
    for g, e in _squarefree(f):
        for h, d in _distinct_degree(g):
            for q in _equal_degree(h, d, rng):
                mult[q.c] = mult.get(q.c, 0) + e
    facs = [(RingElem(ring, c), e) for c, e in mult.items()]
    facs.sort(key=lambda t: t[0].sort_key())
    return tuple(facs)


_seed = DEFAULT_SEED


def set_seed(seed: int) -> None:
    """Seed used by :func:`factor` when none is passed explicitly."""
    global _seed
    _seed = int(seed)


def factor(f: RingElem, seed: int | None = None) -> list[tuple[RingElem, int]]:
    """Factor ``f`` into monic irreducibles with multiplicities.

    The leading coefficient is dropped; ``lc(f) * prod(q**e) == f``.  Output
    is sorted by (degree, coefficients) so it does not depend on ``seed``.
    Over a prime field every nonzero element is a unit and the result is
    empty.
    """
    if not f:
        raise ValueError("cannot factor zero")
    if f.degree == 0:
        return []
    return list(_factor_monic(f.ring, f.monic().c, _seed if seed is None else seed))


def is_irreducible(f: RingElem) -> bool:
    """Irreducibility by the gcd(u^(p^i) - u, f) test for i <= deg/2."""
    if f.degree < 1:
        return False
    f = f.monic()
    x = f.ring.gen()
    h = x
    for _ in range(f.degree // 2):
        h = _powmod(h, f.ring.p, f)
        if gcd(h - x, f).degree > 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime of A: the zero ideal (``generator is None``) or (f), f monic irreducible."""

    ring: BaseRing
    generator: RingElem | None

    @property
    def is_zero(self) -> bool:
        return self.generator is None

    def sort_key(self) -> tuple:
        if self.generator is None:
            return (0,)
        return (1,) + self.generator.sort_key()

    def __lt__(self, other: "PrimeIdeal"):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return "(0)" if self.generator is None else f"({self.generator})"

    def __repr__(self):
        return f"PrimeIdeal{self}"


@dataclass(frozen=True)
class Ideal:
    """An ideal of A given by generators; the monic gcd is cached."""

    ring: BaseRing
    gens: tuple[RingElem, ...]
    generator: RingElem = field(init=False, compare=False)

    def __post_init__(self):
        if not self.gens:
            raise ValueError("an ideal needs at least one generator")
        g = self.ring.zero
        for a in self.gens:
            g = gcd(g, self.ring(a))
        object.__setattr__(self, "generator", g)

    @property
    def kind(self) -> str:
        if not self.generator:
            return "zero"
        if self.generator.is_unit():
            return "unit"
        return "principal"

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")"


def normalize_ideal(J: Ideal) -> tuple[str, RingElem]:
    """Canonical form of ``J``: ``("zero"|"unit"|"principal", monic generator)``."""
    return J.kind, J.generator
