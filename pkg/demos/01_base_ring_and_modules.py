"""A short walk through the base-ring layer.

Factor a polynomial over F_2, put a relation matrix into Smith form, and read
off the structure, associated primes, length and grade of the module it
presents.

    python3 demos/01_base_ring_and_modules.py
"""

from asymprimes import BaseRing, FPModule, Ideal, ass, ext, factor, grade, hom, length, tensor
from asymprimes.matrix import Matrix, smith

A = BaseRing.poly(2, "u")
u = A.parse("u")

f = A.parse("u^5 + u^4 + u^2 + u")
print(f"factor({f}) =", " * ".join(f"({q})^{e}" if e > 1 else f"({q})" for q, e in factor(f)))

# relations as columns: M = A^3 / <columns>
rows = [["u", "0", "0"], ["0", "u^2 + u", "0"], ["0", "0", "0"]]
mat = Matrix(A, [[A.parse(x) for x in r] for r in rows], 3)
sf = smith(mat, left=True, right=True)
print("invariant factors:", [str(d) for d in sf.diag])
assert sf.U @ mat @ sf.V == sf.D

M = FPModule(A, 3, mat)
print("M =", M)
print("Ass(M) =", ass(M))
print("length(M) =", length(M), " (a free summand makes it infinite)")

T = FPModule.cyclic(A, u**2)
print("Hom(A/(u^2), M) =", hom(T, M))
print("A/(u^2) ⊗ M    =", tensor(T, M))
print("Ext^1(A/(u^2), M) =", ext(1, T, M))
for J in (Ideal(A, (u,)), Ideal(A, (u + 1,)), Ideal(A, (A.parse("u^2 + u + 1"),))):
    print(f"grade({J}, M) =", grade(J, M))
