"""Asymptotic primes of (ux) inside F_2[u][x], assembled from the library pieces.

N = S is free over S = A[x], M = (ux) is the submodule generated in degree 1.
Degreewise the quotient is A/(u) from degree 1 on, so Ass settles at {(u)}
and the Hilbert polynomial is the constant 1.  The last part runs the
filtration oracle for a few j and shows each L*-piece.

    python3 demos/02_stabilization_by_hand.py
"""

from asymprimes import GradedMap, GradedModule, GradedRing, quotient_family
from asymprimes import ass_profile, detect_stabilization, filtration_check, hilbert_fit, normalize
from asymprimes.asymptotics import length_profile
from asymprimes.base_ring import BaseRing

A = BaseRing.poly(2, "u")
S = GradedRing(A, ["x"])
N = GradedModule.free(S, [0])
M = GradedModule.free(S, [1])
iota = GradedMap(M, N, [["u*x"]])

HI = 12
X = quotient_family(M, N, iota, HI, label="S/(ux)")
profile = ass_profile(X, 0, HI)
for n, a in enumerate(profile):
    print(f"  n = {n:2d}   X_n = {X.component(n)!s:10}  Ass = {a}")
n0 = detect_stabilization(profile, W=4)
print("stabilizes from n0 =", n0, "with Ass =", profile[-1])

# X_0 = A has infinite length, so fit from degree 1
lengths = length_profile(X, 1, HI)
fit = hilbert_fit(lengths, holdout=4, lo=1)
print("lengths from degree 1:", lengths)
print("Hilbert polynomial:", fit.poly, "valid from", fit.start)

P = normalize(M, N, iota, window=HI)
print("normalizing shift r =", P.r)
for j in (1, 2, 4):
    chk = filtration_check(P, j)
    pieces = ", ".join(s.subquotient for s in chk.steps)
    print(f"  j = {j}: L* pieces [{pieces}]  ok = {chk.ok}")
