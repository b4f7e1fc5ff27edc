"""
Building the tower of V and U spaces
====================================

Each level n splits the degree-2^n component of K<x,y,z> into a tiny
monomial part V(2^n) and a huge part U(2^n).  Only V and a small transfer
matrix per level are stored, so checking a degree-64 word costs about as
much as checking a degree-2 word.
"""

from gkforge import Schedule, build, verify_seven
from gkforge.poly import Poly

# The default schedule keeps V at two words on every desk-sized level.
state = build(Schedule(), 6)
for n in range(4):
    print(f"V({2**n}) =", state.V(n).words)

# Membership in U is a coordinate computation: a word is in U exactly when
# its image under the level map vanishes.
print("zx in U(2):", state.in_U(1, Poly.word("zx")))
print("xy in U(2):", state.in_U(1, Poly.word("xy")))
print("x^63 y in U(64):", state.in_U(6, Poly.word("x" * 63 + "y")))

# All seven structural conditions, level by level.
for n in range(6):
    rep = verify_seven(state, n)
    print(f"level {n}: {'ok' if rep.passed else 'FAILED'}")

# With the first window starting at level 1 all three construction branches
# run: squaring inside a window, the 2-word cut outside it, and the cut at a
# window end that has to swallow a supplied subspace F.
scaled = build(Schedule.scaled_default(onset=2, seed=0), 6)
print("provenance:", scaled.provenance)
print("dims:", [scaled.dim_V(n) for n in range(7)])
print(verify_seven(scaled, 4))

# Breaking the complement at one level shows up as a witness.
broken = state.with_u_fault(2, "zzzz")
for check in verify_seven(broken, 2).failures() + verify_seven(broken, 1).failures():
    print("caught:", check.name, check.witness)
