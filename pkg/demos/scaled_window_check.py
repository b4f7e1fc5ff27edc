"""
Right ideals generated by a supplied F
======================================

With a shortened schedule the window at level 4 (degree 16) consumes a
random 100-dimensional F inside U(16).  The right ideal generated by shifted
copies of U(16) should stay inside U H + H U at every higher level; a single
corrupted coordinate at level 5 breaks that, and the check says where.
"""

import time

from gkforge import Schedule, build
from gkforge.nil import b_ideal, verify_bwifi
from gkforge.subspace import basis, equal

state = build(Schedule.scaled_default(onset=2, seed=0), 6)
print("F at level 4 has dim", state.level(4).F.dim)

# The degree-32 part of the right ideal is U(16)H(16) + H(16)U(16).
B = b_ideal(16, state.U(4), 32)
print("base case:", equal(B.component(32), state.T(4)))

t0 = time.perf_counter()
print(verify_bwifi(state, 2, 6))
print(f"({time.perf_counter() - t0:.1f}s)")

f1 = basis(state.level(4).F)[0]
loose = next(w for w in f1.terms if w not in state.U(4).index)
broken = state.with_u_fault(5, loose + state.V(4).words[0])
for check in verify_bwifi(broken, 2, 6).failures():
    print("caught:", check.name, "->", check.witness)
