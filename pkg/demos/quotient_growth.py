"""
The ideal E and the growth of the quotient
==========================================

E is defined by a window condition: r belongs to E when every padding of r
to length 2^(m+2) lands in U H + H U.  At desk degrees this reduces to a
factor test against concatenations of two V-words.
"""

from gkforge import Schedule, build, parse_poly
from gkforge.ideal import e_membership, gk_estimate, growth_table, nonnilpotence_witness, verify_ideal

state = build(Schedule(), 6)

for text in ("z", "x", "xy - yx", "zxy + yxz"):
    ok, wit = e_membership(state, parse_poly(text))
    print(f"{text!r:14} in E: {ok}", "" if ok else f"(padded as {wit.a!r}·r·{wit.b!r})")

# E is two-sided: multiply a basis of E(n) by each letter on both sides.
print("ideal property up to degree 8:", all(verify_ideal(state, n).passed for n in range(1, 9)))

# Survivors grow linearly on these degrees, far below the polynomial bound.
table = growth_table(state, 16)
print(table.csv())
print("fitted slope of log D against log n:", float(gk_estimate(table)))

for n, d, D, _ in table.rows:
    print(f"{n:3} {'#' * d}")

# x^(2^m) survives, so the quotient is not nilpotent.
for m in range(1, 5):
    word, pieces = nonnilpotence_witness(state, m)
    print(m, word, "=", "·".join(pieces))
