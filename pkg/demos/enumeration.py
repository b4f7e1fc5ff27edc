"""
Listing the augmentation ideal
==============================

Every nonzero polynomial without constant term gets an index i with
2^(2^i) > 3^(6t), t its degree.  The numbers involved explode at once, so
the weights w_i = 4·2^(2^i) are kept as exponents of two.
"""

from gkforge.fields import GF, Rationals
from gkforge.nil import enumerate_elements, nil_degree_report

for e in enumerate_elements(8):
    print(e.i, str(e.f), e.t, e.w if len(e.w) < 30 else e.w[:27] + "...")

print([str(e.f) for e in enumerate_elements(6, GF(3))])
print([str(e.f) for e in enumerate_elements(6, Rationals())])

# Degrees of f_i^(10 w_i) are reported, never computed.
print(nil_degree_report(5))
print(nil_degree_report(30)["degree"])
