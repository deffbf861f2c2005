"""Spread graphs P_q(gamma) on Omega at q = 13: valencies and eigenvalues.

Graphs exist only when 1 - gamma is a square.  gamma = 0 gives the
triangular graph T(q+1), whose second eigenvalue q - 3 dominates.
"""

import math

from fspread import make_field
from fspread.pgraph import build_poincare, spectrum, square_gammas, verify_scheme
from fspread.projective import build_omega

q = 13
omega = build_omega(make_field(q))
print(f"q = {q}, |Omega| = {omega.n}, sqrt(q) + 1 = {math.sqrt(q) + 1:.3f}")
for g in omega.field.elements():
    graph = build_poincare(omega, g)
    if graph.edges == 0:
        print(f"gamma = {g.code:2d}: empty")
        continue
    rep = spectrum(graph)
    print(f"gamma = {g.code:2d}: degree {graph.degree:2d}, max |lambda| = {rep.second:7.4f}, "
          f"/sqrt(q) = {rep.ratio_to_sqrt_q:.3f}")

print("nonempty gammas:", [g.code for g in square_gammas(omega.field)])
scheme = verify_scheme(omega, intersection_samples=5)
print(f"{scheme.relation_count} relations, valencies {scheme.valencies}, ok = {scheme.ok}")
