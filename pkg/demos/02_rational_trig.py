"""Quadrance and spread over F_7 and F_5, no square roots or angles needed."""

from fspread import make_field
from fspread.trig import Vec3, proj_quadrance, proj_spread, quadrance, spread

F7 = make_field(7)
U, V = Vec3.of(F7, [1, 2, 3]), Vec3.of(F7, [4, 5, 6])
print("Q(U, V) over F_7:", quadrance(U, V).code)
print("U is a null point (U.U = 0):", quadrance(Vec3.zero(F7), U) == 0)

F5 = make_field(5)
O = Vec3.zero(F5)
e1, d = Vec3.of(F5, [1, 0, 0]), Vec3.of(F5, [1, 1, 0])
# in the real plane this pair of lines meets at 45 degrees, spread 1/2; here 1/2 = 3
print("spread(e1, e1 + e2) over F_5:", spread(O, e1, O, d).code)
print("projective quadrance of the same lines:", proj_quadrance(e1, d).code)

w, u, x = Vec3.of(F5, [0, 0, 1]), Vec3.of(F5, [1, 0, 1]), Vec3.of(F5, [1, 1, 1])
print("projective spread at [w] between [u] and [x]:", proj_spread(w, u, x).code)
