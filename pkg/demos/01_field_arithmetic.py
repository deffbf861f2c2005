"""Arithmetic in F_9 = F_3[x]/(x^2 + 1).

Elements are written as coefficient lists, constant term first, and carry an
integer code c0 + 3*c1 that fixes their order.
"""

from fspread import make_field
from fspread.ffield import is_square, primitive_element, sqrt

F = make_field(3, 2)
print("modulus (low degree first):", F.modulus)

i = F([0, 1])  # the class of x, a square root of -1
print("x * x =", (i * i).coeffs, "equals -1:", i * i == -1)
print("(1 + x)^-1 =", F([1, 1]).inv().coeffs)

nu = primitive_element(F)
print("primitive element:", nu.coeffs, "with order", next(k for k in range(1, 9) if nu**k == 1))

squares = [a.coeffs for a in F.elements() if a.code and is_square(a)]
print("nonzero squares:", squares)
print("a square root of 2:", sqrt(F(2)).coeffs)
