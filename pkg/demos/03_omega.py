"""Non-isotropic lines of F_q^3 and the vertex set Omega for several q."""

from fspread.ffield import make_field, prime_power
from fspread.projective import build_omega, class_counts

print(" q   isotropic  square  nonsquare  Omega class  |Omega|")
for q in (3, 5, 7, 9, 11, 13, 25, 27):
    F = make_field(*prime_power(q))
    c = class_counts(F)
    omega = build_omega(F)
    print(f"{q:2d}  {c['isotropic']:9d}  {c['square']:6d}  {c['nonsquare']:9d}  "
          f"{omega.norm_class:>11s}  {omega.n:7d}")

omega = build_omega(make_field(5))
print("\nfirst Omega points at q = 5:", [p.rep.codes() for p in omega.points[:5]])
print("digest:", omega.digest[:16])
