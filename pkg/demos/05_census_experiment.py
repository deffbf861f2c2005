"""Random direction sets of size ceil(29^1.75) and their count of perpendicular pairs.

The observed count f stays within a factor (1 +- eps) of d m^2 / 2n, where
eps = lambda2 n / (d m) comes from the graph spectrum.
"""

from fspread.census import theorem1_experiment

reports = theorem1_experiment(29, 1, exponent=1.75, trials=20, seed=42)
r0 = reports[0]
print(f"q = 29, m = {r0.m}, n = {r0.n}, degree = {r0.degree}, lambda2 = {r0.lambda2:.4f}, eps = {r0.epsilon:.4f}")
for r in reports[:8]:
    print(f"trial {r.trial:2d}: f = {r.f:4d}, expected = {float(r.expected):8.2f}, "
          f"ratio = {r.ratio:.4f}, f/(m^2/q) = {r.theta_ratio:.4f}")
print("all inside the certificate:", all(r.inside_certificate for r in reports))

# 2 is a nonsquare mod 29, so P_29(28) has no edges
zero = theorem1_experiment(29, 28, exponent=1.75, trials=5, seed=42)
print("gamma = 28 (1 - gamma = 2, a nonsquare mod 29):", [r.f for r in zero])
