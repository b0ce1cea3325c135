"""Modular symbols for 11a and 37a, their period integrals, and the norm relation."""

import numpy as np

from iwtheta import CurveModel, build_space, hecke_matrix, period_integral, resolve, theta, verify_norm_relation
from iwtheta.eigenform import count_points, period_integrals_mod

# %% The space of Manin symbols for Gamma_0(11), weight 2.
S = build_space(11, 2)
print("quotient dimension", S.dim, "| cuspidal dimension", S.cuspidal_dim)
print("T_2 on the cuspidal part:", [[int(x) for x in row] for row in hecke_matrix(S, 2)])

# %% Resolve the curve 11a into its normalised eigen-symbol.
E = CurveModel((0, -1, 1, -10, -20), 11, "11a1")
f = resolve(E)
print("fingerprint", f.fingerprint[:16], "...")
good = [ell for ell in (2, 3, 5, 7, 13, 17, 19) if ell != 11]
print("a_l from symbols     ", [f.hecke_eigenvalue(ell) for ell in good])
print("a_l from point counts", [ell + 1 - count_points(E.ainvs, ell) for ell in good])

# %% Period integrals [a/m]^+ and [a/m]^- for m = 13.
V = period_integrals_mod(f, 13)
print(np.vstack([np.arange(13), V[1], V[-1]]))

# Each [a/m]^+ is even in a, each [a/m]^- is odd.
assert all(period_integral(f, 1, -a, 13, 1) == period_integral(f, 1, a, 13, 1) for a in range(13))

# %% Mazur-Tate elements and the norm relation.
t = theta(f, 5)
print("theta_5 =", t.element)
for m, ell in [(1, 3), (4, 3), (9, 3), (2, 13)]:
    print(f"m={m:2d} l={ell:2d}", "equal" if verify_norm_relation(f, m, ell).equal else "DIFFERENT")

# %% The rank-one curve 37a has a vanishing central value.
g = resolve(CurveModel((0, 0, 1, -1, 0), 37, "37a1"))
print("[0/1]^+ for 11a:", period_integral(f, 1, 0, 1, 1), "| for 37a:", period_integral(g, 1, 0, 1, 1))
