"""mu and lambda readings for 11a: ordinary at 7, supersingular at 19."""

from iwtheta import CurveModel, ModRing, resolve
from iwtheta.mazurtate import iwasawa_invariants, pollack_check, stabilized_theta, theta_branch

f = resolve(CurveModel((0, -1, 1, -10, -20), 11, "11a1"))

# %% Branch polynomials at p = 7 for each Teichmuller character.
F7 = ModRing(7, 1)
for i in range(6):
    vals = [theta_branch(f, 7, n, i, F7).valuation for n in (1, 2, 3)]
    print(f"omega^{i}: X-adic valuations at n = 1, 2, 3 ->", vals)

# %% The stabilised sequence is compatible under projection.
R = ModRing(7, 5)
seq = [stabilized_theta(f, 7, n, R) for n in range(4)]
print("unit root alpha mod 7^5 =", seq[0].alpha)
print("compatible:", all(b.poly.reduce_level(a.n) == a.poly for a, b in zip(seq, seq[1:])))
reading = iwasawa_invariants(seq[2:])
print(f"mu = 0: {reading.mu_zero}, lambda = {reading.lam}, stable: {reading.stable}")

# %% At p = 19 we have a_19 = 0, so the plus/minus bounds apply.
for lv in pollack_check(f, 19, range(4)):
    print(f"n={lv.n} sign={lv.sign:+d} v_n={lv.valuation} q_n={lv.q} lambda candidate={lv.lambda_candidate}")
