"""Kolyvagin primes and Kurihara numbers for 11a at p = 7."""

from itertools import combinations

import numpy as np

from iwtheta import CurveModel, resolve
from iwtheta.kurihara import (
    KuriharaCertificate,
    SearchStrategy,
    kolyvagin_primes,
    kurihara_number,
    leading_coeff_check,
    replay,
    search_delta,
)

f = resolve(CurveModel((0, -1, 1, -10, -20), 11, "11a1"))
p = 7

# %% Kolyvagin primes: l = 1 mod 7 and a_l = l + 1 mod 7.
primes = kolyvagin_primes(f, p, 2000)
print("Kolyvagin primes below 2000:", [q.ell for q in primes])
print("primitive roots:            ", [q.eta for q in primes])

# %% A table of delta~ values over single primes and pairs.
rows = []
for size in (0, 1, 2):
    for sub in combinations(primes[:4], size):
        c = kurihara_number(f, p, 1, sub)
        rows.append((c.m, c.value))
table = np.array(rows, dtype=np.int64)
print(table)
print("nonzero fraction:", np.count_nonzero(table[:, 1]) / len(table))

# %% The expansion in F_7[eps]/(eps^2): lower terms vanish and the top term is delta~.
for sub in [primes[:1], primes[:2]]:
    rep = leading_coeff_check(f, p, 1, sub, i=1)
    print(f"m={rep.m} i=1: lower terms vanish {rep.lower_terms_vanish}, top {rep.top_coeff}, delta {rep.delta}")

# %% The search loop returns the first nonzero value as a replayable certificate.
cert = search_delta(f, p, 1, 1, SearchStrategy(max_factors=2, prime_bound=2000), primes)
if isinstance(cert, KuriharaCertificate):
    print(cert.to_dict())
    print("replays:", replay(cert, f))
else:
    print("no witness after", cert.trials, "trials")
