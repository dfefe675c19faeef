"""Self-similar profile phi_beta: series vs asymptotic channel, and the two closed forms."""

from __future__ import annotations

import numpy as np

from decaylab.special import S_SWITCH, ProfileParams, _scaled_asymptotic, _scaled_series, varphi

c = ProfileParams(alpha=0.0, dim=3, beta=0.0).cexp
print(f"N=3, alpha=0: c = {c}, series/asymptotic switch at s = {S_SWITCH}")

s = np.array([0.0, 1.0, 10.0, 50.0, 100.0])
print("phi_0(s)   ", varphi(ProfileParams(0.0, 3, 0.0), s))
print("phi_c(s)   ", varphi(ProfileParams(0.0, 3, c), s))
print("exp(-s)    ", np.exp(-s))

# near the switch both channels of e^{-s} M(c - beta, c; s) agree
at = np.array([S_SWITCH])
for beta in (0.5, 1.0, 2.0):
    b = c - beta
    series = _scaled_series(b, c, at, 0)[0][0]
    asym = _scaled_asymptotic(b, c, at, 0)[0][0]
    print(f"beta={beta}: series {series:.15g}  asymptotic {asym:.15g}  rel diff {abs(series / asym - 1):.1e}")
