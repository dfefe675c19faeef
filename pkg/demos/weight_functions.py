"""The two weight families: Psi^beta and Phi_beta, their ratio and the t -> 0 trace."""

from __future__ import annotations

import numpy as np

from decaylab.weights import WeightSpec, literal_initial_trace, phi_envelope_constants, phi_initial_trace, phi_weight, psi

spec = WeightSpec(beta=1.0, t0=16.0, alpha=0.5, dim=3)
r = np.array([1.0, 2.0, 5.0, 20.0, 100.0])
for t in (0.0, 10.0, 100.0):
    ratio = phi_weight(spec, r, t) * psi(spec, r, t)
    print(f"t={t:6.1f}  Phi*Psi = {np.array2string(ratio, precision=4)}")

lo, hi = phi_envelope_constants(spec, require_lower=True)
print(f"envelope constants: {lo:.4f} <= Phi*Psi <= {hi:.4f}")

# the t -> 0 limit of the raw (t0 = 0) Phi carries a factor (2-alpha)^(2 beta)
raw = WeightSpec(beta=0.5, t0=0.0, alpha=0.0, dim=3)
print("Phi(r=2, t=1e-8)        ", phi_weight(raw, np.array([2.0]), 1e-8)[0])
print("corrected trace          ", phi_initial_trace(raw, np.array([2.0]))[0])
print("trace without the factor ", literal_initial_trace(raw, np.array([2.0]))[0])
